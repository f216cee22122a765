import json

import pytest

import tsb


def test_algebra_dimensions():
    assert [tsb.algebra_dimension(n) for n in range(3)] == [2, 8, 64]
    assert tsb.basis(1, 3) == ["Sq(0,1)", "Sq(3)"]


def test_adem():
    assert tsb.adem("Sq2 Sq2") == ["Sq^3 Sq^1"]
    assert tsb.adem("Sq1 Sq1") == []


def test_resolve_f2_over_a0_is_an_h0_tower():
    c = tsb.resolve("builtin:F2", s_max=6, t_max=8, algebra=0)
    for s in range(7):
        for t in range(9):
            assert c.dim(s, t) == (1 if s == t else 0)
    assert c.h_rank(0, 2, 2) == 1


def test_chart_json_round_trip():
    c = tsb.resolve("builtin:C2", s_max=4, t_max=12)
    back = tsb.ExtChart.from_json(c.to_json())
    assert back == c
    assert json.loads(c.to_json())
    assert c.to_svg().startswith("<svg")


def test_twist_is_checked():
    text = tsb.twist("wreath-kz4", "c1 + c2")
    assert "Sq" in text or "sq" in text
    with pytest.raises(tsb.ModelError):
        tsb.twist("kz4", "c1 + c2")


def test_char_numbers():
    assert tsb.char_number("hp2xs4", "y*x^2 + x*y^2") % 2 == 1
    assert tsb.char_number("hp2", "c(P) c(Q)", {"c(P)": "2x", "c(Q)": "-x"}) == -2


def test_spin_scenario():
    rep = tsb.run_scenario("builtin:spin")
    groups = [str(rep.degree(n).entries[0].candidates[0]) for n in range(9)]
    assert groups == ["Z", "Z/2", "Z/2", "0", "Z", "0", "0", "0", "Z^2"]
    assert tsb.Report.from_json(rep.to_json()).to_text() == rep.to_text()


def test_heterotic_degree_eleven():
    rep = tsb.run_scenario("builtin:het")
    d = rep.degree(11)
    cands = {str(g) for e in d.entries for g in e.candidates}
    assert len(cands) == 4
    assert all(tsb.AbelianGroup.parse(g).free_rank == 0 for g in cands)


def test_contradiction_is_raised():
    text = (
        'scenario "t"\nwindow stem 12 s 10\n'
        "summand Q = sum(builtin:M2, builtin:M4, builtin:M5, builtin:M7)\n"
        "alias a = (0,8,0)\nalias p1 = (0,1,0)\n"
        'assert d2 a -> h2^2 p1 because "one"\n'
        'assert vanish d2 a because "two"\n'
    )
    with pytest.raises(tsb.Contradiction):
        tsb.run_scenario_text(text)


def test_bad_module_is_rejected():
    with pytest.raises(tsb.ModuleError):
        tsb.resolve("no-such-file.mod")
