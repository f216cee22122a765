#include <sstream>

#include "json.hpp"
#include "tsb/adams/scenario.hpp"

namespace tsb::adams {

namespace {

using nlohmann::ordered_json;

std::string group_list(const std::vector<AbelianGroup>& gs)
{
    std::string out;
    for (std::size_t k = 0; k < gs.size(); ++k)
        out += (k ? "  |  " : "") + gs[k].to_string();
    return out;
}

}  // namespace

const AbutmentReport::Degree* AbutmentReport::degree(int n) const
{
    for (const auto& d : degrees)
        if (d.degree == n)
            return &d;
    return nullptr;
}

std::string AbutmentReport::to_text() const
{
    std::ostringstream os;
    os << "scenario: " << title << "\n";
    if (!source.empty())
        os << "source: " << source << "\n";
    os << "\nassertions:\n";
    for (const auto& a : assertions) {
        os << "  [" << a.summand << ":" << a.line << "] " << a.text << "\n";
        if (!a.provenance.empty())
            os << "      provenance: " << a.provenance << "\n";
        os << "      status: " << a.status << "\n";
    }
    for (const auto& [name, lines] : scans) {
        os << "\nambiguity scan " << name << ":" << (lines.empty() ? " none" : "") << "\n";
        for (const auto& l : lines)
            os << "  " << l << "\n";
    }
    for (const auto& [name, lines] : differentials) {
        os << "\ndifferentials " << name << ":" << (lines.empty() ? " none" : "") << "\n";
        for (const auto& l : lines)
            os << "  " << l << "\n";
    }
    os << "\nopen branches:" << (branches.empty() ? " none" : "") << "\n";
    for (const auto& b : branches)
        os << "  " << b << "\n";
    os << "\nabutment:\n";
    for (const auto& d : degrees) {
        os << "  degree " << d.degree << ":";
        if (d.entries.size() == 1 && d.entries[0].assumptions.empty()) {
            os << " " << group_list(d.entries[0].candidates) << "\n";
        }
        else {
            os << "\n";
            for (const auto& e : d.entries) {
                os << "    [";
                for (std::size_t k = 0; k < e.assumptions.size(); ++k)
                    os << (k ? ", " : "") << e.assumptions[k];
                os << "] " << group_list(e.candidates) << "\n";
            }
        }
        if (d.extension_open)
            os << "    extension problem open: candidates listed\n";
        if (d.under_resolved)
            os << "    under-resolved: an h0-chain reaches the top of the window without a tower assertion\n";
    }
    return os.str();
}

std::string AbutmentReport::to_json() const
{
    ordered_json j;
    j["title"] = title;
    j["source"] = source;
    j["assertions"] = ordered_json::array();
    for (const auto& a : assertions)
        j["assertions"].push_back(
            {{"summand", a.summand}, {"line", a.line}, {"text", a.text}, {"provenance", a.provenance}, {"status", a.status}});
    j["scans"] = scans;
    j["differentials"] = differentials;
    j["branches"] = branches;
    j["degrees"] = ordered_json::array();
    for (const auto& d : degrees) {
        ordered_json dj;
        dj["degree"] = d.degree;
        dj["entries"] = ordered_json::array();
        for (const auto& e : d.entries) {
            std::vector<std::string> cands;
            for (const auto& g : e.candidates)
                cands.push_back(g.to_string());
            dj["entries"].push_back({{"assumptions", e.assumptions}, {"candidates", cands}});
        }
        dj["extension_open"] = d.extension_open;
        dj["under_resolved"] = d.under_resolved;
        dj["torsion_log_orders"] = d.torsion_log_orders;
        j["degrees"].push_back(std::move(dj));
    }
    return j.dump(2) + "\n";
}

AbutmentReport AbutmentReport::from_json(const std::string& text)
{
    AbutmentReport r;
    try {
        const auto j = ordered_json::parse(text);
        r.title = j.at("title").get<std::string>();
        r.source = j.at("source").get<std::string>();
        for (const auto& a : j.at("assertions"))
            r.assertions.push_back({a.at("summand").get<std::string>(), a.at("line").get<int>(),
                                    a.at("text").get<std::string>(), a.at("provenance").get<std::string>(),
                                    a.at("status").get<std::string>()});
        r.scans = j.at("scans").get<std::map<std::string, std::vector<std::string>>>();
        r.differentials = j.at("differentials").get<std::map<std::string, std::vector<std::string>>>();
        r.branches = j.at("branches").get<std::vector<std::string>>();
        for (const auto& dj : j.at("degrees")) {
            Degree d;
            d.degree = dj.at("degree").get<int>();
            for (const auto& ej : dj.at("entries")) {
                Entry e;
                e.assumptions = ej.at("assumptions").get<std::vector<std::string>>();
                for (const auto& c : ej.at("candidates"))
                    e.candidates.push_back(AbelianGroup::parse(c.get<std::string>()));
                d.entries.push_back(std::move(e));
            }
            d.extension_open = dj.at("extension_open").get<bool>();
            d.under_resolved = dj.at("under_resolved").get<bool>();
            d.torsion_log_orders = dj.at("torsion_log_orders").get<std::vector<int>>();
            r.degrees.push_back(std::move(d));
        }
    }
    catch (const nlohmann::json::exception& e) {
        throw AdamsError(std::string("malformed report: ") + e.what());
    }
    return r;
}

}  // namespace tsb::adams
