#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsb/adams/scenario.hpp"
#include "tsb/cohomology/models.hpp"
#include "tsb/ext/les.hpp"
#include "tsb/module/dsl.hpp"
#include "tsb/steenrod/subalgebra.hpp"

using namespace tsb;

namespace {

/// Input problems: exit 1.
struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    int s_max = 10;
    int t_max = 24;
    int cap = 14;
    std::string format = "text";
    std::string out;
};

void emit(const Config& cfg, const std::string& text)
{
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out);
    if (!f)
        throw UserError("cannot write '" + cfg.out + "'");
    f << text;
}

int algebra_index(const std::string& name)
{
    if (name == "A0" || name == "A(0)")
        return 0;
    if (name == "A1" || name == "A(1)")
        return 1;
    if (name == "A2" || name == "A(2)")
        return 2;
    throw UserError("unknown algebra '" + name + "' (expected A0, A1 or A2)");
}

std::shared_ptr<module::GradedModule> load(const std::string& source, const std::string& algebra)
{
    auto m = std::make_shared<module::GradedModule>(
        source.find('(') != std::string::npos ? adams::build_module(source) : module::load_module(source));
    if (!algebra.empty()) {
        const int n = algebra_index(algebra);
        if (n > m->algebra())
            throw UserError("module is over A(" + std::to_string(m->algebra()) + "), cannot extend to " + algebra);
        *m = module::restrict(*m, n);
    }
    m->validate();
    return m;
}

std::string chart_output(const ext::ExtChart& c, const Config& cfg, int max_stem)
{
    if (cfg.format == "json")
        return c.to_json();
    if (cfg.format == "svg")
        return c.to_svg(max_stem);
    return c.to_text();
}

int cmd_basis(const Config& cfg, const std::string& algebra, int degree)
{
    const auto& alg = steenrod::SubAlgebra::get(algebra_index(algebra));
    std::ostringstream os;
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["algebra"] = algebra;
        j["dimension"] = alg.dimension();
        for (int d = 0; d <= alg.top_degree(); ++d) {
            if (degree >= 0 && d != degree)
                continue;
            std::vector<std::string> names;
            for (const auto& m : alg.basis(d))
                names.push_back(steenrod::to_string(m));
            j["degrees"][std::to_string(d)] = names;
        }
        os << j.dump(2) << "\n";
    }
    else {
        os << algebra << ": dimension " << alg.dimension() << ", top degree " << alg.top_degree() << "\n";
        for (int d = 0; d <= alg.top_degree(); ++d) {
            if ((degree >= 0 && d != degree) || alg.dim(d) == 0)
                continue;
            os << d << ":";
            for (const auto& m : alg.basis(d))
                os << " " << steenrod::to_string(m);
            os << "\n";
        }
    }
    emit(cfg, os.str());
    return 0;
}

int cmd_adem(const Config& cfg, const std::string& word_text)
{
    const auto word = steenrod::parse_word(word_text);
    const auto e = steenrod::adem_reduce(word);
    std::ostringstream os;
    std::vector<std::string> adm;
    for (const auto& w : steenrod::to_admissible(e))
        adm.push_back(steenrod::word_to_string(w));
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["word"] = steenrod::word_to_string(word);
        j["milnor"] = e.to_string();
        j["admissible"] = adm;
        os << j.dump(2) << "\n";
    }
    else {
        os << steenrod::word_to_string(word) << " = ";
        if (adm.empty())
            os << "0";
        for (std::size_t k = 0; k < adm.size(); ++k)
            os << (k ? " + " : "") << adm[k];
        os << "\nmilnor basis: " << e.to_string() << "\n";
    }
    emit(cfg, os.str());
    return 0;
}

int cmd_resolve(const Config& cfg, const std::string& source, const std::string& algebra)
{
    const auto m = load(source, algebra);
    ext::Resolution r(m, {cfg.s_max, cfg.t_max});
    const auto c = ext::ExtChart::from_resolution(r, m->name());
    emit(cfg, chart_output(c, cfg, cfg.t_max - cfg.s_max));
    return 0;
}

/// Generator sets of the seven summands of the heterotic twist.
const std::vector<std::vector<std::string>>& heterotic_parts()
{
    static const std::vector<std::vector<std::string>> parts = {
        {"U"}, {"Ux", "Ux^3", "Ux^7"}, {"UN(D^2,1)"}, {"UP(D)"}, {"UP(D)x", "UP(D)x^3"}, {"UN(DF,1)"}, {"UN(D^2,D)"}};
    return parts;
}

/// Parts file: one summand per line, generators separated by commas.
std::vector<std::vector<std::string>> read_parts(const std::string& spec)
{
    if (spec == "builtin:M1-M7")
        return heterotic_parts();
    std::ifstream in(spec);
    if (!in)
        throw UserError("cannot open parts file '" + spec + "'");
    std::vector<std::vector<std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        line = module::strip_comments(line);
        std::vector<std::string> gens;
        std::stringstream ss(line);
        std::string g;
        while (std::getline(ss, g, ',')) {
            const auto a = g.find_first_not_of(" \t");
            const auto b = g.find_last_not_of(" \t\r");
            if (a != std::string::npos)
                gens.push_back(g.substr(a, b - a + 1));
        }
        if (!gens.empty())
            out.push_back(gens);
    }
    return out;
}

int cmd_twist(const Config& cfg, const std::string& model, const std::string& mu, const std::string& parts_spec,
              int truncate)
{
    const auto nm = cohomology::named_model(model, cfg.cap);
    auto m = nm.twisted(mu);
    const auto report = m.verify_action();
    std::ostringstream os;
    os << module::serialize_module(m);
    os << "# action: " << (report.ok ? "ok" : report.to_string()) << "\n";
    if (!report.ok) {
        emit(cfg, os.str());
        std::cerr << "error: the twisted action fails: " << report.to_string() << "\n";
        return 2;
    }
    if (!parts_spec.empty()) {
        const int top = truncate >= 0 ? truncate : (parts_spec == "builtin:M1-M7" ? 13 : m.max_degree());
        const auto tm = module::truncate_above(m, top);
        std::vector<std::vector<module::ModuleVector>> parts;
        for (const auto& gens : read_parts(parts_spec)) {
            parts.emplace_back();
            for (const auto& g : gens)
                parts.back().push_back(module::parse_vector(tm, g));
        }
        const auto dec = module::verify_decomposition(tm, parts);
        if (!dec.ok) {
            os << "# decomposition fails in degree " << dec.failure_degree << ": " << dec.failure << "\n";
            emit(cfg, os.str());
            return 2;
        }
        os << "# decomposition into " << dec.blocks.size() << " summands through degree " << top << "\n";
        for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
            os << "#   block " << b + 1 << ":";
            for (const auto& [d, n] : dec.blocks[b].dims())
                if (n)
                    os << " " << d << ":" << n;
            os << "\n";
        }
    }
    emit(cfg, os.str());
    return 0;
}

int cmd_wreath(const Config& cfg, const std::string& model)
{
    const auto nm = cohomology::named_model(model == "kz4" ? "wreath-kz4" : model, cfg.cap);
    auto m = nm.module();
    std::ostringstream os;
    os << module::serialize_module(m);
    const auto report = m.verify_action();
    os << "# action: " << (report.ok ? "ok" : report.to_string()) << "\n";
    emit(cfg, os.str());
    return report.ok ? 0 : 2;
}

int cmd_les(const Config& cfg, const std::string& middle_src, const std::string& quotient_src,
            const std::string& map_spec)
{
    const auto mid = load(middle_src, "");
    auto quot = load(quotient_src, "");
    std::vector<std::pair<module::ModuleVector, module::ModuleVector>> images;
    std::stringstream ss(map_spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto arrow = item.find("->");
        if (arrow == std::string::npos)
            throw UserError("map entries read 'gen -> image'");
        const auto g = module::parse_vector(*mid, item.substr(0, arrow));
        images.emplace_back(g, module::parse_vector(*quot, item.substr(arrow + 2), g.degree));
    }
    const auto q = module::map_from_generators(mid, quot, images);
    if (!q.surjective())
        throw UserError("the map onto the quotient is not surjective");
    const auto i = module::kernel_inclusion(q, "K");
    const ext::ResolutionLimits lim{cfg.s_max, cfg.t_max};
    ext::Resolution rsub(i.source_ptr(), lim);
    ext::Resolution rmid(mid, lim);
    ext::Resolution rquot(quot, lim);
    const auto qs = ext::induced_ext_map(ext::lift_module_map(q, rmid, rquot, cfg.s_max, cfg.t_max), rmid, rquot);
    const auto is = ext::induced_ext_map(ext::lift_module_map(i, rsub, rmid, cfg.s_max, cfg.t_max), rsub, rmid);
    const auto res = ext::les_ranks(ext::ExtChart::from_resolution(rsub), ext::ExtChart::from_resolution(rmid),
                                    ext::ExtChart::from_resolution(rquot), qs, is);
    emit(cfg, res.to_text());
    return 0;
}

int cmd_adams(const Config& cfg, const std::string& path, const std::string& out_dir)
{
    const auto res = adams::run_scenario_file(path);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto write = [&](const std::string& name, const std::string& text) {
            std::ofstream f(std::filesystem::path(out_dir) / name);
            if (!f)
                throw UserError("cannot write into '" + out_dir + "'");
            f << text;
        };
        write("report.txt", res.report.to_text());
        write("report.json", res.report.to_json());
        for (const auto& [name, text] : res.artifacts)
            write(name, text);
    }
    emit(cfg, cfg.format == "json" ? res.report.to_json() : res.report.to_text());
    return 0;
}

int cmd_charnum(const Config& cfg, const std::string& ring, const std::string& expr,
                const std::vector<std::string>& classes)
{
    std::map<std::string, std::string> named;
    for (const auto& c : classes) {
        const auto eq = c.find('=');
        if (eq == std::string::npos)
            throw UserError("classes are given as name=polynomial");
        named[c.substr(0, eq)] = c.substr(eq + 1);
    }
    const long long v = cohomology::char_number(cohomology::witness_ring(ring), expr, named);
    std::ostringstream os;
    if (cfg.format == "json")
        os << nlohmann::json{{"ring", ring}, {"expr", expr}, {"value", v}, {"mod2", ((v % 2) + 2) % 2}}.dump() << "\n";
    else
        os << v << "\n";
    emit(cfg, os.str());
    return 0;
}

int cmd_chart_render(const Config& cfg, const std::string& path, int max_stem)
{
    std::ifstream in(path);
    if (!in)
        throw UserError("cannot open chart '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    ext::ExtChart c;
    try {
        c = ext::ExtChart::from_json(ss.str());
    }
    catch (const std::exception& e) {
        throw UserError(std::string("malformed chart: ") + e.what());
    }
    Config svg = cfg;
    if (svg.format == "text")
        svg.format = "svg";
    emit(cfg, chart_output(c, svg, max_stem));
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Twisted string bordism toolkit: Steenrod algebra, Ext charts and Adams spectral sequences"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    app.add_option("--smax", cfg.s_max, "largest homological degree")->check(CLI::PositiveNumber);
    app.add_option("--tmax", cfg.t_max, "largest internal degree")->check(CLI::PositiveNumber);
    app.add_option("--cap", cfg.cap, "degree cap for cohomology models")->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json", "svg"}));
    app.add_option("--out", cfg.out, "output file (stdout when omitted)");

    std::string algebra = "A2";
    int degree = -1;
    auto* basis = app.add_subcommand("basis", "Milnor basis of A(n)");
    basis->add_option("--algebra", algebra, "A0, A1 or A2");
    basis->add_option("--degree", degree, "single degree");

    std::string word;
    auto* adem = app.add_subcommand("adem", "reduce a word in the Sq^i to admissible and Milnor form");
    adem->add_option("word", word, "e.g. \"Sq2 Sq2\"")->required();

    std::string source;
    std::string res_algebra;
    auto* resolve = app.add_subcommand("resolve", "minimal resolution and Ext chart of a module");
    resolve->add_option("--module", source, "builtin:NAME, a module file, or a module expression")->required();
    resolve->add_option("--algebra", res_algebra, "restrict to A0, A1 or A2 first");

    std::string model;
    std::string mu;
    std::string parts;
    int truncate = -1;
    auto* twist = app.add_subcommand("twist", "twisted module T(X, mu) with action and decomposition checks");
    twist->add_option("--model", model, "kz4, he8, bz2 or wreath-kz4")->required();
    twist->add_option("--mu", mu, "twisting class")->required();
    twist->add_option("--parts", parts, "summand generators: builtin:M1-M7 or a file");
    twist->add_option("--truncate", truncate, "drop degrees above this before decomposing");

    std::string wmodel = "kz4";
    auto* wreath = app.add_subcommand("wreath", "cohomology of the wreath product model as a module");
    wreath->add_option("--model", wmodel, "base model");

    std::string quotient;
    std::string map_spec;
    auto* les = app.add_subcommand("les", "connecting ranks of 0 -> K -> M -> Q -> 0");
    les->add_option("--module", source, "middle module")->required();
    les->add_option("--quotient", quotient, "quotient module")->required();
    les->add_option("--map", map_spec, "\"gen -> image; ...\" on generators of the middle module")->required();

    std::string scenario;
    std::string artifacts;
    auto* adams_cmd = app.add_subcommand("adams", "run an Adams spectral sequence scenario");
    adams_cmd->add_option("scenario", scenario, "scenario file")->required();
    adams_cmd->add_option("--artifacts", artifacts, "directory for the report and chart artifacts");

    std::string ring;
    std::string expr;
    std::vector<std::string> classes;
    auto* charnum = app.add_subcommand("charnum", "characteristic number in a witness ring");
    charnum->add_option("--ring", ring, "hp2, hp2xs4 or s4")->required();
    charnum->add_option("--expr", expr, "polynomial, e.g. \"y*x^2 + x*y^2\"")->required();
    charnum->add_option("--class", classes, "auxiliary class name=polynomial");

    std::string chart_path;
    int max_stem = -1;
    auto* render = app.add_subcommand("chart-render", "render a JSON chart as SVG or text");
    render->add_option("chart", chart_path, "chart JSON file")->required();
    render->add_option("--stem", max_stem, "largest stem drawn");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*basis)
            return cmd_basis(cfg, algebra, degree);
        if (*adem)
            return cmd_adem(cfg, word);
        if (*resolve)
            return cmd_resolve(cfg, source, res_algebra);
        if (*twist)
            return cmd_twist(cfg, model, mu, parts, truncate);
        if (*wreath)
            return cmd_wreath(cfg, wmodel);
        if (*les)
            return cmd_les(cfg, source, quotient, map_spec);
        if (*adams_cmd)
            return cmd_adams(cfg, scenario, artifacts);
        if (*charnum)
            return cmd_charnum(cfg, ring, expr, classes);
        if (*render)
            return cmd_chart_render(cfg, chart_path, max_stem);
    }
    catch (const adams::Contradiction& e) {
        std::cerr << "contradiction: " << e.what() << "\n";
        for (const auto& p : e.provenance())
            std::cerr << "  from: " << p << "\n";
        return 2;
    }
    catch (const adams::InvariantBreach& e) {
        std::cerr << "invariant breach: " << e.what() << "\n";
        return 2;
    }
    catch (const ext::LesError& e) {
        std::cerr << "inconsistent long exact sequence: " << e.what() << "\n";
        return 2;
    }
    catch (const module::AdemViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
