#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tsb/adams/abutment.hpp"
#include "tsb/adams/scan.hpp"
#include "tsb/ext/resolution.hpp"
#include "tsb/module/module.hpp"

namespace tsb::adams {

class ScenarioError : public AdamsError {
public:
    ScenarioError(const std::string& what, int line = 0)
        : AdamsError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }
    int line() const { return line_; }

private:
    int line_;
};

struct Statement {
    enum class Kind { Differential, Vanish, Survive, Tower, Collapse, Order };
    Kind kind = Kind::Differential;
    int line = 0;
    int r = 0;
    /// Element expressions ("h2^2 p1", "a", "0").
    std::string location;
    std::string value;
    std::string provenance;
    std::string witness_ring;
    std::string witness_expr;
    /// Order: log2 of the asserted order, comparison name and its class.
    int order_log = 1;
    std::string via;
    std::string via_class;
    /// Source text of the statement.
    std::string text;
};

struct Alias {
    std::string name;
    int s = 0;
    int t = 0;
    std::size_t index = 0;
};

struct SummandSpec {
    std::string name;
    std::string module_expr;
    std::vector<Alias> aliases;
    std::vector<Statement> statements;
    int line = 0;
};

/// A second chart with a module map from the summand's module into it; on Ext
/// it induces a map back into the summand's E2.
struct ComparisonSpec {
    std::string name;
    std::string of;
    std::string module_expr;
    /// Per top-level sum part: "identity" or "gen -> image; ...".
    std::vector<std::pair<std::size_t, std::string>> maps;
    std::vector<Alias> aliases;
    std::vector<Statement> statements;
    /// Own window; the scenario window when unset.
    std::optional<Window> window;
    int line = 0;
};

struct Scenario {
    std::string title;
    std::string source;
    Window window;
    int max_degree = 11;
    std::vector<SummandSpec> summands;
    std::vector<ComparisonSpec> comparisons;
};

Scenario parse_scenario(const std::string& text);
/// `builtin:NAME` reads a shipped scenario (het, chl, spin).
Scenario load_scenario(const std::string& path);

/// Module pipeline expressions: builtin:NAME, file:PATH, sum(...), shift(k, e),
/// restrict(k, e), induce(n, e), truncate_above(k, e), truncate_below(k, e),
/// model(name, cap), twist(name, cap, "mu").
module::GradedModule build_module(const std::string& expr);
/// The top-level parts of a sum(...) expression (the expression itself otherwise).
std::vector<std::string> sum_parts(const std::string& expr);

/// Evaluates an element expression on a chart: sum of terms
/// h_{i1}^{k1} ... label, with aliases; "0" needs `zero_at`.
ClassRef evaluate_element(const ExtChart& c, const std::vector<Alias>& aliases, const std::string& expr,
                          std::optional<Bidegree> zero_at = {});

struct AbutmentReport {
    struct Entry {
        /// Differential choices selecting this entry; empty when branch-independent.
        std::vector<std::string> assumptions;
        std::vector<AbelianGroup> candidates;
        bool operator==(const Entry&) const = default;
    };
    struct Degree {
        int degree = 0;
        std::vector<Entry> entries;
        /// More than one candidate under a single assumption set.
        bool extension_open = false;
        bool under_resolved = false;
        /// log2 of the torsion order per branch (E_infinity boxes of finite chains).
        std::vector<int> torsion_log_orders;
        bool operator==(const Degree&) const = default;
    };
    struct AssertionRecord {
        std::string summand;
        int line = 0;
        std::string text;
        std::string provenance;
        std::string status;
        bool operator==(const AssertionRecord&) const = default;
    };

    std::string title;
    std::string source;
    std::vector<AssertionRecord> assertions;
    /// Ambiguity scan of each summand's E2 page, one line per entry.
    std::map<std::string, std::vector<std::string>> scans;
    /// Differentials applied per summand branch.
    std::map<std::string, std::vector<std::string>> differentials;
    /// Open differential branches, one line each.
    std::vector<std::string> branches;
    std::vector<Degree> degrees;

    bool operator==(const AbutmentReport&) const = default;
    const Degree* degree(int n) const;

    std::string to_text() const;
    std::string to_json() const;
    static AbutmentReport from_json(const std::string& text);
};

struct SummandResult {
    std::string name;
    std::string module_expr;
    std::shared_ptr<const ext::Resolution> resolution;
    std::shared_ptr<const ExtChart> e2;
    std::vector<Alias> aliases;
    std::vector<ScanEntry> scan;
    struct Branch {
        std::vector<std::string> assumptions;
        std::vector<std::string> differentials;
        std::vector<Page> pages;
        const Page& einf() const { return pages.back(); }
    };
    std::vector<Branch> branches;
    /// Outcome of each statement, keyed by source line.
    std::map<int, std::string> status;
    std::map<std::string, std::string> display_names() const;
};

struct ScenarioResult {
    AbutmentReport report;
    std::vector<SummandResult> summands;
    std::vector<SummandResult> comparisons;
    /// Chart and page texts keyed by file name.
    std::map<std::string, std::string> artifacts;
};

ScenarioResult run_scenario(const Scenario& sc);
ScenarioResult run_scenario_file(const std::string& path);

/// Runs one summand: E2, scan, assertions page by page, branches on open
/// differentials.
SummandResult run_summand(const std::string& name, const module::GradedModule& m, const Window& w,
                          const std::vector<Alias>& aliases, const std::vector<Statement>& statements);

}  // namespace tsb::adams
