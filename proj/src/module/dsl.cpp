#include "tsb/module/dsl.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "builtin_data.hpp"

namespace tsb::module {

namespace {

struct Token {
    std::string text;
    int line = 1;
    int col = 1;
};

bool is_punct(char c)
{
    return c == '{' || c == '}' || c == ';' || c == ':' || c == '=' || c == '+';
}

std::vector<Token> tokenize(const std::string& text)
{
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&] {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n')
                advance();
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
        } else if (is_punct(c)) {
            out.push_back({std::string(1, c), line, col});
            advance();
        } else {
            Token t{"", line, col};
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && !is_punct(text[i]) &&
                   text[i] != '#') {
                t.text += text[i];
                advance();
            }
            out.push_back(t);
        }
    }
    out.push_back({"", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    GradedModule run()
    {
        expect("module");
        const Token name = next();
        if (name.text.empty())
            throw ParseError("expected module name", name.line, name.col);
        expect("over");
        const Token alg = next();
        int n = 0;
        try {
            auto spec = steenrod::parse_algebra(alg.text);
            if (spec.full || spec.n > 2)
                throw std::invalid_argument("");
            n = spec.n;
        } catch (const std::exception&) {
            throw ParseError("expected A(0), A(1) or A(2), got '" + alg.text + "'", alg.line, alg.col);
        }
        GradedModule m(name.text, n);
        expect("{");
        std::vector<std::vector<Token>> action_lines;
        while (peek().text != "}") {
            const Token kw = next();
            if (kw.text == "class") {
                const Token cname = next();
                check_name(cname);
                expect(":");
                const Token deg = next();
                const int d = parse_int(deg);
                expect(";");
                try {
                    m.add_class(cname.text, d);
                } catch (const NameError& e) {
                    throw NameError("duplicate class '" + cname.text + "' in degree " + std::to_string(d), cname.line,
                                    cname.col);
                }
            } else if (kw.text == "action") {
                expect("{");
                while (peek().text != "}") {
                    std::vector<Token> line;
                    while (peek().text != ";") {
                        if (peek().text.empty() || peek().text == "}")
                            throw ParseError("expected ';'", peek().line, peek().col);
                        line.push_back(next());
                    }
                    next();
                    action_lines.push_back(std::move(line));
                }
                next();
            } else if (kw.text.empty()) {
                throw ParseError("unexpected end of input", kw.line, kw.col);
            } else {
                throw ParseError("expected 'class' or 'action', got '" + kw.text + "'", kw.line, kw.col);
            }
        }
        expect("}");
        if (!peek().text.empty())
            throw ParseError("trailing input '" + peek().text + "'", peek().line, peek().col);
        for (const auto& line : action_lines)
            apply_action(m, line);
        auto rep = m.verify_action();
        if (!rep.ok)
            throw AdemViolation(m.name() + ": " + rep.to_string(), name.line, name.col);
        m.validate();
        return m;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next()
    {
        const Token t = toks_[pos_];
        if (pos_ + 1 < toks_.size())
            ++pos_;
        return t;
    }
    void expect(const std::string& s)
    {
        const Token t = next();
        if (t.text != s)
            throw ParseError("expected '" + s + "', got '" + (t.text.empty() ? "end of input" : t.text) + "'", t.line,
                             t.col);
    }
    static int parse_int(const Token& t)
    {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(t.text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != t.text.size())
            throw ParseError("expected an integer degree, got '" + t.text + "'", t.line, t.col);
        return v;
    }
    static void check_name(const Token& t)
    {
        if (t.text.empty() || is_punct(t.text[0]) || t.text == "0" || t.text.find('@') != std::string::npos)
            throw ParseError("bad class name '" + t.text + "'", t.line, t.col);
    }

    static std::pair<int, std::size_t> resolve(const GradedModule& m, const Token& t, std::optional<int> degree)
    {
        std::string nm = t.text;
        std::optional<int> at;
        auto p = nm.rfind('@');
        if (p != std::string::npos) {
            Token dt{nm.substr(p + 1), t.line, t.col + static_cast<int>(p) + 1};
            at = parse_int(dt);
            nm = nm.substr(0, p);
        }
        if (at) {
            if (auto idx = m.find(nm, *at)) {
                if (degree && *at != *degree)
                    throw DegreeError("'" + t.text + "' has degree " + std::to_string(*at) + ", expected " +
                                          std::to_string(*degree),
                                      t.line, t.col);
                return {*at, *idx};
            }
            throw NameError("unknown class '" + t.text + "'", t.line, t.col);
        }
        auto hits = m.lookup(nm);
        if (hits.empty())
            throw NameError("unknown class '" + nm + "'", t.line, t.col);
        if (degree) {
            for (const auto& h : hits)
                if (h.first == *degree)
                    return h;
            throw DegreeError("'" + nm + "' has degree " + std::to_string(hits.front().first) + ", expected " +
                                  std::to_string(*degree),
                              t.line, t.col);
        }
        if (hits.size() > 1)
            throw NameError("ambiguous class '" + nm + "'; write " + nm + "@<degree>", t.line, t.col);
        return hits.front();
    }

    static void apply_action(GradedModule& m, const std::vector<Token>& line)
    {
        // Sq<k> <name> = <term> (+ <term>)*
        if (line.size() < 4 || line[2].text != "=")
            throw ParseError("expected 'Sq<k> <class> = <sum>'", line.front().line, line.front().col);
        const Token& op = line[0];
        int i = -1;
        if (op.text == "Sq1" || op.text == "Sq^1")
            i = 0;
        else if (op.text == "Sq2" || op.text == "Sq^2")
            i = 1;
        else if (op.text == "Sq4" || op.text == "Sq^4")
            i = 2;
        if (i < 0)
            throw ParseError("unknown operation '" + op.text + "' (use Sq1, Sq2 or Sq4)", op.line, op.col);
        if (i > m.algebra())
            throw ParseError(op.text + " is not in A(" + std::to_string(m.algebra()) + ")", op.line, op.col);
        const auto [d, from] = resolve(m, line[1], std::nullopt);
        const int td = d + (1 << i);
        bool expect_term = true;
        for (std::size_t k = 3; k < line.size(); ++k) {
            const Token& t = line[k];
            if (expect_term) {
                if (t.text == "+")
                    throw ParseError("expected a class name", t.line, t.col);
                if (t.text != "0") {
                    const auto [dd, to] = resolve(m, t, td);
                    (void)dd;
                    m.add_action(i, d, from, to);
                }
            } else if (t.text != "+") {
                throw ParseError("expected '+' or ';', got '" + t.text + "'", t.line, t.col);
            }
            expect_term = !expect_term;
        }
        if (expect_term)
            throw ParseError("dangling '+'", line.back().line, line.back().col);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

GradedModule parse_module(const std::string& text)
{
    return Parser(tokenize(text)).run();
}

std::string serialize_module(const GradedModule& m)
{
    std::map<std::string, int> seen;
    for (int d : m.degrees())
        for (const auto& nm : m.names(d))
            ++seen[nm];
    auto ref = [&](int d, std::size_t i) {
        const auto& nm = m.names(d)[i];
        return seen[nm] > 1 ? nm + "@" + std::to_string(d) : nm;
    };
    std::ostringstream os;
    os << "module " << m.name() << " over A(" << m.algebra() << ") {\n";
    for (int d : m.degrees())
        for (const auto& nm : m.names(d))
            os << "  class " << nm << " : " << d << ";\n";
    std::ostringstream acts;
    for (int i = 0; i <= m.algebra(); ++i)
        for (int d : m.degrees()) {
            const auto a = m.action(i, d);
            for (std::size_t c = 0; c < a.cols(); ++c) {
                const auto col = a.column(c);
                if (col.is_zero())
                    continue;
                acts << "    Sq" << (1 << i) << ' ' << ref(d, c) << " =";
                bool first = true;
                for (auto r : col.support()) {
                    acts << (first ? " " : " + ") << ref(d + (1 << i), r);
                    first = false;
                }
                acts << ";\n";
            }
        }
    if (!acts.str().empty())
        os << "  action {\n" << acts.str() << "  }\n";
    os << "}\n";
    return os.str();
}

std::string strip_comments(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    std::string out;
    while (std::getline(is, line)) {
        auto h = line.find('#');
        if (h != std::string::npos)
            line = line.substr(0, h);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        out += line + "\n";
    }
    return out;
}

std::vector<std::string> builtin_module_names()
{
    std::vector<std::string> out;
    for (const auto& [k, v] : data::modules())
        out.push_back(k);
    return out;
}

const std::string& builtin_module_text(const std::string& name)
{
    const auto& mods = data::modules();
    auto it = mods.find(name);
    if (it == mods.end())
        throw NameError("no builtin module named '" + name + "'");
    return it->second;
}

GradedModule builtin_module(const std::string& name)
{
    return parse_module(builtin_module_text(name));
}

GradedModule load_module(const std::string& source)
{
    if (source.rfind("builtin:", 0) == 0)
        return builtin_module(source.substr(8));
    std::ifstream in(source);
    if (!in)
        throw ModuleError("cannot open module file '" + source + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_module(ss.str());
}

}  // namespace tsb::module
