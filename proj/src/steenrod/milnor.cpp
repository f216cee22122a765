#include "tsb/steenrod/milnor.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace tsb::steenrod {

int degree(const Monomial& r)
{
    int d = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
        d += r[i] * ((1 << (i + 1)) - 1);
    return d;
}

Monomial normalize(Monomial r)
{
    while (!r.empty() && r.back() == 0)
        r.pop_back();
    return r;
}

std::string to_string(const Monomial& r)
{
    std::string s = "Sq(";
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(r[i]);
    }
    return s + ')';
}

bool AlgebraSpec::contains(const Monomial& r) const
{
    if (full)
        return degree(r) <= cap;
    if (static_cast<int>(r.size()) > n + 1)
        return false;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] >= (1 << (n + 1 - static_cast<int>(i))))
            return false;
    return true;
}

int AlgebraSpec::top_degree() const
{
    if (full)
        return cap;
    int d = 0;
    for (int i = 1; i <= n + 1; ++i)
        d += ((1 << (n + 2 - i)) - 1) * ((1 << i) - 1);
    return d;
}

std::string AlgebraSpec::name() const
{
    if (full)
        return "full:" + std::to_string(cap);
    return "A(" + std::to_string(n) + ")";
}

AlgebraSpec parse_algebra(const std::string& text)
{
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')')
            t += c;
    if (t.rfind("full:", 0) == 0)
        return AlgebraSpec::full_algebra(std::stoi(t.substr(5)));
    if (t.size() >= 2 && (t[0] == 'A' || t[0] == 'a')) {
        const int n = std::stoi(t.substr(1));
        if (n < 0 || n > 3)
            throw std::invalid_argument("unsupported algebra '" + text + "'");
        return AlgebraSpec::sub(n);
    }
    throw std::invalid_argument("unknown algebra '" + text + "'");
}

SteenrodElement::SteenrodElement(AlgebraSpec spec, int degree, const Monomial& m) : spec_(spec), degree_(degree)
{
    toggle(m);
}

void SteenrodElement::toggle(const Monomial& m)
{
    auto r = normalize(m);
    if (steenrod::degree(r) != degree_)
        throw std::invalid_argument("inhomogeneous term " + steenrod::to_string(r) + " in degree " +
                                    std::to_string(degree_));
    if (!spec_.contains(r))
        throw std::invalid_argument(steenrod::to_string(r) + " is not in " + spec_.name());
    auto [it, inserted] = terms_.insert(r);
    if (!inserted)
        terms_.erase(it);
}

SteenrodElement& SteenrodElement::operator+=(const SteenrodElement& other)
{
    if (!(other.spec_ == spec_))
        throw AlgebraMismatch("cannot add elements of " + spec_.name() + " and " + other.spec_.name());
    if (other.is_zero())
        return *this;
    if (is_zero())
        degree_ = other.degree_;
    for (const auto& m : other.terms_)
        toggle(m);
    return *this;
}

std::string SteenrodElement::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string s;
    for (const auto& m : terms_) {
        if (!s.empty())
            s += " + ";
        s += steenrod::to_string(m);
    }
    return s;
}

// Enumerates the matrices of Milnor's product formula. Row 0 / column 0 hold
// the remaining parts of s and r; a matrix contributes when every diagonal
// multinomial is odd, i.e. the entries along it have disjoint binary digits.
std::set<Monomial> milnor_product(const Monomial& r, const Monomial& s)
{
    std::set<Monomial> result;
    const std::size_t rows = r.size() + 1;
    const std::size_t cols = s.size() + 1;
    const std::size_t diags = r.size() + s.size();
    std::vector<std::vector<int>> M(rows, std::vector<int>(cols, 0));
    for (std::size_t j = 1; j < cols; ++j)
        M[0][j] = s[j - 1];
    for (std::size_t i = 1; i < rows; ++i)
        M[i][0] = r[i - 1];

    bool found = true;
    while (found) {
        bool odd = true;
        Monomial diagonal(diags, 0);
        for (std::size_t n = 1; n <= diags && odd; ++n) {
            int acc = 0;
            int sum = 0;
            const std::size_t lo = n + 1 > cols ? n + 1 - cols : 0;
            const std::size_t hi = std::min(n + 1, rows);
            for (std::size_t i = lo; i < hi; ++i) {
                const int e = M[i][n - i];
                if (acc & e)
                    odd = false;
                acc |= e;
                sum += e;
            }
            diagonal[n - 1] = sum;
        }
        if (odd) {
            auto t = normalize(diagonal);
            auto [it, inserted] = result.insert(t);
            if (!inserted)
                result.erase(it);
        }

        found = false;
        for (std::size_t i = 1; !found && i < rows; ++i) {
            int sum = M[i][0];
            for (std::size_t j = 1; !found && j < cols; ++j) {
                const int p = 1 << j;
                if (sum >= p) {
                    int above = 0;
                    for (std::size_t k = 0; k < i; ++k)
                        above += M[k][j];
                    if (above != 0) {
                        found = true;
                        for (std::size_t row = 1; row < i; ++row) {
                            M[row][0] = r[row - 1];
                            for (std::size_t col = 1; col < cols; ++col) {
                                M[0][col] += M[row][col];
                                M[row][col] = 0;
                            }
                        }
                        for (std::size_t col = 1; col < j; ++col) {
                            M[0][col] += M[i][col];
                            M[i][col] = 0;
                        }
                        M[0][j] -= 1;
                        M[i][j] += 1;
                        M[i][0] = sum - p;
                    } else {
                        sum += M[i][j] * p;
                    }
                } else {
                    sum += M[i][j] * p;
                }
            }
        }
    }
    return result;
}

SteenrodElement multiply(const SteenrodElement& a, const SteenrodElement& b)
{
    if (!(a.spec() == b.spec()))
        throw AlgebraMismatch("cannot multiply elements of " + a.spec().name() + " and " + b.spec().name());
    const int d = a.degree() + b.degree();
    if (a.spec().full && d > a.spec().cap)
        throw std::invalid_argument("product degree " + std::to_string(d) + " exceeds cap " +
                                    std::to_string(a.spec().cap));
    SteenrodElement out(a.spec(), d);
    for (const auto& x : a.terms())
        for (const auto& y : b.terms())
            for (const auto& z : milnor_product(x, y))
                out.toggle(z);
    return out;
}

std::vector<Monomial> basis(const AlgebraSpec& spec, int d)
{
    std::vector<Monomial> out;
    if (d < 0 || (spec.full && d > spec.cap))
        return out;
    int len = 0;
    while (((1 << (len + 1)) - 1) <= d)
        ++len;
    if (!spec.full)
        len = std::min(len, spec.n + 1);
    Monomial cur(len, 0);
    std::function<void(int, int)> rec = [&](int i, int remaining) {
        if (i < 0) {
            if (remaining == 0)
                out.push_back(normalize(cur));
            return;
        }
        const int w = (1 << (i + 1)) - 1;
        int bound = remaining / w;
        if (!spec.full)
            bound = std::min(bound, (1 << (spec.n + 1 - i)) - 1);
        for (int v = 0; v <= bound; ++v) {
            cur[i] = v;
            rec(i - 1, remaining - v * w);
        }
        cur[i] = 0;
    };
    rec(len - 1, d);
    std::sort(out.begin(), out.end());
    return out;
}

Monomial sq(int a)
{
    return a == 0 ? Monomial{} : Monomial{a};
}

namespace {

// First index where a_i < 2 a_{i+1}, or -1 when admissible.
int first_inadmissible(const std::vector<int>& w)
{
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] < 2 * w[i + 1])
            return static_cast<int>(i);
    return -1;
}

std::vector<int> strip_zero(const std::vector<int>& w)
{
    std::vector<int> out;
    for (int a : w)
        if (a != 0)
            out.push_back(a);
    return out;
}

}  // namespace

std::set<std::vector<int>> admissible_form(const std::vector<int>& word)
{
    for (int a : word)
        if (a < 0)
            throw std::invalid_argument("negative Steenrod exponent");
    std::set<std::vector<int>> done;
    auto toggle = [](auto& container, const std::vector<int>& w) {
        auto it = container.find(w);
        if (it == container.end())
            container.insert(w);
        else
            container.erase(it);
    };
    std::set<std::vector<int>> work;
    toggle(work, strip_zero(word));
    while (!work.empty()) {
        auto w = *work.begin();
        work.erase(work.begin());
        const int i = first_inadmissible(w);
        if (i < 0) {
            toggle(done, w);
            continue;
        }
        const int a = w[i];
        const int b = w[i + 1];
        for (int j = 0; 2 * j <= a; ++j) {
            if (!binom2(b - 1 - j, a - 2 * j))
                continue;
            std::vector<int> nw(w.begin(), w.begin() + i);
            nw.push_back(a + b - j);
            nw.push_back(j);
            nw.insert(nw.end(), w.begin() + i + 2, w.end());
            toggle(work, strip_zero(nw));
        }
    }
    return done;
}

SteenrodElement adem_reduce(const std::vector<int>& word, AlgebraSpec spec)
{
    int d = 0;
    for (int a : word)
        d += a;
    SteenrodElement out(spec, d);
    for (const auto& w : admissible_form(word)) {
        std::set<Monomial> acc{Monomial{}};
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            std::set<Monomial> next;
            for (const auto& m : acc)
                for (const auto& z : milnor_product(sq(*it), m)) {
                    auto [p, ins] = next.insert(z);
                    if (!ins)
                        next.erase(p);
                }
            acc = std::move(next);
        }
        for (const auto& m : acc)
            out.toggle(m);
    }
    return out;
}

namespace {

void admissible_words(int d, int max_first, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (d == 0) {
        out.push_back(cur);
        return;
    }
    for (int a = std::min(d, max_first); a >= 1; --a) {
        // the tail Sq^{a2}... has a2 <= a/2 and total degree d - a, which needs d - a <= a - 1
        if (d - a > a - 1 && d != a)
            continue;
        cur.push_back(a);
        admissible_words(d - a, a / 2, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::set<std::vector<int>> to_admissible(const SteenrodElement& e)
{
    std::set<std::vector<int>> out;
    if (e.is_zero())
        return out;
    const int d = e.degree();
    const auto spec = AlgebraSpec::full_algebra(d);
    const auto milnor = basis(spec, d);
    std::vector<std::vector<int>> words;
    std::vector<int> cur;
    admissible_words(d, d, cur, words);
    // columns: admissible words in Milnor coordinates; square and invertible
    std::map<Monomial, std::size_t> index;
    for (std::size_t i = 0; i < milnor.size(); ++i)
        index[milnor[i]] = i;
    const std::size_t n = milnor.size();
    std::vector<std::vector<char>> aug(n, std::vector<char>(words.size() + 1, 0));
    for (std::size_t c = 0; c < words.size(); ++c) {
        const auto img = adem_reduce(words[c], spec);
        for (const auto& m : img.terms())
            aug[index.at(m)][c] = 1;
    }
    for (const auto& m : e.terms())
        aug[index.at(m)][words.size()] = 1;
    std::size_t row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < words.size() && row < n; ++c) {
        std::size_t r = row;
        while (r < n && !aug[r][c])
            ++r;
        if (r == n)
            continue;
        std::swap(aug[r], aug[row]);
        for (std::size_t i = 0; i < n; ++i)
            if (i != row && aug[i][c])
                for (std::size_t k = 0; k <= words.size(); ++k)
                    aug[i][k] ^= aug[row][k];
        pivots.push_back(c);
        ++row;
    }
    if (pivots.size() != words.size() || words.size() != n)
        throw std::logic_error("admissible words do not form a basis in degree " + std::to_string(d));
    for (std::size_t i = 0; i < pivots.size(); ++i)
        if (aug[i][words.size()])
            out.insert(words[pivots[i]]);
    return out;
}

std::string word_to_string(const std::vector<int>& word)
{
    if (word.empty())
        return "1";
    std::string s;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i)
            s += ' ';
        s += "Sq^" + std::to_string(word[i]);
    }
    return s;
}

std::vector<int> parse_word(const std::string& text)
{
    std::vector<int> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            out.push_back(std::stoi(text.substr(i, j - i)));
            i = j;
        } else if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',' || text[i] == '[' ||
                   text[i] == ']' || text[i] == '^') {
            ++i;
        } else if (text.compare(i, 2, "Sq") == 0) {
            i += 2;
        } else {
            throw std::invalid_argument("bad word '" + text + "' at offset " + std::to_string(i));
        }
    }
    return out;
}

SteenrodElement parse_element(const std::string& text, AlgebraSpec spec)
{
    std::vector<Monomial> terms;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    skip();
    if (text.substr(i) == "0")
        return SteenrodElement(spec, 0);
    while (i < text.size()) {
        skip();
        if (text[i] == '1' && (i + 1 == text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            terms.push_back({});
            ++i;
        } else {
            if (text.compare(i, 3, "Sq(") != 0)
                throw std::invalid_argument("expected Sq( at offset " + std::to_string(i) + " in '" + text + "'");
            i += 3;
            const auto close = text.find(')', i);
            if (close == std::string::npos)
                throw std::invalid_argument("missing ) in '" + text + "'");
            Monomial m;
            std::stringstream ss(text.substr(i, close - i));
            std::string part;
            while (std::getline(ss, part, ','))
                if (!part.empty())
                    m.push_back(std::stoi(part));
            terms.push_back(normalize(m));
            i = close + 1;
        }
        skip();
        if (i < text.size()) {
            if (text[i] != '+')
                throw std::invalid_argument("expected + at offset " + std::to_string(i) + " in '" + text + "'");
            ++i;
        }
    }
    SteenrodElement e(spec, terms.empty() ? 0 : degree(terms.front()));
    for (const auto& m : terms)
        e.toggle(m);
    return e;
}

}  // namespace tsb::steenrod
