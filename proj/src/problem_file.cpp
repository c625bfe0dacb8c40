#include "eqsolv/problem_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace eqsolv {

using nlohmann::json;

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Entry {
    std::string value;
    int line = 0;
    int key_column = 0;
    int value_column = 0;
};

struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, Entry> entries;
    std::vector<std::string> order;  // const names in declaration order
};

std::string trim(const std::string& s, std::size_t* offset = nullptr) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        if (offset) *offset = s.size();
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    if (offset) *offset = b;
    return s.substr(b, e - b + 1);
}

json parse_json(const Entry& e) {
    try {
        return json::parse(e.value);
    } catch (const json::parse_error& err) {
        const int col = e.value_column + static_cast<int>(err.byte > 0 ? err.byte - 1 : 0);
        throw ParseError("malformed list value", e.line, col);
    }
}

std::int64_t as_int(const json& j, const Entry& e) {
    if (!j.is_number_integer()) throw ParseError("expected an integer", e.line, e.value_column);
    return j.get<std::int64_t>();
}

std::uint64_t positive(const Entry& e) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(e.value, &used);
    } catch (const std::exception&) {
        throw ParseError("expected an integer", e.line, e.value_column);
    }
    if (used != e.value.size()) throw ParseError("expected an integer", e.line, e.value_column + static_cast<int>(used));
    if (v < 1) throw ParseError("expected a positive integer", e.line, e.value_column);
    return static_cast<std::uint64_t>(v);
}

/// Flattens [a, b, ...] or [[a, b], [c, d]] into row-major integers.
std::vector<std::int64_t> flat_matrix(const json& j, const Entry& e) {
    if (!j.is_array()) throw ParseError("expected a list", e.line, e.value_column);
    std::vector<std::int64_t> out;
    for (const auto& item : j) {
        if (item.is_array()) {
            for (const auto& x : item) out.push_back(as_int(x, e));
        } else {
            out.push_back(as_int(item, e));
        }
    }
    return out;
}

std::vector<Token> lex(const Entry& e) {
    std::vector<Token> out;
    const std::string& s = e.value;
    std::size_t k = 0;
    while (k < s.size()) {
        const char c = s[k];
        const int col = e.value_column + static_cast<int>(k);
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++k;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = k;
            while (k < s.size() && (std::isalnum(static_cast<unsigned char>(s[k])) || s[k] == '_')) ++k;
            out.push_back({s.substr(b, k - b), e.line, col});
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t b = k;
            while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
            out.push_back({s.substr(b, k - b), e.line, col});
        } else if (std::string("+-*^()").find(c) != std::string::npos) {
            out.push_back({std::string(1, c), e.line, col});
            ++k;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", e.line, col);
        }
    }
    return out;
}

bool is_ident(const std::string& s) {
    return !s.empty() && (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

bool is_int(const std::string& s) { return !s.empty() && std::isdigit(static_cast<unsigned char>(s[0])); }

void reject_unknown(const Section& s, const std::set<std::string>& allowed) {
    for (const auto& [key, entry] : s.entries) {
        if (key.rfind("const ", 0) == 0 && allowed.count("const")) continue;
        if (!allowed.count(key)) throw ParseError("unknown key '" + key + "' in [" + s.name + "]", entry.line, entry.key_column);
    }
}

const Entry& require(const Section& s, const std::string& key) {
    const auto it = s.entries.find(key);
    if (it == s.entries.end()) throw ParseError("missing key '" + key + "' in [" + s.name + "]", s.line, 1);
    return it->second;
}

GroupSection read_group(const Section& s) {
    reject_unknown(s, {"q", "m", "pattern", "orders", "modulus"});
    GroupSection g;
    g.q = positive(require(s, "q"));
    g.m = static_cast<int>(positive(require(s, "m")));
    const Entry& pe = require(s, "pattern");
    if (pe.value == "full") {
        g.pattern = full_pattern(g.m);
    } else {
        const json j = parse_json(pe);
        if (!j.is_array()) throw ParseError("pattern must be a list of [i,j] pairs or 'full'", pe.line, pe.value_column);
        for (const auto& pos : j) {
            if (!pos.is_array() || pos.size() != 2) {
                throw ParseError("pattern entries must be [i,j] pairs", pe.line, pe.value_column);
            }
            const auto i = as_int(pos[0], pe);
            const auto jj = as_int(pos[1], pe);
            if (i < 1 || jj < 1 || i > g.m || jj > g.m) {
                throw ParseError("pattern position out of range", pe.line, pe.value_column);
            }
            g.pattern.emplace_back(static_cast<int>(i - 1), static_cast<int>(jj - 1));
        }
    }
    const Entry& oe = require(s, "orders");
    const json oj = parse_json(oe);
    if (!oj.is_array()) throw ParseError("orders must be a list", oe.line, oe.value_column);
    for (const auto& x : oj) {
        const auto v = as_int(x, oe);
        if (v < 1) throw ParseError("orders must be positive", oe.line, oe.value_column);
        g.orders.push_back(static_cast<std::uint32_t>(v));
    }
    if (const auto it = s.entries.find("modulus"); it != s.entries.end()) {
        const json mj = parse_json(it->second);
        for (auto v : flat_matrix(mj, it->second)) {
            if (v < 0) throw ParseError("modulus coefficients must be nonnegative", it->second.line, it->second.value_column);
            g.modulus.push_back(static_cast<std::uint32_t>(v));
        }
    }
    return g;
}

RingSection read_ring(const Section& s) {
    reject_unknown(s, {"p", "alpha", "m", "ideal"});
    RingSection r;
    r.p = static_cast<std::uint32_t>(positive(require(s, "p")));
    r.alpha = static_cast<std::uint32_t>(positive(require(s, "alpha")));
    r.m = static_cast<int>(positive(require(s, "m")));
    if (const auto it = s.entries.find("ideal"); it != s.entries.end()) {
        const json j = parse_json(it->second);
        if (!j.is_array()) throw ParseError("ideal must be a list of matrices", it->second.line, it->second.value_column);
        for (const auto& gen : j) r.ideal.push_back(flat_matrix(gen, it->second));
    }
    return r;
}

std::string render_list(const std::vector<std::int64_t>& v) {
    std::string out = "[";
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + std::to_string(v[k]);
    return out + "]";
}

std::string render_tokens(const std::vector<Token>& tokens) {
    std::string out;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const std::string& t = tokens[k].text;
        const bool glue = k == 0 || t == "^" || t == ")" || tokens[k - 1].text == "^" || tokens[k - 1].text == "(" ||
                          (k >= 2 && tokens[k - 1].text == "-" && tokens[k - 2].text == "^");
        if (!glue) out += ' ';
        out += t;
    }
    return out;
}

std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint64_t q, int line) {
    for (std::uint32_t p = 2; p <= q; ++p) {
        if (q % p != 0) continue;
        std::uint64_t r = q;
        std::uint32_t k = 0;
        while (r % p == 0) {
            r /= p;
            ++k;
        }
        if (r != 1) break;
        return {p, k};
    }
    throw ParseError("q = " + std::to_string(q) + " is not a prime power", line, 1);
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        std::size_t offset = 0;
        const std::string t = trim(line, &offset);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError("unterminated section header", line_no, static_cast<int>(offset) + 1);
            const std::string name = trim(t.substr(1, t.size() - 2));
            if (name != "group" && name != "ring" && name != "equation") {
                throw ParseError("unknown section [" + name + "]", line_no, static_cast<int>(offset) + 1);
            }
            for (const auto& s : sections) {
                if (s.name == name) throw ParseError("duplicate section [" + name + "]", line_no, static_cast<int>(offset) + 1);
            }
            sections.push_back(Section{name, line_no, {}, {}});
            continue;
        }
        if (sections.empty()) throw ParseError("key outside of a section", line_no, static_cast<int>(offset) + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_no, static_cast<int>(offset) + 1);
        std::string key = trim(line.substr(0, eq));
        std::size_t voff = 0;
        const std::string value = trim(line.substr(eq + 1), &voff);
        // collapse "const   name" to "const name"
        if (key.rfind("const", 0) == 0 && key.size() > 5 && std::isspace(static_cast<unsigned char>(key[5]))) {
            key = "const " + trim(key.substr(5));
        }
        Section& s = sections.back();
        Entry e{value, line_no, static_cast<int>(offset) + 1, static_cast<int>(eq + 1 + voff) + 1};
        if (!s.entries.emplace(key, e).second) throw ParseError("duplicate key '" + key + "'", line_no, e.key_column);
        if (key.rfind("const ", 0) == 0) s.order.push_back(key);
    }

    ProblemFile f;
    const Section* eqn = nullptr;
    for (const auto& s : sections) {
        if (s.name == "group") f.group = read_group(s);
        if (s.name == "ring") f.ring = read_ring(s);
        if (s.name == "equation") eqn = &s;
    }
    if (f.group && f.ring) throw ParseError("a problem has either [group] or [ring], not both", 1, 1);
    if (!f.group && !f.ring) throw ParseError("missing [group] or [ring] section", line_no ? line_no : 1, 1);
    if (!eqn) throw ParseError("missing [equation] section", line_no ? line_no : 1, 1);

    reject_unknown(*eqn, {"vars", "const", "lhs", "rhs"});
    std::set<std::string> names;
    if (const auto it = eqn->entries.find("vars"); it != eqn->entries.end()) {
        for (const Token& t : lex(it->second)) {
            if (!is_ident(t.text) || t.text == "I") throw ParseError("invalid variable name '" + t.text + "'", t.line, t.column);
            if (!names.insert(t.text).second) throw ParseError("duplicate name '" + t.text + "'", t.line, t.column);
            f.vars.push_back(t.text);
        }
    }
    for (const auto& key : eqn->order) {
        const Entry& e = eqn->entries.at(key);
        const std::string name = key.substr(6);
        if (!is_ident(name) || name == "I" || name.find(' ') != std::string::npos) {
            throw ParseError("invalid constant name '" + name + "'", e.line, e.key_column);
        }
        if (!names.insert(name).second) throw ParseError("duplicate name '" + name + "'", e.line, e.key_column);
        f.constants.push_back(ConstantDef{name, flat_matrix(parse_json(e), e), e.line});
    }
    f.lhs = lex(require(*eqn, "lhs"));
    f.rhs = lex(require(*eqn, "rhs"));
    if (f.lhs.empty()) throw ParseError("empty left-hand side (write I for the empty word)", require(*eqn, "lhs").line, 1);
    if (f.rhs.empty()) throw ParseError("empty right-hand side", require(*eqn, "rhs").line, 1);
    return f;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

std::string render_problem(const ProblemFile& f) {
    std::ostringstream out;
    if (f.group) {
        const GroupSection& g = *f.group;
        out << "[group]\nq = " << g.q << "\nm = " << g.m << "\npattern = [";
        for (std::size_t k = 0; k < g.pattern.size(); ++k) {
            out << (k ? "," : "") << "[" << g.pattern[k].first + 1 << "," << g.pattern[k].second + 1 << "]";
        }
        out << "]\norders = " << render_list({g.orders.begin(), g.orders.end()}) << "\n";
        if (!g.modulus.empty()) out << "modulus = " << render_list({g.modulus.begin(), g.modulus.end()}) << "\n";
    }
    if (f.ring) {
        const RingSection& r = *f.ring;
        out << "[ring]\np = " << r.p << "\nalpha = " << r.alpha << "\nm = " << r.m << "\n";
        if (!r.ideal.empty()) {
            out << "ideal = [";
            for (std::size_t k = 0; k < r.ideal.size(); ++k) out << (k ? "," : "") << render_list(r.ideal[k]);
            out << "]\n";
        }
    }
    out << "\n[equation]\n";
    if (!f.vars.empty()) {
        out << "vars =";
        for (const auto& v : f.vars) out << ' ' << v;
        out << "\n";
    }
    for (const auto& c : f.constants) out << "const " << c.name << " = " << render_list(c.values) << "\n";
    out << "lhs = " << render_tokens(f.lhs) << "\n";
    out << "rhs = " << render_tokens(f.rhs) << "\n";
    return out.str();
}

std::string format_element(const Matrix<Scalar>& x) {
    std::string out = "[";
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out += i ? ",[" : "[";
        for (std::size_t j = 0; j < x.cols(); ++j) out += (j ? "," : "") + std::to_string(x(i, j));
        out += "]";
    }
    return out + "]";
}

// ---------------------------------------------------------------------------

namespace {

Matrix<Scalar> constant_matrix(const ConstantDef& c, int m, std::uint64_t modulus) {
    if (c.values.size() != static_cast<std::size_t>(m) * m) {
        throw ParseError("constant '" + c.name + "' needs " + std::to_string(m * m) + " entries", c.line, 1);
    }
    std::vector<Scalar> data;
    for (auto v : c.values) {
        if (v < 0 || static_cast<std::uint64_t>(v) >= modulus) {
            throw ParseError("constant '" + c.name + "' has entry " + std::to_string(v) + " outside [0, " +
                                 std::to_string(modulus) + ")",
                             c.line, 1);
        }
        data.push_back(static_cast<Scalar>(v));
    }
    return Matrix<Scalar>(m, m, std::move(data));
}

std::int64_t read_exponent(const std::vector<Token>& tokens, std::size_t& k) {
    if (k >= tokens.size() || tokens[k].text != "^") return 1;
    const Token& caret = tokens[k++];
    bool negative = false;
    if (k < tokens.size() && tokens[k].text == "-") {
        negative = true;
        ++k;
    }
    if (k >= tokens.size() || !is_int(tokens[k].text)) throw ParseError("expected an exponent", caret.line, caret.column + 1);
    const std::int64_t e = std::stoll(tokens[k++].text);
    return negative ? -e : e;
}

}  // namespace

GroupWord parse_word(const SemipatternGroup& g, const std::vector<Token>& tokens,
                     const std::vector<std::string>& vars, const std::vector<ConstantDef>& constants) {
    GroupWord w;
    std::size_t k = 0;
    while (k < tokens.size()) {
        const Token& t = tokens[k++];
        if (!is_ident(t.text)) throw ParseError("expected a letter, found '" + t.text + "'", t.line, t.column);
        const std::int64_t e = read_exponent(tokens, k);
        if (t.text == "I") continue;
        const auto vit = std::find(vars.begin(), vars.end(), t.text);
        if (vit != vars.end()) {
            GroupWord single;
            single.letters.push_back(Letter::variable(static_cast<VarId>(vit - vars.begin())));
            const GroupWord unit = e < 0 ? invert_word(single, g) : single;
            for (std::int64_t r = 0; r < (e < 0 ? -e : e); ++r) w = w * unit;
            continue;
        }
        const auto cit = std::find_if(constants.begin(), constants.end(),
                                      [&](const ConstantDef& c) { return c.name == t.text; });
        if (cit == constants.end()) throw ParseError("undeclared letter '" + t.text + "'", t.line, t.column);
        const GroupElement c = constant_matrix(*cit, g.dim(), g.domain()->cardinality());
        if (!g.contains(c)) throw ParseError("constant '" + cit->name + "' is not a group element", t.line, t.column);
        const GroupElement letter = e < 0 ? g.inverse(c) : c;
        for (std::int64_t r = 0; r < (e < 0 ? -e : e); ++r) w.letters.push_back(Letter::constant(letter));
    }
    return w;
}

GroupProblem resolve_group(const ProblemFile& f) {
    if (!f.group) throw std::invalid_argument("problem has no [group] section");
    const GroupSection& s = *f.group;
    const auto [p, k] = prime_power(s.q, 1);
    DomainSpec spec;
    spec.p = p;
    spec.exponent = k;
    spec.kind = DomainKind::Field;
    spec.modulus = s.modulus;
    SemipatternGroup g(make_domain(spec), s.m, s.pattern, s.orders);
    GroupWord lhs = parse_word(g, f.lhs, f.vars, f.constants);
    GroupWord rhs_word = parse_word(g, f.rhs, f.vars, f.constants);
    GroupRhs rhs;
    if (rhs_word.variables().empty()) {
        rhs = evaluate_word(g, rhs_word, {});
    } else {
        rhs = std::move(rhs_word);
    }
    return GroupProblem{std::move(g), std::move(lhs), std::move(rhs), f.vars};
}

namespace {

class RingParser {
public:
    RingParser(const NilpotentRing& ring, const std::vector<Token>& tokens, const std::vector<std::string>& vars,
               const std::vector<ConstantDef>& constants)
        : ring_(ring), tokens_(tokens), vars_(vars), constants_(constants) {}

    RingExpr parse() {
        RingExpr e = expr();
        if (k_ < tokens_.size()) fail("unexpected '" + tokens_[k_].text + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        if (k_ < tokens_.size()) throw ParseError(msg, tokens_[k_].line, tokens_[k_].column);
        const Token& last = tokens_.back();
        throw ParseError(msg, last.line, last.column + static_cast<int>(last.text.size()));
    }

    bool peek(const std::string& s) const { return k_ < tokens_.size() && tokens_[k_].text == s; }

    RingExpr expr() {
        std::vector<RingExpr> terms;
        bool negate = false;
        if (peek("-")) {
            negate = true;
            ++k_;
        } else if (peek("+")) {
            ++k_;
        }
        while (true) {
            RingExpr t = term();
            terms.push_back(negate ? RingExpr::neg(std::move(t)) : std::move(t));
            if (peek("+")) {
                negate = false;
            } else if (peek("-")) {
                negate = true;
            } else {
                break;
            }
            ++k_;
        }
        return terms.size() == 1 ? std::move(terms.front()) : RingExpr::sum(std::move(terms));
    }

    bool starts_factor() const {
        return k_ < tokens_.size() && (is_ident(tokens_[k_].text) || is_int(tokens_[k_].text) || peek("("));
    }

    RingExpr term() {
        std::int64_t coef = 1;
        std::vector<RingExpr> factors;
        while (true) {
            if (!starts_factor()) fail("expected a factor");
            const Token& t = tokens_[k_];
            if (is_int(t.text)) {
                ++k_;
                coef *= std::stoll(t.text);
            } else if (t.text == "(") {
                ++k_;
                factors.push_back(expr());
                if (!peek(")")) fail("expected ')'");
                ++k_;
            } else {
                ++k_;
                RingExpr base = letter(t);
                const std::int64_t e = read_exponent(tokens_, k_);
                if (e < 1) throw ParseError("ring powers must be positive", t.line, t.column);
                for (std::int64_t r = 0; r < e; ++r) factors.push_back(base);
            }
            if (peek("*")) {
                ++k_;
                continue;
            }
            if (!starts_factor()) break;
        }
        if (factors.empty()) {
            if (coef % static_cast<std::int64_t>(ring_.domain()->cardinality()) != 0) {
                fail("a nonzero integer needs a ring factor");
            }
            return RingExpr::constant(ring_.zero());
        }
        RingExpr prod = factors.size() == 1 ? std::move(factors.front()) : RingExpr::product(std::move(factors));
        return coef == 1 ? prod : RingExpr::scale(coef, std::move(prod));
    }

    RingExpr letter(const Token& t) {
        const auto vit = std::find(vars_.begin(), vars_.end(), t.text);
        if (vit != vars_.end()) return RingExpr::var(static_cast<VarId>(vit - vars_.begin()));
        const auto cit = std::find_if(constants_.begin(), constants_.end(),
                                      [&](const ConstantDef& c) { return c.name == t.text; });
        if (cit == constants_.end()) throw ParseError("undeclared letter '" + t.text + "'", t.line, t.column);
        const RingElement c = constant_matrix(*cit, ring_.dim(), ring_.domain()->cardinality());
        if (!ring_.contains(c)) throw ParseError("constant '" + cit->name + "' is not a ring element", t.line, t.column);
        return RingExpr::constant(c);
    }

    const NilpotentRing& ring_;
    const std::vector<Token>& tokens_;
    const std::vector<std::string>& vars_;
    const std::vector<ConstantDef>& constants_;
    std::size_t k_ = 0;
};

}  // namespace

RingProblem resolve_ring(const ProblemFile& f, std::uint64_t ideal_guard) {
    if (!f.ring) throw std::invalid_argument("problem has no [ring] section");
    const RingSection& s = *f.ring;
    NilpotentRing ring(s.p, s.alpha, s.m);
    RingExpr lhs = RingParser(ring, f.lhs, f.vars, f.constants).parse();
    RingExpr rhs = RingParser(ring, f.rhs, f.vars, f.constants).parse();
    RingProblem out{ring, lhs, ring.zero(), std::nullopt, f.vars};
    if (rhs.variables().empty()) {
        out.rhs = evaluate(ring, rhs, {});
    } else {
        out.expr = lhs - rhs;
    }
    if (!s.ideal.empty()) {
        std::vector<RingElement> gens;
        for (const auto& g : s.ideal) {
            const ConstantDef def{"ideal generator", g, 1};
            RingElement e = constant_matrix(def, s.m, ring.domain()->cardinality());
            if (!ring.contains(e)) throw ParseError("ideal generator is not a ring element", 1, 1);
            gens.push_back(std::move(e));
        }
        out.ideal = enumerate_ideal(ring, gens, ideal_guard);
    }
    return out;
}

}  // namespace eqsolv
