#include "eqsolv/system_solver.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

namespace eqsolv {

std::size_t PolySystem::total_length() const {
    std::size_t total = 0;
    for (const auto& c : constraints) total += c.lhs.length();
    return total;
}

long double search_space(const PolySystem& system) {
    long double space = 1.0L;
    for (const auto& [v, values] : system.domains) space *= static_cast<long double>(values.size());
    return space;
}

std::string backend_name(Backend b) { return b == Backend::Pruned ? "pruned" : "naive"; }

Backend parse_backend(const std::string& name) {
    if (name == "pruned" || name == "exhaustive") return Backend::Pruned;
    if (name == "naive") return Backend::Naive;
    throw std::invalid_argument("unknown backend '" + name + "' (expected pruned or naive)");
}

namespace {

struct CompiledMonomial {
    Scalar coef = 0;
    std::vector<int> positions;  // ascending, with multiplicity
    int last = -1;
    int second = -1;
};

struct CompiledConstraint {
    Scalar rhs = 0;
    std::vector<CompiledMonomial> monomials;
    int last = -1;
};

class Search {
public:
    Search(const PolySystem& system, const SolveOptions& options)
        : system_(system), domain_(*system.domain), options_(options) {
        order_variables();
        compile();
    }

    Solution run() {
        Solution out;
        out.order = vars_;
        const bool sat = options_.backend == Backend::Naive ? run_naive() : run_pruned();
        out.verdict = sat ? Verdict::Sat : Verdict::Unsat;
        if (sat) {
            for (std::size_t t = 0; t < vars_.size(); ++t) out.witness[vars_[t]] = values_[t];
        }
        out.stats = stats_;
        return out;
    }

private:
    void order_variables() {
        std::map<Variable, std::uint64_t> count;
        for (const auto& [v, values] : system_.domains) {
            if (values.empty()) throw std::invalid_argument("empty domain for " + to_string(v));
            for (auto x : values) {
                if (!domain_.contains(x)) {
                    throw std::invalid_argument("domain of " + to_string(v) + " lists a non-element");
                }
            }
            count[v] = 0;
        }
        for (const auto& c : system_.constraints) {
            if (!same_domain(c.lhs.domain(), system_.domain)) {
                throw std::invalid_argument("constraint over a different domain");
            }
            for (const auto& m : c.lhs.monomials()) {
                for (const auto& v : m.factors) {
                    auto it = count.find(v);
                    if (it == count.end()) {
                        throw std::invalid_argument("no domain for variable " + to_string(v));
                    }
                    ++it->second;
                }
            }
        }
        for (const auto& [v, n] : count) vars_.push_back(v);
        std::stable_sort(vars_.begin(), vars_.end(), [&](const Variable& a, const Variable& b) {
            const bool sa = system_.domains.at(a).size() == 1;
            const bool sb = system_.domains.at(b).size() == 1;
            if (sa != sb) return sa;
            return count[a] > count[b];
        });
        for (std::size_t t = 0; t < vars_.size(); ++t) {
            position_[vars_[t]] = static_cast<int>(t);
            domains_.push_back(system_.domains.at(vars_[t]));
        }
        values_.assign(vars_.size(), 0);
    }

    void compile() {
        const int n = static_cast<int>(vars_.size());
        buckets_.assign(vars_.size(), {});
        checks_.assign(vars_.size(), {});
        std::vector<bool> constrained(vars_.size(), false);
        int linear_from = 0;
        for (const auto& c : system_.constraints) {
            CompiledConstraint cc;
            cc.rhs = c.rhs;
            for (const auto& m : c.lhs.monomials()) {
                CompiledMonomial cm;
                cm.coef = m.coef;
                for (const auto& v : m.factors) cm.positions.push_back(position_.at(v));
                std::sort(cm.positions.begin(), cm.positions.end());
                const auto k = cm.positions.size();
                if (k >= 1) cm.last = cm.positions[k - 1];
                if (k >= 2) cm.second = cm.positions[k - 2];
                for (int pos : cm.positions) constrained[pos] = true;
                cc.last = std::max(cc.last, cm.last);
                linear_from = std::max(linear_from, cm.second + 1);
                cc.monomials.push_back(std::move(cm));
            }
            constraints_.push_back(std::move(cc));
        }
        for (std::size_t ci = 0; ci < constraints_.size(); ++ci) {
            const auto& cc = constraints_[ci];
            last_check_ = std::max(last_check_, cc.last);
            if (cc.last >= 0) checks_[cc.last].push_back(static_cast<int>(ci));
            for (std::size_t mi = 0; mi < cc.monomials.size(); ++mi) {
                const int last = cc.monomials[mi].last;
                if (last >= 0) buckets_[last].push_back({static_cast<int>(ci), static_cast<int>(mi)});
            }
        }
        for (int t = 0; t < n; ++t) {
            if (constrained[t] && domains_[t].size() != domain_.cardinality()) {
                linear_from = std::max(linear_from, t + 1);
            }
        }
        if (domain_.is_field() && linear_from < n && linear_from <= last_check_) {
            linear_from_ = linear_from;
        }
    }

    Scalar monomial_value(const CompiledMonomial& m) const {
        Scalar v = m.coef;
        for (int pos : m.positions) v = domain_.mul(v, values_[pos]);
        return v;
    }

    void count_assignment() {
        if (++stats_.explored > options_.guard) {
            throw GuardExceeded("search guard of " + std::to_string(options_.guard) +
                                    " assignments exceeded (search space " +
                                    space_string() + ")",
                                search_space(system_));
        }
    }

    std::string space_string() const {
        std::ostringstream out;
        out.precision(3);
        out << search_space(system_);
        return out.str();
    }

    bool run_pruned() {
        sums_.assign(constraints_.size(), domain_.zero());
        for (std::size_t ci = 0; ci < constraints_.size(); ++ci) {
            for (const auto& m : constraints_[ci].monomials) {
                if (m.last < 0) sums_[ci] = domain_.add(sums_[ci], m.coef);
            }
            if (constraints_[ci].last < 0 && sums_[ci] != constraints_[ci].rhs) {
                ++stats_.prunes;
                return false;
            }
        }
        return descend(0);
    }

    bool descend(int depth) {
        const int n = static_cast<int>(vars_.size());
        if (depth > last_check_) {
            for (int t = depth; t < n; ++t) values_[t] = domains_[t].front();
            return true;
        }
        if (depth == linear_from_) return complete_linear(depth);
        const std::vector<Scalar> saved = sums_;
        for (Scalar value : domains_[depth]) {
            count_assignment();
            values_[depth] = value;
            for (const auto& [ci, mi] : buckets_[depth]) {
                sums_[ci] = domain_.add(sums_[ci], monomial_value(constraints_[ci].monomials[mi]));
            }
            bool ok = true;
            for (int ci : checks_[depth]) {
                if (sums_[ci] != constraints_[ci].rhs) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                if (descend(depth + 1)) return true;
            } else {
                ++stats_.prunes;
            }
            sums_ = saved;
        }
        return false;
    }

    // Every remaining constrained variable has the full field as domain and
    // occurs at most linearly with an assigned coefficient.
    bool complete_linear(int depth) {
        ++stats_.linear_completions;
        const int n = static_cast<int>(vars_.size());
        const int width = n - depth;
        std::vector<std::vector<Scalar>> rows;
        std::vector<Scalar> rhs;
        for (std::size_t ci = 0; ci < constraints_.size(); ++ci) {
            const auto& cc = constraints_[ci];
            if (cc.last < depth) continue;
            std::vector<Scalar> row(width, domain_.zero());
            Scalar constant = sums_[ci];
            for (const auto& m : cc.monomials) {
                if (m.last < depth) continue;
                Scalar coef = m.coef;
                for (std::size_t k = 0; k + 1 < m.positions.size(); ++k) {
                    coef = domain_.mul(coef, values_[m.positions[k]]);
                }
                row[m.last - depth] = domain_.add(row[m.last - depth], coef);
            }
            rows.push_back(std::move(row));
            rhs.push_back(domain_.sub(cc.rhs, constant));
        }
        if (!affine_consistent(rows, rhs, {})) {
            ++stats_.prunes;
            return false;
        }
        std::vector<Scalar> fixed;
        for (int t = depth; t < n; ++t) {
            bool found = false;
            for (Scalar value : domains_[t]) {
                count_assignment();
                fixed.push_back(value);
                if (affine_consistent(rows, rhs, fixed)) {
                    values_[t] = value;
                    found = true;
                    break;
                }
                fixed.pop_back();
            }
            if (!found) throw std::logic_error("affine completion lost consistency");
        }
        return true;
    }

    // Solvability of rows * z = rhs with the leading entries of z fixed.
    bool affine_consistent(const std::vector<std::vector<Scalar>>& rows,
                           const std::vector<Scalar>& rhs,
                           const std::vector<Scalar>& fixed) const {
        const std::size_t k = fixed.size();
        std::vector<std::vector<Scalar>> a;
        a.reserve(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            Scalar b = rhs[r];
            for (std::size_t t = 0; t < k; ++t) b = domain_.sub(b, domain_.mul(rows[r][t], fixed[t]));
            std::vector<Scalar> row(rows[r].begin() + static_cast<std::ptrdiff_t>(k), rows[r].end());
            row.push_back(b);
            a.push_back(std::move(row));
        }
        const std::size_t cols = rows.empty() ? 0 : rows[0].size() - k;
        std::size_t pivot_row = 0;
        for (std::size_t col = 0; col < cols && pivot_row < a.size(); ++col) {
            std::size_t pick = pivot_row;
            while (pick < a.size() && a[pick][col] == domain_.zero()) ++pick;
            if (pick == a.size()) continue;
            std::swap(a[pick], a[pivot_row]);
            const Scalar inv = domain_.inv(a[pivot_row][col]);
            for (auto& x : a[pivot_row]) x = domain_.mul(x, inv);
            for (std::size_t r = 0; r < a.size(); ++r) {
                if (r == pivot_row || a[r][col] == domain_.zero()) continue;
                const Scalar factor = a[r][col];
                for (std::size_t c = col; c <= cols; ++c) {
                    a[r][c] = domain_.sub(a[r][c], domain_.mul(factor, a[pivot_row][c]));
                }
            }
            ++pivot_row;
        }
        for (std::size_t r = pivot_row; r < a.size(); ++r) {
            if (a[r][cols] != domain_.zero()) return false;
        }
        return true;
    }

    bool run_naive() {
        const long double space = search_space(system_);
        if (space > static_cast<long double>(options_.guard)) {
            throw GuardExceeded("search space " + space_string() + " exceeds guard " +
                                    std::to_string(options_.guard),
                                space);
        }
        const std::size_t n = vars_.size();
        std::vector<std::size_t> digit(n, 0);
        for (std::size_t t = 0; t < n; ++t) values_[t] = domains_[t][0];
        while (true) {
            ++stats_.explored;
            bool ok = true;
            for (const auto& cc : constraints_) {
                Scalar sum = domain_.zero();
                for (const auto& m : cc.monomials) sum = domain_.add(sum, monomial_value(m));
                if (sum != cc.rhs) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
            // Odometer with the last-ordered variable changing fastest.
            std::size_t t = n;
            while (t > 0) {
                --t;
                if (++digit[t] < domains_[t].size()) {
                    values_[t] = domains_[t][digit[t]];
                    break;
                }
                digit[t] = 0;
                values_[t] = domains_[t][0];
                if (t == 0) return false;
            }
            if (n == 0) return false;
        }
    }

    const PolySystem& system_;
    const Domain& domain_;
    SolveOptions options_;
    std::vector<Variable> vars_;
    std::map<Variable, int> position_;
    std::vector<std::vector<Scalar>> domains_;
    std::vector<Scalar> values_;
    std::vector<CompiledConstraint> constraints_;
    std::vector<std::vector<std::pair<int, int>>> buckets_;
    std::vector<std::vector<int>> checks_;
    std::vector<Scalar> sums_;
    int last_check_ = -1;
    int linear_from_ = -1;
    SolveStats stats_;
};

}  // namespace

Solution solve(const PolySystem& system, const SolveOptions& options) {
    if (!system.domain) throw std::invalid_argument("system has no scalar domain");
    const auto start = std::chrono::steady_clock::now();
    Search search(system, options);
    Solution out = search.run();
    out.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (out.sat() && !verify_witness(system, out.witness)) {
        throw std::logic_error("solver produced a witness that fails verification");
    }
    return out;
}

bool verify_witness(const PolySystem& system, const Assignment& a) {
    for (const auto& [v, value] : a) {
        auto it = system.domains.find(v);
        if (it == system.domains.end()) continue;
        if (!std::binary_search(it->second.begin(), it->second.end(), value)) {
            throw std::domain_error("value " + std::to_string(value) + " outside the domain of " +
                                    to_string(v));
        }
    }
    for (const auto& c : system.constraints) {
        if (evaluate(c.lhs, a) != c.rhs) return false;
    }
    return true;
}

std::string render_system(const PolySystem& system, const std::vector<std::string>& letter_names) {
    std::ostringstream out;
    const Domain& d = *system.domain;
    out << "domain: " << d.name() << '\n';
    if (!letter_names.empty()) {
        out << "letters:\n";
        for (std::size_t k = 0; k < letter_names.size(); ++k) {
            out << "  " << (k + 1) << " = " << letter_names[k] << '\n';
        }
    }
    out << "variables: " << system.domains.size() << '\n';
    for (const auto& [v, values] : system.domains) {
        out << "  " << to_string(v) << " : ";
        if (values.size() == d.cardinality()) {
            out << d.name();
        } else {
            out << '{';
            for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
            out << '}';
        }
        out << '\n';
    }
    out << "constraints: " << system.constraints.size() << '\n';
    for (const auto& c : system.constraints) {
        out << "  " << to_string(c.lhs) << " = " << c.rhs << '\n';
    }
    return out.str();
}

}  // namespace eqsolv
