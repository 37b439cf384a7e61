#include <algorithm>
#include <stdexcept>

#include "csplab/consistency.hpp"
#include "csplab/errors.hpp"
#include "csplab/polyengine.hpp"

namespace csplab {

namespace {

Tuple project(const Assignment& values, const std::vector<std::size_t>& scope) {
    Tuple t;
    t.reserve(scope.size());
    for (auto v : scope) {
        t.push_back(values[v]);
    }
    return t;
}

// Tuples of the relation agreeing on positions that share a variable.
bool respects_repeats(const Tuple& t, const std::vector<std::size_t>& scope) {
    for (std::size_t i = 0; i < scope.size(); ++i) {
        for (std::size_t j = i + 1; j < scope.size(); ++j) {
            if (scope[i] == scope[j] && t[i] != t[j]) {
                return false;
            }
        }
    }
    return true;
}

// Least solution for and-closed templates (start at 0, raise to the meet of
// the dominating tuples); greatest for or-closed ones, symmetrically.
std::optional<Assignment> horn_fixpoint(const Instance& instance, const FiniteStructure& target, bool least) {
    Assignment values(instance.num_variables(), least ? 0 : 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : instance.constraints()) {
            const Relation& rel = target.relation(c.relation);
            const Tuple current = project(values, c.scope);
            if (rel.contains(current)) {
                continue;
            }
            std::optional<Tuple> bound;
            for (const auto& t : rel.tuples) {
                bool dominates = true;
                for (std::size_t i = 0; i < t.size() && dominates; ++i) {
                    dominates = least ? t[i] >= current[i] : t[i] <= current[i];
                }
                if (!dominates || !respects_repeats(t, c.scope)) {
                    continue;
                }
                if (!bound) {
                    bound = t;
                } else {
                    for (std::size_t i = 0; i < t.size(); ++i) {
                        (*bound)[i] = least ? std::min((*bound)[i], t[i]) : std::max((*bound)[i], t[i]);
                    }
                }
            }
            if (!bound) {
                return std::nullopt;
            }
            for (std::size_t i = 0; i < c.scope.size(); ++i) {
                values[c.scope[i]] = (*bound)[i];
            }
            changed = true;
        }
    }
    return values;
}

// Majority-closed relations are the join of their binary projections, and
// (2,3)-consistency makes such binary networks backtrack-free.
std::optional<Assignment> majority_solve(const Instance& instance, const FiniteStructure& target) {
    FiniteStructure binary(2);
    Instance projected(instance.variables());
    std::size_t next_name = 0;
    auto add = [&](std::set<Tuple> tuples, std::vector<std::size_t> scope) {
        std::string name = "p" + std::to_string(next_name++);
        binary.add_relation(name, scope.size(), std::move(tuples));
        projected.add_constraint(name, std::move(scope));
    };
    for (const auto& c : instance.constraints()) {
        const Relation& rel = target.relation(c.relation);
        for (std::size_t i = 0; i < c.scope.size(); ++i) {
            std::set<Tuple> unary;
            for (const auto& t : rel.tuples) {
                if (respects_repeats(t, c.scope)) {
                    unary.insert({t[i]});
                }
            }
            add(std::move(unary), {c.scope[i]});
            for (std::size_t j = i + 1; j < c.scope.size(); ++j) {
                if (c.scope[i] == c.scope[j]) {
                    continue;
                }
                std::set<Tuple> pair;
                for (const auto& t : rel.tuples) {
                    if (respects_repeats(t, c.scope)) {
                        pair.insert({t[i], t[j]});
                    }
                }
                add(std::move(pair), {c.scope[i], c.scope[j]});
            }
        }
    }
    const auto n = instance.num_variables();
    if (n == 0) {
        return Assignment{};
    }
    auto state = establish_kl(projected, binary, 2, 3);
    if (!state) {
        return std::nullopt;
    }
    Assignment values(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
        const auto& singles = state->local.at(VarMask{1} << v);
        for (int a = 0; a < 2 && values[v] < 0; ++a) {
            if (!singles.count({a})) {
                continue;
            }
            bool ok = true;
            for (std::size_t u = 0; u < v && ok; ++u) {
                const auto& pairs = state->local.at((VarMask{1} << u) | (VarMask{1} << v));
                ok = pairs.count({values[u], a}) != 0;
            }
            if (ok) {
                values[v] = a;
            }
        }
        if (values[v] < 0) {
            throw std::logic_error("greedy extension failed on a path-consistent majority-closed instance");
        }
    }
    return values;
}

using Row = std::vector<unsigned char>;

// Reduced row echelon form over GF(2) on the first `cols` columns; the last
// column of each row may carry a right-hand side. Returns pivot columns; row i
// carries pivot i and the rows after the last pivot are zero on `cols`.
std::vector<std::size_t> rref(std::vector<Row>& rows, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0) {
            ++p;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[p]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != r && rows[i][c]) {
                for (std::size_t k = 0; k < rows[i].size(); ++k) {
                    rows[i][k] ^= rows[r][k];
                }
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Minority-closed relations are cosets t0 + V; emit the equations of the
// orthogonal complement of V.
std::optional<Assignment> affine_solve(const Instance& instance, const FiniteStructure& target) {
    const auto n = instance.num_variables();
    std::vector<Row> system;
    for (const auto& c : instance.constraints()) {
        const Relation& rel = target.relation(c.relation);
        if (rel.tuples.empty()) {
            return std::nullopt;
        }
        const std::size_t k = rel.arity;
        const Tuple& t0 = *rel.tuples.begin();
        std::vector<Row> span;
        for (const auto& t : rel.tuples) {
            Row row(k);
            for (std::size_t i = 0; i < k; ++i) {
                row[i] = static_cast<unsigned char>(t[i] ^ t0[i]);
            }
            span.push_back(std::move(row));
        }
        const auto pivots = rref(span, k);
        // Null space of the span basis: one vector per free column.
        for (std::size_t f = 0; f < k; ++f) {
            if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) {
                continue;
            }
            Row w(k, 0);
            w[f] = 1;
            for (std::size_t r = 0; r < pivots.size(); ++r) {
                if (span[r][f]) {
                    w[pivots[r]] = 1;
                }
            }
            Row eq(n + 1, 0);
            unsigned char rhs = 0;
            for (std::size_t i = 0; i < k; ++i) {
                if (w[i]) {
                    eq[c.scope[i]] ^= 1;
                    rhs ^= static_cast<unsigned char>(t0[i]);
                }
            }
            eq[n] = rhs;
            system.push_back(std::move(eq));
        }
    }
    const auto pivots = rref(system, n);
    for (const auto& row : system) {
        if (std::all_of(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n), [](auto b) { return b == 0; }) &&
            row[n]) {
            return std::nullopt;
        }
    }
    Assignment values(n, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        values[pivots[r]] = system[r][n];
    }
    return values;
}

}  // namespace

std::optional<Assignment> schaefer_solve(const Instance& instance, const FiniteStructure& target, BooleanClass cls) {
    if (target.domain_size() != 2) {
        throw DomainMismatch("Schaefer solving needs a two-element template");
    }
    check_signature(instance, target);
    if (cls == BooleanClass::Trivial || !preserves_op(boolean_table(cls), target)) {
        throw ClassMismatch(to_string(cls) + " does not preserve the template");
    }
    std::optional<Assignment> result;
    switch (cls) {
        case BooleanClass::HornAnd: result = horn_fixpoint(instance, target, true); break;
        case BooleanClass::DualHornOr: result = horn_fixpoint(instance, target, false); break;
        case BooleanClass::Majority2Sat: result = majority_solve(instance, target); break;
        case BooleanClass::MinorityAffine: result = affine_solve(instance, target); break;
        case BooleanClass::Constant0:
        case BooleanClass::Constant1:
            result = Assignment(instance.num_variables(), cls == BooleanClass::Constant0 ? 0 : 1);
            break;
        case BooleanClass::Trivial: break;
    }
    if (result && !satisfies(instance, target, *result)) {
        throw std::logic_error("Schaefer solver produced an invalid assignment for " + to_string(cls));
    }
    return result;
}

}  // namespace csplab
