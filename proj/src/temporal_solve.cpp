#include <algorithm>
#include <set>
#include <string>
#include <stdexcept>

#include "csplab/errors.hpp"
#include "csplab/polyengine.hpp"
#include "csplab/temporal.hpp"

namespace csplab::temporal {

TemporalProblem::TemporalProblem(std::vector<std::string> variables, std::vector<TemporalConstraint> constraints)
    : variables_(std::move(variables)), constraints_(std::move(constraints)) {
    for (const auto& c : constraints_) {
        if (c.scope.size() != c.relation.arity()) {
            throw ArityError("constraint scope length differs from relation arity");
        }
        for (std::size_t i = 0; i < c.scope.size(); ++i) {
            if (c.scope[i] >= variables_.size()) {
                throw UnknownVariable("constraint variable out of range");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (c.scope[i] == c.scope[j]) {
                    throw MalformedPattern("temporal constraint scopes must be repetition-free");
                }
            }
        }
    }
}

TemporalProblem TemporalProblem::bind(const Instance& instance, const TemporalTemplate& tmpl) {
    std::vector<TemporalConstraint> constraints;
    for (const auto& c : instance.constraints()) {
        const TemporalRelation& rel = tmpl.relation(c.relation);
        if (rel.arity() != c.scope.size()) {
            throw SignatureMismatch("constraint on " + c.relation + " has " + std::to_string(c.scope.size()) +
                                    " arguments, relation arity is " + std::to_string(rel.arity()));
        }
        std::vector<std::size_t> scope;
        std::vector<std::size_t> first_positions;
        for (std::size_t i = 0; i < c.scope.size(); ++i) {
            if (std::find(scope.begin(), scope.end(), c.scope[i]) == scope.end()) {
                scope.push_back(c.scope[i]);
                first_positions.push_back(i);
            }
        }
        if (scope.size() == c.scope.size()) {
            constraints.push_back({rel, c.scope});
            continue;
        }
        // Keep types where positions sharing a variable are equal.
        std::vector<WeakOrderType> types;
        for (const auto& t : rel.types()) {
            bool ok = true;
            for (std::size_t i = 0; i < c.scope.size() && ok; ++i) {
                for (std::size_t j = 0; j < i && ok; ++j) {
                    ok = c.scope[i] != c.scope[j] || t.rank(i) == t.rank(j);
                }
            }
            if (ok) {
                types.push_back(t.restricted(first_positions));
            }
        }
        constraints.push_back({TemporalRelation(scope.size(), std::move(types)), std::move(scope)});
    }
    return TemporalProblem(instance.variables(), std::move(constraints));
}

bool TemporalProblem::satisfied_by(const WeakOrderType& solution) const {
    if (solution.arity() != variables_.size()) {
        return false;
    }
    return std::all_of(constraints_.begin(), constraints_.end(), [&](const TemporalConstraint& c) {
        return c.relation.contains(solution.restricted(c.scope));
    });
}

TemporalProblem TemporalProblem::reversed() const {
    std::vector<TemporalConstraint> constraints;
    for (const auto& c : constraints_) {
        constraints.push_back({c.relation.reversed(), c.scope});
    }
    return TemporalProblem(variables_, std::move(constraints));
}

ConstraintNetwork TemporalProblem::network() const {
    ConstraintNetwork net;
    net.num_variables = variables_.size();
    for (const auto& c : constraints_) {
        net.scopes.push_back(c.scope);
    }
    return net;
}

namespace {

// Homomorphisms of the pinned two-element instance are exactly the free sets
// containing the Z-pinned variables and avoiding the P-pinned ones.
class AfinOracle {
public:
    explicit AfinOracle(const TemporalProblem& problem) : structure_(2), instance_(problem.variables()) {
        structure_.add_relation(kZeroName, 1, {{kZero}});
        structure_.add_relation(kPositiveName, 1, {{kPositive}});
        for (std::size_t i = 0; i < problem.constraints().size(); ++i) {
            const auto& c = problem.constraints()[i];
            const std::string name = "c" + std::to_string(i);
            structure_.add_relation(name, c.relation.arity(), afin_relation(c.relation));
            instance_.add_constraint(name, c.scope);
        }
        solver_class_ = solving_class(boolean_classify(structure_));
    }

    std::optional<VariableSet> zero_set(const VariableSet& zeros, const VariableSet& positives) const {
        Instance pinned = instance_;
        for (auto v : zeros) {
            pinned.add_constraint(kZeroName, std::vector<std::size_t>{v});
        }
        for (auto v : positives) {
            pinned.add_constraint(kPositiveName, std::vector<std::size_t>{v});
        }
        auto h = solver_class_ ? schaefer_solve(pinned, structure_, *solver_class_) : hom_search(pinned, structure_);
        if (!h) {
            return std::nullopt;
        }
        VariableSet out;
        for (std::size_t v = 0; v < h->size(); ++v) {
            if ((*h)[v] == kZero) {
                out.push_back(v);
            }
        }
        return out;
    }

private:
    FiniteStructure structure_;
    Instance instance_;
    std::optional<BooleanClass> solver_class_;
};

void require_variable(const TemporalProblem& problem, std::size_t x) {
    if (x >= problem.num_variables()) {
        throw UnknownVariable("variable index " + std::to_string(x) + " out of range");
    }
}

VariableSet complement(const VariableSet& set, std::size_t n) {
    VariableSet out;
    for (std::size_t v = 0; v < n; ++v) {
        if (!std::binary_search(set.begin(), set.end(), v)) {
            out.push_back(v);
        }
    }
    return out;
}

bool is_free_with(const AfinOracle& oracle, const TemporalProblem& problem, const VariableSet& set) {
    return !set.empty() && oracle.zero_set(set, complement(set, problem.num_variables())).has_value();
}

VariableSet shrink(const AfinOracle& oracle, const TemporalProblem& problem, VariableSet current) {
    bool shrunk = true;
    while (shrunk) {
        shrunk = false;
        for (std::size_t i = 0; i < current.size() && !shrunk; ++i) {
            for (std::size_t j = 0; j < current.size() && !shrunk; ++j) {
                if (i == j) {
                    continue;
                }
                auto positives = complement(current, problem.num_variables());
                positives.push_back(current[j]);
                if (auto t = oracle.zero_set({current[i]}, positives)) {
                    current = std::move(*t);
                    shrunk = true;
                }
            }
        }
    }
    return current;
}

// Commits `level` as the least block: every constraint touching it keeps the
// types whose least block is exactly its positions in the level.
TemporalProblem remove_level(const TemporalProblem& problem, const VariableSet& level, std::vector<std::size_t>& kept) {
    kept = complement(level, problem.num_variables());
    std::vector<std::size_t> new_index(problem.num_variables(), 0);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        new_index[kept[i]] = i;
        names.push_back(problem.variables()[kept[i]]);
    }
    std::vector<TemporalConstraint> constraints;
    for (const auto& c : problem.constraints()) {
        std::vector<std::size_t> inside;
        std::vector<std::size_t> outside;
        std::vector<std::size_t> scope;
        for (std::size_t p = 0; p < c.scope.size(); ++p) {
            if (std::binary_search(level.begin(), level.end(), c.scope[p])) {
                inside.push_back(p);
            } else {
                outside.push_back(p);
                scope.push_back(new_index[c.scope[p]]);
            }
        }
        if (inside.empty()) {
            constraints.push_back({c.relation, std::move(scope)});
            continue;
        }
        std::vector<WeakOrderType> types;
        for (const auto& t : c.relation.types()) {
            if (t.minimal_positions() == inside) {
                types.push_back(t.restricted(outside));
            }
        }
        if (types.empty()) {
            throw std::logic_error("committed level is not free for a constraint");
        }
        if (!outside.empty()) {
            constraints.push_back({TemporalRelation(outside.size(), std::move(types)), std::move(scope)});
        }
    }
    return TemporalProblem(std::move(names), std::move(constraints));
}

// Lifts a solution of the problem left after committing `level` back onto
// the variables of `problem`.
WeakOrderType with_level_below(const VariableSet& level, const std::vector<std::size_t>& kept,
                               const WeakOrderType& rest, std::size_t n) {
    std::vector<int> rank(n, 0);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        rank[kept[i]] = rest.rank(i) + 1;
    }
    for (auto v : level) {
        rank[v] = 0;
    }
    return WeakOrderType::from_ranks(std::move(rank));
}

std::optional<WeakOrderType> solve_greedy(const TemporalProblem& problem) {
    const std::size_t n = problem.num_variables();
    if (n == 0) {
        return WeakOrderType::from_ranks({});
    }
    AfinOracle oracle(problem);
    std::optional<VariableSet> free;
    for (std::size_t x = 0; x < n && !free; ++x) {
        free = oracle.zero_set({x}, {});
    }
    if (!free) {
        return std::nullopt;
    }
    std::vector<std::size_t> kept;
    auto rest = solve_greedy(remove_level(problem, *free, kept));
    if (!rest) {
        return std::nullopt;
    }
    return with_level_below(*free, kept, *rest, n);
}

std::string problem_key(const TemporalProblem& problem) {
    std::string key = std::to_string(problem.num_variables());
    for (const auto& c : problem.constraints()) {
        key += '|';
        for (auto v : c.scope) {
            key += std::to_string(v) + ',';
        }
        for (const auto& t : c.relation.types()) {
            key += ':';
            for (auto r : t.ranks()) {
                key += static_cast<char>('0' + r);
            }
        }
    }
    return key;
}

// A committed free set need not be the least block of any solution when only
// ll is known to preserve the relations, so a level is kept only once the
// rest has been solved. The minimal free set is tried first.
class LevelSearch {
public:
    std::optional<WeakOrderType> solve(const TemporalProblem& problem) {
        const std::size_t n = problem.num_variables();
        if (n == 0) {
            return WeakOrderType::from_ranks({});
        }
        const std::string key = problem_key(problem);
        if (failed_.count(key) != 0) {
            return std::nullopt;
        }
        if (++nodes_ > kMaxLevelSearchNodes) {
            throw BudgetExceeded("level search exceeded " + std::to_string(kMaxLevelSearchNodes) + " nodes");
        }
        AfinOracle oracle(problem);
        std::optional<VariableSet> seed;
        for (std::size_t x = 0; x < n && !seed; ++x) {
            seed = oracle.zero_set({x}, {});
        }
        if (seed) {
            std::vector<VariableSet> candidates{shrink(oracle, problem, *seed)};
            VariableSet zeros;
            VariableSet positives;
            collect(oracle, n, 0, zeros, positives, candidates);
            std::sort(candidates.begin() + 1, candidates.end(), [](const VariableSet& a, const VariableSet& b) {
                return a.size() != b.size() ? a.size() < b.size() : a < b;
            });
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                if (i > 0 && candidates[i] == candidates[0]) {
                    continue;
                }
                std::vector<std::size_t> kept;
                if (auto rest = solve(remove_level(problem, candidates[i], kept))) {
                    return with_level_below(candidates[i], kept, *rest, n);
                }
            }
        }
        failed_.insert(key);
        return std::nullopt;
    }

private:
    // Every free set, by deciding the variables in index order.
    void collect(const AfinOracle& oracle, std::size_t n, std::size_t v, VariableSet& zeros,
                 VariableSet& positives, std::vector<VariableSet>& out) {
        if (!oracle.zero_set(zeros, positives)) {
            return;
        }
        if (v == n) {
            if (!zeros.empty()) {
                out.push_back(zeros);
            }
            return;
        }
        zeros.push_back(v);
        collect(oracle, n, v + 1, zeros, positives, out);
        zeros.pop_back();
        positives.push_back(v);
        collect(oracle, n, v + 1, zeros, positives, out);
        positives.pop_back();
    }

    std::set<std::string> failed_;
    std::size_t nodes_ = 0;
};

std::optional<WeakOrderType> solve_base(const TemporalProblem& problem, bool search) {
    if (search) {
        LevelSearch s;
        return s.solve(problem);
    }
    return solve_greedy(problem);
}

}  // namespace

std::optional<VariableSet> free_set_containing(const TemporalProblem& problem, std::size_t x) {
    require_variable(problem, x);
    return AfinOracle(problem).zero_set({x}, {});
}

std::optional<VariableSet> free_set_containing(const Instance& instance, const TemporalTemplate& tmpl,
                                               const std::string& x) {
    const auto idx = instance.require_index(x);
    return free_set_containing(TemporalProblem::bind(instance, tmpl), idx);
}

bool is_free_set(const TemporalProblem& problem, const VariableSet& set) {
    for (auto v : set) {
        require_variable(problem, v);
    }
    VariableSet sorted = set;
    std::sort(sorted.begin(), sorted.end());
    return is_free_with(AfinOracle(problem), problem, sorted);
}

VariableSet minimal_free_set(const TemporalProblem& problem, const VariableSet& set) {
    VariableSet sorted = set;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (auto v : sorted) {
        require_variable(problem, v);
    }
    AfinOracle oracle(problem);
    if (!is_free_with(oracle, problem, sorted)) {
        throw NotFree("the given set is not a free set");
    }
    return shrink(oracle, problem, std::move(sorted));
}

std::string to_string(MasterMode mode) {
    return to_string(operation_of(mode));
}

TemporalOp operation_of(MasterMode mode) {
    switch (mode) {
        case MasterMode::PP: return TemporalOp::PP;
        case MasterMode::LL: return TemporalOp::LL;
        case MasterMode::DualPP: return TemporalOp::DualPP;
        case MasterMode::DualLL: return TemporalOp::DualLL;
    }
    return TemporalOp::PP;
}

std::optional<WeakOrderType> solve_master(const TemporalProblem& problem, MasterMode mode) {
    const TemporalOp op = operation_of(mode);
    for (const auto& c : problem.constraints()) {
        if (!preserves_temporal(op, c.relation)) {
            throw PreconditionFailed(to_string(op) + " does not preserve a constraint relation");
        }
    }
    const bool search = mode == MasterMode::LL || mode == MasterMode::DualLL;
    std::optional<WeakOrderType> solution;
    if (is_dual(op)) {
        solution = solve_base(problem.reversed(), search);
        if (solution) {
            solution = solution->reversed();
        }
    } else {
        solution = solve_base(problem, search);
    }
    if (solution && !problem.satisfied_by(*solution)) {
        throw std::logic_error("master algorithm produced a non-solution");
    }
    return solution;
}

std::optional<WeakOrderType> solve_master(const Instance& instance, const TemporalTemplate& tmpl, MasterMode mode) {
    const TemporalOp op = operation_of(mode);
    for (const auto& [name, rel] : tmpl.relations()) {
        if (!preserves_temporal(op, rel)) {
            throw PreconditionFailed(to_string(op) + " does not preserve relation " + name);
        }
    }
    return solve_master(TemporalProblem::bind(instance, tmpl), mode);
}

std::vector<VariableSet> levels_of(const WeakOrderType& solution) {
    return solution.blocks();
}

TemporalVerdict classify_temporal(const TemporalTemplate& tmpl) {
    tmpl.require_order_expansion();
    TemporalVerdict verdict;
    for (auto mode : {MasterMode::PP, MasterMode::DualPP, MasterMode::LL, MasterMode::DualLL}) {
        bool preserved = true;
        for (const auto& [name, rel] : tmpl.relations()) {
            if (auto w = find_violation(operation_of(mode), rel)) {
                verdict.violations.emplace(mode, std::make_pair(name, *w));
                preserved = false;
                break;
            }
        }
        if (preserved && !verdict.mode) {
            verdict.mode = mode;
        }
    }
    verdict.np_complete = !verdict.mode;
    return verdict;
}

namespace {

struct OrderNetwork {
    explicit OrderNetwork(const TemporalProblem& problem) : net(problem.network()) {
        for (const auto& c : problem.constraints()) {
            codes.push_back(c.relation.pair_codes());
        }
        for (const auto& s : codes) {
            ptrs.push_back(&s);
        }
    }
    PairSemantics semantics() const { return PairSemantics({pairs::BaseKind::Order, 0}, ptrs); }

    ConstraintNetwork net;
    std::vector<std::set<pairs::PairCode>> codes;
    std::vector<const std::set<pairs::PairCode>*> ptrs;
};

}  // namespace

std::optional<WeakOrderType> brute_oracle(const TemporalProblem& problem) {
    if (problem.num_variables() > kMaxOracleVariables) {
        throw BudgetExceeded("brute-force oracle is limited to 7 variables");
    }
    OrderNetwork on(problem);
    auto code = first_solution(on.semantics(), on.net);
    if (!code) {
        return std::nullopt;
    }
    return WeakOrderType::from_pair_code(*code, problem.num_variables());
}

std::optional<TemporalConsistency> establish_kl(const TemporalProblem& problem, int k, int l) {
    OrderNetwork on(problem);
    return establish_kl_network(on.semantics(), on.net, k, l);
}

}  // namespace csplab::temporal
