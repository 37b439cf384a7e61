#include "csplab/relstruct.hpp"

#include <algorithm>

#include "csplab/errors.hpp"

namespace csplab {

FiniteStructure::FiniteStructure(int domain_size) : domain_size_(domain_size) {
    if (domain_size < 1) {
        throw DomainMismatch("domain size must be positive");
    }
}

void FiniteStructure::add_relation(const std::string& name, std::size_t arity, std::set<Tuple> tuples) {
    for (const auto& t : tuples) {
        if (t.size() != arity) {
            throw ArityError("relation " + name + ": tuple length differs from arity " + std::to_string(arity));
        }
        for (int v : t) {
            if (v < 0 || v >= domain_size_) {
                throw DomainMismatch("relation " + name + ": entry " + std::to_string(v) + " out of domain");
            }
        }
    }
    relations_[name] = Relation{arity, std::move(tuples)};
}

const Relation& FiniteStructure::relation(const std::string& name) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) {
        throw SignatureMismatch("unknown relation " + name);
    }
    return it->second;
}

Instance::Instance(std::vector<std::string> variables) {
    for (auto& v : variables) {
        if (index_of(v)) {
            throw UnknownVariable("duplicate variable " + v);
        }
        variables_.push_back(std::move(v));
    }
}

std::size_t Instance::add_variable(const std::string& name) {
    if (auto idx = index_of(name)) {
        return *idx;
    }
    variables_.push_back(name);
    return variables_.size() - 1;
}

std::optional<std::size_t> Instance::index_of(const std::string& name) const {
    auto it = std::find(variables_.begin(), variables_.end(), name);
    if (it == variables_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - variables_.begin());
}

std::size_t Instance::require_index(const std::string& name) const {
    auto idx = index_of(name);
    if (!idx) {
        throw UnknownVariable("unknown variable " + name);
    }
    return *idx;
}

void Instance::add_constraint(const std::string& relation, const std::vector<std::string>& args) {
    std::vector<std::size_t> scope;
    scope.reserve(args.size());
    for (const auto& a : args) {
        scope.push_back(require_index(a));
    }
    constraints_.push_back(Constraint{relation, std::move(scope)});
}

void Instance::add_constraint(const std::string& relation, std::vector<std::size_t> scope) {
    for (auto v : scope) {
        if (v >= variables_.size()) {
            throw UnknownVariable("variable index " + std::to_string(v) + " out of range");
        }
    }
    constraints_.push_back(Constraint{relation, std::move(scope)});
}

void check_signature(const Instance& instance, const FiniteStructure& target) {
    for (const auto& c : instance.constraints()) {
        const Relation& rel = target.relation(c.relation);
        if (rel.arity != c.scope.size()) {
            throw SignatureMismatch("constraint on " + c.relation + " has " + std::to_string(c.scope.size()) +
                                    " arguments, relation arity is " + std::to_string(rel.arity));
        }
    }
}

bool satisfies(const Instance& instance, const FiniteStructure& target, const Assignment& assignment) {
    if (assignment.size() != instance.num_variables()) {
        return false;
    }
    Tuple t;
    for (const auto& c : instance.constraints()) {
        t.clear();
        for (auto v : c.scope) {
            t.push_back(assignment[v]);
        }
        if (!target.relation(c.relation).contains(t)) {
            return false;
        }
    }
    return true;
}

namespace {

class HomSearch {
public:
    HomSearch(const Instance& instance, const FiniteStructure& target)
        : instance_(instance), target_(target), n_(instance.num_variables()),
          domains_(n_, std::vector<char>(static_cast<std::size_t>(target.domain_size()), 1)),
          value_(n_, -1), watch_(n_) {
        for (std::size_t ci = 0; ci < instance.constraints().size(); ++ci) {
            const auto& c = instance.constraints()[ci];
            relations_.push_back(&target.relation(c.relation));
            std::vector<std::size_t> seen;
            for (auto v : c.scope) {
                if (std::find(seen.begin(), seen.end(), v) == seen.end()) {
                    watch_[v].push_back(ci);
                    seen.push_back(v);
                }
            }
        }
    }

    std::optional<Assignment> run() {
        // Nullary-free constraints with empty relations fail immediately.
        for (std::size_t ci = 0; ci < relations_.size(); ++ci) {
            if (relations_[ci]->tuples.empty()) {
                return std::nullopt;
            }
        }
        if (!propagate_initial()) {
            return std::nullopt;
        }
        if (assign(0)) {
            return value_;
        }
        return std::nullopt;
    }

private:
    struct Removal {
        std::size_t var;
        int value;
    };

    // Unary filtering for constraints over a single distinct variable.
    bool propagate_initial() {
        for (std::size_t ci = 0; ci < relations_.size(); ++ci) {
            const auto& scope = instance_.constraints()[ci].scope;
            if (scope.empty()) {
                continue;
            }
            bool single = std::all_of(scope.begin(), scope.end(), [&](auto v) { return v == scope[0]; });
            if (!single) {
                continue;
            }
            auto v = scope[0];
            bool any = false;
            for (int a = 0; a < target_.domain_size(); ++a) {
                if (!domains_[v][a]) {
                    continue;
                }
                Tuple t(scope.size(), a);
                if (!relations_[ci]->contains(t)) {
                    domains_[v][a] = 0;
                } else {
                    any = true;
                }
            }
            if (!any) {
                return false;
            }
        }
        return true;
    }

    bool assign(std::size_t var) {
        if (var == n_) {
            return true;
        }
        for (int a = 0; a < target_.domain_size(); ++a) {
            if (!domains_[var][a]) {
                continue;
            }
            value_[var] = a;
            std::size_t mark = trail_.size();
            if (forward_check(var) && assign(var + 1)) {
                return true;
            }
            undo(mark);
            value_[var] = -1;
        }
        return false;
    }

    // After assigning `var`, check fully-assigned constraints and filter the
    // remaining variable of constraints with exactly one unassigned variable.
    bool forward_check(std::size_t var) {
        Tuple t;
        for (auto ci : watch_[var]) {
            const auto& scope = instance_.constraints()[ci].scope;
            const Relation& rel = *relations_[ci];
            std::optional<std::size_t> open;
            bool several_open = false;
            for (auto v : scope) {
                if (value_[v] < 0) {
                    if (open && *open != v) {
                        several_open = true;
                        break;
                    }
                    open = v;
                }
            }
            if (several_open) {
                continue;
            }
            t.assign(scope.size(), 0);
            if (!open) {
                for (std::size_t i = 0; i < scope.size(); ++i) {
                    t[i] = value_[scope[i]];
                }
                if (!rel.contains(t)) {
                    return false;
                }
                continue;
            }
            bool any = false;
            for (int a = 0; a < target_.domain_size(); ++a) {
                if (!domains_[*open][a]) {
                    continue;
                }
                for (std::size_t i = 0; i < scope.size(); ++i) {
                    t[i] = scope[i] == *open ? a : value_[scope[i]];
                }
                if (rel.contains(t)) {
                    any = true;
                } else {
                    domains_[*open][a] = 0;
                    trail_.push_back({*open, a});
                }
            }
            if (!any) {
                return false;
            }
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto r = trail_.back();
            trail_.pop_back();
            domains_[r.var][r.value] = 1;
        }
    }

    const Instance& instance_;
    const FiniteStructure& target_;
    std::size_t n_;
    std::vector<std::vector<char>> domains_;
    Assignment value_;
    std::vector<std::vector<std::size_t>> watch_;
    std::vector<const Relation*> relations_;
    std::vector<Removal> trail_;
};

std::size_t checked_power(std::size_t base, int n, std::size_t budget) {
    std::size_t size = 1;
    for (int i = 0; i < n; ++i) {
        size *= base;
        if (size > budget) {
            throw BudgetExceeded("power structure of size " + std::to_string(base) + "^" + std::to_string(n) +
                                 " exceeds budget " + std::to_string(budget));
        }
    }
    return size;
}

}  // namespace

std::optional<Assignment> hom_search(const Instance& instance, const FiniteStructure& target) {
    check_signature(instance, target);
    return HomSearch(instance, target).run();
}

int encode_power_element(const std::vector<int>& coords, int domain_size) {
    int code = 0;
    for (int c : coords) {
        code = code * domain_size + c;
    }
    return code;
}

std::vector<int> decode_power_element(int code, int domain_size, int n) {
    std::vector<int> coords(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        coords[static_cast<std::size_t>(i)] = code % domain_size;
        code /= domain_size;
    }
    return coords;
}

FiniteStructure power_structure(const FiniteStructure& base, int n, std::size_t budget) {
    if (n < 1) {
        throw ParameterError("power exponent must be at least 1");
    }
    const int d = base.domain_size();
    const auto size = checked_power(static_cast<std::size_t>(d), n, budget);
    FiniteStructure out(static_cast<int>(size));
    for (const auto& [name, rel] : base.relations()) {
        std::vector<Tuple> tuples(rel.tuples.begin(), rel.tuples.end());
        std::set<Tuple> product;
        if (!tuples.empty()) {
            checked_power(tuples.size(), n, budget * 16);
            // choice[i] selects the tuple used in power coordinate i.
            std::vector<std::size_t> choice(static_cast<std::size_t>(n), 0);
            std::vector<int> coords(static_cast<std::size_t>(n));
            while (true) {
                Tuple t(rel.arity);
                for (std::size_t pos = 0; pos < rel.arity; ++pos) {
                    for (std::size_t i = 0; i < choice.size(); ++i) {
                        coords[i] = tuples[choice[i]][pos];
                    }
                    t[pos] = encode_power_element(coords, d);
                }
                product.insert(std::move(t));
                std::size_t i = choice.size();
                while (i > 0 && ++choice[i - 1] == tuples.size()) {
                    choice[--i] = 0;
                }
                if (i == 0) {
                    break;
                }
            }
        }
        out.add_relation(name, rel.arity, std::move(product));
    }
    return out;
}

Instance structure_as_instance(const FiniteStructure& structure) {
    Instance inst;
    for (int a = 0; a < structure.domain_size(); ++a) {
        inst.add_variable("e" + std::to_string(a));
    }
    for (const auto& [name, rel] : structure.relations()) {
        for (const auto& t : rel.tuples) {
            inst.add_constraint(name, std::vector<std::size_t>(t.begin(), t.end()));
        }
    }
    return inst;
}

}  // namespace csplab
