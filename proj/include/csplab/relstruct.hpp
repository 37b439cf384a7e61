#pragma once

// Finite relational structures, instances over a named signature, and
// exhaustive homomorphism search.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace csplab {

using Tuple = std::vector<int>;

struct Relation {
    std::size_t arity = 0;
    std::set<Tuple> tuples;

    bool contains(const Tuple& t) const { return tuples.count(t) != 0; }

    friend bool operator==(const Relation&, const Relation&) = default;
};

class FiniteStructure {
public:
    explicit FiniteStructure(int domain_size);

    /// Adds or replaces a relation. Throws ArityError / DomainMismatch on
    /// tuples of the wrong length or with out-of-range entries.
    void add_relation(const std::string& name, std::size_t arity, std::set<Tuple> tuples);

    int domain_size() const noexcept { return domain_size_; }
    const std::map<std::string, Relation>& relations() const noexcept { return relations_; }
    bool has_relation(const std::string& name) const { return relations_.count(name) != 0; }
    /// Throws SignatureMismatch for unknown names.
    const Relation& relation(const std::string& name) const;

    friend bool operator==(const FiniteStructure&, const FiniteStructure&) = default;

private:
    int domain_size_;
    std::map<std::string, Relation> relations_;
};

struct Constraint {
    std::string relation;
    std::vector<std::size_t> scope;  // indices into Instance::variables()

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

class Instance {
public:
    Instance() = default;
    explicit Instance(std::vector<std::string> variables);

    /// Returns the index of the variable, adding it when new.
    std::size_t add_variable(const std::string& name);
    /// Throws UnknownVariable if an argument is not declared.
    void add_constraint(const std::string& relation, const std::vector<std::string>& args);
    void add_constraint(const std::string& relation, std::vector<std::size_t> scope);

    const std::vector<std::string>& variables() const noexcept { return variables_; }
    const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    std::size_t num_variables() const noexcept { return variables_.size(); }
    std::optional<std::size_t> index_of(const std::string& name) const;
    /// Throws UnknownVariable.
    std::size_t require_index(const std::string& name) const;

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    std::vector<std::string> variables_;
    std::vector<Constraint> constraints_;
};

/// Values indexed by variable position in the instance.
using Assignment = std::vector<int>;

/// Throws SignatureMismatch if a constraint names an unknown relation or
/// has the wrong arity.
void check_signature(const Instance& instance, const FiniteStructure& target);

bool satisfies(const Instance& instance, const FiniteStructure& target, const Assignment& assignment);

/// Backtracking with forward checking. Variables are tried in declaration
/// order, values ascending; the first solution found is returned.
std::optional<Assignment> hom_search(const Instance& instance, const FiniteStructure& target);

/// Mixed-radix encoding of an n-tuple of domain elements, first coordinate
/// most significant.
int encode_power_element(const std::vector<int>& coords, int domain_size);
std::vector<int> decode_power_element(int code, int domain_size, int n);

inline constexpr std::size_t kDefaultPowerBudget = 1u << 16;

/// Direct power A^n. Throws BudgetExceeded if domain_size^n exceeds budget.
FiniteStructure power_structure(const FiniteStructure& base, int n,
                                std::size_t budget = kDefaultPowerBudget);

/// The canonical instance of a structure: one variable per element, one
/// constraint per tuple. Homomorphisms from it are exactly homomorphisms
/// of the structure.
Instance structure_as_instance(const FiniteStructure& structure);

}  // namespace csplab
