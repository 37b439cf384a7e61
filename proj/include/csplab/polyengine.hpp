#pragma once

// Operations on finite domains, identity systems, polymorphism search, and
// the two-element (Post / Schaefer) toolkit.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "csplab/relstruct.hpp"

namespace csplab {

class OpTable {
public:
    /// `table` is indexed by the mixed-radix code of the argument tuple,
    /// first argument most significant.
    OpTable(int arity, int domain_size, std::vector<int> table);

    template <class F>
    static OpTable from_function(int arity, int domain_size, F&& f) {
        std::vector<int> table(cell_count(arity, domain_size));
        std::vector<int> args(static_cast<std::size_t>(arity));
        for (std::size_t i = 0; i < table.size(); ++i) {
            args = decode_power_element(static_cast<int>(i), domain_size, arity);
            table[i] = f(std::span<const int>(args));
        }
        return OpTable(arity, domain_size, std::move(table));
    }

    static std::size_t cell_count(int arity, int domain_size);

    int arity() const noexcept { return arity_; }
    int domain_size() const noexcept { return domain_size_; }
    const std::vector<int>& table() const noexcept { return table_; }

    int operator()(std::span<const int> args) const;
    int operator()(std::initializer_list<int> args) const {
        return (*this)(std::span<const int>(args.begin(), args.size()));
    }

    friend bool operator==(const OpTable&, const OpTable&) = default;

private:
    int arity_;
    int domain_size_;
    std::vector<int> table_;
};

struct IdentitySystem {
    enum class Kind { Idempotent, Siggers, Cyclic, Wnu, Majority, Minority, Semilattice };

    Kind kind = Kind::Idempotent;
    int param = 0;  // n for Cyclic(n), m for Wnu(m)

    static IdentitySystem idempotent() { return {Kind::Idempotent, 0}; }
    static IdentitySystem siggers() { return {Kind::Siggers, 0}; }
    static IdentitySystem cyclic(int n);
    static IdentitySystem wnu(int m);
    static IdentitySystem majority() { return {Kind::Majority, 0}; }
    static IdentitySystem minority() { return {Kind::Minority, 0}; }
    static IdentitySystem semilattice() { return {Kind::Semilattice, 0}; }

    /// Arity forced by the identities, or 0 if any arity is allowed.
    int required_arity() const;
    std::string name() const;

    friend bool operator==(const IdentitySystem&, const IdentitySystem&) = default;
};

/// Parses "siggers", "cyclic(3)", "wnu(4)", "majority", ... Throws
/// ParameterError.
IdentitySystem parse_identity_system(const std::string& text);

/// Direct check of the identities on every argument tuple. Every system
/// other than Idempotent is checked together with idempotency.
bool satisfies_identities(const OpTable& op, const IdentitySystem& identities);

/// True iff the componentwise image of every arity-many tuples of each
/// relation lies in that relation. Throws DomainMismatch.
bool preserves_op(const OpTable& op, const FiniteStructure& target);

enum class BooleanClass { HornAnd, DualHornOr, Majority2Sat, MinorityAffine, Constant0, Constant1, Trivial };

std::string to_string(BooleanClass cls);

/// The fixed probe operation on {0,1} for a class (binary and/or, ternary
/// majority/minority, unary constants). Throws ClassMismatch for Trivial.
OpTable boolean_table(BooleanClass cls);

/// Members of {and, or, majority, minority, const-0, const-1} preserving a
/// two-element template; {Trivial} if none does. Throws DomainMismatch.
std::set<BooleanClass> boolean_classify(const FiniteStructure& target);

struct PolySearchOptions {
    /// On {0,1}, majority / minority / semilattice are answered from the
    /// fixed probe tables.
    bool boolean_shortcuts = true;
    /// Enumerate every table instead of backtracking with pruning.
    bool exhaustive = false;
    std::size_t max_checks = 4'000'000;
};

/// An operation of the given arity preserving every relation and satisfying
/// the identities, or std::nullopt if none exists. Throws BudgetExceeded for
/// domains above 4, tables above 4096 cells or too many preservation checks,
/// and ParameterError when the arity contradicts the identity system.
std::optional<OpTable> find_polymorphism(const FiniteStructure& target, const IdentitySystem& identities, int arity,
                                         const PolySearchOptions& options = {});

/// Polynomial-time solving of an instance over a two-element template by the
/// algorithm matching a class that preserves it. Throws ClassMismatch if the
/// class does not preserve the template.
std::optional<Assignment> schaefer_solve(const Instance& instance, const FiniteStructure& target, BooleanClass cls);

/// Preferred class for solving: and, or, majority, minority, constants.
std::optional<BooleanClass> solving_class(const std::set<BooleanClass>& classes);

}  // namespace csplab
