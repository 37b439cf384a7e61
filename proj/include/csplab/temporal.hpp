#pragma once

// Constraint languages over (Q;<): relations are unions of orbits of
// k-tuples, i.e. sets of weak orders on k positions. Operations such as pp,
// ll and lex are evaluated on order/sign patterns only; no rational is ever
// materialized.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "csplab/consistency.hpp"
#include "csplab/pair_code.hpp"
#include "csplab/relstruct.hpp"

namespace csplab::temporal {

/// Orbit of a k-tuple under Aut(Q;<): the dense rank of each position.
class WeakOrderType {
public:
    WeakOrderType() = default;

    /// Throws MalformedPattern unless the ranks are exactly 0..b-1.
    static WeakOrderType from_ranks(std::vector<int> ranks);
    /// Blocks listed from smallest to largest, 0-based positions.
    static WeakOrderType from_blocks(const std::vector<std::vector<std::size_t>>& blocks, std::size_t arity);
    static WeakOrderType from_pair_code(const pairs::PairCode& code, std::size_t arity);

    std::size_t arity() const noexcept { return ranks_.size(); }
    int num_blocks() const noexcept;
    const std::vector<int>& ranks() const noexcept { return ranks_; }
    int rank(std::size_t position) const { return ranks_[position]; }
    std::vector<std::vector<std::size_t>> blocks() const;
    /// Positions of the least block (empty for arity 0).
    std::vector<std::size_t> minimal_positions() const;
    pairs::PairCode pair_code() const;

    WeakOrderType reversed() const;
    /// Type of the sub-tuple at the given positions, in that order.
    WeakOrderType restricted(std::span<const std::size_t> positions) const;

    friend auto operator<=>(const WeakOrderType&, const WeakOrderType&) = default;

private:
    explicit WeakOrderType(std::vector<int> ranks) : ranks_(std::move(ranks)) {}
    std::vector<int> ranks_;
};

/// Orbit under Aut(Q;<,0): a weak order plus the position of 0. Blocks
/// [0, negative_blocks) are negative, block negative_blocks is zero when
/// has_zero, the rest positive.
class SignedWeakOrderType {
public:
    /// Throws MalformedPattern if the cut is out of range.
    SignedWeakOrderType(WeakOrderType order, int negative_blocks, bool has_zero);
    /// Signs in {-1, 0, 1} per position; throws MalformedPattern if they are
    /// not monotone in the order or if unequal positions share sign 0.
    static SignedWeakOrderType from_signs(const WeakOrderType& order, const std::vector<int>& signs);

    const WeakOrderType& order() const noexcept { return order_; }
    int negative_blocks() const noexcept { return negative_blocks_; }
    bool has_zero() const noexcept { return has_zero_; }
    int sign(std::size_t position) const;
    std::vector<int> signs() const;

    /// Pattern of the negated tuple.
    SignedWeakOrderType negated() const;

    friend auto operator<=>(const SignedWeakOrderType&, const SignedWeakOrderType&) = default;

private:
    WeakOrderType order_;
    int negative_blocks_;
    bool has_zero_;
};

class TemporalRelation {
public:
    TemporalRelation() = default;
    /// Throws ArityError if a type has a different arity.
    TemporalRelation(std::size_t arity, std::vector<WeakOrderType> types);

    std::size_t arity() const noexcept { return arity_; }
    const std::vector<WeakOrderType>& types() const noexcept { return types_; }
    bool contains(const WeakOrderType& t) const;
    bool empty() const noexcept { return types_.empty(); }
    TemporalRelation reversed() const;
    std::set<pairs::PairCode> pair_codes() const;

    friend bool operator==(const TemporalRelation&, const TemporalRelation&) = default;

private:
    std::size_t arity_ = 0;
    std::vector<WeakOrderType> types_;  // sorted, unique
};

/// The relation {1<2}.
TemporalRelation order_relation();

class TemporalTemplate {
public:
    void add(const std::string& name, TemporalRelation relation);
    const std::map<std::string, TemporalRelation>& relations() const noexcept { return relations_; }
    /// Throws SignatureMismatch.
    const TemporalRelation& relation(const std::string& name) const;
    /// True if some relation is exactly {1<2}.
    bool is_order_expansion() const;
    /// Throws PreconditionFailed unless is_order_expansion().
    void require_order_expansion() const;

    friend bool operator==(const TemporalTemplate&, const TemporalTemplate&) = default;

private:
    std::map<std::string, TemporalRelation> relations_;
};

enum class TemporalOp { PP, DualPP, LL, DualLL, Lex, DualLex };

std::string to_string(TemporalOp op);
/// Accepts pp, dual-pp, ll, dual-ll, lex, dual-lex (any case). Throws
/// ParameterError.
TemporalOp parse_temporal_op(const std::string& text);
TemporalOp dual_of(TemporalOp op);
bool is_dual(TemporalOp op);

inline constexpr std::size_t kMaxWeakOrderArity = 8;

/// All ordered set partitions of k positions, sorted by rank vector. Throws
/// BudgetExceeded above arity 8.
std::vector<WeakOrderType> enumerate_weak_orders(std::size_t k);

/// Pattern of (op(a_1,b_1), ..., op(a_k,b_k)) where `joint` is the pattern
/// of (a_1..a_k, b_1..b_k). Lex outputs carry no sign information and are
/// reported as all-positive. Throws MalformedPattern for odd arity.
SignedWeakOrderType apply_temporal_op(TemporalOp op, const SignedWeakOrderType& joint);

struct PreservationWitness {
    SignedWeakOrderType joint;
    WeakOrderType first;   // type of a
    WeakOrderType second;  // type of b
    WeakOrderType image;   // not in the relation
};

inline constexpr std::size_t kMaxPreservationArity = 6;

/// A pattern on which `op` maps two tuples of the relation outside it, or
/// std::nullopt if `op` preserves it. Throws BudgetExceeded above arity 6.
std::optional<PreservationWitness> find_violation(TemporalOp op, const TemporalRelation& relation);
bool preserves_temporal(TemporalOp op, const TemporalRelation& relation);

/// Name of the unary relations naming the class of 0 and of the positives.
inline const std::string kZeroName = "#Z";
inline const std::string kPositiveName = "#P";
/// Encoding of the two classes in the two-element template.
inline constexpr int kZero = 0;
inline constexpr int kPositive = 1;

/// Two-element image of a relation: tuples in {Z,P}^k realizable by a
/// non-negative tuple of the relation.
std::set<Tuple> afin_relation(const TemporalRelation& relation);
FiniteStructure build_afin(const TemporalTemplate& tmpl);

// ---------------------------------------------------------------------------
// Instances and solving.

struct TemporalConstraint {
    TemporalRelation relation;
    std::vector<std::size_t> scope;  // pairwise distinct
};

class TemporalProblem {
public:
    TemporalProblem() = default;
    TemporalProblem(std::vector<std::string> variables, std::vector<TemporalConstraint> constraints);

    /// Resolves relation names; constraints with repeated variables are
    /// rewritten over their distinct variables. Throws SignatureMismatch.
    static TemporalProblem bind(const Instance& instance, const TemporalTemplate& tmpl);

    const std::vector<std::string>& variables() const noexcept { return variables_; }
    const std::vector<TemporalConstraint>& constraints() const noexcept { return constraints_; }
    std::size_t num_variables() const noexcept { return variables_.size(); }

    bool satisfied_by(const WeakOrderType& solution) const;
    /// Every relation reversed; solutions reverse accordingly.
    TemporalProblem reversed() const;
    ConstraintNetwork network() const;

private:
    std::vector<std::string> variables_;
    std::vector<TemporalConstraint> constraints_;
};

using VariableSet = std::vector<std::size_t>;  // sorted variable indices

/// The free set containing x produced by solving the pinned two-element
/// instance, or std::nullopt if no free set contains x. Throws
/// UnknownVariable.
std::optional<VariableSet> free_set_containing(const TemporalProblem& problem, std::size_t x);
std::optional<VariableSet> free_set_containing(const Instance& instance, const TemporalTemplate& tmpl,
                                               const std::string& x);

/// True iff S is a free set, decided through the two-element template.
bool is_free_set(const TemporalProblem& problem, const VariableSet& set);

/// Shrinks a free set until no proper subset is free. Throws NotFree.
VariableSet minimal_free_set(const TemporalProblem& problem, const VariableSet& set);

enum class MasterMode { PP, LL, DualPP, DualLL };

std::string to_string(MasterMode mode);
TemporalOp operation_of(MasterMode mode);

inline constexpr std::size_t kMaxLevelSearchNodes = 200000;

/// Solves by repeatedly committing a free set as the lowest level. Returns the
/// solution as a weak order on the variables. pp modes commit the first free
/// set found; ll modes try the minimal free set first and fall back to the
/// other free sets when the rest has no solution. Throws PreconditionFailed
/// if the mode's operation does not preserve every constraint relation and
/// BudgetExceeded when an ll search runs past kMaxLevelSearchNodes.
std::optional<WeakOrderType> solve_master(const TemporalProblem& problem, MasterMode mode);
std::optional<WeakOrderType> solve_master(const Instance& instance, const TemporalTemplate& tmpl, MasterMode mode);

/// Levels of a weak order on variables, lowest first.
std::vector<VariableSet> levels_of(const WeakOrderType& solution);

struct TemporalVerdict {
    bool np_complete = false;
    std::optional<MasterMode> mode;
    /// For every tested operation that fails: the relation and the pattern.
    std::map<MasterMode, std::pair<std::string, PreservationWitness>> violations;
};

/// Tests pp, dual pp, ll, dual ll in that order; the first preserving every
/// relation gives the tractable mode. Throws PreconditionFailed unless the
/// template is an expansion of (Q;<).
TemporalVerdict classify_temporal(const TemporalTemplate& tmpl);

inline constexpr std::size_t kMaxOracleVariables = 7;

/// Exhaustive search over weak orders of the variables. Throws
/// BudgetExceeded above 7 variables.
std::optional<WeakOrderType> brute_oracle(const TemporalProblem& problem);

using TemporalConsistency = ConsistencyState<pairs::PairCode>;
std::optional<TemporalConsistency> establish_kl(const TemporalProblem& problem, int k = 2, int l = 3);

}  // namespace csplab::temporal
