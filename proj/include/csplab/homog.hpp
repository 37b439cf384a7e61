#pragma once

// First-order reducts of the random tournament and the random graph,
// presented as sets of complete types, and their classification through
// canonical behaviors on pair labels.

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

namespace csplab::homog {

using pairs::BaseKind;
using pairs::BaseSpec;
using pairs::Label;
using pairs::PairCode;

/// Complete type of a k-tuple: a valid pair code on k positions. Tournament
/// labels are relative to ascending position order.
struct LabeledType {
    std::size_t arity = 0;
    PairCode code;

    /// Type of (t_{perm[0]}, ..., t_{perm[m-1]}).
    LabeledType permuted(std::span<const std::size_t> perm, const BaseSpec& base) const;
    bool injective() const;
    /// Blocks of equal positions, ordered by least position.
    std::vector<std::vector<std::size_t>> blocks() const;

    friend auto operator<=>(const LabeledType&, const LabeledType&) = default;
};

class TypeSetRelation {
public:
    TypeSetRelation() = default;
    /// Throws ArityError on arity disagreement and MalformedPattern on
    /// invalid codes (including forbidden cliques for K_n-free bases).
    TypeSetRelation(std::size_t arity, BaseSpec base, std::set<LabeledType> types);

    std::size_t arity() const noexcept { return arity_; }
    const BaseSpec& base() const noexcept { return base_; }
    const std::set<LabeledType>& types() const noexcept { return types_; }
    bool contains(const LabeledType& t) const { return types_.count(t) != 0; }
    std::set<PairCode> codes() const;

    friend bool operator==(const TypeSetRelation&, const TypeSetRelation&) = default;

private:
    std::size_t arity_ = 0;
    BaseSpec base_;
    std::set<LabeledType> types_;
};

struct HomTemplate {
    BaseSpec base;
    std::map<std::string, TypeSetRelation> relations;

    /// Throws DomainMismatch if the relation has another base.
    void add(const std::string& name, TypeSetRelation relation);
    /// Throws SignatureMismatch.
    const TypeSetRelation& relation(const std::string& name) const;

    friend bool operator==(const HomTemplate&, const HomTemplate&) = default;
};

inline constexpr std::size_t kMaxTypeArity = 5;

/// All complete types of arity k, sorted. Throws BudgetExceeded above 5.
std::vector<LabeledType> enumerate_types(std::size_t k, BaseSpec base, bool injective_only = false);

/// Operation on pair labels, table indexed in base 3 with the first input
/// most significant.
class PairBehavior {
public:
    PairBehavior() = default;
    /// Throws ArityMismatch if the table does not have 3^arity cells.
    PairBehavior(std::size_t arity, bool oriented, std::vector<Label> table);

    std::size_t arity() const noexcept { return arity_; }
    bool oriented() const noexcept { return oriented_; }
    const std::vector<Label>& table() const noexcept { return table_; }
    Label operator()(std::span<const Label> inputs) const;
    Label operator()(std::initializer_list<Label> inputs) const {
        return (*this)(std::span<const Label>(inputs.begin(), inputs.size()));
    }

    /// Output EQ exactly on the all-EQ input.
    bool injective() const;
    bool flip_equivariant() const;

    friend bool operator==(const PairBehavior&, const PairBehavior&) = default;

private:
    std::size_t arity_ = 0;
    bool oriented_ = true;
    std::vector<Label> table_;
};

std::size_t cell_of(std::span<const Label> inputs);
std::vector<Label> inputs_of(std::size_t cell, std::size_t arity);

/// Common refinement of the inputs, labelled pairwise by the behavior.
/// Throws ArityMismatch unless there are B.arity() types of equal arity.
LabeledType behavior_image(const PairBehavior& behavior, std::span<const LabeledType> types);
bool behavior_preserves(const PairBehavior& behavior, const TypeSetRelation& relation);

enum class Shape { TernaryMajority, TernaryMinority, BinarySemilatticeE, BinarySemilatticeN };
std::string to_string(Shape shape);

struct BehaviorSearch {
    std::optional<PairBehavior> behavior;
    std::size_t free_cells = 0;
    /// Set when a negative answer was confirmed by enumerating every table.
    bool exhaustive_certificate = false;
};

inline constexpr std::size_t kMaxCertifiedCells = 20;

/// Searches an injective behavior that acts as `shape` on the two non-EQ
/// labels and preserves every relation. Throws ShapeUnsupported for
/// semilattice shapes over the tournament and UnsupportedBase for K_n-free
/// bases.
BehaviorSearch search_behavior(const HomTemplate& tmpl, Shape shape);

/// Binary behavior: first projection unless the first label is EQ.
PairBehavior g2_behavior(bool oriented = true);

enum class VerdictKind { NpComplete, PBoundedWidth, PNotBoundedWidth, PConstant, EqualityP, EqualityNpc };
std::string to_string(VerdictKind kind);

struct Verdict {
    VerdictKind kind = VerdictKind::NpComplete;
    std::optional<Shape> shape;
    std::optional<PairBehavior> witness;
    /// Every search performed, in cascade order.
    std::vector<std::pair<Shape, BehaviorSearch>> searches;
    /// Equality reducts carry no width verdict.
    bool width_undetermined = false;
};

/// Throws UnsupportedBase for K_n-free and order bases.
Verdict classify_reduct(const HomTemplate& tmpl);

inline constexpr std::size_t kMaxBruteVariables = 6;

/// The pair code of a solution on the instance variables, found by
/// exhaustive search, or std::nullopt. Throws BudgetExceeded above 6
/// variables and SignatureMismatch on unknown relations.
std::optional<PairCode> solve_instance_brute(const Instance& instance, const HomTemplate& tmpl);

using HomConsistency = ConsistencyState<PairCode>;
std::optional<HomConsistency> establish_kl(const Instance& instance, const HomTemplate& tmpl, int k = 2, int l = 3);

}  // namespace csplab::homog
