#pragma once

// Pairwise-label encoding of complete quantifier-free types over bases whose
// orbits of tuples are determined by equalities and one binary label per
// pair: the rational order, the random tournament, the random graph and the
// universal K_n-free graph.
//
// A code on m positions stores one label per pair i<j, in colex order
// (0,1), (0,2), (1,2), (0,3), ... so that extending by one position appends
// m labels.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace csplab::pairs {

using Label = std::uint8_t;

inline constexpr Label kEq = 0;
/// Order: value_i < value_j. Tournament: arc i->j. Graph: edge.
inline constexpr Label kFwd = 1;
/// Order: value_i > value_j. Tournament: arc j->i. Graph: non-edge.
inline constexpr Label kBwd = 2;

using PairCode = std::vector<Label>;

enum class BaseKind { Order, Tournament, Graph, KFree };

struct BaseSpec {
    BaseKind kind = BaseKind::Order;
    int clique = 0;  // forbidden clique size for KFree

    bool oriented() const noexcept { return kind == BaseKind::Order || kind == BaseKind::Tournament; }
    friend bool operator==(const BaseSpec&, const BaseSpec&) = default;
    friend auto operator<=>(const BaseSpec&, const BaseSpec&) = default;
};

constexpr std::size_t pair_index(std::size_t i, std::size_t j) noexcept { return j * (j - 1) / 2 + i; }
constexpr std::size_t num_pairs(std::size_t m) noexcept { return m * (m - 1) / 2; }

constexpr Label flip(Label l, bool oriented) noexcept {
    if (!oriented || l == kEq) {
        return l;
    }
    return l == kFwd ? kBwd : kFwd;
}

/// Label of the ordered pair (i, j) for any i, j; kEq when i == j.
Label label_between(const PairCode& code, std::size_t i, std::size_t j, bool oriented) noexcept;

/// Code on positions.size() positions whose pair (a, b) is the pair
/// (positions[a], positions[b]) of `code`. Repeated positions become kEq.
PairCode project(const PairCode& code, std::span<const std::size_t> positions, bool oriented);

/// Least position equal to each position.
std::vector<std::size_t> representatives(const PairCode& code, std::size_t m);

/// Every valid code on m+1 positions whose restriction to the first m is
/// `code`. Order: merges with existing blocks first (by representative),
/// then new blocks.
void extensions(const PairCode& code, std::size_t m, BaseSpec base, std::vector<PairCode>& out);

/// All valid codes on m positions, built by repeated extension.
std::vector<PairCode> enumerate_codes(std::size_t m, BaseSpec base);

/// Structural validity: equality is an equivalence, labels agree across
/// blocks, order labels are transitive, K_n-freeness.
bool is_valid(const PairCode& code, std::size_t m, BaseSpec base);

}  // namespace csplab::pairs
