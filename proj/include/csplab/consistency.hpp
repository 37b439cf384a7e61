#pragma once

// (k,l)-local consistency over any structure whose partial solutions on a
// set of variables form a finite set of "local codes": value tuples for
// finite templates, complete types for the homogeneous bases.
//
// The state keeps, for every set S of at most k variables, the local codes
// on S that survived. A code on S survives as long as, for every set L of l
// variables containing S, it is the restriction of a local code on L that
// satisfies all constraints inside L and whose restrictions to every stored
// set inside L are still present.

#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "csplab/errors.hpp"
#include "csplab/pair_code.hpp"
#include "csplab/relstruct.hpp"

namespace csplab {

/// Variables 0..num_variables-1 and constraint scopes; what each constraint
/// allows is known only to the semantics.
struct ConstraintNetwork {
    std::size_t num_variables = 0;
    std::vector<std::vector<std::size_t>> scopes;
};

template <class S>
concept LocalSemantics = requires(const S& s, const typename S::Code& c, std::size_t m,
                                  std::span<const std::size_t> pos, std::size_t cid,
                                  std::vector<typename S::Code>& out) {
    s.extend(c, m, out);
    { s.project(c, pos) } -> std::convertible_to<typename S::Code>;
    { s.allows(cid, c, pos) } -> std::convertible_to<bool>;
};

using VarMask = std::uint32_t;
inline constexpr std::size_t kMaxNetworkVariables = 32;

template <class Code>
struct ConsistencyState {
    int k = 0;
    int l = 0;
    /// Keyed by variable bitmask; codes are over the variables in ascending
    /// order.
    std::map<VarMask, std::set<Code>> local;

    std::size_t total_codes() const {
        std::size_t n = 0;
        for (const auto& [mask, codes] : local) {
            n += codes.size();
        }
        return n;
    }
};

namespace detail {

inline std::vector<std::size_t> mask_vars(VarMask mask) {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; mask != 0; ++v, mask >>= 1) {
        if (mask & 1u) {
            out.push_back(v);
        }
    }
    return out;
}

/// Masks with exactly `size` bits among the low `n` bits, ascending.
inline std::vector<VarMask> masks_of_size(std::size_t n, std::size_t size) {
    std::vector<VarMask> out;
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t m = 0; m < limit; ++m) {
        if (static_cast<std::size_t>(std::popcount(m)) == size) {
            out.push_back(static_cast<VarMask>(m));
        }
    }
    return out;
}

template <LocalSemantics S>
class LocalEnumerator {
public:
    using Code = typename S::Code;

    LocalEnumerator(const S& sem, const ConstraintNetwork& net) : sem_(sem), net_(net) {
        if (net.num_variables > kMaxNetworkVariables) {
            throw BudgetExceeded("network has more than 32 variables");
        }
        for (const auto& scope : net.scopes) {
            VarMask m = 0;
            std::size_t last = 0;
            for (auto v : scope) {
                m |= VarMask{1} << v;
                last = std::max(last, v);
            }
            cmask_.push_back(m);
            clast_.push_back(last);
        }
    }

    /// Calls `visit(code)` for each local code on `vars` (ascending) that
    /// satisfies all constraints inside `vars` and, when `state` is given,
    /// whose restriction to every stored set of at most k variables is
    /// present. Stops early when `visit` returns true; returns whether it
    /// stopped early.
    template <class Visit>
    bool run(const std::vector<std::size_t>& vars, const ConsistencyState<Code>* state, Visit&& visit) const {
        const std::size_t m = vars.size();
        std::vector<std::size_t> pos_of(net_.num_variables, 0);
        VarMask all = 0;
        for (std::size_t p = 0; p < m; ++p) {
            pos_of[vars[p]] = p;
            all |= VarMask{1} << vars[p];
        }
        // Per depth: the constraints to check and the stored subsets to test.
        std::vector<std::vector<std::pair<std::size_t, std::vector<std::size_t>>>> checks(m);
        for (std::size_t c = 0; c < cmask_.size(); ++c) {
            if ((cmask_[c] & ~all) != 0) {
                continue;
            }
            std::vector<std::size_t> positions;
            for (auto v : net_.scopes[c]) {
                positions.push_back(pos_of[v]);
            }
            checks[pos_of[clast_[c]]].emplace_back(c, std::move(positions));
        }
        std::vector<std::vector<std::pair<VarMask, std::vector<std::size_t>>>> subsets(m);
        if (state != nullptr) {
            VarMask prefix = 0;
            for (std::size_t p = 0; p < m; ++p) {
                const VarMask bit = VarMask{1} << vars[p];
                // Enumerate submasks of prefix, add the current bit.
                VarMask sub = prefix;
                while (true) {
                    const VarMask t = sub | bit;
                    if (std::popcount(t) <= state->k) {
                        std::vector<std::size_t> positions;
                        for (auto v : mask_vars(t)) {
                            positions.push_back(pos_of[v]);
                        }
                        subsets[p].emplace_back(t, std::move(positions));
                    }
                    if (sub == 0) {
                        break;
                    }
                    sub = (sub - 1) & prefix;
                }
                prefix |= bit;
            }
        }
        Code start{};
        return descend(start, 0, m, checks, subsets, state, visit);
    }

private:
    template <class Visit>
    bool descend(const Code& code, std::size_t depth, std::size_t m,
                 const std::vector<std::vector<std::pair<std::size_t, std::vector<std::size_t>>>>& checks,
                 const std::vector<std::vector<std::pair<VarMask, std::vector<std::size_t>>>>& subsets,
                 const ConsistencyState<Code>* state, Visit& visit) const {
        if (depth == m) {
            return visit(code);
        }
        std::vector<Code> next;
        sem_.extend(code, depth, next);
        for (const auto& ext : next) {
            bool ok = true;
            for (const auto& [c, positions] : checks[depth]) {
                if (!sem_.allows(c, ext, positions)) {
                    ok = false;
                    break;
                }
            }
            if (ok && state != nullptr) {
                for (const auto& [t, positions] : subsets[depth]) {
                    auto it = state->local.find(t);
                    if (it != state->local.end() && it->second.count(sem_.project(ext, positions)) == 0) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok && descend(ext, depth + 1, m, checks, subsets, state, visit)) {
                return true;
            }
        }
        return false;
    }

    const S& sem_;
    const ConstraintNetwork& net_;
    std::vector<VarMask> cmask_;
    std::vector<std::size_t> clast_;
};

}  // namespace detail

/// First complete solution in the semantics' extension order, by
/// exhaustive backtracking over variables in index order.
template <LocalSemantics S>
std::optional<typename S::Code> first_solution(const S& sem, const ConstraintNetwork& net) {
    detail::LocalEnumerator<S> en(sem, net);
    std::vector<std::size_t> vars(net.num_variables);
    for (std::size_t v = 0; v < vars.size(); ++v) {
        vars[v] = v;
    }
    std::optional<typename S::Code> found;
    en.run(vars, nullptr, [&](const typename S::Code& c) {
        found = c;
        return true;
    });
    return found;
}

/// Establishes (k,l)-consistency. Returns std::nullopt when some set of at
/// most k variables loses all its local codes (the instance is refuted).
/// l is clamped to the number of variables; throws ParameterError unless
/// 1 <= k <= l. Constraints over more than l distinct variables are never
/// inside a window and do not participate.
template <LocalSemantics S>
std::optional<ConsistencyState<typename S::Code>> establish_kl_network(const S& sem, const ConstraintNetwork& net,
                                                                        int k, int l) {
    using Code = typename S::Code;
    if (k < 1 || l < 1 || k > l) {
        throw ParameterError("(k,l)-consistency needs 1 <= k <= l, got (" + std::to_string(k) + "," +
                             std::to_string(l) + ")");
    }
    ConsistencyState<Code> state;
    state.k = k;
    state.l = l;
    const std::size_t n = net.num_variables;
    if (n == 0) {
        return state;
    }
    const std::size_t window = std::min<std::size_t>(static_cast<std::size_t>(l), n);
    const std::size_t small = std::min<std::size_t>(static_cast<std::size_t>(k), window);

    detail::LocalEnumerator<S> en(sem, net);
    for (std::size_t size = 1; size <= small; ++size) {
        for (auto mask : detail::masks_of_size(n, size)) {
            auto& codes = state.local[mask];
            en.run(detail::mask_vars(mask), nullptr, [&](const Code& c) {
                codes.insert(c);
                return false;
            });
            if (codes.empty()) {
                return std::nullopt;
            }
        }
    }

    const auto windows = detail::masks_of_size(n, window);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto lmask : windows) {
            const auto vars = detail::mask_vars(lmask);
            // Stored subsets inside this window with their positions.
            std::vector<std::pair<VarMask, std::vector<std::size_t>>> inner;
            for (const auto& [smask, codes] : state.local) {
                if ((smask & ~lmask) == 0) {
                    std::vector<std::size_t> positions;
                    for (std::size_t p = 0; p < vars.size(); ++p) {
                        if (smask & (VarMask{1} << vars[p])) {
                            positions.push_back(p);
                        }
                    }
                    inner.emplace_back(smask, std::move(positions));
                }
            }
            std::vector<std::set<Code>> supported(inner.size());
            en.run(vars, &state, [&](const Code& c) {
                for (std::size_t i = 0; i < inner.size(); ++i) {
                    supported[i].insert(sem.project(c, inner[i].second));
                }
                return false;
            });
            for (std::size_t i = 0; i < inner.size(); ++i) {
                auto& codes = state.local[inner[i].first];
                const auto before = codes.size();
                std::erase_if(codes, [&](const Code& c) { return supported[i].count(c) == 0; });
                if (codes.empty()) {
                    return std::nullopt;
                }
                changed = changed || codes.size() != before;
            }
        }
    }
    return state;
}

/// Local semantics of a finite template: codes are value tuples.
class FiniteSemantics {
public:
    using Code = std::vector<int>;

    FiniteSemantics(const Instance& instance, const FiniteStructure& target);

    void extend(const Code& c, std::size_t m, std::vector<Code>& out) const;
    Code project(const Code& c, std::span<const std::size_t> positions) const;
    bool allows(std::size_t constraint, const Code& c, std::span<const std::size_t> positions) const;

private:
    int domain_size_;
    std::vector<const Relation*> relations_;
};

/// Local semantics over a homogeneous base with pairwise labels: codes are
/// complete types; each constraint is a set of admissible types on its scope.
class PairSemantics {
public:
    using Code = pairs::PairCode;

    PairSemantics(pairs::BaseSpec base, std::vector<const std::set<pairs::PairCode>*> constraint_types)
        : base_(base), types_(std::move(constraint_types)) {}

    void extend(const Code& c, std::size_t m, std::vector<Code>& out) const { pairs::extensions(c, m, base_, out); }
    Code project(const Code& c, std::span<const std::size_t> positions) const {
        return pairs::project(c, positions, base_.oriented());
    }
    bool allows(std::size_t constraint, const Code& c, std::span<const std::size_t> positions) const {
        return types_[constraint]->count(project(c, positions)) != 0;
    }

private:
    pairs::BaseSpec base_;
    std::vector<const std::set<pairs::PairCode>*> types_;
};

using FiniteConsistency = ConsistencyState<std::vector<int>>;

ConstraintNetwork network_of(const Instance& instance);

/// (k,l)-consistency of an instance over a finite template.
std::optional<FiniteConsistency> establish_kl(const Instance& instance, const FiniteStructure& target, int k = 2,
                                              int l = 3);

}  // namespace csplab
