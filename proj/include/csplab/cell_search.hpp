#pragma once

// Backtracking over the cells of an operation table. Each variable has a
// candidate list; each check is a predicate that becomes decidable once
// every variable it reads is assigned, and is attached to the highest such
// variable.

#include <cstddef>
#include <optional>
#include <vector>

namespace csplab {

struct CellSearchSpace {
    std::vector<std::vector<int>> candidates;         // per variable
    std::vector<std::vector<std::size_t>> checks_at;  // per variable
    std::vector<std::size_t> ground_checks;           // checks reading no variable

    std::size_t num_variables() const noexcept { return candidates.size(); }
};

namespace detail {

template <class Check, class Final>
bool backtrack_cells_from(const CellSearchSpace& space, std::size_t var, std::vector<int>& values, Check& check,
                          Final& final_check) {
    if (var == space.num_variables()) {
        return final_check(values);
    }
    for (int v : space.candidates[var]) {
        values[var] = v;
        bool ok = true;
        for (auto c : space.checks_at[var]) {
            if (!check(c, values)) {
                ok = false;
                break;
            }
        }
        if (ok && backtrack_cells_from(space, var + 1, values, check, final_check)) {
            return true;
        }
    }
    values[var] = -1;
    return false;
}

}  // namespace detail

/// `check(id, values)` must only read variables at or below the one the check
/// is attached to. `final_check(values)` runs on complete assignments.
template <class Check, class Final>
std::optional<std::vector<int>> backtrack_cells(const CellSearchSpace& space, Check&& check, Final&& final_check) {
    std::vector<int> values(space.num_variables(), -1);
    for (auto c : space.ground_checks) {
        if (!check(c, values)) {
            return std::nullopt;
        }
    }
    if (detail::backtrack_cells_from(space, 0, values, check, final_check)) {
        return values;
    }
    return std::nullopt;
}

template <class Check>
std::optional<std::vector<int>> backtrack_cells(const CellSearchSpace& space, Check&& check) {
    return backtrack_cells(space, check, [](const std::vector<int>&) { return true; });
}

/// Plain enumeration of the full product of candidate lists, evaluating every
/// check on each complete assignment. Used to certify negative answers of
/// the pruned search. A failing check is moved to the front of the list,
/// which only changes evaluation order.
template <class Check, class Final>
std::optional<std::vector<int>> exhaustive_cells(const CellSearchSpace& space, Check&& check, Final&& final_check) {
    std::vector<std::size_t> order = space.ground_checks;
    for (const auto& at : space.checks_at) {
        order.insert(order.end(), at.begin(), at.end());
    }
    const std::size_t n = space.num_variables();
    for (const auto& c : space.candidates) {
        if (c.empty()) {
            return std::nullopt;
        }
    }
    std::vector<std::size_t> choice(n, 0);
    std::vector<int> values(n);
    while (true) {
        for (std::size_t v = 0; v < n; ++v) {
            values[v] = space.candidates[v][choice[v]];
        }
        bool ok = true;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (!check(order[i], values)) {
                std::size_t failing = order[i];
                order.erase(order.begin() + static_cast<std::ptrdiff_t>(i));
                order.insert(order.begin(), failing);
                ok = false;
                break;
            }
        }
        if (ok && final_check(values)) {
            return values;
        }
        std::size_t v = n;
        while (v > 0 && ++choice[v - 1] == space.candidates[v - 1].size()) {
            choice[--v] = 0;
        }
        if (v == 0) {
            return std::nullopt;
        }
    }
}

template <class Check>
std::optional<std::vector<int>> exhaustive_cells(const CellSearchSpace& space, Check&& check) {
    return exhaustive_cells(space, check, [](const std::vector<int>&) { return true; });
}

}  // namespace csplab
