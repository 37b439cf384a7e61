#include "csplab/pair_code.hpp"

#include <algorithm>

namespace csplab::pairs {

Label label_between(const PairCode& code, std::size_t i, std::size_t j, bool oriented) noexcept {
    if (i == j) {
        return kEq;
    }
    if (i < j) {
        return code[pair_index(i, j)];
    }
    return flip(code[pair_index(j, i)], oriented);
}

PairCode project(const PairCode& code, std::span<const std::size_t> positions, bool oriented) {
    PairCode out(num_pairs(positions.size()));
    for (std::size_t b = 1; b < positions.size(); ++b) {
        for (std::size_t a = 0; a < b; ++a) {
            out[pair_index(a, b)] = label_between(code, positions[a], positions[b], oriented);
        }
    }
    return out;
}

std::vector<std::size_t> representatives(const PairCode& code, std::size_t m) {
    std::vector<std::size_t> rep(m);
    for (std::size_t j = 0; j < m; ++j) {
        rep[j] = j;
        for (std::size_t i = 0; i < j; ++i) {
            if (code[pair_index(i, j)] == kEq) {
                rep[j] = rep[i];
                break;
            }
        }
    }
    return rep;
}

namespace {

std::vector<std::size_t> block_reps(const std::vector<std::size_t>& rep) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < rep.size(); ++j) {
        if (rep[j] == j) {
            out.push_back(j);
        }
    }
    return out;
}

// True if some (size)-subset of `candidates` is pairwise joined by kFwd.
bool has_clique(const PairCode& code, const std::vector<std::size_t>& candidates, int size) {
    if (size <= 0) {
        return true;
    }
    if (static_cast<int>(candidates.size()) < size) {
        return false;
    }
    for (std::size_t a = 0; a < candidates.size(); ++a) {
        std::vector<std::size_t> rest;
        for (std::size_t b = a + 1; b < candidates.size(); ++b) {
            if (label_between(code, candidates[a], candidates[b], false) == kFwd) {
                rest.push_back(candidates[b]);
            }
        }
        if (has_clique(code, rest, size - 1)) {
            return true;
        }
    }
    return false;
}

}  // namespace

void extensions(const PairCode& code, std::size_t m, BaseSpec base, std::vector<PairCode>& out) {
    const bool oriented = base.oriented();
    const auto rep = representatives(code, m);
    const auto reps = block_reps(rep);
    const std::size_t nb = reps.size();

    for (auto r : reps) {
        PairCode next = code;
        for (std::size_t i = 0; i < m; ++i) {
            next.push_back(label_between(code, i, r, oriented));
        }
        out.push_back(std::move(next));
    }

    if (base.kind == BaseKind::Order) {
        std::vector<std::size_t> rank_of_block(m, 0);
        for (auto b : reps) {
            std::size_t below = 0;
            for (auto c : reps) {
                if (label_between(code, c, b, true) == kFwd) {
                    ++below;
                }
            }
            rank_of_block[b] = below;
        }
        for (std::size_t cut = 0; cut <= nb; ++cut) {
            PairCode next = code;
            for (std::size_t i = 0; i < m; ++i) {
                next.push_back(rank_of_block[rep[i]] < cut ? kFwd : kBwd);
            }
            out.push_back(std::move(next));
        }
        return;
    }

    const std::size_t combos = std::size_t{1} << nb;
    for (std::size_t mask = 0; mask < combos; ++mask) {
        std::vector<Label> block_label(m, kFwd);
        std::vector<std::size_t> neighbours;
        for (std::size_t b = 0; b < nb; ++b) {
            Label l = (mask >> b) & 1 ? kBwd : kFwd;
            block_label[reps[b]] = l;
            if (l == kFwd) {
                neighbours.push_back(reps[b]);
            }
        }
        if (base.kind == BaseKind::KFree && has_clique(code, neighbours, base.clique - 1)) {
            continue;
        }
        PairCode next = code;
        for (std::size_t i = 0; i < m; ++i) {
            next.push_back(block_label[rep[i]]);
        }
        out.push_back(std::move(next));
    }
}

std::vector<PairCode> enumerate_codes(std::size_t m, BaseSpec base) {
    std::vector<PairCode> level{PairCode{}};
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<PairCode> next;
        for (const auto& c : level) {
            extensions(c, k, base, next);
        }
        level = std::move(next);
    }
    return level;
}

bool is_valid(const PairCode& code, std::size_t m, BaseSpec base) {
    if (code.size() != num_pairs(m)) {
        return false;
    }
    const bool oriented = base.oriented();
    for (auto l : code) {
        if (l > kBwd) {
            return false;
        }
    }
    const auto rep = representatives(code, m);
    for (std::size_t j = 1; j < m; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            Label l = code[pair_index(i, j)];
            if ((l == kEq) != (rep[i] == rep[j])) {
                return false;
            }
            if (l != kEq && l != label_between(code, rep[i], rep[j], oriented)) {
                return false;
            }
        }
    }
    const auto reps = block_reps(rep);
    if (base.kind == BaseKind::Order) {
        for (auto a : reps) {
            for (auto b : reps) {
                for (auto c : reps) {
                    if (label_between(code, a, b, true) == kFwd && label_between(code, b, c, true) == kFwd &&
                        label_between(code, a, c, true) != kFwd) {
                        return false;
                    }
                }
            }
        }
    }
    if (base.kind == BaseKind::KFree && has_clique(code, reps, base.clique)) {
        return false;
    }
    return true;
}

}  // namespace csplab::pairs
