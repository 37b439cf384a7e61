#include "csplab/polyengine.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <regex>

#include "csplab/cell_search.hpp"
#include "csplab/errors.hpp"

namespace csplab {

std::size_t OpTable::cell_count(int arity, int domain_size) {
    std::size_t n = 1;
    for (int i = 0; i < arity; ++i) {
        n *= static_cast<std::size_t>(domain_size);
    }
    return n;
}

OpTable::OpTable(int arity, int domain_size, std::vector<int> table)
    : arity_(arity), domain_size_(domain_size), table_(std::move(table)) {
    if (arity < 1 || domain_size < 1) {
        throw ParameterError("operation needs positive arity and domain");
    }
    if (table_.size() != cell_count(arity, domain_size)) {
        throw ParameterError("operation table is not total");
    }
    for (int v : table_) {
        if (v < 0 || v >= domain_size) {
            throw DomainMismatch("operation value out of range");
        }
    }
}

int OpTable::operator()(std::span<const int> args) const {
    int code = 0;
    for (int a : args) {
        code = code * domain_size_ + a;
    }
    return table_[static_cast<std::size_t>(code)];
}

IdentitySystem IdentitySystem::cyclic(int n) {
    if (n < 2) {
        throw ParameterError("cyclic identities need arity at least 2");
    }
    return {Kind::Cyclic, n};
}

IdentitySystem IdentitySystem::wnu(int m) {
    if (m < 2) {
        throw ParameterError("weak near-unanimity needs arity at least 2");
    }
    return {Kind::Wnu, m};
}

int IdentitySystem::required_arity() const {
    switch (kind) {
        case Kind::Idempotent: return 0;
        case Kind::Siggers: return 6;
        case Kind::Cyclic:
        case Kind::Wnu: return param;
        case Kind::Majority:
        case Kind::Minority: return 3;
        case Kind::Semilattice: return 2;
    }
    return 0;
}

std::string IdentitySystem::name() const {
    switch (kind) {
        case Kind::Idempotent: return "idempotent";
        case Kind::Siggers: return "siggers";
        case Kind::Cyclic: return "cyclic(" + std::to_string(param) + ")";
        case Kind::Wnu: return "wnu(" + std::to_string(param) + ")";
        case Kind::Majority: return "majority";
        case Kind::Minority: return "minority";
        case Kind::Semilattice: return "semilattice";
    }
    return "?";
}

IdentitySystem parse_identity_system(const std::string& text) {
    static const std::regex with_param(R"(^(cyclic|wnu)\((\d+)\)$)");
    std::smatch m;
    if (std::regex_match(text, m, with_param)) {
        int n = std::stoi(m[2].str());
        return m[1].str() == "cyclic" ? IdentitySystem::cyclic(n) : IdentitySystem::wnu(n);
    }
    if (text == "idempotent") return IdentitySystem::idempotent();
    if (text == "siggers") return IdentitySystem::siggers();
    if (text == "majority") return IdentitySystem::majority();
    if (text == "minority") return IdentitySystem::minority();
    if (text == "semilattice") return IdentitySystem::semilattice();
    throw ParameterError("unknown identity system '" + text + "'");
}

namespace {

using Kind = IdentitySystem::Kind;

// Calls emit(lhs_args, rhs_args) for every pair of argument tuples that the
// identities equate, and fix(args, value) for every tuple with a forced value.
template <class Emit, class Fix>
void for_each_identity(const IdentitySystem& ids, int arity, int d, Emit&& emit, Fix&& fix) {
    for (int x = 0; x < d; ++x) {
        fix(std::vector<int>(static_cast<std::size_t>(arity), x), x);
    }
    switch (ids.kind) {
        case Kind::Idempotent: break;
        case Kind::Majority:
        case Kind::Minority:
            for (int x = 0; x < d; ++x) {
                for (int y = 0; y < d; ++y) {
                    int forced = ids.kind == Kind::Majority ? x : y;
                    fix({x, x, y}, forced);
                    fix({x, y, x}, forced);
                    fix({y, x, x}, forced);
                }
            }
            break;
        case Kind::Cyclic: {
            const auto cells = OpTable::cell_count(arity, d);
            for (std::size_t c = 0; c < cells; ++c) {
                auto args = decode_power_element(static_cast<int>(c), d, arity);
                auto rotated = args;
                std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
                emit(args, rotated);
            }
            break;
        }
        case Kind::Wnu:
            for (int x = 0; x < d; ++x) {
                for (int y = 0; y < d; ++y) {
                    std::vector<int> first(static_cast<std::size_t>(arity), x);
                    first[0] = y;
                    for (int i = 1; i < arity; ++i) {
                        std::vector<int> other(static_cast<std::size_t>(arity), x);
                        other[static_cast<std::size_t>(i)] = y;
                        emit(first, other);
                    }
                }
            }
            break;
        case Kind::Siggers:
            for (int x = 0; x < d; ++x) {
                for (int y = 0; y < d; ++y) {
                    for (int z = 0; z < d; ++z) {
                        emit({x, y, x, z, y, z}, {y, x, z, x, z, y});
                    }
                }
            }
            break;
        case Kind::Semilattice:
            for (int x = 0; x < d; ++x) {
                for (int y = 0; y < d; ++y) {
                    emit({x, y}, {y, x});
                }
            }
            break;
    }
}

bool is_associative(const std::function<int(int, int)>& f, int d) {
    for (int x = 0; x < d; ++x) {
        for (int y = 0; y < d; ++y) {
            for (int z = 0; z < d; ++z) {
                if (f(x, f(y, z)) != f(f(x, y), z)) {
                    return false;
                }
            }
        }
    }
    return true;
}

void check_arity(const IdentitySystem& ids, int arity) {
    const int required = ids.required_arity();
    if (arity < 1 || (required != 0 && arity != required)) {
        throw ParameterError(ids.name() + " identities need arity " + std::to_string(required) + ", got " +
                             std::to_string(arity));
    }
}

}  // namespace

bool satisfies_identities(const OpTable& op, const IdentitySystem& identities) {
    check_arity(identities, op.arity());
    bool ok = true;
    for_each_identity(
        identities, op.arity(), op.domain_size(),
        [&](const std::vector<int>& a, const std::vector<int>& b) { ok = ok && op(a) == op(b); },
        [&](const std::vector<int>& a, int v) { ok = ok && op(a) == v; });
    if (ok && identities.kind == Kind::Semilattice) {
        ok = is_associative([&](int x, int y) { return op({x, y}); }, op.domain_size());
    }
    return ok;
}

bool preserves_op(const OpTable& op, const FiniteStructure& target) {
    if (op.domain_size() != target.domain_size()) {
        throw DomainMismatch("operation domain " + std::to_string(op.domain_size()) + " differs from template domain " +
                             std::to_string(target.domain_size()));
    }
    const auto a = static_cast<std::size_t>(op.arity());
    std::vector<int> column(a);
    for (const auto& [name, rel] : target.relations()) {
        if (rel.tuples.empty()) {
            continue;
        }
        std::vector<const Tuple*> tuples;
        for (const auto& t : rel.tuples) {
            tuples.push_back(&t);
        }
        std::vector<std::size_t> choice(a, 0);
        Tuple image(rel.arity);
        while (true) {
            for (std::size_t j = 0; j < rel.arity; ++j) {
                for (std::size_t i = 0; i < a; ++i) {
                    column[i] = (*tuples[choice[i]])[j];
                }
                image[j] = op(column);
            }
            if (!rel.contains(image)) {
                return false;
            }
            std::size_t i = a;
            while (i > 0 && ++choice[i - 1] == tuples.size()) {
                choice[--i] = 0;
            }
            if (i == 0) {
                break;
            }
        }
    }
    return true;
}

std::string to_string(BooleanClass cls) {
    switch (cls) {
        case BooleanClass::HornAnd: return "HORN_AND";
        case BooleanClass::DualHornOr: return "DUAL_HORN_OR";
        case BooleanClass::Majority2Sat: return "MAJORITY_2SAT";
        case BooleanClass::MinorityAffine: return "MINORITY_AFFINE";
        case BooleanClass::Constant0: return "CONSTANT0";
        case BooleanClass::Constant1: return "CONSTANT1";
        case BooleanClass::Trivial: return "TRIVIAL";
    }
    return "?";
}

OpTable boolean_table(BooleanClass cls) {
    switch (cls) {
        case BooleanClass::HornAnd: return OpTable(2, 2, {0, 0, 0, 1});
        case BooleanClass::DualHornOr: return OpTable(2, 2, {0, 1, 1, 1});
        case BooleanClass::Majority2Sat:
            return OpTable::from_function(3, 2, [](std::span<const int> x) { return x[0] + x[1] + x[2] >= 2 ? 1 : 0; });
        case BooleanClass::MinorityAffine:
            return OpTable::from_function(3, 2, [](std::span<const int> x) { return x[0] ^ x[1] ^ x[2]; });
        case BooleanClass::Constant0: return OpTable(1, 2, {0, 0});
        case BooleanClass::Constant1: return OpTable(1, 2, {1, 1});
        case BooleanClass::Trivial: break;
    }
    throw ClassMismatch("TRIVIAL has no probe operation");
}

std::set<BooleanClass> boolean_classify(const FiniteStructure& target) {
    if (target.domain_size() != 2) {
        throw DomainMismatch("boolean classification needs a two-element domain");
    }
    std::set<BooleanClass> out;
    for (auto cls : {BooleanClass::HornAnd, BooleanClass::DualHornOr, BooleanClass::Majority2Sat,
                     BooleanClass::MinorityAffine, BooleanClass::Constant0, BooleanClass::Constant1}) {
        if (preserves_op(boolean_table(cls), target)) {
            out.insert(cls);
        }
    }
    if (out.empty()) {
        out.insert(BooleanClass::Trivial);
    }
    return out;
}

std::optional<BooleanClass> solving_class(const std::set<BooleanClass>& classes) {
    for (auto cls : {BooleanClass::HornAnd, BooleanClass::DualHornOr, BooleanClass::Majority2Sat,
                     BooleanClass::MinorityAffine, BooleanClass::Constant0, BooleanClass::Constant1}) {
        if (classes.count(cls)) {
            return cls;
        }
    }
    return std::nullopt;
}

namespace {

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<std::size_t> parent;
};

std::optional<OpTable> boolean_shortcut(const FiniteStructure& target, const IdentitySystem& ids) {
    std::vector<BooleanClass> probes;
    switch (ids.kind) {
        case Kind::Majority: probes = {BooleanClass::Majority2Sat}; break;
        case Kind::Minority: probes = {BooleanClass::MinorityAffine}; break;
        case Kind::Semilattice: probes = {BooleanClass::HornAnd, BooleanClass::DualHornOr}; break;
        default: return std::nullopt;
    }
    for (auto cls : probes) {
        auto table = boolean_table(cls);
        if (preserves_op(table, target)) {
            return table;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<OpTable> find_polymorphism(const FiniteStructure& target, const IdentitySystem& identities, int arity,
                                         const PolySearchOptions& options) {
    check_arity(identities, arity);
    const int d = target.domain_size();
    if (d > 4) {
        throw BudgetExceeded("polymorphism search supports domains of at most 4 elements");
    }
    const std::size_t cells = OpTable::cell_count(arity, d);
    if (cells > 4096) {
        throw BudgetExceeded("operation table with " + std::to_string(cells) + " cells exceeds 4096");
    }
    if (d == 2 && options.boolean_shortcuts &&
        (identities.kind == Kind::Majority || identities.kind == Kind::Minority ||
         identities.kind == Kind::Semilattice)) {
        return boolean_shortcut(target, identities);
    }

    // Cells forced equal share one class; forced values pin a class.
    UnionFind uf(cells);
    std::vector<std::pair<std::size_t, int>> pins;
    for_each_identity(
        identities, arity, d,
        [&](const std::vector<int>& a, const std::vector<int>& b) {
            uf.unite(static_cast<std::size_t>(encode_power_element(a, d)),
                     static_cast<std::size_t>(encode_power_element(b, d)));
        },
        [&](const std::vector<int>& a, int v) { pins.emplace_back(encode_power_element(a, d), v); });
    std::vector<int> pinned(cells, -1);
    for (auto [cell, v] : pins) {
        auto root = uf.find(cell);
        if (pinned[root] >= 0 && pinned[root] != v) {
            return std::nullopt;
        }
        pinned[root] = v;
    }
    // Variables: unpinned classes ordered by their least cell.
    std::vector<int> var_of_cell(cells, -1);
    std::vector<int> const_of_cell(cells, -1);
    std::vector<int> var_of_root(cells, -1);
    CellSearchSpace space;
    for (std::size_t c = 0; c < cells; ++c) {
        auto root = uf.find(c);
        if (pinned[root] >= 0) {
            const_of_cell[c] = pinned[root];
            continue;
        }
        if (var_of_root[root] < 0) {
            var_of_root[root] = static_cast<int>(space.candidates.size());
            std::vector<int> all(static_cast<std::size_t>(d));
            std::iota(all.begin(), all.end(), 0);
            space.candidates.push_back(std::move(all));
        }
        var_of_cell[c] = var_of_root[root];
    }
    space.checks_at.resize(space.candidates.size());

    // Preservation checks: one per relation and choice of `arity` tuples.
    struct RelInfo {
        const Relation* rel;
        std::vector<const Tuple*> tuples;
        std::size_t first_check;
    };
    std::vector<RelInfo> rels;
    std::size_t total = 0;
    for (const auto& [name, rel] : target.relations()) {
        RelInfo info{&rel, {}, total};
        for (const auto& t : rel.tuples) {
            info.tuples.push_back(&t);
        }
        std::size_t combos = info.tuples.empty() ? 0 : 1;
        for (int i = 0; i < arity && combos != 0; ++i) {
            combos *= info.tuples.size();
            if (combos > options.max_checks) {
                throw BudgetExceeded("too many preservation checks for relation " + name);
            }
        }
        total += combos;
        if (total > options.max_checks) {
            throw BudgetExceeded("too many preservation checks");
        }
        rels.push_back(std::move(info));
    }
    const auto a = static_cast<std::size_t>(arity);
    auto column_cells = [&](std::size_t check, std::vector<std::size_t>& out) -> const RelInfo& {
        std::size_t r = 0;
        while (r + 1 < rels.size() && rels[r + 1].first_check <= check) {
            ++r;
        }
        const RelInfo& info = rels[r];
        std::size_t combo = check - info.first_check;
        std::vector<std::size_t> choice(a);
        for (std::size_t i = a; i-- > 0;) {
            choice[i] = combo % info.tuples.size();
            combo /= info.tuples.size();
        }
        out.assign(info.rel->arity, 0);
        for (std::size_t j = 0; j < info.rel->arity; ++j) {
            std::size_t cell = 0;
            for (std::size_t i = 0; i < a; ++i) {
                cell = cell * static_cast<std::size_t>(d) + static_cast<std::size_t>((*info.tuples[choice[i]])[j]);
            }
            out[j] = cell;
        }
        return info;
    };
    std::vector<std::size_t> cols;
    for (std::size_t check = 0; check < total; ++check) {
        column_cells(check, cols);
        int last = -1;
        for (auto c : cols) {
            last = std::max(last, var_of_cell[c]);
        }
        if (last < 0) {
            space.ground_checks.push_back(check);
        } else {
            space.checks_at[static_cast<std::size_t>(last)].push_back(check);
        }
    }

    auto cell_value = [&](std::size_t c, const std::vector<int>& values) {
        return var_of_cell[c] >= 0 ? values[static_cast<std::size_t>(var_of_cell[c])] : const_of_cell[c];
    };
    auto check = [&](std::size_t id, const std::vector<int>& values) {
        std::vector<std::size_t> cs;
        const RelInfo& info = column_cells(id, cs);
        Tuple image(cs.size());
        for (std::size_t j = 0; j < cs.size(); ++j) {
            image[j] = cell_value(cs[j], values);
        }
        return info.rel->contains(image);
    };
    auto final_check = [&](const std::vector<int>& values) {
        if (identities.kind != Kind::Semilattice) {
            return true;
        }
        return is_associative(
            [&](int x, int y) { return cell_value(static_cast<std::size_t>(x * d + y), values); }, d);
    };
    auto solution = options.exhaustive ? exhaustive_cells(space, check, final_check)
                                       : backtrack_cells(space, check, final_check);
    if (!solution) {
        return std::nullopt;
    }
    std::vector<int> table(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        table[c] = cell_value(c, *solution);
    }
    return OpTable(arity, d, std::move(table));
}

}  // namespace csplab
