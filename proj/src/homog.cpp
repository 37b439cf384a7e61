#include "csplab/homog.hpp"

#include <algorithm>
#include <stdexcept>

#include "csplab/cell_search.hpp"
#include "csplab/errors.hpp"

namespace csplab::homog {

using pairs::kBwd;
using pairs::kEq;
using pairs::kFwd;

LabeledType LabeledType::permuted(std::span<const std::size_t> perm, const BaseSpec& base) const {
    return {perm.size(), pairs::project(code, perm, base.oriented())};
}

bool LabeledType::injective() const {
    return std::none_of(code.begin(), code.end(), [](Label l) { return l == kEq; });
}

std::vector<std::vector<std::size_t>> LabeledType::blocks() const {
    const auto rep = pairs::representatives(code, arity);
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(arity, 0);
    for (std::size_t i = 0; i < arity; ++i) {
        if (rep[i] == i) {
            slot[i] = out.size();
            out.emplace_back();
        }
        out[slot[rep[i]]].push_back(i);
    }
    return out;
}

TypeSetRelation::TypeSetRelation(std::size_t arity, BaseSpec base, std::set<LabeledType> types)
    : arity_(arity), base_(base), types_(std::move(types)) {
    for (const auto& t : types_) {
        if (t.arity != arity_) {
            throw ArityError("type of arity " + std::to_string(t.arity) + " in a relation of arity " +
                             std::to_string(arity_));
        }
        if (!pairs::is_valid(t.code, arity_, base_)) {
            throw MalformedPattern("invalid complete type for this base");
        }
    }
}

std::set<PairCode> TypeSetRelation::codes() const {
    std::set<PairCode> out;
    for (const auto& t : types_) {
        out.insert(t.code);
    }
    return out;
}

void HomTemplate::add(const std::string& name, TypeSetRelation relation) {
    if (!(relation.base() == base)) {
        throw DomainMismatch("relation " + name + " is over a different base");
    }
    relations.insert_or_assign(name, std::move(relation));
}

const TypeSetRelation& HomTemplate::relation(const std::string& name) const {
    auto it = relations.find(name);
    if (it == relations.end()) {
        throw SignatureMismatch("unknown relation " + name);
    }
    return it->second;
}

std::vector<LabeledType> enumerate_types(std::size_t k, BaseSpec base, bool injective_only) {
    if (k > kMaxTypeArity) {
        throw BudgetExceeded("type enumeration is limited to arity 5");
    }
    std::vector<LabeledType> out;
    for (auto& code : pairs::enumerate_codes(k, base)) {
        LabeledType t{k, std::move(code)};
        if (!injective_only || t.injective()) {
            out.push_back(std::move(t));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::size_t pow3(std::size_t n) {
    std::size_t p = 1;
    for (std::size_t i = 0; i < n; ++i) {
        p *= 3;
    }
    return p;
}

std::size_t flip_cell(std::size_t cell, std::size_t arity) {
    auto in = inputs_of(cell, arity);
    for (auto& l : in) {
        l = pairs::flip(l, true);
    }
    return cell_of(in);
}

}  // namespace

std::size_t cell_of(std::span<const Label> inputs) {
    std::size_t c = 0;
    for (auto l : inputs) {
        c = c * 3 + l;
    }
    return c;
}

std::vector<Label> inputs_of(std::size_t cell, std::size_t arity) {
    std::vector<Label> out(arity);
    for (std::size_t i = arity; i-- > 0;) {
        out[i] = static_cast<Label>(cell % 3);
        cell /= 3;
    }
    return out;
}

PairBehavior::PairBehavior(std::size_t arity, bool oriented, std::vector<Label> table)
    : arity_(arity), oriented_(oriented), table_(std::move(table)) {
    if (table_.size() != pow3(arity_)) {
        throw ArityMismatch("behavior table must have 3^arity cells");
    }
}

Label PairBehavior::operator()(std::span<const Label> inputs) const {
    if (inputs.size() != arity_) {
        throw ArityMismatch("behavior applied to the wrong number of labels");
    }
    return table_[cell_of(inputs)];
}

bool PairBehavior::injective() const {
    for (std::size_t c = 0; c < table_.size(); ++c) {
        if ((table_[c] == kEq) != (c == 0)) {
            return false;
        }
    }
    return true;
}

bool PairBehavior::flip_equivariant() const {
    for (std::size_t c = 0; c < table_.size(); ++c) {
        if (table_[flip_cell(c, arity_)] != pairs::flip(table_[c], true)) {
            return false;
        }
    }
    return true;
}

LabeledType behavior_image(const PairBehavior& behavior, std::span<const LabeledType> types) {
    if (types.size() != behavior.arity() || types.empty()) {
        throw ArityMismatch("behavior of arity " + std::to_string(behavior.arity()) + " applied to " +
                            std::to_string(types.size()) + " types");
    }
    const std::size_t k = types[0].arity;
    for (const auto& t : types) {
        if (t.arity != k) {
            throw ArityMismatch("behavior applied to types of different arities");
        }
    }
    LabeledType out{k, PairCode(pairs::num_pairs(k))};
    std::vector<Label> column(types.size());
    for (std::size_t p = 0; p < out.code.size(); ++p) {
        bool all_eq = true;
        for (std::size_t i = 0; i < types.size(); ++i) {
            column[i] = types[i].code[p];
            all_eq = all_eq && column[i] == kEq;
        }
        out.code[p] = all_eq ? kEq : behavior(column);
    }
    return out;
}

bool behavior_preserves(const PairBehavior& behavior, const TypeSetRelation& relation) {
    const std::vector<LabeledType> types(relation.types().begin(), relation.types().end());
    const std::size_t n = behavior.arity();
    if (types.empty()) {
        return true;
    }
    std::vector<std::size_t> choice(n, 0);
    std::vector<LabeledType> args(n);
    while (true) {
        for (std::size_t i = 0; i < n; ++i) {
            args[i] = types[choice[i]];
        }
        if (!relation.contains(behavior_image(behavior, args))) {
            return false;
        }
        std::size_t i = n;
        while (i > 0 && ++choice[i - 1] == types.size()) {
            choice[--i] = 0;
        }
        if (i == 0) {
            return true;
        }
    }
}

std::string to_string(Shape shape) {
    switch (shape) {
        case Shape::TernaryMajority: return "TERNARY_MAJORITY";
        case Shape::TernaryMinority: return "TERNARY_MINORITY";
        case Shape::BinarySemilatticeE: return "BINARY_SL_E";
        case Shape::BinarySemilatticeN: return "BINARY_SL_N";
    }
    return "?";
}

namespace {

std::size_t shape_arity(Shape shape) {
    return shape == Shape::TernaryMajority || shape == Shape::TernaryMinority ? 3 : 2;
}

// Value of the shape's operation on inputs from {kFwd, kBwd}.
Label shape_value(Shape shape, std::span<const Label> in) {
    switch (shape) {
        case Shape::TernaryMajority: return in[0] == in[1] || in[0] == in[2] ? in[0] : in[1];
        case Shape::TernaryMinority: return in[0] == in[1] ? in[2] : (in[0] == in[2] ? in[1] : in[0]);
        case Shape::BinarySemilatticeE: return in[0] == kFwd || in[1] == kFwd ? kFwd : kBwd;
        case Shape::BinarySemilatticeN: return in[0] == kBwd || in[1] == kBwd ? kBwd : kFwd;
    }
    return kEq;
}

// One preservation requirement: the pair cells read by one tuple of types.
struct Requirement {
    std::size_t relation;
    std::size_t arity;
    std::vector<std::size_t> cells;  // per pair of the output
};

class BehaviorProblem {
public:
    BehaviorProblem(const HomTemplate& tmpl, Shape shape)
        : arity_(shape_arity(shape)), oriented_(tmpl.base.oriented()) {
        const std::size_t cells = pow3(arity_);
        fixed_.assign(cells, -1);
        var_of_.assign(cells, -1);
        flipped_.assign(cells, false);
        fixed_[0] = kEq;
        for (std::size_t c = 1; c < cells; ++c) {
            const auto in = inputs_of(c, arity_);
            if (std::none_of(in.begin(), in.end(), [](Label l) { return l == kEq; })) {
                fixed_[c] = shape_value(shape, in);
            }
        }
        for (std::size_t c = 1; c < cells; ++c) {
            if (fixed_[c] >= 0 || var_of_[c] >= 0) {
                continue;
            }
            var_of_[c] = static_cast<int>(space_.candidates.size());
            space_.candidates.push_back({kFwd, kBwd});
            if (oriented_) {
                const std::size_t f = flip_cell(c, arity_);
                var_of_[f] = var_of_[c];
                flipped_[f] = true;
            }
        }
        space_.checks_at.resize(space_.candidates.size());

        for (const auto& [name, rel] : tmpl.relations) {
            relations_.push_back(&rel);
            const std::vector<LabeledType> types(rel.types().begin(), rel.types().end());
            if (types.empty()) {
                continue;
            }
            std::vector<std::size_t> choice(arity_, 0);
            std::vector<Label> column(arity_);
            while (true) {
                Requirement req{relations_.size() - 1, rel.arity(), {}};
                int highest = -1;
                for (std::size_t p = 0; p < pairs::num_pairs(rel.arity()); ++p) {
                    for (std::size_t i = 0; i < arity_; ++i) {
                        column[i] = types[choice[i]].code[p];
                    }
                    const std::size_t c = cell_of(column);
                    req.cells.push_back(c);
                    highest = std::max(highest, var_of_[c]);
                }
                if (highest < 0) {
                    space_.ground_checks.push_back(requirements_.size());
                } else {
                    space_.checks_at[static_cast<std::size_t>(highest)].push_back(requirements_.size());
                }
                requirements_.push_back(std::move(req));
                std::size_t i = arity_;
                while (i > 0 && ++choice[i - 1] == types.size()) {
                    choice[--i] = 0;
                }
                if (i == 0) {
                    break;
                }
            }
        }
    }

    const CellSearchSpace& space() const { return space_; }

    Label cell_value(std::size_t cell, const std::vector<int>& values) const {
        if (fixed_[cell] >= 0) {
            return static_cast<Label>(fixed_[cell]);
        }
        const auto v = static_cast<Label>(values[static_cast<std::size_t>(var_of_[cell])]);
        return flipped_[cell] ? pairs::flip(v, true) : v;
    }

    bool check(std::size_t id, const std::vector<int>& values) const {
        const auto& req = requirements_[id];
        LabeledType image{req.arity, PairCode(req.cells.size())};
        for (std::size_t p = 0; p < req.cells.size(); ++p) {
            image.code[p] = cell_value(req.cells[p], values);
        }
        return relations_[req.relation]->contains(image);
    }

    PairBehavior behavior(const std::vector<int>& values) const {
        std::vector<Label> table(fixed_.size());
        for (std::size_t c = 0; c < table.size(); ++c) {
            table[c] = cell_value(c, values);
        }
        return PairBehavior(arity_, oriented_, std::move(table));
    }

private:
    std::size_t arity_;
    bool oriented_;
    std::vector<int> fixed_;
    std::vector<int> var_of_;
    std::vector<bool> flipped_;
    CellSearchSpace space_;
    std::vector<const TypeSetRelation*> relations_;
    std::vector<Requirement> requirements_;
};

}  // namespace

BehaviorSearch search_behavior(const HomTemplate& tmpl, Shape shape) {
    if (tmpl.base.kind == BaseKind::KFree || tmpl.base.kind == BaseKind::Order) {
        throw UnsupportedBase("behavior search needs the tournament or the random graph");
    }
    if (tmpl.base.kind == BaseKind::Tournament &&
        (shape == Shape::BinarySemilatticeE || shape == Shape::BinarySemilatticeN)) {
        throw ShapeUnsupported("no flip-equivariant behavior acts as a semilattice on the arc labels");
    }
    BehaviorProblem problem(tmpl, shape);
    auto check = [&](std::size_t id, const std::vector<int>& values) { return problem.check(id, values); };
    BehaviorSearch result;
    result.free_cells = problem.space().num_variables();
    if (auto values = backtrack_cells(problem.space(), check)) {
        result.behavior = problem.behavior(*values);
        return result;
    }
    if (result.free_cells <= kMaxCertifiedCells) {
        if (exhaustive_cells(problem.space(), check)) {
            throw std::logic_error("pruned behavior search missed a solution");
        }
        result.exhaustive_certificate = true;
    }
    return result;
}

PairBehavior g2_behavior(bool oriented) {
    std::vector<Label> table(9);
    for (std::size_t c = 0; c < 9; ++c) {
        const auto in = inputs_of(c, 2);
        table[c] = in[0] != kEq ? in[0] : in[1];
    }
    return PairBehavior(2, oriented, std::move(table));
}

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::NpComplete: return "NP_COMPLETE";
        case VerdictKind::PBoundedWidth: return "P_BOUNDED_WIDTH";
        case VerdictKind::PNotBoundedWidth: return "P_NOT_BOUNDED_WIDTH";
        case VerdictKind::PConstant: return "P_CONSTANT";
        case VerdictKind::EqualityP: return "EQUALITY_P";
        case VerdictKind::EqualityNpc: return "EQUALITY_NPC";
    }
    return "?";
}

namespace {

using Partition = std::vector<std::size_t>;  // representative per position

// True if the relation contains, with each of its types, every type with the
// same equalities.
bool depends_only_on_partition(const TypeSetRelation& rel) {
    const auto all = enumerate_types(rel.arity(), rel.base());
    std::set<Partition> partitions;
    for (const auto& t : rel.types()) {
        partitions.insert(pairs::representatives(t.code, t.arity));
    }
    for (const auto& t : all) {
        const bool in_partitions = partitions.count(pairs::representatives(t.code, t.arity)) != 0;
        if (in_partitions != rel.contains(t)) {
            return false;
        }
    }
    return true;
}

bool partitions_closed_under_refinement(const TypeSetRelation& rel) {
    std::set<PairCode> eq_patterns;
    for (const auto& t : rel.types()) {
        PairCode p = t.code;
        for (auto& l : p) {
            l = l == kEq ? kEq : kFwd;
        }
        eq_patterns.insert(std::move(p));
    }
    for (const auto& a : eq_patterns) {
        for (const auto& b : eq_patterns) {
            PairCode meet(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                meet[i] = a[i] == kEq && b[i] == kEq ? kEq : kFwd;
            }
            if (eq_patterns.count(meet) == 0) {
                return false;
            }
        }
    }
    return true;
}

bool contains_constant_type(const TypeSetRelation& rel) {
    return rel.contains({rel.arity(), PairCode(pairs::num_pairs(rel.arity()), kEq)});
}

}  // namespace

Verdict classify_reduct(const HomTemplate& tmpl) {
    if (tmpl.base.kind != BaseKind::Tournament && tmpl.base.kind != BaseKind::Graph) {
        throw UnsupportedBase("classification covers the tournament and the random graph only");
    }
    Verdict verdict;
    const auto& rels = tmpl.relations;
    if (std::all_of(rels.begin(), rels.end(), [](const auto& r) { return contains_constant_type(r.second); })) {
        verdict.kind = VerdictKind::PConstant;
        return verdict;
    }
    if (std::all_of(rels.begin(), rels.end(), [](const auto& r) { return depends_only_on_partition(r.second); })) {
        const bool closed = std::all_of(rels.begin(), rels.end(),
                                        [](const auto& r) { return partitions_closed_under_refinement(r.second); });
        verdict.kind = closed ? VerdictKind::EqualityP : VerdictKind::EqualityNpc;
        verdict.width_undetermined = closed;
        return verdict;
    }
    std::vector<std::pair<Shape, VerdictKind>> cascade;
    if (tmpl.base.kind == BaseKind::Graph) {
        cascade.emplace_back(Shape::BinarySemilatticeE, VerdictKind::PBoundedWidth);
        cascade.emplace_back(Shape::BinarySemilatticeN, VerdictKind::PBoundedWidth);
    }
    cascade.emplace_back(Shape::TernaryMajority, VerdictKind::PBoundedWidth);
    cascade.emplace_back(Shape::TernaryMinority, VerdictKind::PNotBoundedWidth);
    for (const auto& [shape, kind] : cascade) {
        auto search = search_behavior(tmpl, shape);
        const bool found = search.behavior.has_value();
        verdict.searches.emplace_back(shape, search);
        if (found) {
            verdict.kind = kind;
            verdict.shape = shape;
            verdict.witness = search.behavior;
            return verdict;
        }
    }
    verdict.kind = VerdictKind::NpComplete;
    return verdict;
}

namespace {

struct BoundInstance {
    BoundInstance(const Instance& instance, const HomTemplate& tmpl) : net(network_of(instance)) {
        for (const auto& c : instance.constraints()) {
            const auto& rel = tmpl.relation(c.relation);
            if (rel.arity() != c.scope.size()) {
                throw SignatureMismatch("constraint on " + c.relation + " has the wrong arity");
            }
            codes.push_back(rel.codes());
        }
        for (const auto& s : codes) {
            ptrs.push_back(&s);
        }
    }

    ConstraintNetwork net;
    std::vector<std::set<PairCode>> codes;
    std::vector<const std::set<PairCode>*> ptrs;
};

}  // namespace

std::optional<PairCode> solve_instance_brute(const Instance& instance, const HomTemplate& tmpl) {
    if (instance.num_variables() > kMaxBruteVariables) {
        throw BudgetExceeded("brute-force instance search is limited to 6 variables");
    }
    BoundInstance bound(instance, tmpl);
    return first_solution(PairSemantics(tmpl.base, bound.ptrs), bound.net);
}

std::optional<HomConsistency> establish_kl(const Instance& instance, const HomTemplate& tmpl, int k, int l) {
    BoundInstance bound(instance, tmpl);
    return establish_kl_network(PairSemantics(tmpl.base, bound.ptrs), bound.net, k, l);
}

}  // namespace csplab::homog
