#include "csplab/temporal.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "csplab/errors.hpp"

namespace csplab::temporal {

namespace {

// Dense ranking of arbitrary comparable keys.
template <class Key>
std::vector<int> dense_ranks(const std::vector<Key>& keys) {
    std::vector<Key> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> ranks;
    ranks.reserve(keys.size());
    for (const auto& k : keys) {
        ranks.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), k) - sorted.begin()));
    }
    return ranks;
}

}  // namespace

WeakOrderType WeakOrderType::from_ranks(std::vector<int> ranks) {
    if (dense_ranks(ranks) != ranks) {
        throw MalformedPattern("ranks are not a dense ranking");
    }
    return WeakOrderType(std::move(ranks));
}

WeakOrderType WeakOrderType::from_blocks(const std::vector<std::vector<std::size_t>>& blocks, std::size_t arity) {
    std::vector<int> ranks(arity, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) {
            throw MalformedPattern("empty block");
        }
        for (auto p : blocks[b]) {
            if (p >= arity || ranks[p] >= 0) {
                throw MalformedPattern("blocks do not partition the positions");
            }
            ranks[p] = static_cast<int>(b);
        }
    }
    if (std::find(ranks.begin(), ranks.end(), -1) != ranks.end()) {
        throw MalformedPattern("blocks do not cover the positions");
    }
    return WeakOrderType(std::move(ranks));
}

WeakOrderType WeakOrderType::from_pair_code(const pairs::PairCode& code, std::size_t arity) {
    if (!pairs::is_valid(code, arity, {pairs::BaseKind::Order, 0})) {
        throw MalformedPattern("pair code is not a weak order");
    }
    std::vector<int> below(arity, 0);
    for (std::size_t i = 0; i < arity; ++i) {
        for (std::size_t j = 0; j < arity; ++j) {
            if (pairs::label_between(code, j, i, true) == pairs::kFwd) {
                ++below[i];
            }
        }
    }
    return WeakOrderType(dense_ranks(below));
}

int WeakOrderType::num_blocks() const noexcept {
    return ranks_.empty() ? 0 : *std::max_element(ranks_.begin(), ranks_.end()) + 1;
}

std::vector<std::vector<std::size_t>> WeakOrderType::blocks() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(num_blocks()));
    for (std::size_t p = 0; p < ranks_.size(); ++p) {
        out[static_cast<std::size_t>(ranks_[p])].push_back(p);
    }
    return out;
}

std::vector<std::size_t> WeakOrderType::minimal_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < ranks_.size(); ++p) {
        if (ranks_[p] == 0) {
            out.push_back(p);
        }
    }
    return out;
}

pairs::PairCode WeakOrderType::pair_code() const {
    pairs::PairCode code(pairs::num_pairs(ranks_.size()));
    for (std::size_t j = 1; j < ranks_.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            code[pairs::pair_index(i, j)] = ranks_[i] == ranks_[j] ? pairs::kEq
                                            : ranks_[i] < ranks_[j] ? pairs::kFwd
                                                                    : pairs::kBwd;
        }
    }
    return code;
}

WeakOrderType WeakOrderType::reversed() const {
    const int top = num_blocks() - 1;
    std::vector<int> r;
    r.reserve(ranks_.size());
    for (int x : ranks_) {
        r.push_back(top - x);
    }
    return WeakOrderType(std::move(r));
}

WeakOrderType WeakOrderType::restricted(std::span<const std::size_t> positions) const {
    std::vector<int> r;
    r.reserve(positions.size());
    for (auto p : positions) {
        r.push_back(ranks_.at(p));
    }
    return WeakOrderType(dense_ranks(r));
}

SignedWeakOrderType::SignedWeakOrderType(WeakOrderType order, int negative_blocks, bool has_zero)
    : order_(std::move(order)), negative_blocks_(negative_blocks), has_zero_(has_zero) {
    const int nb = order_.num_blocks();
    if (negative_blocks < 0 || negative_blocks > nb || (has_zero && negative_blocks == nb)) {
        throw MalformedPattern("sign cut out of range");
    }
}

SignedWeakOrderType SignedWeakOrderType::from_signs(const WeakOrderType& order, const std::vector<int>& signs) {
    if (signs.size() != order.arity()) {
        throw MalformedPattern("sign vector length differs from arity");
    }
    const auto blocks = order.blocks();
    std::vector<int> block_sign;
    for (const auto& b : blocks) {
        const int s = signs[b.front()];
        for (auto p : b) {
            if (signs[p] != s) {
                throw MalformedPattern("equal positions with different signs");
            }
        }
        if (s < -1 || s > 1 || (!block_sign.empty() && block_sign.back() > s) ||
            (!block_sign.empty() && s == 0 && block_sign.back() == 0)) {
            throw MalformedPattern("signs are not monotone in the order");
        }
        block_sign.push_back(s);
    }
    const int negative = static_cast<int>(std::count(block_sign.begin(), block_sign.end(), -1));
    const bool zero = std::find(block_sign.begin(), block_sign.end(), 0) != block_sign.end();
    return SignedWeakOrderType(order, negative, zero);
}

int SignedWeakOrderType::sign(std::size_t position) const {
    const int r = order_.rank(position);
    if (r < negative_blocks_) {
        return -1;
    }
    if (has_zero_ && r == negative_blocks_) {
        return 0;
    }
    return 1;
}

std::vector<int> SignedWeakOrderType::signs() const {
    std::vector<int> out;
    for (std::size_t p = 0; p < order_.arity(); ++p) {
        out.push_back(sign(p));
    }
    return out;
}

SignedWeakOrderType SignedWeakOrderType::negated() const {
    const int positive = order_.num_blocks() - negative_blocks_ - (has_zero_ ? 1 : 0);
    return SignedWeakOrderType(order_.reversed(), positive, has_zero_);
}

TemporalRelation::TemporalRelation(std::size_t arity, std::vector<WeakOrderType> types)
    : arity_(arity), types_(std::move(types)) {
    for (const auto& t : types_) {
        if (t.arity() != arity_) {
            throw ArityError("type of arity " + std::to_string(t.arity()) + " in relation of arity " +
                             std::to_string(arity_));
        }
    }
    std::sort(types_.begin(), types_.end());
    types_.erase(std::unique(types_.begin(), types_.end()), types_.end());
}

bool TemporalRelation::contains(const WeakOrderType& t) const {
    return std::binary_search(types_.begin(), types_.end(), t);
}

TemporalRelation TemporalRelation::reversed() const {
    std::vector<WeakOrderType> r;
    for (const auto& t : types_) {
        r.push_back(t.reversed());
    }
    return TemporalRelation(arity_, std::move(r));
}

std::set<pairs::PairCode> TemporalRelation::pair_codes() const {
    std::set<pairs::PairCode> out;
    for (const auto& t : types_) {
        out.insert(t.pair_code());
    }
    return out;
}

TemporalRelation order_relation() {
    return TemporalRelation(2, {WeakOrderType::from_ranks({0, 1})});
}

void TemporalTemplate::add(const std::string& name, TemporalRelation relation) {
    relations_[name] = std::move(relation);
}

const TemporalRelation& TemporalTemplate::relation(const std::string& name) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) {
        throw SignatureMismatch("unknown relation " + name);
    }
    return it->second;
}

bool TemporalTemplate::is_order_expansion() const {
    const auto lt = order_relation();
    return std::any_of(relations_.begin(), relations_.end(), [&](const auto& kv) { return kv.second == lt; });
}

void TemporalTemplate::require_order_expansion() const {
    if (!is_order_expansion()) {
        throw PreconditionFailed("template does not contain the order relation {1<2}");
    }
}

std::string to_string(TemporalOp op) {
    switch (op) {
        case TemporalOp::PP: return "pp";
        case TemporalOp::DualPP: return "dual-pp";
        case TemporalOp::LL: return "ll";
        case TemporalOp::DualLL: return "dual-ll";
        case TemporalOp::Lex: return "lex";
        case TemporalOp::DualLex: return "dual-lex";
    }
    return "?";
}

TemporalOp parse_temporal_op(const std::string& text) {
    std::string t;
    for (char c : text) {
        t.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    for (auto op : {TemporalOp::PP, TemporalOp::DualPP, TemporalOp::LL, TemporalOp::DualLL, TemporalOp::Lex,
                    TemporalOp::DualLex}) {
        if (to_string(op) == t) {
            return op;
        }
    }
    throw ParameterError("unknown temporal operation '" + text + "'");
}

TemporalOp dual_of(TemporalOp op) {
    switch (op) {
        case TemporalOp::PP: return TemporalOp::DualPP;
        case TemporalOp::DualPP: return TemporalOp::PP;
        case TemporalOp::LL: return TemporalOp::DualLL;
        case TemporalOp::DualLL: return TemporalOp::LL;
        case TemporalOp::Lex: return TemporalOp::DualLex;
        case TemporalOp::DualLex: return TemporalOp::Lex;
    }
    return op;
}

bool is_dual(TemporalOp op) {
    return op == TemporalOp::DualPP || op == TemporalOp::DualLL || op == TemporalOp::DualLex;
}

std::vector<WeakOrderType> enumerate_weak_orders(std::size_t k) {
    if (k > kMaxWeakOrderArity) {
        throw BudgetExceeded("weak orders are enumerated up to arity 8");
    }
    std::vector<WeakOrderType> out;
    for (const auto& code : pairs::enumerate_codes(k, {pairs::BaseKind::Order, 0})) {
        out.push_back(WeakOrderType::from_pair_code(code, k));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// pp, ll and lex on a joint pattern; duals are reduced to these.
SignedWeakOrderType apply_base(TemporalOp op, const SignedWeakOrderType& joint) {
    const std::size_t k = joint.order().arity() / 2;
    using Key = std::tuple<int, int, int>;
    std::vector<Key> keys(k);
    std::vector<int> signs(k, 1);
    for (std::size_t i = 0; i < k; ++i) {
        const int ra = joint.order().rank(i);
        const int rb = joint.order().rank(k + i);
        const int sa = joint.sign(i);
        const int sb = joint.sign(k + i);
        switch (op) {
            case TemporalOp::PP:
                // x for x <= 0, eps(y) > 0 otherwise.
                if (sa <= 0) {
                    keys[i] = {0, ra, 0};
                    signs[i] = sa;
                } else {
                    keys[i] = {1, rb, 0};
                }
                break;
            case TemporalOp::LL:
                // x <= 0: ordered by lex(x, y), with ll(0,0) = 0; x > 0: above,
                // ordered by lex(y, x).
                if (sa <= 0) {
                    keys[i] = {0, ra, rb};
                    signs[i] = sa < 0 ? -1 : sb;
                } else {
                    keys[i] = {1, rb, ra};
                }
                break;
            case TemporalOp::Lex:
                keys[i] = {0, ra, rb};
                break;
            default: break;
        }
    }
    auto order = WeakOrderType::from_ranks(dense_ranks(keys));
    return SignedWeakOrderType::from_signs(order, signs);
}

TemporalOp base_of(TemporalOp op) { return is_dual(op) ? dual_of(op) : op; }

}  // namespace

SignedWeakOrderType apply_temporal_op(TemporalOp op, const SignedWeakOrderType& joint) {
    if (joint.order().arity() % 2 != 0) {
        throw MalformedPattern("joint pattern must have even arity");
    }
    if (!is_dual(op)) {
        return apply_base(op, joint);
    }
    // dual f(x, y) = -f(-x, -y)
    return apply_base(base_of(op), joint.negated()).negated();
}

std::optional<PreservationWitness> find_violation(TemporalOp op, const TemporalRelation& relation) {
    const std::size_t k = relation.arity();
    if (k > kMaxPreservationArity) {
        throw BudgetExceeded("preservation is tested up to arity 6");
    }
    const bool signed_op = base_of(op) != TemporalOp::Lex;
    // Outputs depend only on the order of a, the order of b and the signs of a
    // (plus the signs of b for output signs, which are not compared), so b is
    // placed above every a value and positive.
    for (const auto& ta : relation.types()) {
        const int nba = ta.num_blocks();
        for (const auto& tb : relation.types()) {
            std::vector<int> joint_ranks(2 * k);
            for (std::size_t i = 0; i < k; ++i) {
                joint_ranks[i] = ta.rank(i);
                joint_ranks[k + i] = nba + tb.rank(i);
            }
            const auto joint_order = WeakOrderType::from_ranks(joint_ranks);
            for (int negative = 0; negative <= (signed_op ? nba : 0); ++negative) {
                for (int zero = 0; zero <= 1; ++zero) {
                    if (zero == 1 && (!signed_op || negative == nba)) {
                        continue;
                    }
                    SignedWeakOrderType joint(joint_order, negative, zero == 1);
                    auto image = apply_temporal_op(op, joint).order();
                    if (!relation.contains(image)) {
                        return PreservationWitness{joint, ta, tb, image};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

bool preserves_temporal(TemporalOp op, const TemporalRelation& relation) {
    return !find_violation(op, relation).has_value();
}

std::set<Tuple> afin_relation(const TemporalRelation& relation) {
    std::set<Tuple> out;
    const std::size_t k = relation.arity();
    for (const auto& t : relation.types()) {
        // u >= 0 realizing t: all positive, or the least block at 0.
        out.insert(Tuple(k, kPositive));
        Tuple z(k, kPositive);
        for (auto p : t.minimal_positions()) {
            z[p] = kZero;
        }
        out.insert(std::move(z));
    }
    return out;
}

FiniteStructure build_afin(const TemporalTemplate& tmpl) {
    FiniteStructure out(2);
    out.add_relation(kZeroName, 1, {{kZero}});
    out.add_relation(kPositiveName, 1, {{kPositive}});
    for (const auto& [name, rel] : tmpl.relations()) {
        out.add_relation(name, rel.arity(), afin_relation(rel));
    }
    return out;
}

}  // namespace csplab::temporal
