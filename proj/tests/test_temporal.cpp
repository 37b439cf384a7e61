#include <doctest.h>

#include <random>

#include "csplab/errors.hpp"
#include "csplab/temporal.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace csplab;
using namespace csplab::temporal;
using gen::ranks;

namespace {

const TemporalOp kAllOps[] = {TemporalOp::PP, TemporalOp::DualPP, TemporalOp::LL,
                              TemporalOp::DualLL, TemporalOp::Lex, TemporalOp::DualLex};

// Every signed pattern on `arity` positions.
std::vector<SignedWeakOrderType> signed_patterns(std::size_t arity) {
    std::vector<SignedWeakOrderType> out;
    for (const auto& t : enumerate_weak_orders(arity)) {
        const int nb = t.num_blocks();
        for (int neg = 0; neg <= nb; ++neg) {
            out.emplace_back(t, neg, false);
            if (neg < nb) {
                out.emplace_back(t, neg, true);
            }
        }
    }
    return out;
}

int sign_of(long v) { return v < 0 ? -1 : (v == 0 ? 0 : 1); }

// Output ranks of op on the realized pattern, evaluated on integers.
std::vector<int> concrete_image(TemporalOp op, const SignedWeakOrderType& joint, std::vector<int>* signs = nullptr) {
    const auto values = oracle::realize(joint);
    long bound = 0;
    for (auto v : values) {
        bound = std::max(bound, std::abs(v));
    }
    const std::size_t k = values.size() / 2;
    std::vector<long> out;
    for (std::size_t i = 0; i < k; ++i) {
        out.push_back(oracle::concrete(op, values[i], values[k + i], bound));
    }
    if (signs != nullptr) {
        signs->clear();
        for (auto v : out) {
            signs->push_back(sign_of(v));
        }
    }
    return oracle::ranks_of(out);
}

// Preservation decided over every joint pattern with concrete values.
bool naive_preserves(TemporalOp op, const TemporalRelation& rel) {
    const std::size_t k = rel.arity();
    for (const auto& joint : signed_patterns(2 * k)) {
        std::vector<long> a;
        std::vector<long> b;
        const auto values = oracle::realize(joint);
        a.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k));
        b.assign(values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
        if (!oracle::relation_has(rel, oracle::ranks_of(a)) || !oracle::relation_has(rel, oracle::ranks_of(b))) {
            continue;
        }
        if (!oracle::relation_has(rel, concrete_image(op, joint))) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("weak order counts follow the ordered Bell numbers") {
    const std::size_t expected[] = {1, 1, 3, 13, 75, 541, 4683};
    for (std::size_t k = 0; k <= 6; ++k) {
        CAPTURE(k);
        CHECK(enumerate_weak_orders(k).size() == expected[k]);
        CHECK(enumerate_weak_orders(k).size() == oracle::naive_weak_orders(k).size());
    }
    CHECK_THROWS_AS(enumerate_weak_orders(9), BudgetExceeded);
}

TEST_CASE("weak orders of two points") {
    const auto two = enumerate_weak_orders(2);
    REQUIRE(two.size() == 3);
    CHECK(two[0].ranks() == std::vector<int>{0, 0});
    CHECK(two[1].ranks() == std::vector<int>{0, 1});
    CHECK(two[2].ranks() == std::vector<int>{1, 0});
}

TEST_CASE("weak order types validate and transform") {
    CHECK_THROWS_AS(WeakOrderType::from_ranks({0, 2}), MalformedPattern);
    const auto t = WeakOrderType::from_blocks({{1}, {0, 2}}, 3);
    CHECK(t.ranks() == std::vector<int>{1, 0, 1});
    CHECK(t.minimal_positions() == std::vector<std::size_t>{1});
    CHECK(t.reversed().ranks() == std::vector<int>{0, 1, 0});
    const std::vector<std::size_t> pos{2, 1};
    CHECK(t.restricted(pos).ranks() == std::vector<int>{1, 0});
    CHECK(WeakOrderType::from_pair_code(t.pair_code(), 3) == t);
    CHECK_THROWS_AS(SignedWeakOrderType(t, 3, false), MalformedPattern);
    CHECK_THROWS_AS(SignedWeakOrderType::from_signs(t, {1, -1, 0}), MalformedPattern);
}

TEST_CASE("operation names parse") {
    CHECK(parse_temporal_op("dual-ll") == TemporalOp::DualLL);
    CHECK(parse_temporal_op("PP") == TemporalOp::PP);
    CHECK(to_string(TemporalOp::DualPP) == "dual-pp");
    CHECK_THROWS_AS(parse_temporal_op("mx"), ParameterError);
}

TEST_CASE("pattern evaluation matches integer evaluation") {
    for (std::size_t k = 1; k <= 3; ++k) {
        for (const auto& joint : signed_patterns(2 * k)) {
            for (auto op : kAllOps) {
                std::vector<int> signs;
                const auto expected = concrete_image(op, joint, &signs);
                const auto got = apply_temporal_op(op, joint);
                REQUIRE(got.order().ranks() == expected);
                if (op != TemporalOp::Lex && op != TemporalOp::DualLex) {
                    CHECK(got.signs() == signs);
                }
            }
        }
    }
}

TEST_CASE("worked evaluations") {
    // pp(x, y) = x for negative x.
    auto j = SignedWeakOrderType::from_signs(ranks({0, 1}), {-1, 1});
    auto out = apply_temporal_op(TemporalOp::PP, j);
    CHECK(out.signs() == std::vector<int>{-1});
    // ll(0, 0) = 0.
    j = SignedWeakOrderType::from_signs(ranks({0, 0}), {0, 0});
    CHECK(apply_temporal_op(TemporalOp::LL, j).signs() == std::vector<int>{0});
    // lex is strict in the first argument.
    j = SignedWeakOrderType(ranks({0, 1, 3, 2}), 0, false);
    CHECK(apply_temporal_op(TemporalOp::Lex, j).order().ranks() == std::vector<int>{0, 1});
    // a = (1, 0, 2), b = (2, 5, 1).
    j = SignedWeakOrderType::from_signs(ranks(oracle::ranks_of({1, 0, 2, 2, 5, 1})), {1, 0, 1, 1, 1, 1});
    out = apply_temporal_op(TemporalOp::PP, j);
    CHECK(out.order().ranks() == std::vector<int>{2, 0, 1});
    CHECK(out.signs() == std::vector<int>{1, 0, 1});
    CHECK_THROWS_AS(apply_temporal_op(TemporalOp::PP, SignedWeakOrderType(ranks({0, 1, 2}), 0, false)),
                    MalformedPattern);
}

TEST_CASE("pp and ll map strictly increasing pairs to increasing pairs") {
    for (const auto& joint : signed_patterns(4)) {
        const auto& r = joint.order().ranks();
        if (r[0] < r[1] && r[2] < r[3]) {
            for (auto op : {TemporalOp::PP, TemporalOp::LL}) {
                const auto out = apply_temporal_op(op, joint).order().ranks();
                CHECK(out[0] < out[1]);
            }
        }
    }
}

TEST_CASE("duals are conjugates of their base operation") {
    for (std::size_t k = 1; k <= 3; ++k) {
        for (const auto& joint : signed_patterns(2 * k)) {
            for (auto op : {TemporalOp::PP, TemporalOp::LL, TemporalOp::Lex}) {
                const auto lhs = apply_temporal_op(dual_of(op), joint).order();
                const auto rhs = apply_temporal_op(op, joint.negated()).order().reversed();
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("preservation examples") {
    CHECK(preserves_temporal(TemporalOp::PP, order_relation()));
    CHECK(preserves_temporal(TemporalOp::LL, order_relation()));
    CHECK(preserves_temporal(TemporalOp::PP, gen::r_min()));
    const auto w = find_violation(TemporalOp::PP, gen::betweenness());
    REQUIRE(w);
    CHECK_FALSE(gen::betweenness().contains(w->image));
    CHECK(gen::betweenness().contains(w->first));
    CHECK(gen::betweenness().contains(w->second));
    CHECK(concrete_image(TemporalOp::PP, w->joint) == w->image.ranks());
    for (auto op : {TemporalOp::PP, TemporalOp::DualPP, TemporalOp::LL, TemporalOp::DualLL}) {
        CHECK_FALSE(preserves_temporal(op, gen::betweenness()));
    }
    CHECK(preserves_temporal(TemporalOp::Lex, gen::betweenness()));
    CHECK_THROWS_AS(preserves_temporal(TemporalOp::PP, TemporalRelation(7, {})), BudgetExceeded);
}

TEST_CASE("preservation agrees with concrete evaluation over all interleavings") {
    std::mt19937 rng(13);
    for (int round = 0; round < 120; ++round) {
        const auto rel = gen::random_temporal_relation(rng, 1 + rng() % 3, 4);
        for (auto op : kAllOps) {
            CHECK(preserves_temporal(op, rel) == naive_preserves(op, rel));
        }
    }
}

TEST_CASE("relations and templates") {
    const TemporalRelation lt = order_relation();
    CHECK(lt.contains(ranks({0, 1})));
    CHECK(lt.reversed().contains(ranks({1, 0})));
    CHECK_THROWS_AS(TemporalRelation(2, {ranks({0})}), ArityError);
    TemporalTemplate t;
    t.add("B", gen::betweenness());
    CHECK_FALSE(t.is_order_expansion());
    CHECK_THROWS_AS(t.require_order_expansion(), PreconditionFailed);
    t.add("LT", lt);
    CHECK(t.is_order_expansion());
    CHECK_THROWS_AS(t.relation("X"), SignatureMismatch);
}

TEST_CASE("two-element images") {
    CHECK(afin_relation(order_relation()) == std::set<Tuple>{{kZero, kPositive}, {kPositive, kPositive}});
    CHECK(afin_relation(TemporalRelation(2, {ranks({0, 0})})) == std::set<Tuple>{{kZero, kZero}, {kPositive, kPositive}});
    CHECK(afin_relation(TemporalRelation(1, {ranks({0})})) == std::set<Tuple>{{kZero}, {kPositive}});
    const auto f = build_afin(gen::order_template());
    CHECK(f.relations().size() == 3);
    CHECK(f.relation(kZeroName).tuples == std::set<Tuple>{{kZero}});
    CHECK(f.relation(kPositiveName).tuples == std::set<Tuple>{{kPositive}});
}

TEST_CASE("two-element images match non-negative realizations") {
    std::mt19937 rng(17);
    for (int round = 0; round < 100; ++round) {
        const auto rel = gen::random_temporal_relation(rng, 1 + rng() % 3, 4);
        std::set<Tuple> expected;
        for (const auto& t : rel.types()) {
            // Shift the realization down by 0, 1, ... so that each block may
            // land on 0; only non-negative shifts are kept.
            for (int shift = 0; shift <= 1; ++shift) {
                Tuple z;
                for (std::size_t p = 0; p < t.arity(); ++p) {
                    const long v = t.rank(p) + 1 - shift;
                    z.push_back(v == 0 ? kZero : kPositive);
                }
                expected.insert(z);
            }
        }
        CHECK(afin_relation(rel) == expected);
    }
}
