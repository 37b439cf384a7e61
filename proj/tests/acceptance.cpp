// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "csplab/consistency.hpp"
#include "csplab/homog.hpp"
#include "csplab/polyengine.hpp"
#include "csplab/temporal.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace csplab;
using homog::HomTemplate;
using homog::LabeledType;
using homog::Shape;
using homog::TypeSetRelation;
using homog::VerdictKind;
using pairs::BaseKind;
using pairs::BaseSpec;
using pairs::kBwd;
using pairs::kEq;
using pairs::kFwd;
using pairs::Label;
using temporal::MasterMode;
using temporal::TemporalOp;
using temporal::TemporalTemplate;

namespace {

// Pinned limits.
constexpr double kRuntimeLimitSeconds = 300.0;
constexpr int kTemporalInstances = 200;
constexpr std::size_t kTemporalMaxVars = 7;
constexpr std::size_t kTemporalMaxConstraints = 8;
constexpr std::size_t kMinDiscoveredLl = 5;
constexpr int kWidthInstances = 200;
constexpr std::size_t kWidthMaxVars = 6;
constexpr int kSoundnessInstances = 500;
constexpr int kBooleanTemplates = 20;
constexpr int kSchaeferInstances = 200;

const BaseSpec kTournament{BaseKind::Tournament, 0};
const BaseSpec kGraph{BaseKind::Graph, 0};

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Check {
public:
    void require(bool ok, const std::string& what) {
        if (!ok && failures_++ < 3) {
            first_ += (first_.empty() ? "" : "; ") + what;
        }
    }
    bool ok() const { return failures_ == 0; }
    std::string failures() const { return std::to_string(failures_) + " failures, first: " + first_; }

private:
    int failures_ = 0;
    std::string first_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

HomTemplate hom(BaseSpec base, std::vector<std::pair<std::string, std::set<LabeledType>>> rels) {
    HomTemplate t{base, {}};
    for (auto& [name, types] : rels) {
        const auto arity = types.begin()->arity;
        t.add(name, TypeSetRelation(arity, base, std::move(types)));
    }
    return t;
}

LabeledType lt(std::size_t arity, pairs::PairCode code) { return {arity, std::move(code)}; }

TypeSetRelation even_parity(BaseSpec base, std::size_t arity) {
    std::set<LabeledType> types;
    for (const auto& t : homog::enumerate_types(arity, base, true)) {
        if (std::count(t.code.begin(), t.code.end(), kFwd) % 2 == 0) {
            types.insert(t);
        }
    }
    return TypeSetRelation(arity, base, types);
}

// ---------------------------------------------------------------------------
// Independent behavior enumeration, written from the identities.

Label flip(Label l) { return l == kFwd ? kBwd : l == kBwd ? kFwd : kEq; }

std::size_t shape_arity(Shape s) {
    return s == Shape::TernaryMajority || s == Shape::TernaryMinority ? 3 : 2;
}

// Value forced on inputs without EQ.
Label shape_value(Shape s, const std::vector<Label>& in) {
    switch (s) {
        case Shape::TernaryMajority:
            return in[0] == in[1] || in[0] == in[2] ? in[0] : in[1];
        case Shape::TernaryMinority:
            if (in[0] == in[1]) return in[2];
            if (in[0] == in[2]) return in[1];
            return in[0];
        case Shape::BinarySemilatticeE: return in[0] == in[1] ? in[0] : kFwd;
        case Shape::BinarySemilatticeN: return in[0] == in[1] ? in[0] : kBwd;
    }
    return kEq;
}

std::size_t encode(const std::vector<Label>& in) {
    std::size_t c = 0;
    for (auto l : in) {
        c = c * 3 + static_cast<std::size_t>(l);
    }
    return c;
}

std::vector<Label> decode(std::size_t c, std::size_t arity) {
    std::vector<Label> in(arity);
    for (std::size_t i = arity; i-- > 0;) {
        in[i] = static_cast<Label>(c % 3);
        c /= 3;
    }
    return in;
}

bool table_preserves(const std::vector<Label>& table, std::size_t arity, const TypeSetRelation& rel) {
    const auto& types = rel.types();
    if (types.empty()) {
        return true;
    }
    const std::vector<LabeledType> list(types.begin(), types.end());
    std::vector<std::size_t> pick(arity, 0);
    std::vector<Label> in(arity);
    while (true) {
        LabeledType image{rel.arity(), {}};
        for (std::size_t p = 0; p < list[0].code.size(); ++p) {
            for (std::size_t i = 0; i < arity; ++i) {
                in[i] = list[pick[i]].code[p];
            }
            image.code.push_back(table[encode(in)]);
        }
        if (!rel.contains(image)) {
            return false;
        }
        std::size_t i = 0;
        while (i < arity && ++pick[i] == list.size()) {
            pick[i++] = 0;
        }
        if (i == arity) {
            return true;
        }
    }
}

struct NaiveSearch {
    bool found = false;
    std::size_t free_cells = 0;
};

// Tries every assignment of {Fwd,Bwd} to cells mixing EQ with other labels.
// Over an oriented base the value on a cell fixes the value on its flip.
NaiveSearch naive_behavior(const HomTemplate& tmpl, Shape shape) {
    const std::size_t arity = shape_arity(shape);
    const bool oriented = tmpl.base.oriented();
    std::size_t cells = 1;
    for (std::size_t i = 0; i < arity; ++i) {
        cells *= 3;
    }
    std::vector<Label> table(cells, kEq);
    std::vector<std::size_t> free;
    std::vector<std::size_t> partner(cells, cells);
    for (std::size_t c = 0; c < cells; ++c) {
        const auto in = decode(c, arity);
        const auto eqs = std::count(in.begin(), in.end(), kEq);
        if (eqs == 0) {
            table[c] = shape_value(shape, in);
        } else if (eqs < static_cast<long>(arity)) {
            std::vector<Label> fl(in);
            std::transform(fl.begin(), fl.end(), fl.begin(), flip);
            const std::size_t f = encode(fl);
            if (!oriented || c < f) {
                free.push_back(c);
                partner[c] = oriented ? f : cells;
            }
        }
    }
    NaiveSearch out;
    out.free_cells = free.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
        for (std::size_t i = 0; i < free.size(); ++i) {
            const Label v = (mask >> i) & 1 ? kBwd : kFwd;
            table[free[i]] = v;
            if (partner[free[i]] < cells) {
                table[partner[free[i]]] = flip(v);
            }
        }
        bool ok = true;
        for (const auto& [name, rel] : tmpl.relations) {
            if (!table_preserves(table, arity, rel)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            out.found = true;
            return out;
        }
    }
    return out;
}

// Compares the library's search log for a verdict with the enumeration
// above: found witnesses must preserve, NONE answers must carry a
// certificate the enumeration confirms.
void cross_check_searches(const HomTemplate& tmpl, const homog::Verdict& v, Check& check, const std::string& label) {
    for (const auto& [shape, search] : v.searches) {
        const auto naive = naive_behavior(tmpl, shape);
        const std::string what = label + " " + homog::to_string(shape);
        check.require(naive.found == search.behavior.has_value(), what + ": enumeration disagrees");
        if (search.behavior) {
            for (const auto& [name, rel] : tmpl.relations) {
                check.require(homog::behavior_preserves(*search.behavior, rel), what + ": witness fails " + name);
            }
        } else {
            check.require(search.exhaustive_certificate, what + ": NONE without certificate");
            check.require(search.free_cells == naive.free_cells, what + ": free cell count differs");
        }
    }
}

// ---------------------------------------------------------------------------

TemporalTemplate with_relation(const std::string& name, temporal::TemporalRelation rel) {
    auto t = gen::order_template();
    t.add(name, std::move(rel));
    return t;
}

bool preserved_by(const TemporalTemplate& t, TemporalOp op) {
    for (const auto& [name, rel] : t.relations()) {
        if (!temporal::preserves_temporal(op, rel)) {
            return false;
        }
    }
    return true;
}

std::vector<TemporalTemplate> discover_ll_templates(std::mt19937& rng, std::size_t want) {
    std::vector<TemporalTemplate> out;
    std::set<std::vector<temporal::WeakOrderType>> seen;
    for (int tries = 0; tries < 20000 && out.size() < want; ++tries) {
        const std::size_t arity = 2 + rng() % 2;
        const auto rel = gen::random_temporal_relation(rng, arity, 4);
        if (seen.count(rel.types()) || !temporal::preserves_temporal(TemporalOp::LL, rel) ||
            temporal::preserves_temporal(TemporalOp::PP, rel)) {
            continue;
        }
        seen.insert(rel.types());
        out.push_back(with_relation("R", rel));
    }
    return out;
}

Outcome criterion1() {
    const auto start = Clock::now();
    std::mt19937 rng(1001);
    std::vector<std::pair<std::string, TemporalTemplate>> templates{
        {"(Q;<)", gen::order_template()},
        {"R_min", with_relation("RMIN", gen::r_min())},
        {"<=", with_relation("LE", gen::less_equal())},
    };
    const auto discovered = discover_ll_templates(rng, 6);
    for (std::size_t i = 0; i < discovered.size(); ++i) {
        templates.emplace_back("ll#" + std::to_string(i + 1), discovered[i]);
    }
    Check check;
    check.require(discovered.size() >= kMinDiscoveredLl, "only " + std::to_string(discovered.size()) +
                                                              " ll templates discovered");
    long runs = 0;
    long sat = 0;
    for (const auto& [label, tmpl] : templates) {
        std::vector<MasterMode> modes;
        for (auto m : {MasterMode::PP, MasterMode::DualPP, MasterMode::LL, MasterMode::DualLL}) {
            if (preserved_by(tmpl, temporal::operation_of(m))) {
                modes.push_back(m);
            }
        }
        check.require(!modes.empty(), label + ": no master applies");
        for (int i = 0; i < kTemporalInstances; ++i) {
            const auto inst = gen::random_temporal_instance(rng, tmpl, kTemporalMaxVars, kTemporalMaxConstraints);
            const auto problem = temporal::TemporalProblem::bind(inst, tmpl);
            const auto expected = temporal::brute_oracle(problem);
            const auto naive = oracle::naive_temporal_solve(problem);
            check.require(expected.has_value() == naive.has_value(), label + ": brute oracles disagree");
            sat += expected.has_value();
            for (auto m : modes) {
                ++runs;
                const auto got = temporal::solve_master(problem, m);
                check.require(got.has_value() == expected.has_value(),
                              label + " " + temporal::to_string(m) + ": verdict differs");
                if (got) {
                    check.require(oracle::naive_satisfies(problem, got->ranks()),
                                  label + " " + temporal::to_string(m) + ": invalid witness");
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    check.require(elapsed < kRuntimeLimitSeconds, "runtime over limit");
    std::ostringstream s;
    s << templates.size() << " templates (" << discovered.size() << " discovered ll-only), " << runs
      << " master runs, " << sat << "/" << templates.size() * kTemporalInstances << " SAT, " << elapsed << " s";
    return {check.ok(), check.ok() ? s.str() : check.failures()};
}

Outcome criterion2() {
    const auto tmpl = with_relation("BETW", gen::betweenness());
    const auto betw = gen::betweenness();
    const auto verdict = temporal::classify_temporal(tmpl);
    Check check;
    check.require(verdict.np_complete, "not NP_COMPLETE");
    check.require(verdict.violations.size() == 4, "expected four violations");
    // The quoted definitions hold for the evaluator.
    for (long x = -5; x <= 0; ++x) {
        for (long y = -5; y <= 5; ++y) {
            check.require(oracle::concrete(TemporalOp::PP, x, y, 5) == x, "pp(x,y) != x for x <= 0");
        }
    }
    check.require(oracle::concrete(TemporalOp::LL, 0, 0, 5) == 0, "ll(0,0) != 0");
    for (const auto& [mode, entry] : verdict.violations) {
        const auto& [name, w] = entry;
        const auto values = oracle::realize(w.joint);
        const std::size_t k = w.first.arity();
        const std::vector<long> a(values.begin(), values.begin() + static_cast<long>(k));
        const std::vector<long> b(values.begin() + static_cast<long>(k), values.end());
        long bound = 0;
        for (auto v : values) {
            bound = std::max(bound, std::abs(v));
        }
        std::vector<long> image;
        for (std::size_t i = 0; i < k; ++i) {
            image.push_back(oracle::concrete(temporal::operation_of(mode), a[i], b[i], bound));
        }
        const auto tag = temporal::to_string(mode);
        const auto rel = tmpl.relation(name);
        check.require(oracle::relation_has(rel, oracle::ranks_of(a)), tag + ": a outside relation");
        check.require(oracle::relation_has(rel, oracle::ranks_of(b)), tag + ": b outside relation");
        check.require(!oracle::relation_has(rel, oracle::ranks_of(image)), tag + ": image inside relation");
        check.require(oracle::ranks_of(image) == w.image.ranks(), tag + ": image pattern differs");
    }
    return {check.ok(), check.ok() ? "NP_COMPLETE, 4 counterexamples re-evaluated on integers" : check.failures()};
}

Outcome criterion3() {
    const auto tmpl = gen::order_template();
    FiniteStructure expected(2);
    expected.add_relation("LT", 2, {{temporal::kZero, temporal::kPositive}, {temporal::kPositive, temporal::kPositive}});
    expected.add_relation(temporal::kZeroName, 1, {{temporal::kZero}});
    expected.add_relation(temporal::kPositiveName, 1, {{temporal::kPositive}});
    Check check;
    check.require(temporal::build_afin(tmpl) == expected, "A^fin differs");

    Instance inst({"x", "y"});
    inst.add_constraint("LT", std::vector<std::string>{"x", "y"});
    const auto fx = temporal::free_set_containing(inst, tmpl, "x");
    const auto fy = temporal::free_set_containing(inst, tmpl, "y");
    check.require(fx == temporal::VariableSet{0}, "free set of x is not {x}");
    check.require(!fy, "y lies in a free set");
    const auto problem = temporal::TemporalProblem::bind(inst, tmpl);
    const auto all = oracle::all_free_sets(problem);
    check.require(all == std::vector<std::uint32_t>{1}, "enumerated free sets are not exactly {x}");
    check.require(oracle::free_by_definition(problem, {0}), "{x} not free by definition");
    return {check.ok(), check.ok() ? "A^fin exact; free sets {x} / NONE confirmed by enumeration" : check.failures()};
}

Outcome criterion4() {
    std::mt19937 rng(1004);
    std::vector<TemporalTemplate> candidates{gen::order_template(), with_relation("RMIN", gen::r_min()),
                                             with_relation("LE", gen::less_equal())};
    for (int i = 0; i < 3000; ++i) {
        auto t = gen::order_template();
        t.add("R", gen::random_temporal_relation(rng, 1 + rng() % 3, 5));
        if (rng() % 2) {
            t.add("S", gen::random_temporal_relation(rng, 2 + rng() % 2, 4));
        }
        candidates.push_back(t);
    }
    Check check;
    int tested = 0;
    for (const auto& t : candidates) {
        if (!preserved_by(t, TemporalOp::LL)) {
            continue;
        }
        ++tested;
        // The semilattice acts as conjunction on "is the zero class".
        const auto afin = temporal::build_afin(t);
        const bool meet_on_zero = oracle::naive_preserves(afin, 2, [](std::span<const int> a) {
            const bool z0 = a[0] == temporal::kZero;
            const bool z1 = a[1] == temporal::kZero;
            return z0 && z1 ? temporal::kZero : temporal::kPositive;
        });
        check.require(meet_on_zero, "LL-preserved template without the semilattice on A^fin");
    }
    check.require(tested >= 20, "too few LL-preserved templates");
    return {check.ok(), check.ok() ? std::to_string(tested) +
                                         " LL-preserved templates; AND on the zero indicator (OR in the Z=0 "
                                         "encoding) preserves every A^fin"
                                   : check.failures()};
}

std::vector<HomTemplate> bounded_width_templates;

template <class Accept>
std::optional<HomTemplate> generate(std::mt19937& rng, BaseSpec base, int tries, Accept&& accept) {
    for (int i = 0; i < tries; ++i) {
        HomTemplate t{base, {}};
        t.add("R", gen::random_type_relation(rng, base, 3 + rng() % 2, 8, true));
        if (accept(t)) {
            return t;
        }
    }
    return std::nullopt;
}

Outcome criterion5() {
    std::mt19937 rng(1005);
    Check check;
    const auto arc = hom(kTournament, {{"ARC", {lt(2, {kFwd})}}});
    auto v = homog::classify_reduct(arc);
    check.require(v.kind == VerdictKind::PBoundedWidth && v.shape == Shape::TernaryMajority,
                  "(T;->) not P_BOUNDED_WIDTH by majority");
    cross_check_searches(arc, v, check, "(T;->)");
    bounded_width_templates.push_back(arc);

    HomTemplate parity{kTournament, {}};
    parity.add("P", even_parity(kTournament, 4));
    v = homog::classify_reduct(parity);
    check.require(v.kind == VerdictKind::PNotBoundedWidth && v.shape == Shape::TernaryMinority,
                  "parity not P_NOT_BOUNDED_WIDTH by minority");
    check.require(!v.searches.empty() && v.searches[0].first == Shape::TernaryMajority &&
                      !v.searches[0].second.behavior && v.searches[0].second.exhaustive_certificate,
                  "parity majority NONE not certified");
    cross_check_searches(parity, v, check, "parity");

    const auto hard = generate(rng, kTournament, 5000, [](const HomTemplate& t) {
        const auto verdict = homog::classify_reduct(t);
        return verdict.kind == VerdictKind::NpComplete && verdict.searches.size() == 2;
    });
    check.require(hard.has_value(), "no NP_COMPLETE tournament template generated");
    if (hard) {
        v = homog::classify_reduct(*hard);
        for (const auto& [shape, search] : v.searches) {
            check.require(!search.behavior && search.exhaustive_certificate,
                          "generated template: " + homog::to_string(shape) + " not certified NONE");
        }
        cross_check_searches(*hard, v, check, "generated");
    }
    return {check.ok(), check.ok() ? "(T;->) P_BOUNDED_WIDTH, parity P_NOT_BOUNDED_WIDTH, generated "
                                     "NP_COMPLETE; certificates confirmed by independent enumeration"
                                   : check.failures()};
}

Outcome criterion6() {
    std::mt19937 rng(1006);
    Check check;
    const auto e = hom(kGraph, {{"E", {lt(2, {kFwd})}}});
    const auto en = hom(kGraph, {{"E", {lt(2, {kFwd})}}, {"N", {lt(2, {kBwd})}}});
    for (const auto& [label, t] : {std::pair{"(G;E)", e}, std::pair{"(G;E,N)", en}}) {
        const auto v = homog::classify_reduct(t);
        check.require(v.kind == VerdictKind::PBoundedWidth, std::string(label) + " not P_BOUNDED_WIDTH");
        cross_check_searches(t, v, check, label);
        bounded_width_templates.push_back(t);
    }
    int generated = 0;
    for (auto kind : {VerdictKind::PNotBoundedWidth, VerdictKind::NpComplete}) {
        const auto t = generate(rng, kGraph, 20000,
                                [&](const HomTemplate& t) { return homog::classify_reduct(t).kind == kind; });
        check.require(t.has_value(), "no generated graph template for " + homog::to_string(kind));
        if (t) {
            ++generated;
            const auto v = homog::classify_reduct(*t);
            for (const auto& [shape, search] : v.searches) {
                if (!search.behavior) {
                    check.require(search.exhaustive_certificate, "uncertified NONE for " + homog::to_string(shape));
                }
            }
            cross_check_searches(*t, v, check, homog::to_string(kind));
        }
    }
    return {check.ok(), check.ok() ? "(G;E), (G;E,N) P_BOUNDED_WIDTH; generated P_NOT_BOUNDED_WIDTH and "
                                     "NP_COMPLETE with certificates confirmed by independent enumeration"
                                   : check.failures()};
}

Outcome criterion7() {
    const auto start = Clock::now();
    std::mt19937 rng(1007);
    Check check;
    check.require(bounded_width_templates.size() == 3, "expected three bounded-width templates");
    int unsat = 0;
    int escalated = 0;
    int total = 0;
    for (const auto& t : bounded_width_templates) {
        for (int i = 0; i < kWidthInstances; ++i) {
            const auto inst = gen::random_hom_instance(rng, t, kWidthMaxVars, 9);
            const bool sat = homog::solve_instance_brute(inst, t).has_value();
            check.require(sat == oracle::naive_hom_solve(inst, t), "brute solvers disagree");
            bool passes = homog::establish_kl(inst, t, 2, 3).has_value();
            if (passes && !sat) {
                ++escalated;
                passes = homog::establish_kl(inst, t, 3, 9).has_value();
            }
            check.require(passes == sat, passes ? "(3,9) passes on an UNSAT instance" : "consistency rejects SAT");
            unsat += !sat;
            ++total;
        }
    }
    const double elapsed = seconds_since(start);
    check.require(elapsed < kRuntimeLimitSeconds, "runtime over limit");
    std::ostringstream s;
    s << total << " instances, " << unsat << " UNSAT, " << escalated << " escalated to (3,9), " << elapsed << " s";
    return {check.ok(), check.ok() ? s.str() : check.failures()};
}

Outcome criterion8() {
    std::mt19937 rng(1008);
    Check check;
    int empty = 0;
    int sat_count = 0;
    const int per_base = kSoundnessInstances / 5;
    for (int i = 0; i < per_base; ++i) {
        auto tt = gen::order_template();
        tt.add("R", gen::random_temporal_relation(rng, 3, 6));
        const auto p = temporal::TemporalProblem::bind(gen::random_temporal_instance(rng, tt, 6, 7), tt);
        const bool sat = temporal::brute_oracle(p).has_value();
        const bool derived_empty = !temporal::establish_kl(p, 2, 3);
        check.require(!(derived_empty && sat), "temporal EMPTY_DERIVED on SAT");
        empty += derived_empty;
        sat_count += sat;
    }
    for (auto base : {kTournament, kGraph, BaseSpec{BaseKind::KFree, 3}}) {
        for (int i = 0; i < per_base; ++i) {
            HomTemplate t{base, {}};
            t.add("R", gen::random_type_relation(rng, base, 2, 3, false));
            t.add("S", gen::random_type_relation(rng, base, 3, 8, false));
            const auto inst = gen::random_hom_instance(rng, t, 6, 7);
            const bool sat = oracle::naive_hom_solve(inst, t);
            const bool derived_empty = !homog::establish_kl(inst, t, 2, 3);
            check.require(!(derived_empty && sat), std::string(base.oriented() ? "tournament" : "graph") + " EMPTY_DERIVED on SAT");
            empty += derived_empty;
            sat_count += sat;
        }
    }
    for (int i = 0; i < per_base; ++i) {
        const int d = 2 + static_cast<int>(rng() % 2);
        FiniteStructure s(d);
        for (const auto& [name, arity] : {std::pair{"R", 2}, std::pair{"S", 3}}) {
            std::set<Tuple> tuples;
            int size = 1;
            for (int j = 0; j < arity; ++j) {
                size *= d;
            }
            for (int c = 0; c < size; ++c) {
                if (rng() % 3 != 0) {
                    tuples.insert(decode_power_element(c, d, arity));
                }
            }
            s.add_relation(name, static_cast<std::size_t>(arity), tuples);
        }
        const auto inst = gen::random_instance(
            rng, {"R", "S"}, [](const std::string& n) { return n == "R" ? 2u : 3u; }, 6, 9);
        const bool sat = oracle::naive_hom(inst, s).has_value();
        const bool derived_empty = !establish_kl(inst, s, 2, 3);
        check.require(!(derived_empty && sat), "finite EMPTY_DERIVED on SAT");
        empty += derived_empty;
        sat_count += sat;
    }
    std::ostringstream o;
    o << kSoundnessInstances << " instances over 5 bases, " << sat_count << " SAT, " << empty
      << " EMPTY_DERIVED, 0 conflicts";
    return {check.ok(), check.ok() ? o.str() : check.failures()};
}

// Bipartiteness of the graph on {0,1}^m read off a 2m-ary relation.
bool has_odd_cycle(const std::set<Tuple>& edges, int m) {
    const int n = 1 << m;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    auto vertex = [&](const Tuple& t, int off) {
        int v = 0;
        for (int i = 0; i < m; ++i) {
            v = v * 2 + t[static_cast<std::size_t>(off + i)];
        }
        return v;
    };
    for (const auto& t : edges) {
        adj[static_cast<std::size_t>(vertex(t, 0))].push_back(vertex(t, m));
    }
    std::vector<int> color(static_cast<std::size_t>(n), -1);
    for (int s = 0; s < n; ++s) {
        if (color[static_cast<std::size_t>(s)] >= 0) continue;
        color[static_cast<std::size_t>(s)] = 0;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int w : adj[static_cast<std::size_t>(u)]) {
                if (color[static_cast<std::size_t>(w)] < 0) {
                    color[static_cast<std::size_t>(w)] = 1 - color[static_cast<std::size_t>(u)];
                    stack.push_back(w);
                } else if (color[static_cast<std::size_t>(w)] == color[static_cast<std::size_t>(u)]) {
                    return true;
                }
            }
        }
    }
    return false;
}

Outcome criterion9() {
    std::mt19937 rng(1009);
    Check check;
    int made = 0;
    int tries = 0;
    while (made < kBooleanTemplates && tries++ < 10000) {
        const int m = 2 + static_cast<int>(rng() % 2);
        const int n = 1 << m;
        std::set<Tuple> edges;
        for (int u = 0; u < n; ++u) {
            for (int w = u + 1; w < n; ++w) {
                if (rng() % 3 == 0) {
                    Tuple a = decode_power_element(u, 2, m);
                    Tuple b = decode_power_element(w, 2, m);
                    Tuple ab(a);
                    ab.insert(ab.end(), b.begin(), b.end());
                    Tuple ba(b);
                    ba.insert(ba.end(), a.begin(), a.end());
                    edges.insert(ab);
                    edges.insert(ba);
                }
            }
        }
        if (!has_odd_cycle(edges, m)) {
            continue;
        }
        FiniteStructure s(2);
        s.add_relation("C0", 1, {{0}});
        s.add_relation("C1", 1, {{1}});
        s.add_relation("G", static_cast<std::size_t>(2 * m), edges);
        ++made;
        check.require(boolean_classify(s) == std::set<BooleanClass>{BooleanClass::Trivial}, "not TRIVIAL");
        // Direct check that none of the four Taylor probes survives.
        check.require(!oracle::naive_preserves(s, 2, [](std::span<const int> a) { return a[0] & a[1]; }), "and");
        check.require(!oracle::naive_preserves(s, 2, [](std::span<const int> a) { return a[0] | a[1]; }), "or");
        check.require(!oracle::naive_preserves(
                          s, 3, [](std::span<const int> a) { return (a[0] & a[1]) | (a[0] & a[2]) | (a[1] & a[2]); }),
                      "majority");
        check.require(!oracle::naive_preserves(s, 3, [](std::span<const int> a) { return a[0] ^ a[1] ^ a[2]; }),
                      "minority");
    }
    check.require(made == kBooleanTemplates, "could not generate enough templates");
    return {check.ok(), check.ok() ? std::to_string(made) +
                                         " idempotent templates with a loopless non-bipartite symmetric relation "
                                         "on {0,1}^m (m = 2, 3): all TRIVIAL"
                                   : check.failures()};
}

std::set<Tuple> close_under(std::set<Tuple> rel, int arity, const std::function<int(std::span<const int>)>& f) {
    bool grew = true;
    while (grew) {
        grew = false;
        const std::vector<Tuple> list(rel.begin(), rel.end());
        std::vector<std::size_t> pick(static_cast<std::size_t>(arity), 0);
        while (true) {
            Tuple out;
            for (std::size_t p = 0; p < list[0].size(); ++p) {
                std::vector<int> args;
                for (auto i : pick) {
                    args.push_back(list[i][p]);
                }
                out.push_back(f(args));
            }
            grew |= rel.insert(out).second;
            std::size_t i = 0;
            while (i < pick.size() && ++pick[i] == list.size()) {
                pick[i++] = 0;
            }
            if (i == pick.size()) {
                break;
            }
        }
    }
    return rel;
}

Outcome criterion10() {
    std::mt19937 rng(1010);
    Check check;
    std::ostringstream summary;
    const std::vector<std::pair<BooleanClass, std::pair<int, std::function<int(std::span<const int>)>>>> classes{
        {BooleanClass::HornAnd, {2, [](std::span<const int> a) { return a[0] & a[1]; }}},
        {BooleanClass::Majority2Sat,
         {3, [](std::span<const int> a) { return (a[0] & a[1]) | (a[0] & a[2]) | (a[1] & a[2]); }}},
        {BooleanClass::MinorityAffine, {3, [](std::span<const int> a) { return a[0] ^ a[1] ^ a[2]; }}},
    };
    for (const auto& [cls, op] : classes) {
        int sat = 0;
        for (int i = 0; i < kSchaeferInstances; ++i) {
            FiniteStructure s(2);
            for (const auto& name : {"R", "S", "U"}) {
                const int arity = name[0] == 'U' ? 1 : 2 + static_cast<int>(rng() % 2);
                std::set<Tuple> seed;
                const int count = 1 + static_cast<int>(rng() % 3);
                for (int c = 0; c < count; ++c) {
                    seed.insert(decode_power_element(static_cast<int>(rng() % (1u << arity)), 2, arity));
                }
                s.add_relation(name, static_cast<std::size_t>(arity), close_under(seed, op.first, op.second));
            }
            const auto inst = gen::random_instance(
                rng, {"R", "S", "U"}, [&](const std::string& n) { return s.relation(n).arity; }, 8, 10);
            const auto got = schaefer_solve(inst, s, cls);
            const auto expected = hom_search(inst, s);
            check.require(got.has_value() == expected.has_value(), to_string(cls) + ": verdict differs");
            if (got) {
                check.require(satisfies(inst, s, *got), to_string(cls) + ": invalid assignment");
            }
            sat += expected.has_value();
        }
        summary << to_string(cls) << " " << sat << "/" << kSchaeferInstances << " SAT; ";
    }
    return {check.ok(), check.ok() ? summary.str() + "all agree with backtracking" : check.failures()};
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                         criterion6, criterion7, criterion8, criterion9, criterion10};
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all &= o.pass;
        std::printf("%s criterion %zu: %s\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
