#include <gtest/gtest.h>

#include <cmath>

#include "hhv/convexity.hpp"
#include "hhv/errors.hpp"
#include "hhv/random.hpp"
#include "oracles.hpp"

using namespace hhv;

namespace {

const Interval unit(0.0, 1.0);
const Interval one_two(1.0, 2.0);

SamplePlan small_plan(std::uint64_t seed = 0) { return SamplePlan{9, 9, 256, seed}; }

// Independent re-evaluation of a witness, straight from the definitions.
double reference_margin(ConvexityClass cls, const Expr& f, const Expr& phi, const SampleTriple& s) {
    const bool deformed = cls != ConvexityClass::convex && cls != ConvexityClass::log_convex;
    const double u = deformed ? phi.eval(s.x) : s.x;
    const double v = deformed ? phi.eval(s.y) : s.y;
    const double t = cls == ConvexityClass::log_phi_midconvex ? 0.5 : s.t;
    const double z = t * u + (1 - t) * v;
    if (cls == ConvexityClass::convex || cls == ConvexityClass::phi_convex) {
        return t * f.eval(u) + (1 - t) * f.eval(v) - f.eval(z);
    }
    return t * std::log(f.eval(u)) + (1 - t) * std::log(f.eval(v)) - std::log(f.eval(z));
}

}  // namespace

TEST(SamplePlan, LatticeThenRandom) {
    const SamplePlan plan;
    EXPECT_EQ(plan.triple_count(), 33u * 33u * 17u + 4096u);
    EXPECT_EQ(plan.triple(unit, 0), (SampleTriple{0, 0, 0}));
    const SampleTriple last_lattice = plan.triple(unit, 33 * 33 * 17 - 1);
    EXPECT_EQ(last_lattice, (SampleTriple{1, 1, 1}));
    EXPECT_EQ(plan.t_grid(8), 0.5);
    for (std::size_t i = 33 * 33 * 17; i < plan.triple_count(); i += 97) {
        const SampleTriple s = plan.triple(one_two, i);
        EXPECT_TRUE(one_two.contains(s.x) && one_two.contains(s.y));
        EXPECT_GE(s.t, 0.0);
        EXPECT_LE(s.t, 1.0);
    }
}

TEST(SamplePlan, Validation) {
    EXPECT_THROW((SamplePlan{1, 17, 0, 0}.validate()), UsageError);
    EXPECT_THROW((SamplePlan{33, 16, 0, 0}.validate()), UsageError);
    EXPECT_THROW((SamplePlan{33, 1, 0, 0}.validate()), UsageError);
    EXPECT_NO_THROW((SamplePlan{2, 3, 0, 0}.validate()));
}

TEST(PhiMap, SelfMapChecked) {
    EXPECT_NO_THROW(PhiMap(parse("x^2"), unit));
    EXPECT_NO_THROW(PhiMap(parse("1 - x"), unit));
    EXPECT_THROW(PhiMap(parse("2*x"), unit), PhiRangeViolated);
    EXPECT_THROW(PhiMap(parse("x - 0.5"), unit), PhiRangeViolated);
    const PhiMap id = PhiMap::identity(one_two);
    EXPECT_TRUE(id.is_identity());
    EXPECT_EQ(id(1.25), 1.25);
}

TEST(CheckConvex, Examples) {
    const auto sq = check_convex(parse("x^2"), Interval(-1, 1));
    EXPECT_TRUE(sq.holds());
    EXPECT_GE(sq.min_margin, -1e-15);
    EXPECT_FALSE(sq.witness);

    const auto affine = check_convex(parse("2*x+3"), Interval(-4, 9));
    EXPECT_TRUE(affine.holds());
    EXPECT_NEAR(affine.min_margin, 0.0, 1e-13);
}

TEST(CheckConvex, SqrtIsViolated) {
    const Expr f = parse("sqrt(x)");
    const auto r = check_convex(f, unit);
    ASSERT_FALSE(r.holds());
    EXPECT_EQ(r.failure, FailureKind::inequality);
    ASSERT_TRUE(r.witness);
    // the named sample (0, 1, 1/2)
    EXPECT_NEAR(reference_margin(ConvexityClass::convex, f, f, {0, 1, 0.5}), 0.5 - std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(0.5 - std::sqrt(0.5), -0.20710678118654752, 1e-15);
    // min over the lattice: s - sqrt(s) has minimum -1/4 at s = 1/4, hit by (0, 1, 3/4)
    const double lattice_oracle = oracle::lattice_min(
        [&](double x, double y, double t) { return reference_margin(ConvexityClass::convex, f, f, {x, y, t}); }, 0,
        1, 33, 17);
    EXPECT_NEAR(lattice_oracle, -0.25, 1e-15);
    EXPECT_LE(r.min_margin, lattice_oracle);
    EXPECT_NEAR(reference_margin(ConvexityClass::convex, f, f, *r.witness), r.min_margin, 1e-15);
}

TEST(CheckConvex, DomainFailureIsFlagged) {
    const auto r = check_convex(parse("1/(x - 0.5)"), unit);
    EXPECT_FALSE(r.holds());
    EXPECT_EQ(r.failure, FailureKind::domain);
    ASSERT_TRUE(r.witness);
    EXPECT_TRUE(std::isinf(r.min_margin));
    EXPECT_FALSE(r.failure_detail.empty());
}

TEST(CheckLogConvex, Examples) {
    const auto ex = check_log_convex(parse("exp(x)"), unit);
    EXPECT_TRUE(ex.holds());
    EXPECT_LE(std::fabs(ex.min_margin), 1e-12);

    const Expr lin = parse("x");
    const auto r = check_log_convex(lin, one_two);
    ASSERT_FALSE(r.holds());
    // (1, 2, 1/2): ln(sqrt 2) - ln(1.5)
    const double at_half = reference_margin(ConvexityClass::log_convex, lin, lin, {1, 2, 0.5});
    EXPECT_NEAR(at_half, 0.5 * std::log(2.0) - std::log(1.5), 1e-15);
    EXPECT_NEAR(at_half, -0.0588915, 1e-6);
    EXPECT_LE(r.min_margin, at_half);
    EXPECT_NEAR(reference_margin(ConvexityClass::log_convex, lin, lin, *r.witness), r.min_margin, 1e-15);
}

TEST(CheckLogConvex, ExpOfSquareAgreesWithDenseOracle) {
    const Expr f = parse("exp(x^2)");
    const auto r = check_log_convex(f, Interval(-1, 1));
    EXPECT_TRUE(r.holds());
    const double dense = oracle::lattice_min(
        [&](double x, double y, double t) { return reference_margin(ConvexityClass::log_convex, f, f, {x, y, t}); },
        -1, 1, 61, 31);
    EXPECT_GE(dense, -1e-12);
}

TEST(CheckLogConvex, PositivityRequired) {
    try {
        check_log_convex(parse("x"), Interval(-1, 1));
        FAIL();
    } catch (const PositivityViolated& e) {
        EXPECT_EQ(e.x(), -1.0);
    }
}

TEST(CheckPhiConvex, IdentityReducesToClassical) {
    const PhiMap parsed_identity(parse("x"), unit);
    for (const char* text : {"x^2", "sqrt(x)", "exp(-x)", "x^3 - x", "abs(x - 0.3)"}) {
        const Expr f = parse(text);
        const auto classical = check_convex(f, unit, small_plan(5));
        const auto deformed = check_phi_convex(f, parsed_identity, small_plan(5));
        EXPECT_EQ(classical.verdict, deformed.verdict) << text;
        EXPECT_EQ(classical.min_margin, deformed.min_margin) << text;
        EXPECT_EQ(classical.witness, deformed.witness) << text;
    }
}

TEST(CheckPhiConvex, Examples) {
    const Expr f = parse("x^2");
    const PhiMap phi(parse("x^2"), unit);
    const auto r = check_phi_convex(f, phi);
    EXPECT_TRUE(r.holds());
    const double dense = oracle::lattice_min(
        [&](double x, double y, double t) {
            return reference_margin(ConvexityClass::phi_convex, f, phi.phi(), {x, y, t});
        },
        0, 1, 41, 21);
    EXPECT_GE(dense, -1e-15);

    const auto sq = check_phi_convex(parse("sqrt(x)"), PhiMap(parse("x"), unit));
    EXPECT_FALSE(sq.holds());
    EXPECT_EQ(sq.witness, check_convex(parse("sqrt(x)"), unit).witness);
}

TEST(CheckLogPhiConvex, Examples) {
    for (const char* phi_text : {"x", "x^2", "1 - x", "sqrt(x)"}) {
        const auto r = check_log_phi_convex(parse("exp(x)"), PhiMap(parse(phi_text), unit));
        EXPECT_TRUE(r.holds()) << phi_text;
        EXPECT_LE(std::fabs(r.min_margin), 1e-12) << phi_text;
    }
    const Expr lin = parse("x");
    const auto classical = check_log_convex(lin, one_two, small_plan(1));
    const auto deformed = check_log_phi_convex(lin, PhiMap(parse("x"), one_two), small_plan(1));
    EXPECT_EQ(classical.verdict, deformed.verdict);
    EXPECT_EQ(classical.witness, deformed.witness);
    EXPECT_FALSE(deformed.holds());
}

TEST(CheckLogPhiMidconvex, Examples) {
    const auto ex = check_log_phi_midconvex(parse("exp(x)"), PhiMap(parse("x"), unit));
    EXPECT_TRUE(ex.holds());
    EXPECT_LE(std::fabs(ex.min_margin), 1e-12);

    const Expr lin = parse("x");
    const auto r = check_log_phi_midconvex(lin, PhiMap(parse("x"), one_two));
    ASSERT_FALSE(r.holds());
    EXPECT_EQ(r.witness->t, 0.5);
    // the worst lattice pair is the full span (1, 2) or (2, 1): 1.5 > sqrt 2
    EXPECT_NEAR(r.min_margin, 0.5 * std::log(2.0) - std::log(1.5), 1e-15);
    EXPECT_EQ(r.samples_tested, SamplePlan{}.pair_count());
}

TEST(CheckLogPhiMidconvex, WeakerThanFullClass) {
    const SamplePlan plan = small_plan(9);
    for (const char* text : {"exp(x^2)", "exp(x) + 1", "1/(x + 0.1)", "exp(-x^2)", "x + 0.5"}) {
        const Expr f = parse(text);
        const PhiMap phi(parse("x^2"), unit);
        if (check_log_phi_convex(f, phi, plan).holds()) {
            EXPECT_TRUE(check_log_phi_midconvex(f, phi, plan).holds()) << text;
        }
    }
}

TEST(Implication, LinksTwoAndThreeAlwaysHold) {
    const SamplePlan plan = small_plan(3);
    for (const char* text : {"x + 1", "x + 0.1", "exp(-3*x)", "1 + 0.5*abs(x - 0.3)", "2 - x^2"}) {
        const auto r = check_implication_chain(parse(text), PhiMap(parse("x^2"), unit), plan, 1e-12);
        EXPECT_TRUE(r.links[1].verdict == Verdict::holds_on_samples) << text;
        EXPECT_TRUE(r.links[2].verdict == Verdict::holds_on_samples) << text;
    }
}

TEST(Implication, Examples) {
    const auto ex = check_implication_chain(parse("exp(x)"), PhiMap(parse("x"), unit));
    for (const auto& link : ex.links) EXPECT_EQ(link.verdict, Verdict::holds_on_samples);
    EXPECT_NEAR(ex.links[0].min_margin, 0.0, 1e-14);

    const auto lin = check_implication_chain(parse("x"), PhiMap(parse("x"), one_two));
    EXPECT_EQ(lin.links[0].verdict, Verdict::violated);
    EXPECT_EQ(lin.links[1].verdict, Verdict::holds_on_samples);
    EXPECT_EQ(lin.links[2].verdict, Verdict::holds_on_samples);
    ASSERT_TRUE(lin.links[0].witness);
}

TEST(LemmaZ, Examples) {
    const auto agree = check_lemma_z_equivalence(parse("exp(x)"), PhiMap(parse("x^2"), unit), 100, small_plan(), 7);
    EXPECT_TRUE(agree.agree);
    EXPECT_EQ(agree.direct, Verdict::holds_on_samples);
    EXPECT_EQ(agree.induced, Verdict::holds_on_samples);
    EXPECT_EQ(agree.pairs_tested, 100u);

    const auto both_violated = check_lemma_z_equivalence(parse("x"), PhiMap(parse("x"), one_two), 20, small_plan(), 7);
    EXPECT_TRUE(both_violated.agree);
    EXPECT_EQ(both_violated.direct, Verdict::violated);
    EXPECT_EQ(both_violated.induced, Verdict::violated);

    const auto empty = check_lemma_z_equivalence(parse("x"), PhiMap(parse("x"), one_two), 0, small_plan(), 7);
    EXPECT_TRUE(empty.agree);
    EXPECT_EQ(empty.samples_tested, 0u);
}

TEST(LemmaL, Examples) {
    const auto convex = check_lemma_l_equivalence(parse("x^2"), PhiMap(parse("sqrt(x)"), unit), 30, small_plan(), 1);
    EXPECT_TRUE(convex.agree);
    EXPECT_EQ(convex.direct, Verdict::holds_on_samples);
    const auto concave = check_lemma_l_equivalence(parse("sqrt(x)"), PhiMap(parse("x^2"), unit), 30, small_plan(), 1);
    EXPECT_TRUE(concave.agree);
    EXPECT_EQ(concave.direct, Verdict::violated);
}

TEST(ConvexityProperty, Determinism) {
    const Expr f = parse("exp(x^2) - 0.5*x");
    const PhiMap phi(parse("x^3"), Interval(-1, 1));
    const auto first = check_log_phi_convex(f, phi, SamplePlan{17, 9, 500, 99});
    const auto second = check_log_phi_convex(f, phi, SamplePlan{17, 9, 500, 99});
    EXPECT_EQ(first.min_margin, second.min_margin);
    EXPECT_EQ(first.witness, second.witness);
    EXPECT_EQ(first.witness_index, second.witness_index);
    EXPECT_EQ(first.samples_tested, second.samples_tested);
}

TEST(ConvexityProperty, WitnessesReverifyIndependently) {
    const CounterRng rng(31);
    for (std::uint64_t i = 0; i < 40; ++i) {
        const double c2 = rng.uniform(-2, 2, 1, i);
        const double c1 = rng.uniform(-2, 2, 2, i);
        const Expr f = parse("exp(" + std::to_string(c2) + "*x^2 + " + std::to_string(c1) + "*x) + 0.1*x");
        const PhiMap phi(parse("x^2"), unit);
        for (ConvexityClass cls : {ConvexityClass::convex, ConvexityClass::log_convex, ConvexityClass::phi_convex,
                                   ConvexityClass::log_phi_convex, ConvexityClass::log_phi_midconvex}) {
            const auto r = check_class(cls, f, phi, small_plan(i));
            if (!r.holds()) {
                ASSERT_TRUE(r.witness);
                EXPECT_LT(reference_margin(cls, f, phi.phi(), *r.witness), -r.tolerance);
            }
        }
    }
}

TEST(ConvexityProperty, MonotoneFalsification) {
    // More samples can only lower the minimum margin.
    for (const char* text : {"sqrt(x + 0.01)", "exp(x^2)", "x^3", "exp(-x) + x^4"}) {
        const Expr f = parse(text);
        const auto few = check_convex(f, unit, SamplePlan{5, 5, 50, 4});
        const auto many = check_convex(f, unit, SamplePlan{5, 5, 5000, 4});
        EXPECT_LE(many.min_margin, few.min_margin) << text;
        if (!few.holds()) EXPECT_FALSE(many.holds()) << text;
    }
}

TEST(ConvexityProperty, WeightedAmGmUnconditional) {
    const CounterRng rng(41);
    for (std::uint64_t i = 0; i < 30; ++i) {
        const std::string text = std::to_string(rng.uniform(0.1, 3, 1, i)) + " + " +
                                 std::to_string(rng.uniform(-2, 2, 2, i)) + "*x^2*" +
                                 std::to_string(rng.uniform(0, 0.09, 3, i)) + " + abs(x - " +
                                 std::to_string(rng.uniform(0, 1, 4, i)) + ")";
        const auto r = check_implication_chain(parse(text), PhiMap(parse("1 - x^3"), unit), small_plan(i), 1e-12);
        EXPECT_EQ(r.links[1].verdict, Verdict::holds_on_samples) << text;
        EXPECT_GE(r.links[1].min_margin, -1e-12) << text;
    }
}
