#include "hhv/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hhv/errors.hpp"
#include "hhv/format.hpp"
#include "hhv/random.hpp"

namespace hhv {

namespace {

constexpr std::uint64_t stream_triples = 1;
constexpr std::uint64_t stream_pairs = 2;
constexpr std::uint64_t stream_lemma_pairs = 3;
constexpr std::size_t phi_check_grid = 256;  // 257 points

// ln f(z), insisting on positivity at every evaluated point.
template <class F>
double positive_log(const F& f, double z) {
    const double v = f(z);
    if (!(v > 0.0)) throw PositivityViolated(z, "f=" + format_real(v));
    return std::log(v);
}

template <class F>
double convex_margin(const F& f, double u, double v, double t) {
    const double z = t * u + (1.0 - t) * v;
    return t * f(u) + (1.0 - t) * f(v) - f(z);
}

template <class F>
double log_convex_margin(const F& f, double u, double v, double t) {
    const double z = t * u + (1.0 - t) * v;
    return t * positive_log(f, u) + (1.0 - t) * positive_log(f, v) - positive_log(f, z);
}

bool is_log_class(ConvexityClass c) {
    return c == ConvexityClass::log_convex || c == ConvexityClass::log_phi_convex ||
           c == ConvexityClass::log_phi_midconvex;
}

// Runs `margin_at(i)` for i in [0, count) and folds the results. Ties in the
// minimum keep the smallest sample index so the witness does not depend on
// evaluation order.
template <class SampleAt, class MarginAt>
ConvexityReport aggregate(ConvexityClass cls, std::size_t count, double tolerance, const SampleAt& sample_at,
                          const MarginAt& margin_at) {
    ConvexityReport report;
    report.class_checked = cls;
    report.tolerance = tolerance;
    report.min_margin = std::numeric_limits<double>::infinity();

    std::size_t argmin = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const SampleTriple s = sample_at(i);
        double m = 0.0;
        try {
            m = margin_at(s);
        } catch (const DomainError& e) {
            report.samples_tested = i + 1;
            report.verdict = Verdict::violated;
            report.failure = FailureKind::domain;
            report.failure_detail = e.what();
            report.min_margin = -std::numeric_limits<double>::infinity();
            report.witness = s;
            report.witness_index = i;
            return report;
        } catch (const OverflowError& e) {
            report.samples_tested = i + 1;
            report.verdict = Verdict::violated;
            report.failure = FailureKind::domain;
            report.failure_detail = e.what();
            report.min_margin = -std::numeric_limits<double>::infinity();
            report.witness = s;
            report.witness_index = i;
            return report;
        }
        if (m < report.min_margin) {
            report.min_margin = m;
            argmin = i;
        }
    }
    report.samples_tested = count;
    if (count == 0) report.min_margin = 0.0;
    if (report.min_margin < -tolerance) {
        report.verdict = Verdict::violated;
        report.failure = FailureKind::inequality;
        report.witness = sample_at(argmin);
        report.witness_index = argmin;
    }
    return report;
}

void require_positive(const Expr& f, const Interval& domain) {
    if (auto pos = check_positive(f, domain); !pos) throw PositivityViolated(*pos.witness, pos.reason);
}

void require_tolerance(double tolerance) {
    if (!(tolerance > 0.0)) throw UsageError("tolerance must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------
// SamplePlan

void SamplePlan::validate() const {
    if (grid_x < 2) throw UsageError("grid-x must be at least 2");
    if (grid_t < 3 || grid_t % 2 == 0) throw UsageError("grid-t must be odd and at least 3 so that 0, 1/2, 1 are sampled");
}

double SamplePlan::t_grid(std::size_t k) const noexcept {
    if (k == 0) return 0.0;
    if (k + 1 >= grid_t) return 1.0;
    return static_cast<double>(k) / static_cast<double>(grid_t - 1);
}

SampleTriple SamplePlan::triple(const Interval& domain, std::size_t i) const {
    const std::size_t lattice = grid_x * grid_x * grid_t;
    if (i < lattice) {
        const std::size_t it = i % grid_t;
        const std::size_t iy = (i / grid_t) % grid_x;
        const std::size_t ix = i / (grid_t * grid_x);
        return {domain.grid_point(ix, grid_x - 1), domain.grid_point(iy, grid_x - 1), t_grid(it)};
    }
    const CounterRng rng(seed);
    const std::size_t j = i - lattice;
    return {rng.uniform(domain.a(), domain.b(), stream_triples, j, 0),
            rng.uniform(domain.a(), domain.b(), stream_triples, j, 1), rng.uniform(stream_triples, j, 2)};
}

SampleTriple SamplePlan::midpoint_pair(const Interval& domain, std::size_t i) const {
    const std::size_t lattice = grid_x * grid_x;
    if (i < lattice) {
        return {domain.grid_point(i / grid_x, grid_x - 1), domain.grid_point(i % grid_x, grid_x - 1), 0.5};
    }
    const CounterRng rng(seed);
    const std::size_t j = i - lattice;
    return {rng.uniform(domain.a(), domain.b(), stream_pairs, j, 0),
            rng.uniform(domain.a(), domain.b(), stream_pairs, j, 1), 0.5};
}

// ---------------------------------------------------------------------------
// PhiMap

PhiMap::PhiMap(Expr phi, Interval domain) : phi_(std::move(phi)), domain_(domain) {
    for (std::size_t i = 0; i <= phi_check_grid; ++i) (void)(*this)(domain_.grid_point(i, phi_check_grid));
}

PhiMap PhiMap::identity(const Interval& domain) {
    PhiMap map(Expr::variable(), domain);
    map.identity_ = true;
    return map;
}

double PhiMap::operator()(double x) const {
    if (identity_) return x;
    const double v = phi_.eval(x);
    if (domain_.contains(v)) return v;
    const double slack = 1e-12 * std::max({1.0, std::fabs(domain_.a()), std::fabs(domain_.b())});
    if (v >= domain_.a() - slack && v <= domain_.b() + slack) return std::clamp(v, domain_.a(), domain_.b());
    throw PhiRangeViolated(x, v, domain_.a(), domain_.b());
}

// ---------------------------------------------------------------------------
// names

const char* to_string(ConvexityClass c) noexcept {
    switch (c) {
        case ConvexityClass::convex: return "convex";
        case ConvexityClass::log_convex: return "log_convex";
        case ConvexityClass::phi_convex: return "phi_convex";
        case ConvexityClass::log_phi_convex: return "log_phi_convex";
        case ConvexityClass::log_phi_midconvex: return "log_phi_midconvex";
    }
    return "?";
}

const char* to_string(Verdict v) noexcept {
    return v == Verdict::holds_on_samples ? "holds_on_samples" : "violated";
}

const char* to_string(FailureKind k) noexcept {
    switch (k) {
        case FailureKind::none: return "none";
        case FailureKind::inequality: return "inequality";
        case FailureKind::domain: return "domain";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// certifiers

double sample_margin(ConvexityClass cls, const Expr& f, const PhiMap& phi, const SampleTriple& s) {
    const auto fe = [&f](double z) { return f.eval(z); };
    const bool deformed = cls == ConvexityClass::phi_convex || cls == ConvexityClass::log_phi_convex ||
                          cls == ConvexityClass::log_phi_midconvex;
    const double u = deformed ? phi(s.x) : s.x;
    const double v = deformed ? phi(s.y) : s.y;
    const double t = cls == ConvexityClass::log_phi_midconvex ? 0.5 : s.t;
    return is_log_class(cls) ? log_convex_margin(fe, u, v, t) : convex_margin(fe, u, v, t);
}

ConvexityReport check_class(ConvexityClass cls, const Expr& f, const PhiMap& phi, const SamplePlan& plan,
                            double tolerance) {
    plan.validate();
    require_tolerance(tolerance);
    const Interval& domain = phi.domain();
    if (is_log_class(cls)) require_positive(f, domain);

    const auto margin = [&](const SampleTriple& s) { return sample_margin(cls, f, phi, s); };
    if (cls == ConvexityClass::log_phi_midconvex) {
        return aggregate(
            cls, plan.pair_count(), tolerance, [&](std::size_t i) { return plan.midpoint_pair(domain, i); },
            margin);
    }
    return aggregate(
        cls, plan.triple_count(), tolerance, [&](std::size_t i) { return plan.triple(domain, i); }, margin);
}

ConvexityReport check_convex(const Expr& f, const Interval& domain, const SamplePlan& plan, double tolerance) {
    return check_class(ConvexityClass::convex, f, PhiMap::identity(domain), plan, tolerance);
}

ConvexityReport check_log_convex(const Expr& f, const Interval& domain, const SamplePlan& plan,
                                 double tolerance) {
    return check_class(ConvexityClass::log_convex, f, PhiMap::identity(domain), plan, tolerance);
}

ConvexityReport check_phi_convex(const Expr& f, const PhiMap& phi, const SamplePlan& plan, double tolerance) {
    return check_class(ConvexityClass::phi_convex, f, phi, plan, tolerance);
}

ConvexityReport check_log_phi_convex(const Expr& f, const PhiMap& phi, const SamplePlan& plan,
                                     double tolerance) {
    return check_class(ConvexityClass::log_phi_convex, f, phi, plan, tolerance);
}

ConvexityReport check_log_phi_midconvex(const Expr& f, const PhiMap& phi, const SamplePlan& plan,
                                        double tolerance) {
    return check_class(ConvexityClass::log_phi_midconvex, f, phi, plan, tolerance);
}

// ---------------------------------------------------------------------------
// implication chain

ImplicationReport check_implication_chain(const Expr& f, const PhiMap& phi, const SamplePlan& plan,
                                          double tolerance) {
    plan.validate();
    require_tolerance(tolerance);
    require_positive(f, phi.domain());

    ImplicationReport report;
    report.tolerance = tolerance;
    std::array<std::size_t, 3> argmin{};
    for (auto& link : report.links) link.min_margin = std::numeric_limits<double>::infinity();

    const auto positive = [&f](double z) {
        const double v = f.eval(z);
        if (!(v > 0.0)) throw PositivityViolated(z, "f=" + format_real(v));
        return v;
    };

    const std::size_t count = plan.triple_count();
    for (std::size_t i = 0; i < count; ++i) {
        const SampleTriple s = plan.triple(phi.domain(), i);
        const double u = phi(s.x);
        const double v = phi(s.y);
        const double fu = positive(u);
        const double fv = positive(v);
        const double fz = positive(s.t * u + (1.0 - s.t) * v);
        const double geometric = std::pow(fu, s.t) * std::pow(fv, 1.0 - s.t);
        const double convex_comb = s.t * fu + (1.0 - s.t) * fv;
        const std::array<double, 3> margins{geometric - fz, convex_comb - geometric,
                                            std::max(fu, fv) - convex_comb};
        for (std::size_t k = 0; k < 3; ++k) {
            if (margins[k] < report.links[k].min_margin) {
                report.links[k].min_margin = margins[k];
                argmin[k] = i;
            }
        }
    }
    report.samples_tested = count;
    for (std::size_t k = 0; k < 3; ++k) {
        auto& link = report.links[k];
        if (count == 0) link.min_margin = 0.0;
        if (link.min_margin < -tolerance) {
            link.verdict = Verdict::violated;
            link.witness = plan.triple(phi.domain(), argmin[k]);
            link.witness_index = argmin[k];
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// lemma equivalence checks

namespace {

EquivalenceReport lemma_equivalence(bool log_class, const Expr& f, const PhiMap& phi, std::size_t pair_count,
                                    const SamplePlan& plan, std::uint64_t seed, double tolerance) {
    plan.validate();
    require_tolerance(tolerance);
    if (log_class) require_positive(f, phi.domain());

    const Interval& domain = phi.domain();
    const Interval unit(0.0, 1.0);
    const CounterRng rng(seed);
    const auto fe = [&f](double z) { return f.eval(z); };
    const auto margin = [&](const auto& fn, double u, double v, double t) {
        return log_class ? log_convex_margin(fn, u, v, t) : convex_margin(fn, u, v, t);
    };
    const ConvexityClass induced_class = log_class ? ConvexityClass::log_convex : ConvexityClass::convex;

    EquivalenceReport report;
    report.direct_min_margin = std::numeric_limits<double>::infinity();
    report.induced_min_margin = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> first_induced_violation;
    std::size_t direct_argmin = 0;
    std::vector<std::array<double, 2>> pairs;
    pairs.reserve(pair_count);

    for (std::size_t p = 0; p < pair_count; ++p) {
        const double x = rng.uniform(domain.a(), domain.b(), stream_lemma_pairs, p, 0);
        const double y = rng.uniform(domain.a(), domain.b(), stream_lemma_pairs, p, 1);
        pairs.push_back({x, y});
        const double u = phi(x);
        const double v = phi(y);

        // Direct: the phi-class inequality on (x, y, t) for every lattice t.
        for (std::size_t k = 0; k < plan.grid_t; ++k) {
            const double m = margin(fe, u, v, plan.t_grid(k));
            if (m < report.direct_min_margin) {
                report.direct_min_margin = m;
                direct_argmin = p;
            }
        }

        // Induced: classical class membership of g on [0, 1]. The g lattice
        // contains (t1, t2) = (1, 0), so every direct sample is matched.
        const auto g = [&](double s) { return f.eval(s * u + (1.0 - s) * v); };
        const ConvexityReport r = aggregate(
            induced_class, plan.triple_count(), tolerance, [&](std::size_t i) { return plan.triple(unit, i); },
            [&](const SampleTriple& s) { return margin(g, s.x, s.y, s.t); });
        if (r.failure == FailureKind::domain) throw NumericError("domain_error", r.failure_detail);
        report.induced_min_margin = std::min(report.induced_min_margin, r.min_margin);
        if (!r.holds() && !first_induced_violation) first_induced_violation = p;
        report.samples_tested += plan.grid_t + r.samples_tested;
    }

    report.pairs_tested = pair_count;
    if (pair_count == 0) {
        report.direct_min_margin = 0.0;
        report.induced_min_margin = 0.0;
    }
    report.direct = report.direct_min_margin < -tolerance ? Verdict::violated : Verdict::holds_on_samples;
    report.induced = first_induced_violation ? Verdict::violated : Verdict::holds_on_samples;
    report.agree = report.direct == report.induced;
    if (!report.agree) {
        report.disagreeing_pair = pairs[first_induced_violation ? *first_induced_violation : direct_argmin];
    }
    return report;
}

}  // namespace

EquivalenceReport check_lemma_z_equivalence(const Expr& f, const PhiMap& phi, std::size_t pair_count,
                                            const SamplePlan& plan, std::uint64_t seed, double tolerance) {
    return lemma_equivalence(true, f, phi, pair_count, plan, seed, tolerance);
}

EquivalenceReport check_lemma_l_equivalence(const Expr& f, const PhiMap& phi, std::size_t pair_count,
                                            const SamplePlan& plan, std::uint64_t seed, double tolerance) {
    return lemma_equivalence(false, f, phi, pair_count, plan, seed, tolerance);
}

}  // namespace hhv
