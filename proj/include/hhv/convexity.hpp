#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hhv/expr.hpp"

namespace hhv {

struct SampleTriple {
    double x;
    double y;
    double t;

    friend bool operator==(const SampleTriple&, const SampleTriple&) = default;
};

/// Deterministic sampling of (x, y, t): an x/y lattice of `grid_x` points per
/// axis times a t lattice of `grid_t` points (odd, so 0, 1/2 and 1 are on
/// it), followed by `random` counter-based pseudo-random triples.
struct SamplePlan {
    std::size_t grid_x = 33;
    std::size_t grid_t = 17;
    std::size_t random = 4096;
    std::uint64_t seed = 0;

    void validate() const;

    std::size_t triple_count() const noexcept { return grid_x * grid_x * grid_t + random; }
    std::size_t pair_count() const noexcept { return grid_x * grid_x + random; }

    // i-th triple over `domain` (t always in [0, 1]).
    SampleTriple triple(const Interval& domain, std::size_t i) const;
    // i-th (x, y) pair with t fixed to 1/2, used by midconvexity.
    SampleTriple midpoint_pair(const Interval& domain, std::size_t i) const;
    double t_grid(std::size_t k) const noexcept;
};

/// Self map phi of `domain`, checked on a 257-point grid at construction.
class PhiMap {
public:
    PhiMap(Expr phi, Interval domain);
    static PhiMap identity(const Interval& domain);

    const Expr& phi() const noexcept { return phi_; }
    const Interval& domain() const noexcept { return domain_; }
    bool is_identity() const noexcept { return identity_; }

    // Evaluates phi(x); values within rounding of the domain are clamped,
    // anything further out throws PhiRangeViolated.
    double operator()(double x) const;

private:
    Expr phi_;
    Interval domain_;
    bool identity_ = false;
};

enum class ConvexityClass { convex, log_convex, phi_convex, log_phi_convex, log_phi_midconvex };
enum class Verdict { holds_on_samples, violated };
enum class FailureKind { none, inequality, domain };

const char* to_string(ConvexityClass c) noexcept;
const char* to_string(Verdict v) noexcept;
const char* to_string(FailureKind k) noexcept;

inline constexpr double default_tolerance = 1e-9;

struct ConvexityReport {
    ConvexityClass class_checked = ConvexityClass::convex;
    Verdict verdict = Verdict::holds_on_samples;
    std::size_t samples_tested = 0;
    // Smallest signed RHS - LHS seen; -infinity after a domain failure.
    double min_margin = 0.0;
    std::optional<SampleTriple> witness;
    std::optional<std::size_t> witness_index;
    FailureKind failure = FailureKind::none;
    std::string failure_detail;
    double tolerance = default_tolerance;

    bool holds() const noexcept { return verdict == Verdict::holds_on_samples; }
};

ConvexityReport check_convex(const Expr& f, const Interval& domain, const SamplePlan& plan = {},
                             double tolerance = default_tolerance);
ConvexityReport check_log_convex(const Expr& f, const Interval& domain, const SamplePlan& plan = {},
                                 double tolerance = default_tolerance);
ConvexityReport check_phi_convex(const Expr& f, const PhiMap& phi, const SamplePlan& plan = {},
                                 double tolerance = default_tolerance);
ConvexityReport check_log_phi_convex(const Expr& f, const PhiMap& phi, const SamplePlan& plan = {},
                                     double tolerance = default_tolerance);
ConvexityReport check_log_phi_midconvex(const Expr& f, const PhiMap& phi, const SamplePlan& plan = {},
                                        double tolerance = default_tolerance);

ConvexityReport check_class(ConvexityClass cls, const Expr& f, const PhiMap& phi, const SamplePlan& plan = {},
                            double tolerance = default_tolerance);

// Signed margin of a single sample, recomputed from scratch. Used to
// re-verify witnesses independently of the aggregation loop.
double sample_margin(ConvexityClass cls, const Expr& f, const PhiMap& phi, const SampleTriple& s);

struct LinkSummary {
    double min_margin = 0.0;
    Verdict verdict = Verdict::holds_on_samples;
    std::optional<SampleTriple> witness;
    std::optional<std::size_t> witness_index;
};

/// Margins of the three links
///   f(t u + (1-t) v) <= f(u)^t f(v)^(1-t) <= t f(u) + (1-t) f(v) <= max{f(u), f(v)}
/// with u = phi(x), v = phi(y), in linear space.
struct ImplicationReport {
    std::array<LinkSummary, 3> links;
    std::size_t samples_tested = 0;
    double tolerance = default_tolerance;
};

ImplicationReport check_implication_chain(const Expr& f, const PhiMap& phi, const SamplePlan& plan = {},
                                          double tolerance = default_tolerance);

struct EquivalenceReport {
    bool agree = true;
    std::size_t pairs_tested = 0;
    std::size_t samples_tested = 0;
    Verdict direct = Verdict::holds_on_samples;   // phi-class inequality on (x, y, t)
    Verdict induced = Verdict::holds_on_samples;  // classical class of g(t) on [0, 1]
    double direct_min_margin = 0.0;
    double induced_min_margin = 0.0;
    // (x, y) of the first pair whose induced g(t) verdict differs from the
    // direct verdict of the whole run; present iff !agree.
    std::optional<std::array<double, 2>> disagreeing_pair;
};

/// Compares membership in log-phi-convexity with log-convexity of every
/// g(t) = f(t phi(x) + (1-t) phi(y)) over `pair_count` seeded (x, y) pairs.
EquivalenceReport check_lemma_z_equivalence(const Expr& f, const PhiMap& phi, std::size_t pair_count,
                                            const SamplePlan& plan, std::uint64_t seed,
                                            double tolerance = default_tolerance);

/// Same comparison for phi-convexity versus classical convexity of g(t).
EquivalenceReport check_lemma_l_equivalence(const Expr& f, const PhiMap& phi, std::size_t pair_count,
                                            const SamplePlan& plan, std::uint64_t seed,
                                            double tolerance = default_tolerance);

}  // namespace hhv
