#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "hhv/chains.hpp"
#include "hhv/convexity.hpp"
#include "hhv/expr.hpp"

namespace hhv {

enum class Family { exp_of_poly, positive_poly, affine_exp, power };

const char* to_string(Family f) noexcept;

/// Seeded description of a family of positive candidate functions.
///
/// exp_of_poly    exp(c_d x^d + ... + c_0), c_i uniform in [coeff_lo, coeff_hi]
/// positive_poly  c_d x^d + ... + c_0, c_i uniform in (0, coeff_hi]
/// affine_exp     alpha exp(beta x) + gamma, alpha in (0, coeff_hi],
///                beta in [coeff_lo, coeff_hi], gamma in [0, coeff_hi]
/// power          x^r, r uniform in [coeff_lo, coeff_hi] clipped to [-3, 3]
struct FamilySpec {
    Family family = Family::exp_of_poly;
    int degree_bound = 1;
    double coeff_lo = -1.0;
    double coeff_hi = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

inline constexpr int max_generation_attempts = 32;

/// Deterministic in (spec, domain); the result is positive on every point of
/// the 257-point positivity grid of `domain`.
Expr generate(const FamilySpec& spec, const Interval& domain);

/// Monotone self map of `domain`: a normalized positive-coefficient
/// polynomial of degree `degree_bound` rescaled to [a, b], increasing or
/// decreasing depending on the seed.
PhiMap generate_phi(const FamilySpec& spec, const Interval& domain);

enum class TargetKind {
    convex,
    log_convex,
    phi_convex,
    log_phi_convex,
    log_phi_midconvex,
    classic_hh,
    dragomir_mond,
    theorem1,
    theorem2,
};

const char* to_string(TargetKind t) noexcept;

struct CheckTarget {
    TargetKind kind = TargetKind::log_convex;
    SamplePlan plan;
    double tolerance = default_tolerance;
    ChainOptions chain;
};

struct SearchWitness {
    std::size_t trial = 0;
    std::string f_text;
    std::string g_text;    // theorem2 only
    std::string phi_text;  // "x" when phi is the identity
    std::optional<SampleTriple> triple;
    std::optional<ChainReport> chain;
    double margin = 0.0;  // most negative margin observed
};

struct SearchOutcome {
    bool found = false;
    std::optional<SearchWitness> witness;
    std::size_t trials = 0;
    std::size_t skipped = 0;
    std::map<std::string, std::size_t> skip_reasons;
    std::uint64_t seed = 0;
};

/// Runs `target` against seeded candidates until a violation appears or
/// `budget` trials are used. `phi_spec` empty means phi is the identity.
/// Candidates whose evaluation fails are counted as skipped trials.
SearchOutcome find_counterexample(const CheckTarget& target, const FamilySpec& f_spec,
                                  const std::optional<FamilySpec>& phi_spec, const Interval& domain,
                                  std::size_t budget, std::uint64_t seed);

/// Re-runs the target on the witness functions from scratch and reports
/// whether the violation reproduces.
bool reverify_witness(const CheckTarget& target, const SearchWitness& witness, const Interval& domain);

}  // namespace hhv
