#include "hhv/search.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hhv/errors.hpp"
#include "hhv/format.hpp"
#include "hhv/random.hpp"

namespace hhv {

namespace {

constexpr std::uint64_t stream_f = 1;
constexpr std::uint64_t stream_g = 2;
constexpr std::uint64_t stream_phi = 3;

// Highest power first; coefficients indexed by power.
std::string poly_text(const std::vector<double>& coeffs, const std::string& var) {
    std::string out;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        const double c = coeffs[k];
        if (out.empty()) {
            if (c < 0.0) out += "-";
        } else {
            out += c < 0.0 ? " - " : " + ";
        }
        out += format_real(std::fabs(c));
        if (k >= 1) out += "*" + var;
        if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
}

std::string signed_text(double v) {
    return v < 0.0 ? "(" + format_real(v) + ")" : format_real(v);
}

std::string candidate_text(const FamilySpec& spec, const CounterRng& rng, std::uint64_t attempt) {
    const auto family_stream = static_cast<std::uint64_t>(spec.family) + 16;
    const auto draw = [&](double lo, double hi, std::uint64_t lane) {
        return rng.uniform(lo, hi, family_stream, attempt, lane);
    };
    // (0, hi]
    const auto draw_positive = [&](double hi, std::uint64_t lane) {
        return hi * (1.0 - rng.uniform(family_stream, attempt, lane));
    };
    const auto degree = static_cast<std::size_t>(spec.degree_bound);

    switch (spec.family) {
        case Family::exp_of_poly: {
            std::vector<double> c(degree + 1);
            for (std::size_t k = 0; k <= degree; ++k) c[k] = draw(spec.coeff_lo, spec.coeff_hi, k);
            return "exp(" + poly_text(c, "x") + ")";
        }
        case Family::positive_poly: {
            std::vector<double> c(degree + 1);
            for (std::size_t k = 0; k <= degree; ++k) c[k] = draw_positive(spec.coeff_hi, k);
            return poly_text(c, "x");
        }
        case Family::affine_exp: {
            const double alpha = draw_positive(spec.coeff_hi, 0);
            const double beta = draw(spec.coeff_lo, spec.coeff_hi, 1);
            const double gamma = draw(0.0, spec.coeff_hi, 2);
            return format_real(alpha) + "*exp(" + signed_text(beta) + "*x) + " + format_real(gamma);
        }
        case Family::power: {
            const double lo = std::max(spec.coeff_lo, -3.0);
            const double hi = std::min(spec.coeff_hi, 3.0);
            return "x^" + signed_text(draw(lo, hi, 0));
        }
    }
    throw UsageError("unknown family");
}

Expr build_witness_expr(const std::string& text) { return Expr::parse(text); }

PhiMap build_phi(const std::string& text, const Interval& domain) {
    if (text == "x") return PhiMap::identity(domain);
    return PhiMap(Expr::parse(text), domain);
}

std::optional<ConvexityClass> as_class(TargetKind k) {
    switch (k) {
        case TargetKind::convex: return ConvexityClass::convex;
        case TargetKind::log_convex: return ConvexityClass::log_convex;
        case TargetKind::phi_convex: return ConvexityClass::phi_convex;
        case TargetKind::log_phi_convex: return ConvexityClass::log_phi_convex;
        case TargetKind::log_phi_midconvex: return ConvexityClass::log_phi_midconvex;
        default: return std::nullopt;
    }
}

bool uses_phi(TargetKind k) {
    return k == TargetKind::phi_convex || k == TargetKind::log_phi_convex || k == TargetKind::log_phi_midconvex ||
           k == TargetKind::theorem1 || k == TargetKind::theorem2;
}

ChainReport run_chain(const CheckTarget& target, const Expr& f, const Expr* g, const PhiMap& phi,
                      const Interval& domain) {
    switch (target.kind) {
        case TargetKind::classic_hh: return eval_classic_hh(f, domain, target.chain);
        case TargetKind::dragomir_mond: return eval_dragomir_mond(f, domain, target.chain);
        case TargetKind::theorem1: return eval_theorem1(f, phi, target.chain);
        case TargetKind::theorem2: return eval_theorem2(f, *g, phi, target.chain);
        default: throw UsageError("target is not a chain");
    }
}

double min_margin(const ChainReport& r) {
    if (r.pair_margins.empty()) return 0.0;
    return *std::min_element(r.pair_margins.begin(), r.pair_margins.end());
}

}  // namespace

const char* to_string(Family f) noexcept {
    switch (f) {
        case Family::exp_of_poly: return "exp_of_poly";
        case Family::positive_poly: return "positive_poly";
        case Family::affine_exp: return "affine_exp";
        case Family::power: return "power";
    }
    return "?";
}

const char* to_string(TargetKind t) noexcept {
    switch (t) {
        case TargetKind::convex: return "convex";
        case TargetKind::log_convex: return "log_convex";
        case TargetKind::phi_convex: return "phi_convex";
        case TargetKind::log_phi_convex: return "log_phi_convex";
        case TargetKind::log_phi_midconvex: return "log_phi_midconvex";
        case TargetKind::classic_hh: return "classic_hh";
        case TargetKind::dragomir_mond: return "dragomir_mond";
        case TargetKind::theorem1: return "theorem1";
        case TargetKind::theorem2: return "theorem2";
    }
    return "?";
}

void FamilySpec::validate() const {
    if (degree_bound < 0 || degree_bound > 12) throw UsageError("degree bound must be in [0, 12]");
    if (!std::isfinite(coeff_lo) || !std::isfinite(coeff_hi) || coeff_lo > coeff_hi) {
        throw UsageError("coefficient range must be finite with lo <= hi");
    }
    if ((family == Family::positive_poly || family == Family::affine_exp) && !(coeff_hi > 0.0)) {
        throw UsageError(std::string(to_string(family)) + " needs a positive upper coefficient bound");
    }
    if (family == Family::power && (coeff_hi < -3.0 || coeff_lo > 3.0)) {
        throw UsageError("power exponents are restricted to [-3, 3]");
    }
}

Expr generate(const FamilySpec& spec, const Interval& domain) {
    spec.validate();
    const CounterRng rng(spec.seed);
    for (int attempt = 0; attempt < max_generation_attempts; ++attempt) {
        Expr candidate = Expr::parse(candidate_text(spec, rng, static_cast<std::uint64_t>(attempt)));
        if (check_positive(candidate, domain)) return candidate;
    }
    throw GenerationExhausted(to_string(spec.family), max_generation_attempts);
}

PhiMap generate_phi(const FamilySpec& spec, const Interval& domain) {
    const CounterRng rng(spec.seed);
    const auto degree = static_cast<std::size_t>(std::max(1, spec.degree_bound));

    std::vector<double> w(degree + 1, 0.0);
    double total = 0.0;
    for (std::size_t k = 1; k <= degree; ++k) {
        w[k] = 1.0 - rng.uniform(stream_phi, 0, k);
        total += w[k];
    }
    for (double& c : w) c /= total;

    const bool decreasing = (rng.bits(stream_phi, 1) & 1U) != 0;
    const bool unit = domain.a() == 0.0 && domain.b() == 1.0;
    const std::string s = unit ? "x" : "((x - " + signed_text(domain.a()) + ") / " + format_real(domain.width()) + ")";

    // No constant term, so phi(a) = a (or b when decreasing).
    std::string q;
    for (std::size_t k = degree; k >= 1; --k) {
        if (!q.empty()) q += " + ";
        q += format_real(w[k]) + "*" + s;
        if (k >= 2) q += "^" + std::to_string(k);
    }

    std::string text;
    if (unit) {
        text = decreasing ? "1 - (" + q + ")" : q;
    } else if (decreasing) {
        text = signed_text(domain.b()) + " - " + format_real(domain.width()) + "*(" + q + ")";
    } else {
        text = signed_text(domain.a()) + " + " + format_real(domain.width()) + "*(" + q + ")";
    }
    return PhiMap(Expr::parse(text), domain);
}

SearchOutcome find_counterexample(const CheckTarget& target, const FamilySpec& f_spec,
                                  const std::optional<FamilySpec>& phi_spec, const Interval& domain,
                                  std::size_t budget, std::uint64_t seed) {
    if (budget < 1) throw UsageError("search budget must be at least 1");
    f_spec.validate();
    target.plan.validate();

    SearchOutcome out;
    out.seed = seed;
    const CounterRng rng(seed);
    const auto class_kind = as_class(target.kind);

    for (std::size_t trial = 0; trial < budget; ++trial) {
        out.trials = trial + 1;
        try {
            FamilySpec fs = f_spec;
            fs.seed = rng.derive(stream_f, trial);
            const Expr f = generate(fs, domain);

            std::optional<Expr> g;
            if (target.kind == TargetKind::theorem2) {
                FamilySpec gs = f_spec;
                gs.seed = rng.derive(stream_g, trial);
                g = generate(gs, domain);
            }

            std::optional<PhiMap> phi;
            if (phi_spec && uses_phi(target.kind)) {
                FamilySpec ps = *phi_spec;
                ps.seed = rng.derive(stream_phi, trial);
                phi = generate_phi(ps, domain);
            } else {
                phi = PhiMap::identity(domain);
            }

            SearchWitness w;
            w.trial = trial;
            w.f_text = f.source();
            w.g_text = g ? g->source() : std::string();
            w.phi_text = phi->is_identity() ? "x" : phi->phi().source();

            if (class_kind) {
                const ConvexityReport r = check_class(*class_kind, f, *phi, target.plan, target.tolerance);
                if (r.failure == FailureKind::domain) {
                    ++out.skipped;
                    ++out.skip_reasons["domain_error"];
                    continue;
                }
                if (!r.holds()) {
                    w.triple = r.witness;
                    w.margin = r.min_margin;
                    out.found = true;
                    out.witness = std::move(w);
                    return out;
                }
            } else {
                ChainReport r = run_chain(target, f, g ? &*g : nullptr, *phi, domain);
                if (!r.holds()) {
                    w.margin = min_margin(r);
                    w.chain = std::move(r);
                    out.found = true;
                    out.witness = std::move(w);
                    return out;
                }
            }
        } catch (const NumericError& e) {
            ++out.skipped;
            ++out.skip_reasons[e.code()];
        }
    }
    return out;
}

bool reverify_witness(const CheckTarget& target, const SearchWitness& witness, const Interval& domain) {
    const Expr f = build_witness_expr(witness.f_text);
    const PhiMap phi = build_phi(witness.phi_text, domain);
    if (const auto cls = as_class(target.kind)) {
        if (!witness.triple) return false;
        return sample_margin(*cls, f, phi, *witness.triple) < -target.tolerance;
    }
    std::optional<Expr> g;
    if (target.kind == TargetKind::theorem2) g = build_witness_expr(witness.g_text);
    return !run_chain(target, f, g ? &*g : nullptr, phi, domain).holds();
}

}  // namespace hhv
