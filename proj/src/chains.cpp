#include "hhv/chains.hpp"

#include <algorithm>
#include <cmath>

#include "hhv/errors.hpp"
#include "hhv/format.hpp"
#include "hhv/means.hpp"

namespace hhv {

namespace {

constexpr double degenerate_phi_gap = 1e-12;

template <class Fn>
double term(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (Error& e) {
        e.add_context(std::string("term ") + name);
        throw;
    }
}

double positive_value(const Expr& f, double x) {
    const double v = f.eval(x);
    if (!(v > 0.0)) throw PositivityViolated(x, "f=" + format_real(v));
    return v;
}

void require_positive(const Expr& f, const Interval& domain, const char* which) {
    if (auto pos = check_positive(f, domain); !pos) {
        PositivityViolated err(*pos.witness, pos.reason);
        err.add_context(which);
        throw err;
    }
}

void require_options(const ChainOptions& opts) {
    if (!(opts.quad_tol > 0.0)) throw UsageError("quad-tol must be positive");
    if (!(opts.tolerance > 0.0)) throw UsageError("tolerance must be positive");
}

ChainReport start(ChainId id, const ChainOptions& opts, double lower, double upper) {
    ChainReport r;
    r.chain_id = id;
    r.tolerance = opts.tolerance;
    r.quad_tol = opts.quad_tol;
    r.lower = lower;
    r.upper = upper;
    return r;
}

struct PhiEndpoints {
    double phi_a;
    double phi_b;
    Interval ordered;
};

PhiEndpoints phi_endpoints(const PhiMap& phi, ChainReport* report) {
    const double pa = phi(phi.domain().a());
    const double pb = phi(phi.domain().b());
    if (std::fabs(pb - pa) < degenerate_phi_gap) throw DegeneratePhi(pa, pb);
    if (pa > pb && report) {
        report->notes.push_back("phi(a) > phi(b): integrated over [phi(b), phi(a)]");
    }
    return {pa, pb, Interval(std::min(pa, pb), std::max(pa, pb))};
}

}  // namespace

const char* to_string(ChainId id) noexcept {
    switch (id) {
        case ChainId::classic_hh: return "classic_hh";
        case ChainId::dragomir_mond: return "dragomir_mond";
        case ChainId::theorem1: return "theorem1";
        case ChainId::theorem2: return "theorem2";
    }
    return "?";
}

const char* to_string(ChainVerdict v) noexcept {
    return v == ChainVerdict::chain_holds ? "chain_holds" : "link_violated";
}

void finalize_chain(ChainReport& report) {
    report.pair_margins.clear();
    report.violated_links.clear();
    for (std::size_t i = 0; i + 1 < report.terms.size(); ++i) {
        const double m = report.terms[i + 1].value - report.terms[i].value;
        report.pair_margins.push_back(m);
        if (m < -report.tolerance) report.violated_links.push_back(i);
    }
    report.verdict = report.violated_links.empty() ? ChainVerdict::chain_holds : ChainVerdict::link_violated;
}

ChainReport eval_classic_hh(const Expr& f, const Interval& domain, const ChainOptions& opts) {
    require_options(opts);
    ChainReport r = start(ChainId::classic_hh, opts, domain.a(), domain.b());
    const double mid = term("f_midpoint", [&] { return f.eval(domain.midpoint()); });
    const double mean = term("mean_f", [&] { return mean_value(f, domain, opts.quad_tol); });
    const double avg = term("arith_mean_endpoints", [&] { return 0.5 * f.eval(domain.a()) + 0.5 * f.eval(domain.b()); });
    r.terms = {{"f_midpoint", mid}, {"mean_f", mean}, {"arith_mean_endpoints", avg}};
    finalize_chain(r);
    return r;
}

ChainReport eval_dragomir_mond(const Expr& f, const Interval& domain, const ChainOptions& opts) {
    require_options(opts);
    require_positive(f, domain, "f");
    ChainReport r = start(ChainId::dragomir_mond, opts, domain.a(), domain.b());
    const double a = domain.a();
    const double b = domain.b();
    const double s = a + b;

    const double t1 = term("f_midpoint", [&] { return positive_value(f, domain.midpoint()); });
    const double t2 = term("exp_mean_log_f", [&] {
        return std::exp(mean_value([&](double x) { return std::log(positive_value(f, x)); }, domain, opts.quad_tol));
    });
    const double t3 = term("mean_geometric_reflection", [&] {
        return mean_value(
            [&](double x) { return means::geometric(positive_value(f, x), positive_value(f, s - x)); }, domain,
            opts.quad_tol);
    });
    const double t4 = term("mean_f", [&] { return mean_value(f, domain, opts.quad_tol); });
    const double fa = term("log_mean_endpoints", [&] { return positive_value(f, a); });
    const double fb = term("log_mean_endpoints", [&] { return positive_value(f, b); });
    const double t5 = means::logarithmic(fa, fb);
    const double t6 = means::arithmetic(fa, fb);

    r.terms = {{"f_midpoint", t1},         {"exp_mean_log_f", t2},     {"mean_geometric_reflection", t3},
               {"mean_f", t4},             {"log_mean_endpoints", t5}, {"arith_mean_endpoints", t6}};
    finalize_chain(r);
    return r;
}

ChainReport eval_theorem1(const Expr& f, const PhiMap& phi, const ChainOptions& opts) {
    require_options(opts);
    require_positive(f, phi.domain(), "f");
    ChainReport r = start(ChainId::theorem1, opts, 0.0, 0.0);
    const PhiEndpoints ends = phi_endpoints(phi, &r);
    r.lower = ends.ordered.a();
    r.upper = ends.ordered.b();
    const double s = ends.phi_a + ends.phi_b;

    const double t1 = term("f_midpoint", [&] { return positive_value(f, 0.5 * s); });
    const double t2 = term("mean_geometric_reflection", [&] {
        return mean_value(
            [&](double x) { return means::geometric(positive_value(f, x), positive_value(f, s - x)); },
            ends.ordered, opts.quad_tol);
    });
    const double t3 = term("mean_f", [&] { return mean_value(f, ends.ordered, opts.quad_tol); });
    const double f_pa = term("log_mean_endpoints", [&] { return positive_value(f, ends.phi_a); });
    const double f_pb = term("log_mean_endpoints", [&] { return positive_value(f, ends.phi_b); });
    const double t4 = means::logarithmic(f_pb, f_pa);
    const double t5 = means::arithmetic(f_pa, f_pb);

    r.terms = {{"f_midpoint", t1},
               {"mean_geometric_reflection", t2},
               {"mean_f", t3},
               {"log_mean_endpoints", t4},
               {"arith_mean_endpoints", t5}};

    if (opts.diagnostics) {
        const double am = term("mean_arith_reflection", [&] {
            return mean_value(
                [&](double x) { return means::arithmetic(positive_value(f, x), positive_value(f, s - x)); },
                ends.ordered, opts.quad_tol);
        });
        r.diagnostics.push_back({"mean_arith_reflection", am});
        r.diagnostic_margins.push_back({"mean_arith_reflection - mean_geometric_reflection", am - t2});
    }
    finalize_chain(r);
    return r;
}

ChainReport eval_theorem2(const Expr& f, const Expr& g, const PhiMap& phi, const ChainOptions& opts) {
    require_options(opts);
    require_positive(f, phi.domain(), "f");
    require_positive(g, phi.domain(), "g");
    ChainReport r = start(ChainId::theorem2, opts, 0.0, 0.0);
    const PhiEndpoints ends = phi_endpoints(phi, &r);
    r.lower = ends.ordered.a();
    r.upper = ends.ordered.b();

    const double t1 = term("mean_fg", [&] {
        return mean_value([&](double x) { return f.eval(x) * g.eval(x); }, ends.ordered, opts.quad_tol);
    });
    const double f_pa = term("endpoints", [&] { return positive_value(f, ends.phi_a); });
    const double f_pb = term("endpoints", [&] { return positive_value(f, ends.phi_b); });
    const double g_pa = term("endpoints", [&] { return positive_value(g, ends.phi_a); });
    const double g_pb = term("endpoints", [&] { return positive_value(g, ends.phi_b); });
    const double t2 = means::logarithmic(f_pb * g_pb, f_pa * g_pa);
    const double t3 = 0.25 * (f_pb + f_pa) * means::logarithmic(f_pb, f_pa) +
                      0.25 * (g_pb + g_pa) * means::logarithmic(g_pb, g_pa);

    r.terms = {{"mean_fg", t1}, {"log_mean_fg_endpoints", t2}, {"quarter_sum_bound", t3}};

    if (opts.diagnostics) {
        const double half_sq = term("half_mean_sq_sum", [&] {
            return 0.5 * mean_value(
                             [&](double x) {
                                 const double fx = f.eval(x);
                                 const double gx = g.eval(x);
                                 return fx * fx + gx * gx;
                             },
                             ends.ordered, opts.quad_tol);
        });
        r.diagnostics.push_back({"half_mean_sq_sum", half_sq});
        r.diagnostic_margins.push_back({"half_mean_sq_sum - log_mean_fg_endpoints", half_sq - t2});
        r.diagnostic_margins.push_back({"quarter_sum_bound - half_mean_sq_sum", t3 - half_sq});
    }
    finalize_chain(r);
    return r;
}

}  // namespace hhv
