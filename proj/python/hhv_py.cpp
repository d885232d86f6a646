#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "hhv/chains.hpp"
#include "hhv/cli.hpp"
#include "hhv/convexity.hpp"
#include "hhv/errors.hpp"
#include "hhv/means.hpp"
#include "hhv/quadrature.hpp"
#include "hhv/search.hpp"

namespace py = pybind11;
using namespace hhv;

namespace {

std::optional<std::tuple<double, double, double>> as_tuple(const std::optional<SampleTriple>& s) {
    if (!s) return std::nullopt;
    return std::make_tuple(s->x, s->y, s->t);
}

ConvexityClass class_from(const std::string& name) {
    if (name == "convex") return ConvexityClass::convex;
    if (name == "log-convex" || name == "log_convex") return ConvexityClass::log_convex;
    if (name == "phi-convex" || name == "phi_convex") return ConvexityClass::phi_convex;
    if (name == "log-phi-convex" || name == "log_phi_convex") return ConvexityClass::log_phi_convex;
    if (name == "log-phi-midconvex" || name == "log_phi_midconvex") return ConvexityClass::log_phi_midconvex;
    throw UsageError("unknown class '" + name + "'", "invalid_argument");
}

Family family_from(const std::string& name) {
    if (name == "exp-of-poly" || name == "exp_of_poly") return Family::exp_of_poly;
    if (name == "positive-poly" || name == "positive_poly") return Family::positive_poly;
    if (name == "affine-exp" || name == "affine_exp") return Family::affine_exp;
    if (name == "power") return Family::power;
    throw UsageError("unknown family '" + name + "'", "invalid_argument");
}

TargetKind target_from(const std::string& name) {
    for (TargetKind k : {TargetKind::convex, TargetKind::log_convex, TargetKind::phi_convex, TargetKind::log_phi_convex,
                         TargetKind::log_phi_midconvex, TargetKind::classic_hh, TargetKind::dragomir_mond,
                         TargetKind::theorem1, TargetKind::theorem2}) {
        std::string canon = to_string(k);
        std::string dashed = canon;
        for (char& c : dashed) c = c == '_' ? '-' : c;
        if (name == canon || name == dashed) return k;
    }
    throw UsageError("unknown target '" + name + "'", "invalid_argument");
}

py::dict outcome_dict(const SearchOutcome& s, const CheckTarget& target, const Interval& domain) {
    py::dict d;
    d["found"] = s.found;
    d["trials"] = s.trials;
    d["skipped"] = s.skipped;
    d["skip_reasons"] = s.skip_reasons;
    d["seed"] = s.seed;
    if (s.witness) {
        const SearchWitness& w = *s.witness;
        py::dict wd;
        wd["trial"] = w.trial;
        wd["f"] = w.f_text;
        wd["g"] = w.g_text;
        wd["phi"] = w.phi_text;
        wd["triple"] = as_tuple(w.triple);
        wd["margin"] = w.margin;
        wd["reverified"] = reverify_witness(target, w, domain);
        d["witness"] = wd;
    } else {
        d["witness"] = py::none();
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_hhv, m) {
    m.doc() = "C++ core of hhv";
    m.attr("__version__") = cli::tool_version();

    static py::exception<UsageError> usage_exc(m, "UsageError", PyExc_ValueError);
    static py::exception<NumericError> numeric_exc(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const UsageError& e) {
            usage_exc(e.what());
        } catch (const NumericError& e) {
            numeric_exc(e.what());
        }
    });

    py::class_<Interval>(m, "Interval")
        .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
        .def_property_readonly("a", &Interval::a)
        .def_property_readonly("b", &Interval::b)
        .def_property_readonly("width", &Interval::width)
        .def("__repr__", [](const Interval& i) {
            std::ostringstream os;
            os << "Interval(" << i.a() << ", " << i.b() << ")";
            return os.str();
        });

    py::class_<Expr>(m, "Expr")
        .def(py::init([](const std::string& text) { return Expr::parse(text); }), py::arg("text"))
        .def("__call__", &Expr::eval, py::arg("x"))
        .def("eval", &Expr::eval, py::arg("x"))
        .def_property_readonly("source", &Expr::source)
        .def("serialize", &Expr::serialize)
        .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; })
        .def("__repr__", [](const Expr& e) { return "Expr('" + e.source() + "')"; });
    m.def("parse", [](const std::string& text) { return Expr::parse(text); }, py::arg("text"));

    m.def(
        "integrate",
        [](const py::object& f, const Interval& domain, double tol, int max_depth) {
            QuadratureResult r;
            if (py::isinstance<Expr>(f)) {
                r = integrate(Integrand([e = f.cast<Expr>()](double x) { return e.eval(x); }), domain,
                              QuadratureOptions{tol, max_depth});
            } else {
                r = integrate(f.cast<Integrand>(), domain, QuadratureOptions{tol, max_depth});
            }
            return py::make_tuple(r.value, r.error_estimate, r.evaluations);
        },
        py::arg("f"), py::arg("domain"), py::arg("tol") = default_quad_tol, py::arg("max_depth") = 50,
        "Adaptive Simpson integral; returns (value, error_estimate, evaluations).");
    m.def(
        "mean_value",
        [](const Expr& f, const Interval& domain, double tol) { return mean_value(f, domain, tol); }, py::arg("f"),
        py::arg("domain"), py::arg("tol") = default_quad_tol);

    m.def("arithmetic_mean", py::overload_cast<double, double>(&means::arithmetic), py::arg("p"), py::arg("q"));
    m.def("geometric_mean", py::overload_cast<double, double>(&means::geometric), py::arg("p"), py::arg("q"));
    m.def("logarithmic_mean", py::overload_cast<double, double>(&means::logarithmic), py::arg("p"), py::arg("q"));

    py::class_<SamplePlan>(m, "SamplePlan")
        .def(py::init([](std::size_t gx, std::size_t gt, std::size_t random, std::uint64_t seed) {
                 SamplePlan p{gx, gt, random, seed};
                 p.validate();
                 return p;
             }),
             py::arg("grid_x") = 33, py::arg("grid_t") = 17, py::arg("random") = 4096, py::arg("seed") = 0)
        .def_readonly("grid_x", &SamplePlan::grid_x)
        .def_readonly("grid_t", &SamplePlan::grid_t)
        .def_readonly("random", &SamplePlan::random)
        .def_readonly("seed", &SamplePlan::seed)
        .def_property_readonly("triple_count", &SamplePlan::triple_count);

    py::class_<PhiMap>(m, "PhiMap")
        .def(py::init<Expr, Interval>(), py::arg("phi"), py::arg("domain"))
        .def(py::init([](const std::string& text, const Interval& d) { return PhiMap(Expr::parse(text), d); }),
             py::arg("phi"), py::arg("domain"))
        .def_static("identity", &PhiMap::identity, py::arg("domain"))
        .def("__call__", &PhiMap::operator(), py::arg("x"))
        .def_property_readonly("domain", &PhiMap::domain)
        .def_property_readonly("is_identity", &PhiMap::is_identity);

    py::class_<ConvexityReport>(m, "ConvexityReport")
        .def_property_readonly("class_checked", [](const ConvexityReport& r) { return to_string(r.class_checked); })
        .def_property_readonly("verdict", [](const ConvexityReport& r) { return to_string(r.verdict); })
        .def_property_readonly("holds", &ConvexityReport::holds)
        .def_readonly("samples_tested", &ConvexityReport::samples_tested)
        .def_readonly("min_margin", &ConvexityReport::min_margin)
        .def_property_readonly("witness", [](const ConvexityReport& r) { return as_tuple(r.witness); })
        .def_property_readonly("failure", [](const ConvexityReport& r) { return to_string(r.failure); })
        .def_readonly("failure_detail", &ConvexityReport::failure_detail)
        .def_readonly("tolerance", &ConvexityReport::tolerance);

    py::class_<ImplicationReport>(m, "ImplicationReport")
        .def_readonly("samples_tested", &ImplicationReport::samples_tested)
        .def_property_readonly("link_margins",
                               [](const ImplicationReport& r) {
                                   return std::vector<double>{r.links[0].min_margin, r.links[1].min_margin,
                                                              r.links[2].min_margin};
                               })
        .def_property_readonly("link_verdicts", [](const ImplicationReport& r) {
            return std::vector<std::string>{to_string(r.links[0].verdict), to_string(r.links[1].verdict),
                                            to_string(r.links[2].verdict)};
        });

    py::class_<EquivalenceReport>(m, "EquivalenceReport")
        .def_readonly("agree", &EquivalenceReport::agree)
        .def_readonly("pairs_tested", &EquivalenceReport::pairs_tested)
        .def_readonly("samples_tested", &EquivalenceReport::samples_tested)
        .def_property_readonly("direct", [](const EquivalenceReport& r) { return to_string(r.direct); })
        .def_property_readonly("induced", [](const EquivalenceReport& r) { return to_string(r.induced); })
        .def_readonly("direct_min_margin", &EquivalenceReport::direct_min_margin)
        .def_readonly("induced_min_margin", &EquivalenceReport::induced_min_margin);

    py::class_<ChainReport>(m, "ChainReport")
        .def_property_readonly("chain_id", [](const ChainReport& r) { return to_string(r.chain_id); })
        .def_property_readonly("verdict", [](const ChainReport& r) { return to_string(r.verdict); })
        .def_property_readonly("holds", &ChainReport::holds)
        .def_property_readonly("terms",
                               [](const ChainReport& r) {
                                   std::vector<std::pair<std::string, double>> out;
                                   for (const auto& t : r.terms) out.emplace_back(t.name, t.value);
                                   return out;
                               })
        .def_readonly("margins", &ChainReport::pair_margins)
        .def_readonly("violated_links", &ChainReport::violated_links)
        .def_property_readonly("diagnostics",
                               [](const ChainReport& r) {
                                   std::vector<std::pair<std::string, double>> out;
                                   for (const auto& t : r.diagnostics) out.emplace_back(t.name, t.value);
                                   for (const auto& t : r.diagnostic_margins) out.emplace_back(t.name, t.value);
                                   return out;
                               })
        .def_readonly("notes", &ChainReport::notes)
        .def_property_readonly("interval", [](const ChainReport& r) { return std::make_pair(r.lower, r.upper); });

    const auto plan_default = SamplePlan{};
    m.def("check_convex", &check_convex, py::arg("f"), py::arg("domain"), py::arg("plan") = plan_default,
          py::arg("tolerance") = default_tolerance);
    m.def("check_log_convex", &check_log_convex, py::arg("f"), py::arg("domain"), py::arg("plan") = plan_default,
          py::arg("tolerance") = default_tolerance);
    m.def("check_phi_convex", &check_phi_convex, py::arg("f"), py::arg("phi"), py::arg("plan") = plan_default,
          py::arg("tolerance") = default_tolerance);
    m.def("check_log_phi_convex", &check_log_phi_convex, py::arg("f"), py::arg("phi"),
          py::arg("plan") = plan_default, py::arg("tolerance") = default_tolerance);
    m.def("check_log_phi_midconvex", &check_log_phi_midconvex, py::arg("f"), py::arg("phi"),
          py::arg("plan") = plan_default, py::arg("tolerance") = default_tolerance);
    m.def(
        "check_class",
        [](const std::string& cls, const Expr& f, const PhiMap& phi, const SamplePlan& plan, double tol) {
            return check_class(class_from(cls), f, phi, plan, tol);
        },
        py::arg("cls"), py::arg("f"), py::arg("phi"), py::arg("plan") = plan_default,
        py::arg("tolerance") = default_tolerance);
    m.def("check_implication_chain", &check_implication_chain, py::arg("f"), py::arg("phi"),
          py::arg("plan") = plan_default, py::arg("tolerance") = default_tolerance);
    m.def("check_lemma_z_equivalence", &check_lemma_z_equivalence, py::arg("f"), py::arg("phi"),
          py::arg("pair_count") = 16, py::arg("plan") = plan_default, py::arg("seed") = 0,
          py::arg("tolerance") = default_tolerance);
    m.def("check_lemma_l_equivalence", &check_lemma_l_equivalence, py::arg("f"), py::arg("phi"),
          py::arg("pair_count") = 16, py::arg("plan") = plan_default, py::arg("seed") = 0,
          py::arg("tolerance") = default_tolerance);

    const auto chain_opts = [](double quad_tol, double tol, bool diagnostics) {
        return ChainOptions{quad_tol, tol, diagnostics};
    };
    m.def(
        "eval_classic_hh",
        [=](const Expr& f, const Interval& d, double qt, double tol, bool diag) {
            return eval_classic_hh(f, d, chain_opts(qt, tol, diag));
        },
        py::arg("f"), py::arg("domain"), py::arg("quad_tol") = default_quad_tol,
        py::arg("tolerance") = default_chain_tolerance, py::arg("diagnostics") = false);
    m.def(
        "eval_dragomir_mond",
        [=](const Expr& f, const Interval& d, double qt, double tol, bool diag) {
            return eval_dragomir_mond(f, d, chain_opts(qt, tol, diag));
        },
        py::arg("f"), py::arg("domain"), py::arg("quad_tol") = default_quad_tol,
        py::arg("tolerance") = default_chain_tolerance, py::arg("diagnostics") = false);
    m.def(
        "eval_theorem1",
        [=](const Expr& f, const PhiMap& phi, double qt, double tol, bool diag) {
            return eval_theorem1(f, phi, chain_opts(qt, tol, diag));
        },
        py::arg("f"), py::arg("phi"), py::arg("quad_tol") = default_quad_tol,
        py::arg("tolerance") = default_chain_tolerance, py::arg("diagnostics") = false);
    m.def(
        "eval_theorem2",
        [=](const Expr& f, const Expr& g, const PhiMap& phi, double qt, double tol, bool diag) {
            return eval_theorem2(f, g, phi, chain_opts(qt, tol, diag));
        },
        py::arg("f"), py::arg("g"), py::arg("phi"), py::arg("quad_tol") = default_quad_tol,
        py::arg("tolerance") = default_chain_tolerance, py::arg("diagnostics") = false);

    m.def(
        "find_counterexample",
        [](const std::string& target_name, const std::string& family, int degree, double coeff_lo, double coeff_hi,
           const Interval& domain, std::size_t budget, std::uint64_t seed, std::optional<int> phi_degree,
           const SamplePlan& plan) {
            CheckTarget target;
            target.kind = target_from(target_name);
            target.plan = plan;
            const FamilySpec f_spec{family_from(family), degree, coeff_lo, coeff_hi, 0};
            std::optional<FamilySpec> phi_spec;
            if (phi_degree) phi_spec = FamilySpec{Family::positive_poly, *phi_degree, 0.0, 1.0, 0};
            const SearchOutcome s = find_counterexample(target, f_spec, phi_spec, domain, budget, seed);
            return outcome_dict(s, target, domain);
        },
        py::arg("target"), py::arg("family"), py::arg("degree") = 1, py::arg("coeff_lo") = -1.0,
        py::arg("coeff_hi") = 1.0, py::arg("domain") = Interval(0.0, 1.0), py::arg("budget") = 100,
        py::arg("seed") = 0, py::arg("phi_degree") = py::none(), py::arg("plan") = plan_default,
        "Seeded counterexample search; phi_degree=None keeps phi the identity.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the hhv command line in-process; returns (exit_code, stdout, stderr).");
}
