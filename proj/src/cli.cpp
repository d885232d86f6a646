#include "hhv/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hhv/chains.hpp"
#include "hhv/convexity.hpp"
#include "hhv/errors.hpp"
#include "hhv/expr.hpp"
#include "hhv/format.hpp"
#include "hhv/search.hpp"

#ifndef HHV_VERSION
#define HHV_VERSION "0.0.0"
#endif

namespace hhv::cli {

using json = nlohmann::json;

namespace {

struct Outcome {
    json doc = json::object();
    int exit_code = exit_holds;
    std::string human;
    std::string csv;
};

std::string normalize(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return c == '_' ? '-' : static_cast<char>(std::tolower(c));
    });
    return s;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json triple_json(const SampleTriple& s) { return json{{"x", s.x}, {"y", s.y}, {"t", s.t}}; }

const char* command_name(Command c) {
    switch (c) {
        case Command::check: return "check";
        case Command::chain: return "chain";
        case Command::search: return "search";
        case Command::report: return "report";
    }
    return "?";
}

const char* format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::json: return "json";
        case OutputFormat::csv: return "csv";
        case OutputFormat::human: return "human";
    }
    return "?";
}

double check_tolerance(const RunConfig& cfg) { return cfg.tolerance.value_or(default_tolerance); }
double chain_tolerance(const RunConfig& cfg) { return cfg.tolerance.value_or(default_chain_tolerance); }

json config_echo(const RunConfig& cfg) {
    json j{
        {"a", cfg.a},
        {"b", cfg.b},
        {"budget", cfg.budget},
        {"class", cfg.check_class},
        {"coeff_hi", cfg.coeff_hi},
        {"coeff_lo", cfg.coeff_lo},
        {"degree", cfg.degree},
        {"diagnostics", cfg.diagnostics},
        {"f", cfg.f_text},
        {"family", cfg.family},
        {"format", format_name(cfg.format)},
        {"g", cfg.g_text},
        {"grid_t", cfg.grid_t},
        {"grid_x", cfg.grid_x},
        {"id", cfg.chain_id},
        {"pairs", cfg.pairs},
        {"phi", cfg.phi_text},
        {"phi_degree", cfg.phi_degree},
        {"phi_family", cfg.phi_family},
        {"quad_tol", cfg.quad_tol},
        {"samples", cfg.samples},
        {"seed", cfg.seed},
        {"target", cfg.target},
    };
    j["tol"] = cfg.tolerance ? json(*cfg.tolerance) : json(nullptr);
    return j;
}

json error_json(const Error& e) {
    json j{{"code", e.code()}, {"message", e.what()}};
    if (!e.context().empty()) j["context"] = e.context();
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        j["offset"] = pe->offset();
        j["expected"] = pe->expected();
    }
    if (const auto* ne = dynamic_cast<const NumericError*>(&e)) {
        if (ne->abscissa()) j["abscissa"] = num(*ne->abscissa());
    }
    return j;
}

Expr require_expr(const std::string& text, const char* flag) {
    if (text.empty()) throw UsageError(std::string("missing required --") + flag, "missing_argument");
    try {
        return Expr::parse(text);
    } catch (Error& e) {
        e.add_context(std::string("--") + flag);
        throw;
    }
}

PhiMap make_phi(const RunConfig& cfg, const Interval& domain) {
    const Expr phi = require_expr(cfg.phi_text, "phi");
    if (std::holds_alternative<Variable>(phi.root().data)) return PhiMap::identity(domain);
    return PhiMap(phi, domain);
}

SamplePlan make_plan(const RunConfig& cfg) {
    SamplePlan plan{cfg.grid_x, cfg.grid_t, cfg.samples, cfg.seed};
    plan.validate();
    return plan;
}

ChainOptions make_chain_options(const RunConfig& cfg) {
    return ChainOptions{cfg.quad_tol, chain_tolerance(cfg), cfg.diagnostics};
}

std::optional<ConvexityClass> parse_class(const std::string& name) {
    const std::string n = normalize(name);
    if (n == "convex") return ConvexityClass::convex;
    if (n == "log-convex") return ConvexityClass::log_convex;
    if (n == "phi-convex") return ConvexityClass::phi_convex;
    if (n == "log-phi-convex") return ConvexityClass::log_phi_convex;
    if (n == "log-phi-midconvex") return ConvexityClass::log_phi_midconvex;
    return std::nullopt;
}

ChainId parse_chain(const std::string& name) {
    const std::string n = normalize(name);
    if (n == "classic-hh") return ChainId::classic_hh;
    if (n == "dragomir-mond") return ChainId::dragomir_mond;
    if (n == "theorem1") return ChainId::theorem1;
    if (n == "theorem2") return ChainId::theorem2;
    throw UsageError("unknown chain id '" + name + "'", "invalid_argument");
}

Family parse_family(const std::string& name) {
    const std::string n = normalize(name);
    if (n == "exp-of-poly") return Family::exp_of_poly;
    if (n == "positive-poly") return Family::positive_poly;
    if (n == "affine-exp") return Family::affine_exp;
    if (n == "power") return Family::power;
    throw UsageError("unknown family '" + name + "'", "invalid_argument");
}

TargetKind parse_target(const std::string& name) {
    if (const auto cls = parse_class(name)) return static_cast<TargetKind>(static_cast<int>(*cls));
    switch (parse_chain(name)) {
        case ChainId::classic_hh: return TargetKind::classic_hh;
        case ChainId::dragomir_mond: return TargetKind::dragomir_mond;
        case ChainId::theorem1: return TargetKind::theorem1;
        case ChainId::theorem2: return TargetKind::theorem2;
    }
    throw UsageError("unknown target '" + name + "'", "invalid_argument");
}

std::string shortest(double v) { return std::isfinite(v) ? format_real(v) : (v < 0 ? "-inf" : "inf"); }

// ---------------------------------------------------------------------------
// JSON fragments shared by check and report

json convexity_json(const ConvexityReport& r) {
    json j{{"class", to_string(r.class_checked)},
           {"verdict", to_string(r.verdict)},
           {"samples_tested", r.samples_tested},
           {"min_margin", num(r.min_margin)},
           {"tolerance", r.tolerance},
           {"failure", to_string(r.failure)}};
    if (!r.failure_detail.empty()) j["failure_detail"] = r.failure_detail;
    if (r.witness) {
        json w = triple_json(*r.witness);
        w["index"] = *r.witness_index;
        w["margin"] = num(r.min_margin);
        j["witness"] = w;
    }
    return j;
}

json chain_json(const ChainReport& r) {
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back({{"name", t.name}, {"value", num(t.value)}});
    json diags = json::array();
    for (const auto& t : r.diagnostics) diags.push_back({{"name", t.name}, {"value", num(t.value)}});
    json diag_margins = json::array();
    for (const auto& t : r.diagnostic_margins) diag_margins.push_back({{"name", t.name}, {"value", num(t.value)}});
    json margins = json::array();
    for (double m : r.pair_margins) margins.push_back(num(m));
    return json{{"chain_id", to_string(r.chain_id)},
                {"terms", terms},
                {"margins", margins},
                {"verdict", to_string(r.verdict)},
                {"violated_links", r.violated_links},
                {"tolerance", r.tolerance},
                {"quad_tol", r.quad_tol},
                {"interval", json::array({r.lower, r.upper})},
                {"diagnostics", diags},
                {"diagnostic_margins", diag_margins},
                {"notes", r.notes}};
}

std::string chain_csv(const ChainReport& r) {
    std::ostringstream os;
    os << "index,name,value,margin_to_next\n";
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
        os << i << ',' << r.terms[i].name << ',' << shortest(r.terms[i].value) << ',';
        if (i < r.pair_margins.size()) os << shortest(r.pair_margins[i]);
        os << '\n';
    }
    return os.str();
}

std::string chain_human(const ChainReport& r) {
    std::ostringstream os;
    os << "chain " << to_string(r.chain_id) << " over [" << shortest(r.lower) << ", " << shortest(r.upper)
       << "]: " << to_string(r.verdict) << '\n';
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
        os << "  " << r.terms[i].name << " = " << shortest(r.terms[i].value);
        if (i < r.pair_margins.size()) os << "   (next - this = " << shortest(r.pair_margins[i]) << ")";
        os << '\n';
    }
    for (const auto& d : r.diagnostics) os << "  [diagnostic] " << d.name << " = " << shortest(d.value) << '\n';
    for (const auto& d : r.diagnostic_margins) os << "  [diagnostic] " << d.name << " = " << shortest(d.value) << '\n';
    for (const auto& n : r.notes) os << "  note: " << n << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// commands

Outcome run_check(const RunConfig& cfg) {
    const Interval domain(cfg.a, cfg.b);
    const Expr f = require_expr(cfg.f_text, "f");
    const SamplePlan plan = make_plan(cfg);
    const double tol = check_tolerance(cfg);
    const std::string cls_name = normalize(cfg.check_class);

    Outcome o;
    std::ostringstream human;
    if (const auto cls = parse_class(cls_name)) {
        const bool deformed = *cls != ConvexityClass::convex && *cls != ConvexityClass::log_convex;
        const PhiMap phi = deformed ? make_phi(cfg, domain) : PhiMap::identity(domain);
        const ConvexityReport r = check_class(*cls, f, phi, plan, tol);
        const json cj = convexity_json(r);
        o.doc["verdict"] = cj["verdict"];
        o.doc["samples_tested"] = r.samples_tested;
        o.doc["margins"] = json{{"min_margin", num(r.min_margin)}};
        if (cj.contains("witness")) o.doc["witness"] = cj["witness"];
        o.doc["details"] = cj;
        o.exit_code = r.holds() ? exit_holds : exit_violation;
        human << "check " << to_string(r.class_checked) << ": " << to_string(r.verdict)
              << " (samples=" << r.samples_tested << ", min_margin=" << shortest(r.min_margin) << ")\n";
        if (r.witness) {
            human << "  witness x=" << shortest(r.witness->x) << " y=" << shortest(r.witness->y)
                  << " t=" << shortest(r.witness->t) << " [" << to_string(r.failure) << "]\n";
        }
        std::ostringstream csv;
        csv << "class,verdict,samples_tested,min_margin,witness_x,witness_y,witness_t\n"
            << to_string(r.class_checked) << ',' << to_string(r.verdict) << ',' << r.samples_tested << ','
            << shortest(r.min_margin) << ',';
        if (r.witness) csv << shortest(r.witness->x) << ',' << shortest(r.witness->y) << ',' << shortest(r.witness->t);
        else csv << ",,";
        csv << '\n';
        o.csv = csv.str();
    } else if (cls_name == "implication") {
        const PhiMap phi = make_phi(cfg, domain);
        const ImplicationReport r = check_implication_chain(f, phi, plan, tol);
        json links = json::array();
        json margins = json::array();
        bool all_hold = true;
        std::optional<json> witness;
        std::ostringstream csv;
        csv << "link,verdict,min_margin,witness_x,witness_y,witness_t\n";
        human << "check implication chain (samples=" << r.samples_tested << ")\n";
        for (std::size_t k = 0; k < r.links.size(); ++k) {
            const LinkSummary& l = r.links[k];
            json lj{{"link", k}, {"verdict", to_string(l.verdict)}, {"min_margin", num(l.min_margin)}};
            if (l.witness) {
                lj["witness"] = triple_json(*l.witness);
                if (!witness) {
                    json w = triple_json(*l.witness);
                    w["link"] = k;
                    w["index"] = *l.witness_index;
                    w["margin"] = num(l.min_margin);
                    witness = w;
                }
            }
            all_hold = all_hold && l.verdict == Verdict::holds_on_samples;
            links.push_back(lj);
            margins.push_back(num(l.min_margin));
            human << "  link " << k << ": " << to_string(l.verdict) << " (min_margin=" << shortest(l.min_margin)
                  << ")\n";
            csv << k << ',' << to_string(l.verdict) << ',' << shortest(l.min_margin) << ',';
            if (l.witness) csv << shortest(l.witness->x) << ',' << shortest(l.witness->y) << ',' << shortest(l.witness->t);
            else csv << ",,";
            csv << '\n';
        }
        o.doc["verdict"] = all_hold ? "holds_on_samples" : "violated";
        o.doc["samples_tested"] = r.samples_tested;
        o.doc["margins"] = margins;
        if (witness) o.doc["witness"] = *witness;
        o.doc["details"] = json{{"class", "implication"}, {"links", links}, {"tolerance", r.tolerance}};
        o.exit_code = all_hold ? exit_holds : exit_violation;
        o.csv = csv.str();
    } else if (cls_name == "lemma-l" || cls_name == "lemma-z") {
        const PhiMap phi = make_phi(cfg, domain);
        const EquivalenceReport r = cls_name == "lemma-z"
                                        ? check_lemma_z_equivalence(f, phi, cfg.pairs, plan, cfg.seed, tol)
                                        : check_lemma_l_equivalence(f, phi, cfg.pairs, plan, cfg.seed, tol);
        o.doc["verdict"] = r.agree ? "equivalence_agrees" : "equivalence_disagrees";
        o.doc["samples_tested"] = r.samples_tested;
        o.doc["margins"] = json{{"direct_min_margin", num(r.direct_min_margin)},
                                {"induced_min_margin", num(r.induced_min_margin)}};
        if (r.disagreeing_pair) o.doc["witness"] = json{{"x", (*r.disagreeing_pair)[0]}, {"y", (*r.disagreeing_pair)[1]}};
        o.doc["details"] = json{{"class", cls_name},
                                {"pairs_tested", r.pairs_tested},
                                {"direct", to_string(r.direct)},
                                {"induced", to_string(r.induced)},
                                {"tolerance", tol}};
        o.exit_code = r.agree ? exit_holds : exit_violation;
        human << "check " << cls_name << ": " << (r.agree ? "agree" : "disagree") << " (direct "
              << to_string(r.direct) << ", induced " << to_string(r.induced) << ", pairs=" << r.pairs_tested
              << ")\n";
        std::ostringstream csv;
        csv << "class,agree,direct,induced,pairs,direct_min_margin,induced_min_margin\n"
            << cls_name << ',' << (r.agree ? "true" : "false") << ',' << to_string(r.direct) << ','
            << to_string(r.induced) << ',' << r.pairs_tested << ',' << shortest(r.direct_min_margin) << ','
            << shortest(r.induced_min_margin) << '\n';
        o.csv = csv.str();
    } else {
        throw UsageError("unknown class '" + cfg.check_class + "'", "invalid_argument");
    }
    o.human = human.str();
    return o;
}

ChainReport evaluate_chain(ChainId id, const RunConfig& cfg, const Interval& domain) {
    const Expr f = require_expr(cfg.f_text, "f");
    const ChainOptions opts = make_chain_options(cfg);
    switch (id) {
        case ChainId::classic_hh: return eval_classic_hh(f, domain, opts);
        case ChainId::dragomir_mond: return eval_dragomir_mond(f, domain, opts);
        case ChainId::theorem1: return eval_theorem1(f, make_phi(cfg, domain), opts);
        case ChainId::theorem2: return eval_theorem2(f, require_expr(cfg.g_text, "g"), make_phi(cfg, domain), opts);
    }
    throw UsageError("unknown chain");
}

Outcome run_chain(const RunConfig& cfg) {
    const Interval domain(cfg.a, cfg.b);
    const ChainReport r = evaluate_chain(parse_chain(cfg.chain_id), cfg, domain);
    Outcome o;
    const json cj = chain_json(r);
    o.doc["verdict"] = cj["verdict"];
    o.doc["terms"] = cj["terms"];
    o.doc["margins"] = cj["margins"];
    o.doc["details"] = cj;
    o.exit_code = r.holds() ? exit_holds : exit_violation;
    o.human = chain_human(r);
    o.csv = chain_csv(r);
    return o;
}

Outcome run_search(const RunConfig& cfg) {
    const Interval domain(cfg.a, cfg.b);
    CheckTarget target;
    target.kind = parse_target(cfg.target);
    target.plan = make_plan(cfg);
    const bool chain_target = target.kind == TargetKind::classic_hh || target.kind == TargetKind::dragomir_mond ||
                              target.kind == TargetKind::theorem1 || target.kind == TargetKind::theorem2;
    target.tolerance = chain_target ? chain_tolerance(cfg) : check_tolerance(cfg);
    target.chain = make_chain_options(cfg);

    const FamilySpec f_spec{parse_family(cfg.family), cfg.degree, cfg.coeff_lo, cfg.coeff_hi, 0};
    std::optional<FamilySpec> phi_spec;
    const std::string phi_family = normalize(cfg.phi_family);
    if (phi_family == "monotone") {
        phi_spec = FamilySpec{Family::positive_poly, cfg.phi_degree, 0.0, 1.0, 0};
    } else if (phi_family != "identity") {
        throw UsageError("unknown phi family '" + cfg.phi_family + "' (identity|monotone)", "invalid_argument");
    }

    const SearchOutcome s = find_counterexample(target, f_spec, phi_spec, domain, cfg.budget, cfg.seed);

    Outcome o;
    o.doc["verdict"] = s.found ? "found" : "not_found";
    json details{{"target", to_string(target.kind)},
                 {"trials", s.trials},
                 {"skipped", s.skipped},
                 {"skip_reasons", s.skip_reasons},
                 {"tolerance", target.tolerance}};
    std::ostringstream human;
    human << "search " << to_string(target.kind) << ": " << (s.found ? "counterexample found" : "none found")
          << " after " << s.trials << " trials (" << s.skipped << " skipped)\n";
    std::ostringstream csv;
    csv << "found,trials,skipped,trial,f,g,phi,margin\n" << (s.found ? "true" : "false") << ',' << s.trials << ','
        << s.skipped << ',';
    if (s.witness) {
        const SearchWitness& w = *s.witness;
        json wj{{"trial", w.trial}, {"f", w.f_text}, {"g", w.g_text}, {"phi", w.phi_text}, {"margin", num(w.margin)}};
        if (w.triple) wj["triple"] = triple_json(*w.triple);
        if (w.chain) wj["chain"] = chain_json(*w.chain);
        o.doc["witness"] = wj;
        o.doc["margins"] = json{{"min_margin", num(w.margin)}};
        details["reverified"] = reverify_witness(target, w, domain);
        human << "  f = " << w.f_text << '\n';
        if (!w.g_text.empty()) human << "  g = " << w.g_text << '\n';
        human << "  phi = " << w.phi_text << "\n  margin = " << shortest(w.margin) << '\n';
        csv << w.trial << ",\"" << w.f_text << "\",\"" << w.g_text << "\",\"" << w.phi_text << "\","
            << shortest(w.margin);
    } else {
        csv << ",,,,";
    }
    csv << '\n';
    o.doc["details"] = details;
    o.exit_code = s.found ? exit_violation : exit_holds;
    o.human = human.str();
    o.csv = csv.str();
    return o;
}

Outcome run_report(const RunConfig& cfg) {
    const Interval domain(cfg.a, cfg.b);
    const Expr f = require_expr(cfg.f_text, "f");
    const PhiMap phi = make_phi(cfg, domain);
    const SamplePlan plan = make_plan(cfg);

    json results = json::array();
    bool any_violation = false;
    bool any_error = false;
    std::ostringstream human;
    std::ostringstream csv;
    csv << "check,verdict,min_margin\n";

    const auto record = [&](const std::string& name, const std::function<json()>& fn) {
        json entry{{"check", name}};
        try {
            json r = fn();
            entry["result"] = r;
            const std::string verdict = r["verdict"];
            entry["verdict"] = verdict;
            if (verdict == "violated" || verdict == "link_violated") any_violation = true;
        } catch (const NumericError& e) {
            entry["verdict"] = "error";
            entry["error"] = error_json(e);
            any_error = true;
        }
        const std::string verdict = entry["verdict"];
        human << "  " << name << ": " << verdict << '\n';
        csv << name << ',' << verdict << ',';
        if (entry.contains("result") && entry["result"].contains("min_margin") && !entry["result"]["min_margin"].is_null()) {
            csv << shortest(entry["result"]["min_margin"].get<double>());
        }
        csv << '\n';
        results.push_back(entry);
    };

    const double tol = check_tolerance(cfg);
    for (ConvexityClass cls : {ConvexityClass::convex, ConvexityClass::log_convex, ConvexityClass::phi_convex,
                               ConvexityClass::log_phi_convex, ConvexityClass::log_phi_midconvex}) {
        const bool deformed = cls != ConvexityClass::convex && cls != ConvexityClass::log_convex;
        record(to_string(cls), [&] {
            return convexity_json(check_class(cls, f, deformed ? phi : PhiMap::identity(domain), plan, tol));
        });
    }
    std::vector<ChainId> chains{ChainId::classic_hh, ChainId::dragomir_mond, ChainId::theorem1};
    if (!cfg.g_text.empty()) chains.push_back(ChainId::theorem2);
    for (ChainId id : chains) {
        record(to_string(id), [&] { return chain_json(evaluate_chain(id, cfg, domain)); });
    }

    Outcome o;
    o.doc["verdict"] = any_violation ? "violations_found" : (any_error ? "errors" : "all_hold");
    o.doc["details"] = json{{"results", results}};
    o.exit_code = any_violation ? exit_violation : (any_error ? exit_numeric : exit_holds);
    o.human = "report for f = " + cfg.f_text + ": " + o.doc["verdict"].get<std::string>() + "\n" + human.str();
    o.csv = csv.str();
    return o;
}

// ---------------------------------------------------------------------------
// argument handling

std::uint64_t default_seed() {
    const char* env = std::getenv("HHV_SEED");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0') {
        throw UsageError(std::string("HHV_SEED must be a non-negative integer, got '") + env + "'", "invalid_seed");
    }
    return static_cast<std::uint64_t>(v);
}

// Turns a JSON config object into flag tokens placed before the explicit
// ones, so that explicit flags win.
std::vector<std::string> config_tokens(const std::string& path, std::optional<std::string>& command) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'", "config_error");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what(), "config_error");
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object", "config_error");

    std::vector<std::string> tokens;
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            if (!value.is_string()) throw UsageError("config 'command' must be a string", "config_error");
            command = value.get<std::string>();
            continue;
        }
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(flag);
        } else if (value.is_string()) {
            tokens.push_back(flag);
            tokens.push_back(value.get<std::string>());
        } else if (value.is_number_integer() || value.is_number_unsigned()) {
            tokens.push_back(flag);
            tokens.push_back(value.dump());
        } else if (value.is_number_float()) {
            tokens.push_back(flag);
            tokens.push_back(format_real(value.get<double>()));
        } else {
            throw UsageError("config key '" + key + "' must be a string, number or boolean", "config_error");
        }
    }
    return tokens;
}

void add_common_options(CLI::App* sub, RunConfig& cfg, std::string& format_text, double& tol_value) {
    sub->add_option("--f", cfg.f_text, "function f(x)");
    sub->add_option("--phi", cfg.phi_text, "self map phi(x) of [a, b] (default: identity)");
    sub->add_option("--a", cfg.a, "lower endpoint");
    sub->add_option("--b", cfg.b, "upper endpoint");
    sub->add_option("--seed", cfg.seed, "seed for sampling and search (default: $HHV_SEED or 0)");
    sub->add_option("--quad-tol", cfg.quad_tol, "quadrature tolerance (absolute-or-relative)");
    sub->add_option("--tol", tol_value, "margin tolerance (default 1e-9 for checks, 1e-8 for chains)");
    sub->add_option("--grid-x", cfg.grid_x, "lattice points per x/y axis");
    sub->add_option("--grid-t", cfg.grid_t, "lattice points for t (odd)");
    sub->add_option("--samples", cfg.samples, "pseudo-random samples on top of the lattice");
    sub->add_option("--format", format_text, "json | csv | human");
    sub->add_flag("--diagnostics", cfg.diagnostics, "include proof-intermediate chain terms");
}

struct Parsed {
    RunConfig cfg;
    bool help = false;
    std::string help_text;
};

Parsed parse_args(std::vector<std::string> args) {
    // --config is consumed here so it can be merged underneath the flags.
    std::optional<std::string> config_path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& tok = args[i];
        if (tok == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file path", "config_error");
            config_path = args[++i];
        } else if (tok.rfind("--config=", 0) == 0) {
            config_path = tok.substr(9);
        } else {
            rest.push_back(tok);
        }
    }
    if (config_path) {
        std::optional<std::string> command;
        std::vector<std::string> tokens = config_tokens(*config_path, command);
        auto sub_pos = std::find_if(rest.begin(), rest.end(), [](const std::string& t) { return t.empty() || t[0] != '-'; });
        if (sub_pos == rest.end()) {
            if (!command) throw UsageError("no command given on the command line or in the config file", "missing_command");
            rest.insert(rest.begin(), *command);
            sub_pos = rest.begin();
        }
        rest.insert(sub_pos + 1, tokens.begin(), tokens.end());
    }

    Parsed parsed;
    RunConfig& cfg = parsed.cfg;
    cfg.seed = default_seed();
    std::string format_text = "json";
    double tol_value = 0.0;

    CLI::App app{"Numerical certifiers for generalized convexity classes and Hermite-Hadamard type chains", "hhv"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    CLI::App* check = app.add_subcommand("check", "certify membership in a convexity class");
    add_common_options(check, cfg, format_text, tol_value);
    check->add_option("--class", cfg.check_class,
                      "convex | log-convex | phi-convex | log-phi-convex | log-phi-midconvex | implication | "
                      "lemma-l | lemma-z");
    check->add_option("--pairs", cfg.pairs, "(x, y) pairs for lemma-l / lemma-z");

    CLI::App* chain = app.add_subcommand("chain", "evaluate a Hermite-Hadamard type inequality chain");
    add_common_options(chain, cfg, format_text, tol_value);
    chain->add_option("--id", cfg.chain_id, "classic-hh | dragomir-mond | theorem1 | theorem2");
    chain->add_option("--g", cfg.g_text, "second function g(x) for theorem2");

    CLI::App* search = app.add_subcommand("search", "seeded counterexample search");
    add_common_options(search, cfg, format_text, tol_value);
    search->add_option("--target", cfg.target, "a --class name or a chain --id");
    search->add_option("--budget", cfg.budget, "maximum number of candidate trials");
    search->add_option("--family", cfg.family, "exp-of-poly | positive-poly | affine-exp | power");
    search->add_option("--degree", cfg.degree, "polynomial degree of generated candidates");
    search->add_option("--coeff-lo", cfg.coeff_lo, "lower coefficient bound");
    search->add_option("--coeff-hi", cfg.coeff_hi, "upper coefficient bound");
    search->add_option("--phi-family", cfg.phi_family, "identity | monotone");
    search->add_option("--phi-degree", cfg.phi_degree, "degree of generated monotone phi maps");

    CLI::App* report = app.add_subcommand("report", "run every class check and applicable chain for f");
    add_common_options(report, cfg, format_text, tol_value);
    report->add_option("--g", cfg.g_text, "second function g(x); enables theorem2");

    std::vector<const char*> argv{"hhv"};
    for (const auto& a : rest) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        parsed.help = true;
        std::ostringstream os;
        app.exit(e, os, os);
        parsed.help_text = os.str();
        return parsed;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what(), "usage_error");
    }

    CLI::App* used = app.get_subcommands().front();
    const std::string name = used->get_name();
    cfg.command = name == "check" ? Command::check : name == "chain" ? Command::chain
                  : name == "search" ? Command::search : Command::report;
    if (used->count("--tol") > 0) cfg.tolerance = tol_value;
    const std::string fmt = normalize(format_text);
    if (fmt == "json") cfg.format = OutputFormat::json;
    else if (fmt == "csv") cfg.format = OutputFormat::csv;
    else if (fmt == "human") cfg.format = OutputFormat::human;
    else throw UsageError("unknown format '" + format_text + "' (json|csv|human)", "invalid_argument");
    cfg.validate();
    return parsed;
}

}  // namespace

const char* tool_version() noexcept { return HHV_VERSION; }

void RunConfig::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw UsageError("need finite a < b, got a=" + format_real(a) + " b=" + format_real(b), "invalid_interval");
    }
    if (!(quad_tol > 0.0)) throw UsageError("--quad-tol must be positive", "invalid_argument");
    if (tolerance && !(*tolerance > 0.0)) throw UsageError("--tol must be positive", "invalid_argument");
    if (command != Command::search && f_text.empty()) throw UsageError("missing required --f", "missing_argument");
    if (command == Command::chain && normalize(chain_id) == "theorem2" && g_text.empty()) {
        throw UsageError("theorem2 needs --g", "missing_argument");
    }
    if (command == Command::search && budget < 1) throw UsageError("--budget must be at least 1", "invalid_argument");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    json doc{{"tool_version", tool_version()}};
    std::optional<RunConfig> cfg;
    Outcome outcome;

    try {
        Parsed parsed = parse_args(args);
        if (parsed.help) {
            out << parsed.help_text;
            return exit_holds;
        }
        cfg = parsed.cfg;
        switch (cfg->command) {
            case Command::check: outcome = run_check(*cfg); break;
            case Command::chain: outcome = run_chain(*cfg); break;
            case Command::search: outcome = run_search(*cfg); break;
            case Command::report: outcome = run_report(*cfg); break;
        }
    } catch (const UsageError& e) {
        outcome = Outcome{};
        outcome.doc["verdict"] = "error";
        outcome.doc["error"] = error_json(e);
        outcome.exit_code = exit_usage;
        outcome.human = std::string("error: ") + e.what() + "\n";
        outcome.csv = "error,code,message\nerror," + e.code() + ",\"" + e.what() + "\"\n";
    } catch (const NumericError& e) {
        outcome = Outcome{};
        outcome.doc["verdict"] = "error";
        outcome.doc["error"] = error_json(e);
        outcome.exit_code = exit_numeric;
        outcome.human = std::string("numeric failure: ") + e.what() + "\n";
        outcome.csv = "error,code,message\nerror," + e.code() + ",\"" + e.what() + "\"\n";
    }

    for (auto& [key, value] : outcome.doc.items()) doc[key] = value;
    if (cfg) {
        doc["command"] = command_name(cfg->command);
        doc["config_echo"] = config_echo(*cfg);
        doc["seed"] = cfg->seed;
    } else {
        doc["command"] = nullptr;
        doc["seed"] = nullptr;
    }
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    doc["timings"] = json{{"total_ms", elapsed}};

    const OutputFormat format = cfg ? cfg->format : OutputFormat::json;
    switch (format) {
        case OutputFormat::json:
            out << doc.dump(2) << '\n';
            err << outcome.human;
            break;
        case OutputFormat::csv:
            out << outcome.csv;
            err << outcome.human;
            break;
        case OutputFormat::human: out << outcome.human; break;
    }
    return outcome.exit_code;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace hhv::cli
