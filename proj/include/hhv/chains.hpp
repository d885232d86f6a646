#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hhv/convexity.hpp"
#include "hhv/expr.hpp"
#include "hhv/quadrature.hpp"

namespace hhv {

enum class ChainId { classic_hh, dragomir_mond, theorem1, theorem2 };
enum class ChainVerdict { chain_holds, link_violated };

const char* to_string(ChainId id) noexcept;
const char* to_string(ChainVerdict v) noexcept;

struct Term {
    std::string name;
    double value = 0.0;
};

inline constexpr double default_chain_tolerance = 1e-8;

struct ChainOptions {
    double quad_tol = default_quad_tol;
    double tolerance = default_chain_tolerance;
    bool diagnostics = false;  // evaluate proof-intermediate terms too
};

// Terms are listed in chain order, smallest first when the chain holds.
struct ChainReport {
    ChainId chain_id = ChainId::classic_hh;
    std::vector<Term> terms;
    std::vector<double> pair_margins;  // terms[i+1] - terms[i]
    ChainVerdict verdict = ChainVerdict::chain_holds;
    std::vector<std::size_t> violated_links;
    double tolerance = default_chain_tolerance;
    double quad_tol = default_quad_tol;
    // Never folded into the verdict.
    std::vector<Term> diagnostics;
    std::vector<Term> diagnostic_margins;
    std::vector<std::string> notes;
    double lower = 0.0;  // ordered integration interval
    double upper = 0.0;

    bool holds() const noexcept { return verdict == ChainVerdict::chain_holds; }
};

// f((a+b)/2) <= mean of f over [a,b] <= (f(a)+f(b))/2
ChainReport eval_classic_hh(const Expr& f, const Interval& domain, const ChainOptions& opts = {});

// Six-term chain for log-convex f:
// f(mid) <= exp(mean ln f) <= mean G(f(x), f(a+b-x)) <= mean f <= L(f(a), f(b)) <= A(f(a), f(b))
ChainReport eval_dragomir_mond(const Expr& f, const Interval& domain, const ChainOptions& opts = {});

// Five-term chain over [phi(a), phi(b)] for log-phi-convex f. With
// diagnostics, adds the mean of A(f(x), f(s-x)) that bounds the G term.
ChainReport eval_theorem1(const Expr& f, const PhiMap& phi, const ChainOptions& opts = {});

// Three-term product chain for log-phi-convex f and g. With diagnostics,
// adds 1/2 mean(f^2 + g^2) and its margins against terms 2 and 3.
ChainReport eval_theorem2(const Expr& f, const Expr& g, const PhiMap& phi, const ChainOptions& opts = {});

// Recomputes margins, verdict and violated links from `terms`.
void finalize_chain(ChainReport& report);

}  // namespace hhv
