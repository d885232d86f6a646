"""Numerical certifiers for generalized convexity classes and
Hermite-Hadamard type inequality chains."""

from ._hhv import (
    ChainReport,
    ConvexityReport,
    EquivalenceReport,
    Expr,
    ImplicationReport,
    Interval,
    NumericError,
    PhiMap,
    SamplePlan,
    UsageError,
    __version__,
    arithmetic_mean,
    check_class,
    check_convex,
    check_implication_chain,
    check_lemma_l_equivalence,
    check_lemma_z_equivalence,
    check_log_convex,
    check_log_phi_convex,
    check_log_phi_midconvex,
    check_phi_convex,
    eval_classic_hh,
    eval_dragomir_mond,
    eval_theorem1,
    eval_theorem2,
    find_counterexample,
    geometric_mean,
    integrate,
    logarithmic_mean,
    mean_value,
    parse,
    run_cli,
)

__all__ = [name for name in dir() if not name.startswith("_")]
