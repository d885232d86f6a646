import json
import math

import pytest

import hhv

E = math.e
UNIT = hhv.Interval(0.0, 1.0)


def test_parse_and_eval():
    f = hhv.parse("x^2 + 3*x")
    assert f(2.0) == 10.0
    assert hhv.parse(f.serialize()) == f
    with pytest.raises(hhv.UsageError):
        hhv.parse("1 + sin(x)")
    with pytest.raises(hhv.NumericError):
        hhv.parse("ln(x)")(0.0)


def test_integrate_and_means():
    value, err, evals = hhv.integrate(hhv.parse("exp(x)"), UNIT)
    assert abs(value - (E - 1)) <= 1e-10
    assert evals > 0
    value, _, _ = hhv.integrate(lambda x: x * x, UNIT, tol=1e-12)
    assert abs(value - 1 / 3) <= 1e-12
    assert hhv.geometric_mean(4, 9) == 6.0
    assert hhv.logarithmic_mean(2.5, 2.5) == 2.5
    assert hhv.geometric_mean(2, 8) <= hhv.logarithmic_mean(2, 8) <= hhv.arithmetic_mean(2, 8)


def test_class_checks():
    report = hhv.check_convex(hhv.parse("sqrt(x)"), UNIT)
    assert not report.holds
    assert report.verdict == "violated"
    x, y, t = report.witness
    assert 0.0 <= t <= 1.0
    phi = hhv.PhiMap("x^2", UNIT)
    ok = hhv.check_log_phi_convex(hhv.parse("exp(x)"), phi, hhv.SamplePlan(9, 9, 100, 7))
    assert ok.holds and abs(ok.min_margin) <= 1e-12
    with pytest.raises(hhv.NumericError):
        hhv.PhiMap("2*x", UNIT)


def test_chains():
    report = hhv.eval_theorem2(hhv.parse("exp(x)"), hhv.parse("exp(x)"), hhv.PhiMap.identity(UNIT))
    assert report.verdict == "chain_holds"
    for _, value in report.terms:
        assert abs(value - (E * E - 1) / 2) <= 1e-8
    dm = hhv.eval_dragomir_mond(hhv.parse("exp(x)"), UNIT)
    assert [name for name, _ in dm.terms][0] == "f_midpoint"


def test_search():
    found = hhv.find_counterexample("log-convex", "positive-poly", degree=1, coeff_lo=0.0, budget=100, seed=3)
    assert found["found"] and found["witness"]["reverified"]
    none = hhv.find_counterexample("log_convex", "exp_of_poly", degree=1, budget=20, seed=3,
                                   plan=hhv.SamplePlan(9, 5, 64, 0))
    assert not none["found"] and none["trials"] == 20


def test_cli_roundtrip():
    code, out, _ = hhv.run_cli(["check", "--class", "convex", "--f", "sqrt(x)"])
    assert code == 1
    doc = json.loads(out)
    assert doc["verdict"] == "violated"
    assert doc["tool_version"] == hhv.__version__
