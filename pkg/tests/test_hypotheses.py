import math

import numpy as np
import pytest

from fracineq.expr import FuncSpec
from fracineq.hypotheses import (CHECK_TOL, DEFAULT_GRID, GridSpec, HypothesisReport, HypothesisSampleError,
                                 check_convex, check_lambda_power, check_range_unit, check_slog_first,
                                 check_slog_second)


def half_exp(x):
    return 0.5 * np.exp(x / 2)


def one(x):
    return np.ones_like(x)


def assert_report_invariants(r: HypothesisReport):
    if not r.holds:
        assert r.worst_violation > CHECK_TOL
    assert (r.witness is None) == r.holds
    assert r.samples_checked > 0


# ---------------------------------------------------------------- convexity

def test_convex_examples():
    r = check_convex(lambda x: x ** 2, (0, 1))
    assert r.holds and r.witness is None
    r = check_convex(lambda x: -x ** 2, (0, 1))
    assert not r.holds
    assert r.witness == (0.0, 1.0, 0.5)
    assert r.worst_violation == pytest.approx(0.25)
    assert check_convex(lambda x: np.abs(2 * x - 1), (0, 1)).holds


def test_sample_count():
    r = check_convex(lambda x: x ** 2, (0, 1))
    assert r.samples_checked == 33 ** 3 + 500
    r = check_convex(lambda x: x ** 2, (0, 1), GridSpec(5, 10, 1))
    assert r.samples_checked == 5 ** 3 + 10


def test_scalar_only_callable_is_supported():
    r = check_convex(lambda x: math.exp(x), (0, 1), GridSpec(5, 20, 3))
    assert r.holds


def test_report_text():
    assert "no violation found" in str(check_convex(lambda x: x ** 2, (0, 1)))
    assert "violated at" in str(check_convex(lambda x: -x ** 2, (0, 1)))
    assert "proved" not in str(check_convex(lambda x: x ** 2, (0, 1)))


@pytest.mark.parametrize("text", ["x^2", "-x^2", "sin(3*x)", "exp(x)", "abs(x-0.3)"])
def test_convex_affine_reparameterization(text):
    lo, hi = 0.5, 2.0
    f = FuncSpec.from_text(text, lo, hi)
    direct = check_convex(lambda x: f(x), (lo, hi))
    mapped = check_convex(lambda u: f(lo + (hi - lo) * u), (0.0, 1.0))
    assert direct.holds == mapped.holds
    assert abs(direct.worst_violation - mapped.worst_violation) <= 1e-10


# ---------------------------------------------------------------- s-log-convexity

def test_slog_second_examples():
    r = check_slog_second(half_exp, 1.0, (0, 1))
    assert r.holds
    assert abs(r.worst_violation) <= 1e-15
    for s in (0.1, 0.5, 1.0):
        assert check_slog_second(one, s, (0, 1)).holds


def test_slog_second_identity_violated():
    r = check_slog_second(lambda x: x, 1.0, (0.25, 1))
    assert not r.holds
    assert r.witness[:2] == (0.25, 1.0)
    # at t = 1/2 the sample already violates by 0.625 - 0.5; the worst t is nearby
    assert r.worst_violation >= 0.125
    assert 0.4 < r.witness[2] < 0.5


def test_slog_nonpositive_aborts_with_point():
    with pytest.raises(HypothesisSampleError) as err:
        check_slog_second(lambda x: x - 0.5, 1.0, (0, 1))
    assert err.value.point <= 0.5
    with pytest.raises(HypothesisSampleError):
        check_slog_first(lambda x: x, 0.5, (0, 1))


def test_slog_s_range():
    with pytest.raises(ValueError):
        check_slog_second(one, 0.0, (0, 1))
    with pytest.raises(ValueError):
        check_slog_first(one, 1.5, (0, 1))


def test_slog_first_examples():
    for s in (0.25, 0.5, 1.0):
        assert check_slog_first(one, s, (0, 1)).holds
    assert_report_invariants(check_slog_first(half_exp, 0.5, (0, 1)))
    # with weights summing below 1, a x + b y can fall under lo = 0.5; those are skipped
    r = check_slog_first(half_exp, 0.5, (0.5, 1))
    assert_report_invariants(r)
    assert r.samples_checked < 33 ** 3 + 500


@pytest.mark.parametrize("g, interval", [
    (half_exp, (0, 1)), (lambda x: x, (0.25, 1)), (lambda x: np.exp(-x * x), (0, 2)),
    (lambda x: 1 + x ** 2, (-1, 1)),
])
def test_slog_first_matches_second_at_s1(g, interval):
    a = check_slog_first(g, 1.0, interval)
    b = check_slog_second(g, 1.0, interval)
    assert a.holds == b.holds
    assert a.worst_violation == pytest.approx(b.worst_violation, abs=1e-15)
    assert a.samples_checked == b.samples_checked


def test_power_variant():
    # (0.5 e^(x/2))^q is log-linear for every q
    for q in (1.0, 2.0, 4.0):
        assert check_slog_second(half_exp, 1.0, (0, 1), power=q).holds


FAMILY = [
    ("0.5*exp(x/2)", 0.0, 1.0), ("exp(-x)", 0.0, 1.0), ("0.9^x*0.5", 0.0, 1.25),
    ("exp(x^2)/3", 0.0, 1.0), ("1/(1+x)", 0.0, 1.0),
]


def test_definitional_consistency_findings(capsys):
    """For g <= 1, t^s >= t makes the s < 1 bound the tighter one.

    So passing at some s < 1 must imply passing at s = 1 (asserted). The
    converse, passing at s = 1 implying every smaller s, is only reported.
    """
    findings = []
    for text, lo, hi in FAMILY:
        f = FuncSpec.from_text(text, lo, hi)
        g = lambda x: f(x) if np.isscalar(x) else np.array([f(v) for v in np.ravel(x)]).reshape(np.shape(x))
        assert check_range_unit(g, (lo, hi)).holds
        at_one = check_slog_second(g, 1.0, (lo, hi), GridSpec(9, 50, 1))
        for s in (0.25, 0.5, 0.75):
            r = check_slog_second(g, s, (lo, hi), GridSpec(9, 50, 1))
            if r.holds:
                assert at_one.holds, (text, s)
            if at_one.holds and not r.holds:
                findings.append((text, s, r.witness))
    with capsys.disabled():
        print()
        for text, s, w in findings:
            print(f"finding: {text} is log-convex but violates s={s} at {w}")
    # the log-linear member is the standard example of this direction
    assert any(t == "0.5*exp(x/2)" for t, _, _ in findings)


# ---------------------------------------------------------------- unit range

def test_range_unit_examples():
    r = check_range_unit(half_exp, (0, 1))
    assert r.holds
    assert r.worst_violation == pytest.approx(0.5 * math.exp(0.5) - 1.0, abs=1e-15)
    r = check_range_unit(np.exp, (0, 1))
    assert not r.holds and r.witness == (1.0,)
    r = check_range_unit(lambda x: 0 * x, (0, 1))
    assert not r.holds and r.worst_violation == math.inf
    assert check_range_unit(one, (0, 1)).holds


def test_range_unit_tolerance():
    assert check_range_unit(lambda x: np.full_like(x, 1 + 0.5e-12), (0, 1)).holds
    assert not check_range_unit(lambda x: np.full_like(x, 1 + 2e-12), (0, 1)).holds


# ---------------------------------------------------------------- scalar step

def test_lambda_power_examples():
    assert check_lambda_power(1, 0.5, 0.5)
    assert check_lambda_power(0.5, 0.5, 0.5)
    assert 0.5 ** (0.5 ** 0.5) == pytest.approx(0.6125, abs=1e-4)
    assert 0.5 ** 0.25 == pytest.approx(0.8409, abs=1e-4)
    assert check_lambda_power(0.3, 1, 1)


@pytest.mark.parametrize("args", [(0, 0.5, 0.5), (1.1, 0.5, 0.5), (0.5, 0, 0.5), (0.5, 0.5, 1.5)])
def test_lambda_power_preconditions(args):
    with pytest.raises(ValueError):
        check_lambda_power(*args)


def test_lambda_power_universal():
    rng = np.random.default_rng(2024)
    # 1 - uniform[0, 1) lies in (0, 1]
    triples = 1.0 - rng.random((10_000, 3))
    assert all(check_lambda_power(*map(float, t)) for t in triples)


def test_grid_spec_invariants():
    with pytest.raises(ValueError):
        GridSpec(points_per_axis=2)
    with pytest.raises(ValueError):
        GridSpec(random_pairs=-1)
    assert DEFAULT_GRID == GridSpec(33, 500, 42)


def test_deterministic():
    a = check_slog_second(lambda x: x, 1.0, (0.25, 1))
    b = check_slog_second(lambda x: x, 1.0, (0.25, 1))
    assert a == b
