"""Falsification searches for the convexity-type hypotheses placed on |f'|.

Every check samples a uniform (x, y, t) grid plus seeded random triples. A
sample violates the defining inequality when ``lhs - rhs > 1e-12 * (1 + |rhs|)``;
the report carries the largest raw ``lhs - rhs`` and, on failure, the sample
where it occurs. A passing report means *no violation was found*, never that
the property was proved.

Integrands are evaluated vectorised when ``g`` accepts numpy arrays and
point by point otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

CHECK_TOL = 1e-12


class HypothesisSampleError(ValueError):
    def __init__(self, message: str, point: float):
        self.point = point
        super().__init__(f"{message} at x={point!r}")


@dataclass(frozen=True)
class GridSpec:
    points_per_axis: int = 33
    random_pairs: int = 500
    seed: int = 42

    def __post_init__(self):
        if self.points_per_axis < 3:
            raise ValueError("points_per_axis must be >= 3")
        if self.random_pairs < 0:
            raise ValueError("random_pairs must be >= 0")


DEFAULT_GRID = GridSpec()


@dataclass(frozen=True)
class HypothesisReport:
    name: str
    holds: bool
    worst_violation: float
    witness: Optional[tuple]
    samples_checked: int

    def __str__(self) -> str:
        verdict = "no violation found" if self.holds else f"violated at {self.witness}"
        return (f"{self.name}: {verdict} "
                f"(worst {self.worst_violation:.3e}, {self.samples_checked} samples)")


def _evaluate(g: Callable, xs: np.ndarray) -> np.ndarray:
    try:
        ys = np.asarray(g(xs), dtype=float)
        if ys.shape == xs.shape:
            return ys
    except (TypeError, ValueError):
        pass
    return np.array([g(float(x)) for x in xs.ravel()], dtype=float).reshape(xs.shape)


def _triples(lo: float, hi: float, grid: GridSpec):
    """Grid triples in x-major order, then the seeded random ones."""
    axis = np.linspace(lo, hi, grid.points_per_axis)
    tgrid = np.linspace(0.0, 1.0, grid.points_per_axis)
    X, Y, T = np.meshgrid(axis, axis, tgrid, indexing="ij")
    rng = np.random.default_rng(grid.seed)
    rx = rng.uniform(lo, hi, grid.random_pairs)
    ry = rng.uniform(lo, hi, grid.random_pairs)
    rt = rng.uniform(0.0, 1.0, grid.random_pairs)
    return (np.concatenate([X.ravel(), rx]),
            np.concatenate([Y.ravel(), ry]),
            np.concatenate([T.ravel(), rt]))


def _report(name: str, lhs, rhs, witnesses, valid=None) -> HypothesisReport:
    viol = lhs - rhs
    bad = viol > CHECK_TOL * (1.0 + np.abs(rhs))
    if valid is not None:
        viol = np.where(valid, viol, -np.inf)
        bad &= valid
        n = int(np.count_nonzero(valid))
    else:
        n = viol.size
    i = int(np.argmax(viol))  # first index wins ties
    holds = not bad.any()
    witness = None if holds else tuple(float(w[i]) for w in witnesses)
    return HypothesisReport(name, holds, float(viol[i]), witness, n)


def _positive(g, xs, what: str) -> np.ndarray:
    ys = _evaluate(g, xs)
    bad = np.flatnonzero(~(ys > 0))
    if bad.size:
        raise HypothesisSampleError(f"{what} needs a strictly positive function; got {ys[bad[0]]!r}",
                                    float(xs[bad[0]]))
    return ys


def check_convex(g: Callable, interval, grid: GridSpec = DEFAULT_GRID) -> HypothesisReport:
    """g(tx + (1-t)y) <= t g(x) + (1-t) g(y) on the sample set."""
    lo, hi = interval
    x, y, t = _triples(lo, hi, grid)
    gx, gy, gm = _evaluate(g, x), _evaluate(g, y), _evaluate(g, t * x + (1 - t) * y)
    return _report("convex", gm, t * gx + (1 - t) * gy, (x, y, t))


def check_slog_second(g: Callable, s: float, interval, grid: GridSpec = DEFAULT_GRID,
                      power: float = 1.0) -> HypothesisReport:
    """g(tx + (1-t)y) <= g(x)**(t**s) * g(y)**((1-t)**s).

    ``power`` checks g**power instead of g (used for |f'|**q).
    """
    if not 0 < s <= 1:
        raise ValueError(f"s must lie in (0, 1], got {s}")
    lo, hi = interval
    x, y, t = _triples(lo, hi, grid)
    gx = _positive(g, x, "s-log-convexity")
    gy = _positive(g, y, "s-log-convexity")
    gm = _positive(g, t * x + (1 - t) * y, "s-log-convexity")
    lhs = gm ** power
    rhs = np.exp(power * (t ** s * np.log(gx) + (1 - t) ** s * np.log(gy)))
    return _report(f"slog2(s={s:g})", lhs, rhs, (x, y, t))


def check_slog_first(g: Callable, s: float, interval, grid: GridSpec = DEFAULT_GRID,
                     power: float = 1.0) -> HypothesisReport:
    """g(ax + by) <= g(x)**(a**s) * g(y)**(b**s) with a**s + b**s = 1.

    The weight pair is a = u**(1/s), b = (1-u)**(1/s) for u drawn exactly like
    t in :func:`check_slog_second`, so at s = 1 both checks see identical
    samples. For s < 1 the point ax + by may leave the interval; such samples
    are skipped.
    """
    if not 0 < s <= 1:
        raise ValueError(f"s must lie in (0, 1], got {s}")
    lo, hi = interval
    x, y, u = _triples(lo, hi, grid)
    wa, wb = u ** (1.0 / s), (1.0 - u) ** (1.0 / s)
    z = wa * x + wb * y
    inside = (z >= lo) & (z <= hi)
    z = np.where(inside, z, lo)
    gx = _positive(g, x, "s-log-convexity")
    gy = _positive(g, y, "s-log-convexity")
    gz = _positive(g, z, "s-log-convexity")
    lhs = gz ** power
    rhs = np.exp(power * (wa ** s * np.log(gx) + wb ** s * np.log(gy)))
    return _report(f"slog1(s={s:g})", lhs, rhs, (x, y, wa), valid=inside)


def check_range_unit(g: Callable, interval, grid: GridSpec = DEFAULT_GRID) -> HypothesisReport:
    """0 < g <= 1 on a fine 1-D grid plus random points.

    A nonpositive value counts as an infinite violation.
    """
    lo, hi = interval
    n = (grid.points_per_axis - 1) * 32 + 1
    rng = np.random.default_rng(grid.seed)
    xs = np.concatenate([np.linspace(lo, hi, n), rng.uniform(lo, hi, grid.random_pairs)])
    gs = _evaluate(g, xs)
    viol = np.where(gs > 0, gs - 1.0, np.inf)
    i = int(np.argmax(viol))
    worst = float(viol[i])
    holds = worst <= CHECK_TOL
    return HypothesisReport("unit range", holds, worst, None if holds else (float(xs[i]),), xs.size)


def check_lambda_power(lam: float, u: float, v: float) -> bool:
    """lam**(u**v) <= lam**(u*v) for 0 < lam, u, v <= 1."""
    if not (0 < lam <= 1 and 0 < u <= 1 and 0 < v <= 1):
        raise ValueError(f"need 0 < lambda, u, v <= 1, got ({lam}, {u}, {v})")
    return lam ** (u ** v) <= lam ** (u * v) * (1 + 4 * math.ulp(1.0))
