"""Globally adaptive Gauss-Kronrod (7/15) quadrature.

Every rule node is interior to its panel, so integrands are never evaluated
at interval endpoints. That is what lets :func:`integrate_power_kernel`
handle weakly singular ``(x - t)**(alpha - 1)`` kernels after substitution.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable

# Kronrod abscissae on [-1, 1] (nonnegative half, descending); the odd
# positions 1, 3, 5, 7 are the 7-point Gauss nodes.
_XK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


class QuadEvaluationError(ArithmeticError):
    def __init__(self, abscissa: float):
        self.abscissa = abscissa
        super().__init__(f"integrand returned NaN at t={abscissa!r}")


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadConfig()


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    subdivisions: int
    converged: bool

    def __float__(self) -> float:
        return self.value


def _gk15(g: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    f0 = _call(g, centre)
    kronrod = _WK[7] * f0
    gauss = _WG[3] * f0
    for j in range(7):
        dx = half * _XK[j]
        fsum = _call(g, centre - dx) + _call(g, centre + dx)
        kronrod += _WK[j] * fsum
        if j % 2 == 1:
            gauss += _WG[j // 2] * fsum
    return kronrod * half, abs((kronrod - gauss) * half)


def _call(g, t: float) -> float:
    y = g(t)
    if y != y:
        raise QuadEvaluationError(t)
    return y


def integrate(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: QuadConfig = DEFAULT_QUAD,
    breakpoints: Iterable[float] = (),
) -> QuadResult:
    """Integrate ``g`` over [lo, hi].

    The panel with the largest Kronrod-minus-Gauss discrepancy is bisected
    until the summed discrepancy meets ``max(abs_tol, rel_tol * |value|)`` or
    the panel budget runs out; the latter returns ``converged=False`` with
    the best estimate rather than raising. ``breakpoints`` seed the initial
    partition (use them at kinks).
    """
    lo, hi = float(lo), float(hi)
    if hi < lo:
        raise ValueError(f"integrate needs lo <= hi, got [{lo}, {hi}]")
    if hi == lo:
        return QuadResult(0.0, 0.0, 0, True)
    edges = [lo, *sorted(p for p in breakpoints if lo < p < hi), hi]

    heap = []  # (-error, sequence, lo, hi, value, error); sequence makes ties deterministic
    seq = 0
    for a, b in zip(edges, edges[1:]):
        v, e = _gk15(g, a, b)
        heap.append((-e, seq, a, b, v, e))
        seq += 1
    heapq.heapify(heap)

    while True:
        value = math.fsum(item[4] for item in heap)
        error = math.fsum(item[5] for item in heap)
        if error <= max(cfg.abs_tol, cfg.rel_tol * abs(value)):
            return QuadResult(value, error, len(heap), True)
        if len(heap) >= cfg.max_subdivisions:
            return QuadResult(value, error, len(heap), False)
        _, _, a, b, _, _ = heap[0]
        mid = 0.5 * (a + b)
        if not a < mid < b:
            # panel already at floating-point resolution
            return QuadResult(value, error, len(heap), False)
        heapq.heappop(heap)
        for x0, x1 in ((a, mid), (mid, b)):
            v, e = _gk15(g, x0, x1)
            heapq.heappush(heap, (-e, seq, x0, x1, v, e))
            seq += 1


def integrate_power_kernel(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    alpha: float,
    singular_end: str,
    cfg: QuadConfig = DEFAULT_QUAD,
) -> QuadResult:
    """Integrate ``d(t)**(alpha - 1) * g(t)`` over [lo, hi].

    ``d(t)`` is the distance from ``t`` to ``singular_end`` ("lower" or
    "upper"). With ``w = d**alpha`` the integral becomes
    ``(1/alpha) * integral of g(t(w)) over [0, (hi - lo)**alpha]``, which
    has no kernel singularity.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha!r}")
    if singular_end not in ("lower", "upper"):
        raise ValueError(f"singular_end must be 'lower' or 'upper', got {singular_end!r}")
    lo, hi = float(lo), float(hi)
    if hi < lo:
        raise ValueError(f"integrate needs lo <= hi, got [{lo}, {hi}]")
    inv = 1.0 / alpha
    width = (hi - lo) ** alpha

    if singular_end == "lower":
        def inner(w):
            return g(min(lo + w ** inv, hi))
    else:
        def inner(w):
            return g(max(hi - w ** inv, lo))

    res = integrate(inner, 0.0, width, replace(cfg, abs_tol=cfg.abs_tol * alpha))
    return QuadResult(res.value * inv, res.error_estimate * inv, res.subdivisions, res.converged)
