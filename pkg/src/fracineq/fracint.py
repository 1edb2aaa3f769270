"""Riemann-Liouville integrals and the fractional Hermite-Hadamard gap."""
from __future__ import annotations

from dataclasses import dataclass

from .expr import FuncSpec, evaluate_dual
from .quad import DEFAULT_QUAD, QuadConfig, QuadResult, integrate, integrate_power_kernel
from .special import gamma


class QuadratureNotConverged(ArithmeticError):
    def __init__(self, what: str, result: QuadResult):
        self.result = result
        super().__init__(
            f"{what}: quadrature did not converge after {result.subdivisions} panels "
            f"(estimate {result.value!r}, error {result.error_estimate!r})"
        )


@dataclass(frozen=True)
class FracParams:
    a: float
    b: float
    alpha: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
        if not self.alpha > 0:
            raise ValueError(f"need alpha > 0, got {self.alpha}")
        if self.a < 0:
            raise ValueError(f"need a >= 0, got {self.a}")


def _checked(what: str, res: QuadResult) -> float:
    if not res.converged:
        raise QuadratureNotConverged(what, res)
    return res.value


def j_plus(f: FuncSpec, p: FracParams, x: float, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """Left-sided operator J_{a+}^alpha f evaluated at x, for a < x <= b."""
    if not p.a < x <= p.b:
        raise ValueError(f"J_a+ needs a < x <= b, got x={x}")
    res = integrate_power_kernel(f, p.a, x, p.alpha, "upper", cfg)
    return _checked("J_a+", res) / gamma(p.alpha)


def j_minus(f: FuncSpec, p: FracParams, x: float, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """Right-sided operator J_{b-}^alpha f evaluated at x, for a <= x < b."""
    if not p.a <= x < p.b:
        raise ValueError(f"J_b- needs a <= x < b, got x={x}")
    res = integrate_power_kernel(f, x, p.b, p.alpha, "lower", cfg)
    return _checked("J_b-", res) / gamma(p.alpha)


def signed_gap(f: FuncSpec, p: FracParams, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """(f(a) + f(b))/2 - Gamma(alpha+1)/(2 (b-a)^alpha) [J_{b-} f(a) + J_{a+} f(b)]."""
    a, b, alpha = p.a, p.b, p.alpha
    mean = gamma(alpha + 1.0) / (2.0 * (b - a) ** alpha) * (j_minus(f, p, a, cfg) + j_plus(f, p, b, cfg))
    return 0.5 * (f(a) + f(b)) - mean


def hh_gap(f: FuncSpec, p: FracParams, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    return abs(signed_gap(f, p, cfg))


def lemma1_rhs(f: FuncSpec, p: FracParams, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """(b-a)/2 * integral over [0,1] of [(1-t)^alpha - t^alpha] f'(ta + (1-t)b) dt.

    Signed; equals :func:`signed_gap` for differentiable f.
    """
    a, b, alpha = p.a, p.b, p.alpha

    def integrand(t):
        return ((1.0 - t) ** alpha - t ** alpha) * evaluate_dual(f, t * a + (1.0 - t) * b).derivative

    res = integrate(integrand, 0.0, 1.0, cfg, breakpoints=(0.5,))
    return 0.5 * (b - a) * _checked("lemma rhs", res)


def classical_hadamard_triple(f: FuncSpec, a: float, b: float, cfg: QuadConfig = DEFAULT_QUAD):
    """(f((a+b)/2), mean of f over [a, b], (f(a)+f(b))/2)."""
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    mean = _checked("mean value", integrate(f, a, b, cfg)) / (b - a)
    return f(0.5 * (a + b)), mean, 0.5 * (f(a) + f(b))
