"""Right-hand sides of the fractional Hermite-Hadamard bounds.

Every bound whose final form contains psi comes in two variants:

``printed``
    the stated closed form: the geometric-interpolant integral is
    replaced by ``|f'(b)|**c * psi(c, c)``.
``corrected``
    the same integral evaluated exactly, ``|f'(b)|**c * Psi(psi(c, c))``
    (see :func:`slog_integral`).

Only the corrected variant is expected to bound the gap. The printed value
is kept so sweeps can show where it fails.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .expr import FuncSpec, evaluate_dual
from .fracint import FracParams, QuadratureNotConverged
from .quad import DEFAULT_QUAD, QuadConfig, QuadResult, integrate
from .special import PsiArgs, psi_cap, psi_ratio

VARIANTS = ("printed", "corrected")
THEOREMS = ("t2", "t5", "t6", "t7", "remark1")
_SUM_TOL = 1e-14


@dataclass(frozen=True)
class TheoremParams:
    s: float = 1.0
    mu: float = 0.5
    eta: float = 0.5
    p: Optional[float] = None
    q: Optional[float] = None
    variant: str = "corrected"

    def __post_init__(self):
        if not 0 < self.s <= 1:
            raise ValueError(f"s must lie in (0, 1], got {self.s}")
        if not (self.mu > 0 and self.eta > 0):
            raise ValueError("mu and eta must be positive")
        if abs(self.mu + self.eta - 1.0) > _SUM_TOL:
            raise ValueError(f"mu + eta must equal 1, got {self.mu} + {self.eta}")
        if self.p is not None:
            if not self.p > 1:
                raise ValueError(f"p must exceed 1, got {self.p}")
            if self.q is None or abs(1.0 / self.p + 1.0 / self.q - 1.0) > _SUM_TOL:
                raise ValueError(f"q must be the conjugate exponent of p={self.p}, got {self.q}")
        if self.q is not None and not self.q >= 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    @classmethod
    def make(cls, s=1.0, mu=0.5, p=None, q=None, variant="corrected") -> "TheoremParams":
        """Build with eta = 1 - mu and, given only p, q = p / (p - 1)."""
        if p is not None and q is None:
            q = p / (p - 1.0)
        return cls(s, mu, 1.0 - mu, p, q, variant)


@dataclass(frozen=True)
class BoundRecord:
    theorem: str
    variant: str
    lhs: float
    rhs: float
    margin: float
    flags: dict = field(default_factory=dict)  # hypothesis name -> bool
    quad_converged: bool = True
    error: Optional[str] = None

    @property
    def hypotheses_hold(self) -> bool:
        return self.error is None and self.quad_converged and all(self.flags.values())


def endpoint_derivatives(f: FuncSpec, a: float, b: float) -> tuple[float, float]:
    return abs(evaluate_dual(f, a).derivative), abs(evaluate_dual(f, b).derivative)


def closed_constants(kind: str, alpha: float, extra: float = 0.0) -> float:
    """Closed forms of the kernel integrals behind the bounds.

    abs_diff  integral of |(1-t)^alpha - t^alpha| over [0,1] = 2/(alpha+1) (1 - 2^-alpha)
    holder    integral of |1-2t|^(alpha p) over [0,1] = 1/(alpha p + 1), extra = p
    young     mu * integral of |1-2t|^(alpha/mu) over [0,1] = mu^2/(alpha + mu), extra = mu
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if kind == "abs_diff":
        return 2.0 / (alpha + 1.0) * (1.0 - 2.0 ** -alpha)
    if kind in ("holder", "young") and not extra > 0:
        raise ValueError(f"{kind} needs a positive extra parameter, got {extra}")
    if kind == "holder":
        return 1.0 / (alpha * extra + 1.0)
    if kind == "young":
        return extra * extra / (alpha + extra)
    raise ValueError(f"unknown closed constant {kind!r}")


def slog_integral(da: float, db: float, c: float) -> float:
    """Exact value of the integral over [0,1] of da^(c t) * db^(c (1-t)) dt.

    Equal to ``db**c * Psi(psi(c, c))``. When psi > 1 the algebraically equal
    ``da**c * Psi(1/psi)`` is used to keep the arithmetic finite.
    """
    if not (da >= 0 and db >= 0 and c > 0):
        raise ValueError(f"slog_integral needs da, db >= 0 and c > 0, got ({da}, {db}, {c})")
    if da == 0.0 or db == 0.0:
        return 0.0
    lo, hi = (da, db) if da <= db else (db, da)
    psi = psi_ratio(PsiArgs(c, c, lo, hi))
    if psi > 0.0:
        return hi ** c * psi_cap(psi)
    # psi underflowed: Psi(psi) = (psi - 1)/ln(psi) -> -1/ln(psi)
    return hi ** c * (-1.0 / (c * (math.log(lo) - math.log(hi))))


def printed_slog_term(da: float, db: float, c: float) -> float:
    """``|f'(b)|**c * psi(c, c)``, the value the printed bounds substitute."""
    if da == 0.0:
        return 0.0
    return db ** c * psi_ratio(PsiArgs(c, c, da, db))


def _slog_term(da: float, db: float, c: float, variant: str) -> float:
    if variant == "printed":
        return printed_slog_term(da, db, c)
    return slog_integral(da, db, c)


@lru_cache(maxsize=4096)
def _young_kernel(alpha: float, mu: float, cfg: QuadConfig) -> QuadResult:
    inv = 1.0 / mu

    def left(t):
        return mu * max((1.0 - t) ** alpha - t ** alpha, 0.0) ** inv

    def right(t):
        return mu * max(t ** alpha - (1.0 - t) ** alpha, 0.0) ** inv

    r1 = integrate(left, 0.0, 0.5, cfg)
    r2 = integrate(right, 0.5, 1.0, cfg)
    return QuadResult(r1.value + r2.value, r1.error_estimate + r2.error_estimate,
                      r1.subdivisions + r2.subdivisions, r1.converged and r2.converged)


def young_kernel_integral(alpha: float, mu: float, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """I1 + I2: mu [(1-t)^alpha - t^alpha]^(1/mu) on [0, 1/2] plus its mirror on [1/2, 1]."""
    res = _young_kernel(float(alpha), float(mu), cfg)
    if not res.converged:
        raise QuadratureNotConverged("young kernel", res)
    return res.value


def thm2_rhs(f: FuncSpec, p: FracParams) -> float:
    """(b-a)/(2(alpha+1)) (1 - 2^-alpha) (|f'(a)| + |f'(b)|), for convex |f'|."""
    da, db = endpoint_derivatives(f, p.a, p.b)
    return (p.b - p.a) / (2.0 * (p.alpha + 1.0)) * (1.0 - 2.0 ** -p.alpha) * (da + db)


def thm5_rhs(f: FuncSpec, p: FracParams, tp: TheoremParams, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    da, db = endpoint_derivatives(f, p.a, p.b)
    term = _slog_term(da, db, tp.s / tp.eta, tp.variant)
    return 0.5 * (p.b - p.a) * (young_kernel_integral(p.alpha, tp.mu, cfg) + tp.eta * term)


def remark1_rhs(f: FuncSpec, a: float, b: float, tp: TheoremParams) -> float:
    """thm5_rhs at alpha = 1, where I1 + I2 = mu^2 / (mu + 1)."""
    da, db = endpoint_derivatives(f, a, b)
    term = _slog_term(da, db, tp.s / tp.eta, tp.variant)
    return 0.5 * (b - a) * (tp.mu * tp.mu / (tp.mu + 1.0) + tp.eta * term)


def thm6_rhs(f: FuncSpec, p: FracParams, tp: TheoremParams) -> float:
    if tp.p is None:
        raise ValueError("t6 needs p (and its conjugate q)")
    da, db = endpoint_derivatives(f, p.a, p.b)
    pre = (p.b - p.a) / (2.0 * (p.alpha * tp.p + 1.0) ** (1.0 / tp.p))
    c = tp.s * tp.q
    if tp.variant == "printed":
        if da == 0.0:
            return 0.0
        return pre * db ** tp.s * psi_ratio(PsiArgs(c, c, da, db)) ** (1.0 / tp.q)
    return pre * slog_integral(da, db, c) ** (1.0 / tp.q)


def thm7_prefactor(alpha: float, q: float, width: float = 1.0) -> float:
    """(b-a) / 2^((q - (1-alpha)(q-1))/q) * ((2^alpha - 1)/(alpha + 1))^(1 - 1/q)."""
    return (width / 2.0 ** ((q - (1.0 - alpha) * (q - 1.0)) / q)
            * ((2.0 ** alpha - 1.0) / (alpha + 1.0)) ** (1.0 - 1.0 / q))


def thm7_prefactor_power_mean(alpha: float, q: float, width: float = 1.0) -> float:
    """The same prefactor as produced by the power-mean step: (b-a)/2 * K^(1 - 1/q)."""
    return 0.5 * width * closed_constants("abs_diff", alpha) ** (1.0 - 1.0 / q)


def thm7_rhs(f: FuncSpec, p: FracParams, tp: TheoremParams) -> float:
    if tp.q is None:
        raise ValueError("t7 needs q")
    da, db = endpoint_derivatives(f, p.a, p.b)
    q = tp.q
    term = _slog_term(da, db, tp.s * q / tp.eta, tp.variant)
    inner = closed_constants("young", p.alpha, tp.mu) + tp.eta * term
    return thm7_prefactor(p.alpha, q, p.b - p.a) * inner ** (1.0 / q)


def holder_step_rhs(f: FuncSpec, p: FracParams, tp: TheoremParams, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """Intermediate Hoelder bound behind t6, before the psi substitution.

    (b-a)/2 * (1/(alpha p + 1))^(1/p) * (integral of |f'(a)|^(q t^s) |f'(b)|^(q (1-t)^s))^(1/q)
    """
    da, db = endpoint_derivatives(f, p.a, p.b)
    s, q = tp.s, tp.q

    def integrand(t):
        return da ** (q * t ** s) * db ** (q * (1.0 - t) ** s)

    res = integrate(integrand, 0.0, 1.0, cfg)
    if not res.converged:
        raise QuadratureNotConverged("hoelder step", res)
    return (0.5 * (p.b - p.a) * closed_constants("holder", p.alpha, tp.p) ** (1.0 / tp.p)
            * res.value ** (1.0 / q))


def young_split(m: float, n: float, mu: float, eta: float) -> bool:
    """m n <= mu m^(1/mu) + eta n^(1/eta) for mu + eta = 1.

    A relative slack of 1e-13 absorbs rounding and the 1e-14 tolerance on
    mu + eta.
    """
    if not (mu > 0 and eta > 0) or abs(mu + eta - 1.0) > _SUM_TOL:
        raise ValueError(f"need mu, eta > 0 with mu + eta = 1, got ({mu}, {eta})")
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    try:
        rhs = mu * m ** (1.0 / mu) + eta * n ** (1.0 / eta)
    except OverflowError:
        return True  # an infinite right side bounds anything finite
    return m * n <= rhs * (1.0 + 1e-13)
