"""Gamma function and the endpoint-derivative auxiliaries psi and Psi."""
from __future__ import annotations

import math
from dataclasses import dataclass

# Lanczos approximation, g = 7, nine coefficients (exact interpolation of
# Gamma(z + 1) at z = 0..8; see tests/test_special.py for the derivation).
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993228,
    676.52036812188509857,
    -1259.1392167224028705,
    771.32342877765307885,
    -176.61502916214059907,
    12.507343278686904814,
    -0.1385710952657201169,
    9.9843695780195708596e-6,
    1.5056327351493115583e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
GAMMA_MAX_ARG = 170.0
PSI_SERIES_RADIUS = 1e-4


def gamma(x: float) -> float:
    """Gamma(x) for 0 < x <= 170.

    Arguments below 1 are lifted with Gamma(x) = Gamma(x + 1) / x; no
    reflection formula is needed because only positive orders occur.
    """
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"gamma requires x > 0, got {x!r}")
    if x > GAMMA_MAX_ARG:
        raise OverflowError(f"gamma({x!r}) overflows double precision")
    if x < 1.0:
        return _lanczos(x) / x
    return _lanczos(x - 1.0)


def _lanczos(z: float) -> float:
    # Gamma(z + 1) for z >= 0
    acc = _LANCZOS_P[0]
    for i in range(1, len(_LANCZOS_P)):
        acc += _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power so t^(z+1/2) does not overflow before e^-t shrinks it
    half = math.pow(t, 0.5 * (z + 0.5))
    return _SQRT_2PI * half * math.exp(-t) * half * acc


def psi_cap(psi: float) -> float:
    """Mean value of psi**t over t in [0, 1], i.e. (psi - 1) / ln(psi).

    Psi(1) = 1 exactly. Within 1e-4 of 1 a short series replaces the
    removable singularity.
    """
    psi = float(psi)
    if not psi > 0.0:
        raise ValueError(f"Psi requires psi > 0, got {psi!r}")
    eps = psi - 1.0
    if eps == 0.0:
        return 1.0
    if abs(eps) < PSI_SERIES_RADIUS:
        return 1.0 + eps * (0.5 + eps * (-1.0 / 12.0 + eps / 24.0))
    return eps / math.log(psi)


def psi_cap_out_of_domain(psi: float) -> bool:
    """True when psi lies outside the range (0, 1] where Psi was originally defined."""
    return not 0.0 < psi <= 1.0


@dataclass(frozen=True)
class PsiArgs:
    u: float
    v: float
    da: float  # |f'(a)|
    db: float  # |f'(b)|

    def __post_init__(self):
        if not (self.u > 0 and self.v > 0):
            raise ValueError("psi needs u, v > 0")
        if not self.da >= 0:
            raise ValueError("psi needs |f'(a)| >= 0")
        if not self.db > 0:
            raise ValueError("psi needs |f'(b)| > 0")


def psi_ratio(args: PsiArgs) -> float:
    """|f'(a)|**u * |f'(b)|**(-v), evaluated in log space."""
    if args.da == 0.0:
        return 0.0
    try:
        return math.exp(args.u * math.log(args.da) - args.v * math.log(args.db))
    except OverflowError:
        return math.inf
