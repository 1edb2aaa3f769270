"""Theorem verification records and configuration-driven parameter sweeps."""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .bounds import (THEOREMS, VARIANTS, BoundRecord, TheoremParams, endpoint_derivatives,
                     remark1_rhs, thm2_rhs, thm5_rhs, thm6_rhs, thm7_rhs)
from .expr import ExprError, FuncSpec, parse
from .fracint import FracParams, QuadratureNotConverged, hh_gap
from .hypotheses import (DEFAULT_GRID, GridSpec, HypothesisSampleError, check_convex,
                         check_range_unit, check_slog_second)
from .quad import DEFAULT_QUAD, QuadConfig
from .special import PsiArgs, psi_ratio

MARGIN_TOL = 1e-9

# Hypotheses each bound's derivation relies on. alpha_le_one is the range on
# which |(1-t)^alpha - t^alpha| <= |1-2t|^alpha, used by t6 and t7.
THEOREM_FLAGS = {
    "t2": ("convex_abs_deriv",),
    "t5": ("slog_second", "unit_range", "psi_le_one"),
    "remark1": ("slog_second", "unit_range", "psi_le_one"),
    "t6": ("slog_second", "unit_range", "psi_le_one", "alpha_le_one"),
    "t7": ("slog_second", "unit_range", "psi_le_one", "alpha_le_one"),
}
FLAG_NAMES = ("convex_abs_deriv", "slog_second", "unit_range", "psi_le_one", "alpha_le_one")


class ConfigError(ValueError):
    pass


class _Evaluator:
    """Memoises the expensive pieces shared between rows of a sweep."""

    def __init__(self, grid: GridSpec = DEFAULT_GRID, cfg: QuadConfig = DEFAULT_QUAD):
        self.grid = grid
        self.cfg = cfg
        self._cache = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            try:
                self._cache[key] = (fn(), None)
            except (ExprError, ArithmeticError, ValueError) as exc:
                self._cache[key] = (None, exc)
        value, exc = self._cache[key]
        if exc is not None:
            raise exc
        return value

    def gap(self, f: FuncSpec, p: FracParams) -> float:
        return self._memo(("gap", f.source, p), lambda: hh_gap(f, p, self.cfg))

    def flag(self, f: FuncSpec, name: str, s: float = 1.0, power: float = 1.0) -> bool:
        interval = (f.lo, f.hi)
        g = f.abs_derivative

        def run():
            try:
                if name == "convex_abs_deriv":
                    return check_convex(g, interval, self.grid).holds
                if name == "slog_second":
                    return check_slog_second(g, s, interval, self.grid, power=power).holds
                if name == "unit_range":
                    return check_range_unit(g, interval, self.grid).holds
            except (ExprError, HypothesisSampleError):
                # |f'| not evaluable or not strictly positive somewhere
                return False
            raise KeyError(name)

        key = ("flag", f.source, f.lo, f.hi, name, s if name == "slog_second" else None,
               power if name == "slog_second" else None)
        return self._memo(key, run)

    def verify(self, f: FuncSpec, p: FracParams, tp: Optional[TheoremParams], theorem: str) -> BoundRecord:
        variant = tp.variant if tp is not None else "corrected"
        if theorem == "remark1":
            p = FracParams(p.a, p.b, 1.0)
        try:
            flags = self._flags(f, p, tp, theorem)
            lhs = self.gap(f, p)
            if theorem == "t2":
                rhs = thm2_rhs(f, p)
            elif theorem == "t5":
                rhs = thm5_rhs(f, p, tp, self.cfg)
            elif theorem == "remark1":
                rhs = remark1_rhs(f, p.a, p.b, tp)
            elif theorem == "t6":
                rhs = thm6_rhs(f, p, tp)
            elif theorem == "t7":
                rhs = thm7_rhs(f, p, tp)
            else:
                raise ConfigError(f"unknown theorem {theorem!r}")
        except QuadratureNotConverged as exc:
            return BoundRecord(theorem, variant, math.nan, math.nan, math.nan, {},
                               quad_converged=False, error=str(exc))
        except (ExprError, ArithmeticError, ValueError) as exc:
            return BoundRecord(theorem, variant, math.nan, math.nan, math.nan, {}, error=str(exc))
        return BoundRecord(theorem, variant, lhs, rhs, rhs - lhs, flags)

    def _flags(self, f, p, tp, theorem) -> dict:
        flags = {}
        for name in THEOREM_FLAGS[theorem]:
            if name == "alpha_le_one":
                flags[name] = p.alpha <= 1.0
            elif name == "psi_le_one":
                # psi(c, c) <= 1 iff |f'(a)| <= |f'(b)| for every c > 0
                da, db = endpoint_derivatives(f, p.a, p.b)
                flags[name] = db > 0 and psi_ratio(PsiArgs(1.0, 1.0, da, db)) <= 1.0
            elif name == "slog_second":
                power = tp.q if theorem == "t7" else 1.0
                flags[name] = self.flag(f, name, tp.s, power)
            else:
                flags[name] = self.flag(f, name)
        return flags


def verify_theorem(f: FuncSpec, p: FracParams, tp: Optional[TheoremParams], theorem: str,
                   grid: GridSpec = DEFAULT_GRID, cfg: QuadConfig = DEFAULT_QUAD) -> BoundRecord:
    """Gap, bound, margin and the theorem's hypothesis flags for one configuration.

    Hypotheses are checked on |f'| (|f'|**q for t7). Evaluation and quadrature
    failures come back as a record with ``error`` set; they are not raised.
    """
    if theorem not in THEOREMS:
        raise ConfigError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    if theorem != "t2" and tp is None:
        raise ConfigError(f"{theorem} needs theorem parameters")
    if theorem == "t6" and (tp.p is None or tp.q is None):
        raise ConfigError("t6 needs p (and conjugate q)")
    if theorem == "t7" and tp.q is None:
        raise ConfigError("t7 needs q")
    return _Evaluator(grid, cfg).verify(f, p, tp, theorem)


# ------------------------------------------------------------------ sweeps


@dataclass
class SweepConfig:
    functions: list
    a_values: list
    b_values: list
    alpha_values: list
    s_values: list = field(default_factory=lambda: [1.0])
    mu_values: list = field(default_factory=lambda: [0.5])
    p_values: list = field(default_factory=list)
    q_values: list = field(default_factory=list)
    theorems: list = field(default_factory=lambda: list(THEOREMS))
    variants: list = field(default_factory=lambda: list(VARIANTS))
    abs_tol: float = DEFAULT_QUAD.abs_tol
    rel_tol: float = DEFAULT_QUAD.rel_tol
    max_subdivisions: int = DEFAULT_QUAD.max_subdivisions
    points_per_axis: int = DEFAULT_GRID.points_per_axis
    random_pairs: int = DEFAULT_GRID.random_pairs
    seed: int = DEFAULT_GRID.seed
    output: Optional[str] = None
    format: str = "csv"

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
        try:
            cfg = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a single JSON object")
        return cls.from_dict(data)

    @property
    def quad(self) -> QuadConfig:
        return QuadConfig(self.abs_tol, self.rel_tol, self.max_subdivisions)

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.points_per_axis, self.random_pairs, self.seed)

    def validate(self) -> None:
        if not self.theorems:
            raise ConfigError("no theorems selected")
        for t in self.theorems:
            if t not in THEOREMS:
                raise ConfigError(f"theorems: unknown theorem {t!r}")
        if not self.variants:
            raise ConfigError("no variants selected")
        for v in self.variants:
            if v not in VARIANTS:
                raise ConfigError(f"variants: unknown variant {v!r}")
        needed = ["functions", "a_values", "b_values"]
        if any(t != "remark1" for t in self.theorems):
            needed.append("alpha_values")
        if any(t in ("t5", "t6", "t7", "remark1") for t in self.theorems):
            needed.append("s_values")
        if any(t in ("t5", "t7", "remark1") for t in self.theorems):
            needed.append("mu_values")
        if "t6" in self.theorems:
            needed.append("p_values")
        if "t7" in self.theorems:
            needed.append("q_values")
        for name in needed:
            if not getattr(self, name):
                raise ConfigError(f"{name} must be a non-empty list for the selected theorems")
        for a in self.a_values:
            for b in self.b_values:
                if not (0 <= a < b):
                    raise ConfigError(f"a_values/b_values: interval [{a}, {b}] needs 0 <= a < b")
        for alpha in self.alpha_values:
            if not alpha > 0:
                raise ConfigError(f"alpha_values: {alpha} is not positive")
        for s in self.s_values:
            if not 0 < s <= 1:
                raise ConfigError(f"s_values: {s} is outside (0, 1]")
        for mu in self.mu_values:
            if not 0 < mu < 1:
                raise ConfigError(f"mu_values: {mu} is outside (0, 1)")
        for p in self.p_values:
            if not p > 1:
                raise ConfigError(f"p_values: {p} must exceed 1")
        for q in self.q_values:
            if not q >= 1:
                raise ConfigError(f"q_values: {q} must be >= 1")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format: expected csv or json, got {self.format!r}")
        for text in self.functions:
            try:
                parse(text)
            except ExprError as exc:
                raise ConfigError(f"functions: {text!r}: {exc}") from None
        self.quad
        self.grid


@dataclass
class ReportRow:
    function: str
    a: float
    b: float
    alpha: float
    s: Optional[float]
    mu: Optional[float]
    eta: Optional[float]
    p: Optional[float]
    q: Optional[float]
    theorem: str
    variant: str
    convex_abs_deriv: Optional[bool]
    slog_second: Optional[bool]
    unit_range: Optional[bool]
    psi_le_one: Optional[bool]
    alpha_le_one: Optional[bool]
    quad_converged: bool
    hypotheses_hold: bool
    lhs: float
    rhs: float
    margin: float
    error: Optional[str]


ROW_FIELDS = tuple(f.name for f in dataclasses.fields(ReportRow))


def _coordinates(cfg: SweepConfig):
    """Row coordinates in output order: function, a, b, theorem, then that
    theorem's own parameters (alpha, s, mu, p or q), then variant."""
    for text in cfg.functions:
        for a in cfg.a_values:
            for b in cfg.b_values:
                for theorem in cfg.theorems:
                    alphas = [1.0] if theorem == "remark1" else cfg.alpha_values
                    ss = [None] if theorem == "t2" else cfg.s_values
                    mus = cfg.mu_values if theorem in ("t5", "t7", "remark1") else [None]
                    if theorem == "t6":
                        pqs = [(p, p / (p - 1.0)) for p in cfg.p_values]
                    elif theorem == "t7":
                        pqs = [(None, q) for q in cfg.q_values]
                    else:
                        pqs = [(None, None)]
                    for alpha in alphas:
                        for s in ss:
                            for mu in mus:
                                for p, q in pqs:
                                    for variant in cfg.variants:
                                        yield text, a, b, theorem, alpha, s, mu, p, q, variant


def expected_row_count(cfg: SweepConfig) -> int:
    per_theorem = {
        "t2": len(cfg.alpha_values),
        "t5": len(cfg.alpha_values) * len(cfg.s_values) * len(cfg.mu_values),
        "remark1": len(cfg.s_values) * len(cfg.mu_values),
        "t6": len(cfg.alpha_values) * len(cfg.s_values) * len(cfg.p_values),
        "t7": len(cfg.alpha_values) * len(cfg.s_values) * len(cfg.mu_values) * len(cfg.q_values),
    }
    intervals = len(cfg.a_values) * len(cfg.b_values)
    return (len(cfg.functions) * intervals * len(cfg.variants)
            * sum(per_theorem[t] for t in cfg.theorems))


def run_sweep(cfg: SweepConfig) -> list:
    """Evaluate every configuration in the sweep, in the order of :func:`_coordinates`."""
    cfg.validate()
    ev = _Evaluator(cfg.grid, cfg.quad)
    specs = {}
    rows = []
    for text, a, b, theorem, alpha, s, mu, p, q, variant in _coordinates(cfg):
        key = (text, a, b)
        if key not in specs:
            try:
                specs[key] = FuncSpec.from_text(text, a, b)
            except ExprError as exc:
                specs[key] = exc
        spec = specs[key]
        eta = None if mu is None else 1.0 - mu
        if isinstance(spec, Exception):
            rec = BoundRecord(theorem, variant, math.nan, math.nan, math.nan, {}, error=str(spec))
        else:
            # t2 ignores every TheoremParams field except the variant label
            tp = TheoremParams(s if s is not None else 1.0, mu if mu is not None else 0.5,
                               eta if eta is not None else 0.5, p, q, variant)
            rec = ev.verify(spec, FracParams(a, b, alpha), tp, theorem)
        rows.append(ReportRow(
            function=text, a=a, b=b, alpha=alpha, s=s, mu=mu, eta=eta, p=p, q=q,
            theorem=theorem, variant=variant,
            **{name: rec.flags.get(name) for name in FLAG_NAMES},
            quad_converged=rec.quad_converged, hypotheses_hold=rec.hypotheses_hold,
            lhs=rec.lhs, rhs=rec.rhs, margin=rec.margin, error=rec.error,
        ))
    return rows


def contradictions(rows) -> list:
    """Corrected-variant rows whose hypotheses all hold but whose margin is negative."""
    return [r for r in rows
            if r.variant == "corrected" and r.hypotheses_hold and r.margin < -MARGIN_TOL]


# ------------------------------------------------------------------ reports


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, int):
        return format(float(v), ".17g")
    return str(v).replace(",", ";").replace("\n", " ")


def _json_cell(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def format_report(rows, fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(ROW_FIELDS)]
        for r in rows:
            lines.append(",".join(_csv_cell(getattr(r, name)) for name in ROW_FIELDS))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = [{name: _json_cell(getattr(r, name)) for name in ROW_FIELDS} for r in rows]
        return json.dumps(payload, indent=1, allow_nan=False) + "\n"
    raise ConfigError(f"unknown report format {fmt!r}")


def write_report(rows, fmt: str, path) -> None:
    """Write rows as CSV (17 significant digits, LF endings) or a JSON array."""
    if not rows:
        raise ValueError("no rows to write")
    text = format_report(rows, fmt)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
