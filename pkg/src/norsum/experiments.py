"""Experiment harness: convergence rates, norm sweeps, sharpness and growth probes.

Every command is a pure function of its configuration: grid points are
evaluated independently (optionally in parallel, capped by the
SUMMABILITY_THREADS environment variable) and the rows are sorted by fixed
keys before serialization, so the output does not depend on scheduling.
Serialized wall times default to zero to keep byte-identical output across
runs; measured times stay on the in-memory rows and can be opted into.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .dirichlet import (
    INTERIOR_QUADRATURE,
    PointMassWeight,
    QuadratureSpec,
    local_dirichlet_energy,
    local_dirichlet_energy_quadrature,
    parse_weight_spec,
    weighted_dirichlet_energy,
)
from .errors import BoundInapplicable, ConfigError, DegenerateFit, ReferenceTooShort, SummabilityError
from .norlund import NorlundOperator, multiplier_polynomial, norlund_sum, norlund_sum_definition
from .operator_norms import (
    build_matrix,
    lemma_bound_upper,
    sharpness_probe,
    spectral_norm,
    thm_lower_bound,
    thm_upper_bound,
)
from .power_series import CoefficientSeries, aleman_divide, hadamard_product, parse_function_spec, taylor_partial_sum
from .sequences import DeterminingSequence, growth_report, parse_sequence_spec

COMMANDS = ("convergence", "norms", "sharpness", "growth", "verify")
VALUE_KINDS = ("error_norm", "spectral_norm", "upper_bound", "lower_bound", "rho", "beta")
CSV_HEADER = "value_kind,n,alpha,value,wall_time_ms"
DEFAULT_GRID = "16:512:x2"


def parse_grid(text: str) -> tuple[int, ...]:
    """Parse ``LO:HI:xFACTOR`` (geometric) or ``LO:HI:+STEP`` (arithmetic)."""
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise ValueError(f"grid spec must be LO:HI:xF or LO:HI:+S, got {text!r}")
    lo, hi = int(parts[0]), int(parts[1])
    step = parts[2]
    if lo > hi:
        raise ValueError("grid start must not exceed its stop")
    points: list[int] = []
    if step.startswith("x"):
        factor = float(step[1:])
        if not factor > 1.0:
            raise ValueError("geometric grid factor must be > 1")
        cur = lo
        while cur <= hi:
            points.append(cur)
            cur = max(cur + 1, int(round(cur * factor)))
    elif step.startswith("+"):
        inc = int(step[1:])
        if inc < 1:
            raise ValueError("arithmetic grid step must be >= 1")
        points = list(range(lo, hi + 1, inc))
    else:
        raise ValueError(f"grid step must start with 'x' or '+', got {step!r}")
    if not points:
        raise ValueError("grid is empty")
    return tuple(points)


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    sequence_spec: str = "ones"
    alpha: float = 1.0
    n_grid: tuple[int, ...] = parse_grid(DEFAULT_GRID)
    weight_spec: str = "dirac:1,0"
    function_spec: str = "zeta2"
    reference_degree: int = 4096
    output_path: str = "-"
    output_format: str = "csv"
    rng_seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not self.n_grid:
            raise ConfigError("n_grid must be non-empty")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ConfigError("n_grid must be strictly increasing")
        if self.reference_degree <= max(self.n_grid):
            raise ConfigError("reference_degree must exceed the largest grid point")
        if not self.alpha > 0:
            raise ConfigError("alpha must be > 0")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.rng_seed < 0:
            raise ConfigError("rng_seed must be non-negative")


@dataclass(frozen=True)
class ExperimentRow:
    value_kind: str
    n: int
    alpha: float
    value: float
    wall_time_ms: float


@dataclass(frozen=True)
class FitSummary:
    slope: float
    intercept: float


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ExperimentResult:
    rows: list[ExperimentRow] = field(default_factory=list)
    summary: Optional[FitSummary] = None
    checks: tuple[CheckOutcome, ...] = ()

    def sort(self) -> None:
        self.rows.sort(key=lambda r: (r.value_kind, r.n))


def non_increasing_probe_sequence(length: int) -> DeterminingSequence:
    """p_n = 1 + 1/(n+1): non-increasing, bounded away from zero."""
    n = np.arange(length, dtype=float)
    return DeterminingSequence.custom(1.0 + 1.0 / (n + 1.0))


def convergence_error(seq: DeterminingSequence, alpha: float, w: PointMassWeight,
                      f_ref: CoefficientSeries, n: int) -> float:
    """Weighted Dirichlet distance between the order-n sum of f_ref and f_ref.

    The reference truncation stands in for the represented function, so its
    degree must dominate the operator order (>= 4n).  Constant references
    are exempt: they are exact fixed points at every order.
    """
    deg = f_ref.degree()
    if deg > 0 and deg < 4 * n:
        raise ReferenceTooShort(
            f"reference degree {deg} is below 4*n = {4 * n}")
    op = NorlundOperator(seq, alpha, n)
    nf = norlund_sum(op, f_ref).coeffs
    delta = -np.asarray(f_ref.coeffs)
    m = min(len(nf), len(delta))
    delta[:m] += nf[:m]
    ds = CoefficientSeries._wrap(delta)
    return float(np.sqrt(abs(ds[0]) ** 2 + weighted_dirichlet_energy(ds, w)))


def fit_rate(points: Iterable[tuple[float, float]]) -> tuple[float, float]:
    """Ordinary least squares of ln(e_n) against ln(n): (slope, intercept)."""
    pts = list(points)
    if len(pts) < 3:
        raise ValueError("need at least 3 points to fit a rate")
    ns = np.asarray([p[0] for p in pts], dtype=float)
    es = np.asarray([p[1] for p in pts], dtype=float)
    if np.any(es <= 0.0):
        raise ValueError("rate fitting needs strictly positive errors")
    if np.all(ns == ns[0]):
        raise DegenerateFit("all grid points coincide")
    slope, intercept = np.polyfit(np.log(ns), np.log(es), 1)
    return float(slope), float(intercept)


def _thread_count() -> int:
    raw = os.environ.get("SUMMABILITY_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        raise ConfigError(f"SUMMABILITY_THREADS must be an integer, got {raw!r}") from None
    return max(1, count)


def _map_points(fn: Callable, items: Sequence) -> list:
    workers = min(_thread_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _timed(fn: Callable[[], float]) -> tuple[float, float]:
    start = time.perf_counter()
    value = fn()
    return value, (time.perf_counter() - start) * 1e3


def _setup(config: ExperimentConfig):
    """Materialize sequence/weight/function; failures here are config errors."""
    try:
        seq = parse_sequence_spec(config.sequence_spec)
        w = parse_weight_spec(config.weight_spec)
        f_ref = None
        if config.command == "convergence":
            f_ref = parse_function_spec(config.function_spec, config.reference_degree)
        return seq, w, f_ref
    except ConfigError:
        raise
    except (ValueError, OSError, SummabilityError) as exc:
        raise ConfigError(str(exc)) from exc


def run(config: ExperimentConfig) -> ExperimentResult:
    """Execute one experiment; rows come back sorted by (value_kind, n)."""
    seq, w, f_ref = _setup(config)
    result = ExperimentResult()
    if config.command == "convergence":
        _run_convergence(config, seq, w, f_ref, result)
    elif config.command == "norms":
        _run_norms(config, seq, result)
    elif config.command == "sharpness":
        _run_sharpness(config, seq, result)
    elif config.command == "growth":
        _run_growth(config, seq, result)
    elif config.command == "verify":
        result.checks = tuple(run_verification(config.rng_seed))
    result.sort()
    return result


def _run_convergence(config, seq, w, f_ref, result) -> None:
    alpha = config.alpha

    def point(n: int) -> ExperimentRow:
        value, ms = _timed(lambda: convergence_error(seq, alpha, w, f_ref, n))
        return ExperimentRow("error_norm", n, alpha, value, ms)

    rows = _map_points(point, config.n_grid)
    result.rows.extend(rows)
    if len(rows) >= 3 and all(r.value > 0 for r in rows):
        slope, intercept = fit_rate([(r.n, r.value) for r in rows])
        result.summary = FitSummary(slope, intercept)


def _run_norms(config, seq, result) -> None:
    alpha = config.alpha
    seed = config.rng_seed

    def point(n: int) -> list[ExperimentRow]:
        rows = []
        sigma, ms = _timed(lambda: spectral_norm(build_matrix(seq, n, alpha), seed=seed))
        rows.append(ExperimentRow("spectral_norm", n, alpha, sigma, ms))
        upper, ms = _timed(lambda: _best_upper(seq, n, alpha))
        rows.append(ExperimentRow("upper_bound", n, alpha, upper, ms))
        if n >= 4 and n % 2 == 0:
            try:
                lower, ms = _timed(lambda: thm_lower_bound(seq, n, n // 2, alpha))
            except BoundInapplicable:
                return rows
            rows.append(ExperimentRow("lower_bound", n, alpha, lower, ms))
        return rows

    for rows in _map_points(point, config.n_grid):
        result.rows.extend(rows)


def _best_upper(seq, n: int, alpha: float) -> float:
    upper = lemma_bound_upper(seq, n, alpha)
    try:
        upper = min(upper, thm_upper_bound(seq, n, alpha))
    except BoundInapplicable:
        pass
    return upper


def _run_sharpness(config, seq, result) -> None:
    def point(n: int) -> ExperimentRow:
        value, ms = _timed(lambda: sharpness_probe(seq, [n], seed=config.rng_seed)[0][1])
        return ExperimentRow("spectral_norm", n, 0.5, value, ms)

    result.rows.extend(_map_points(point, config.n_grid))


def _run_growth(config, seq, result) -> None:
    n_lo, n_hi = config.n_grid[0], config.n_grid[-1]
    if n_lo < 1:
        raise ConfigError("growth grids start at n >= 1")
    if n_lo >= n_hi:
        raise ConfigError("growth needs a window with at least two points")
    start = time.perf_counter()
    report = growth_report(seq, n_lo, n_hi)
    ms = (time.perf_counter() - start) * 1e3
    for n in config.n_grid:
        result.rows.append(ExperimentRow("rho", n, config.alpha,
                                         report.rho_values[n - n_lo], 0.0))
    result.rows.append(ExperimentRow("beta", n_hi, config.alpha, report.beta_estimate, ms))


# ---------------------------------------------------------------------------
# verification suite (the `verify` command)
# ---------------------------------------------------------------------------

def _random_sequence(rng) -> DeterminingSequence:
    kind = rng.integers(0, 5)
    if kind == 0:
        return DeterminingSequence.ones()
    if kind == 1:
        return DeterminingSequence.linear()
    if kind == 2:
        return DeterminingSequence.monomial(int(rng.integers(1, 4)))
    if kind == 3:
        return DeterminingSequence.logarithmic()
    values = rng.uniform(0.05, 2.0, size=80)
    return DeterminingSequence.custom(values)


def _random_series(rng, max_degree: int) -> CoefficientSeries:
    deg = int(rng.integers(0, max_degree + 1))
    c = rng.uniform(-1, 1, deg + 1) + 1j * rng.uniform(-1, 1, deg + 1)
    return CoefficientSeries(c)


def run_verification(seed: int = 0) -> list[CheckOutcome]:
    """Deterministic invariant battery behind the `verify` command.

    Covers the identities and bounds that hold at every size.  The
    closed-form upper bound for exponents below one is checked only through
    the difference-sum bound, since it is an asymptotic envelope and is
    exceeded by the exact norm at small orders.
    """
    rng = np.random.default_rng(seed)
    checks: list[CheckOutcome] = []

    def record(name: str, passed: bool, detail: str = "") -> None:
        checks.append(CheckOutcome(name, bool(passed), detail))

    # multiplier form vs averaging definition, Hadamard identity, linearity
    worst = 0.0
    hadamard_exact = True
    for _ in range(40):
        seq = _random_sequence(rng)
        n = int(rng.integers(0, 48))
        f = _random_series(rng, 48)
        op = NorlundOperator(seq, 1.0, n)
        a = norlund_sum(op, f).coeffs
        b = norlund_sum_definition(op, f).coeffs
        worst = max(worst, float(np.max(np.abs(a - b))))
        h = hadamard_product(multiplier_polynomial(op), taylor_partial_sum(f, n)).coeffs
        hadamard_exact = hadamard_exact and np.array_equal(a, h)
    record("norlund multiplier form matches averaging definition", worst <= 1e-12,
           f"max coefficient gap {worst:.3e}")
    record("hadamard representation is exact", hadamard_exact)

    worst = 0.0
    for _ in range(20):
        seq = _random_sequence(rng)
        n = int(rng.integers(0, 32))
        alpha = float(rng.uniform(0.55, 2.5))
        op = NorlundOperator(seq, alpha, n)
        f = _random_series(rng, 32)
        g = _random_series(rng, 32)
        clin = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        m = min(len(f), len(g))
        combo = CoefficientSeries(clin * f.coeffs[:m] + g.coeffs[:m])
        lhs = norlund_sum(op, combo).coeffs
        rhs = clin * norlund_sum(op, CoefficientSeries(f.coeffs[:m])).coeffs \
            + norlund_sum(op, CoefficientSeries(g.coeffs[:m])).coeffs
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    record("operator linearity", worst <= 1e-12, f"max coefficient gap {worst:.3e}")

    worst = 0.0
    for _ in range(100):
        f = _random_series(rng, 48)
        zeta = rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        a, q = aleman_divide(f, zeta)
        rebuilt = np.zeros(len(f), dtype=complex)
        rebuilt[0] = a - zeta * q.coeffs[0]
        if len(f) > 1:
            rebuilt[1:] += q.coeffs
            rebuilt[1:] -= zeta * np.concatenate([q.coeffs[1:], [0.0]])
        scale = max(1.0, float(np.max(np.abs(f.coeffs))))
        worst = max(worst, float(np.max(np.abs(rebuilt - f.coeffs))) / scale)
    record("division round trip", worst <= 1e-12, f"max reconstruction gap {worst:.3e}")

    worst = 0.0
    for _ in range(5):
        f = _random_series(rng, 6)
        for _ in range(3):
            zeta = 0.9 * np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            exact = local_dirichlet_energy(f, zeta)
            approx = local_dirichlet_energy_quadrature(f, zeta, INTERIOR_QUADRATURE)
            worst = max(worst, abs(approx - exact) / max(abs(exact), 1e-12))
    record("local energy: division vs quadrature (interior)", worst <= 1e-6,
           f"worst relative gap {worst:.3e}")

    worst = 0.0
    for _ in range(3):
        f = _random_series(rng, 6)
        zeta = np.exp(1j * rng.uniform(0, 2 * np.pi))
        exact = local_dirichlet_energy(f, zeta)
        approx = local_dirichlet_energy_quadrature(
            f, zeta, QuadratureSpec(96, 1024, 3.0), rel_tol=1e-4)
        worst = max(worst, abs(approx - exact) / max(abs(exact), 1e-12))
    record("local energy: division vs quadrature (boundary)", worst <= 1e-4,
           f"worst relative gap {worst:.3e}")

    seqs = {
        "ones": DeterminingSequence.ones(),
        "linear": DeterminingSequence.linear(),
        "monomial:2": DeterminingSequence.monomial(2),
    }
    sandwich_ok = True
    lemma_ok = True
    detail = ""
    for name, seq in seqs.items():
        for n in (2, 4, 8, 16, 32):
            for alpha in (0.6, 0.75, 1.0, 1.5, 2.0):
                s2 = spectral_norm(build_matrix(seq, n, alpha), seed=seed) ** 2
                if s2 > lemma_bound_upper(seq, n, alpha) * (1 + 1e-9):
                    lemma_ok = False
                    detail = f"{name} n={n} alpha={alpha}"
                if alpha >= 1.0 and s2 > thm_upper_bound(seq, n, alpha) * (1 + 1e-9):
                    sandwich_ok = False
                    detail = f"{name} n={n} alpha={alpha}"
                s2_even = spectral_norm(build_matrix(seq, 2 * n, alpha), seed=seed) ** 2
                if thm_lower_bound(seq, 2 * n, n, alpha) > s2_even * (1 + 1e-9):
                    sandwich_ok = False
                    detail = f"{name} 2n={2 * n} alpha={alpha} (lower)"
    record("difference-sum upper bound", lemma_ok, detail)
    record("closed-form bounds (alpha >= 1 upper, all-alpha lower)", sandwich_ok, detail)

    ones = DeterminingSequence.ones()
    cesaro_ok = all(
        spectral_norm(build_matrix(ones, n, 1.0), seed=seed) < 1.0 for n in range(1, 65))
    record("Cesaro norms stay below one", cesaro_ok)

    rep = growth_report(DeterminingSequence.ones(), 1, 100)
    ok_beta = 0.49 < rep.beta_estimate < 0.51
    rep_geo = growth_report(DeterminingSequence.geometric(2.0), 1, 30)
    record("growth diagnostics", ok_beta and rep_geo.beta_estimate < 1e-8,
           f"ones beta={rep.beta_estimate:.4f}, geom beta={rep_geo.beta_estimate:.2e}")

    return checks


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def to_csv(result: ExperimentResult, include_timings: bool = False) -> str:
    """Fixed five-column schema; floats printed with 17 significant digits."""
    lines = [CSV_HEADER]
    for r in result.rows:
        wt = r.wall_time_ms if include_timings else 0.0
        lines.append(f"{r.value_kind},{r.n},{r.alpha:.17g},{r.value:.17g},{wt:.17g}")
    return "\n".join(lines) + "\n"


def to_json(result: ExperimentResult, include_timings: bool = False) -> str:
    rows = [
        {
            "value_kind": r.value_kind,
            "n": r.n,
            "alpha": r.alpha,
            "value": r.value,
            "wall_time_ms": r.wall_time_ms if include_timings else 0.0,
        }
        for r in result.rows
    ]
    summary = None
    if result.summary is not None:
        summary = {"slope": result.summary.slope, "intercept": result.summary.intercept}
    return json.dumps({"rows": rows, "summary": summary}, sort_keys=True, indent=2) + "\n"
