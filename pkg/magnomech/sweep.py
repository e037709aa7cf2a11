"""
Parameter sweeps over the full correlation pipeline.

Each grid point runs steady state -> drift/diffusion -> stability gate ->
Lyapunov solve -> measures independently, so points can be farmed out to a
process pool. Results always come back in grid order (axis2 major, axis1
minor) whatever the worker count. A failing point is recorded with a status
and never aborts the grid.
"""

import math
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Dict, Any, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from .exceptions import (
    ConvergenceError, DomainError, NoSteadyStateError, NumericalError,
    PhysicalityError, SingularityError,
)
from .model import SystemParams, MODES
from .steadystate import SteadyState, solve_steady_state
from .dynamics import build_drift_diffusion
from .lyapunov import StabilityReport, stability, solve_lyapunov, RESIDUAL_TOL
from .measures import CorrelationReport, DEFAULT_PAIRS, STEERING_THRESHOLD, correlation_report

logger = logging.getLogger(__name__)

SWEEP_PARAMETERS = (
    "delta_1", "delta_2", "delta_m0", "delta_m", "xi", "phi", "Gamma", "T", "G_mb", "eps_m",
)
# Axes reported a second time in units of ω_b.
FREQUENCY_AXES = ("delta_1", "delta_2", "delta_m0", "delta_m", "xi", "Gamma", "G_mb")

STATUS_OK = "ok"
STATUS_UNSTABLE = "unstable"


@dataclass(frozen=True)
class SweepAxis:
    """Uniform grid over one parameter, endpoints included."""
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in SWEEP_PARAMETERS:
            raise DomainError(f"{self.name!r} cannot be swept (allowed: {', '.join(SWEEP_PARAMETERS)})")
        if int(self.count) != self.count or self.count < 2:
            raise DomainError(f"axis {self.name} needs count >= 2, got {self.count!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise DomainError(f"axis {self.name} bounds must be finite")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.count))

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "start": self.start, "stop": self.stop, "count": int(self.count)}


@dataclass(frozen=True)
class SweepSpec:
    """
    What to sweep and what to compute at each point.

    Attributes:
        axis1: Inner (fastest varying) axis
        base: Operating point the axes are applied to
        axis2: Optional outer axis
        pairs: Bipartitions (u, v) to evaluate
        stability_only: Skip the covariance matrix and measures
        steady_state_tol, max_iter, residual_tol: Solver settings
    """
    axis1: SweepAxis
    base: SystemParams
    axis2: Optional[SweepAxis] = None
    pairs: Tuple[Tuple[str, str], ...] = DEFAULT_PAIRS
    stability_only: bool = False
    steady_state_tol: float = 1e-12
    max_iter: int = 200
    residual_tol: float = RESIDUAL_TOL

    def __post_init__(self):
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise DomainError(f"both axes sweep {self.axis1.name}")
        for u, v in self.pairs:
            if u not in MODES or v not in MODES or u == v:
                raise DomainError(f"invalid pair ({u}, {v})")

    @property
    def axes(self) -> List[SweepAxis]:
        return [self.axis1] if self.axis2 is None else [self.axis1, self.axis2]

    def grid(self) -> List[Dict[str, float]]:
        """Coordinates of every point, axis2 major and axis1 minor."""
        outer = [None] if self.axis2 is None else self.axis2.values()
        points = []
        for v2 in outer:
            for v1 in self.axis1.values():
                coords = {self.axis1.name: float(v1)}
                if self.axis2 is not None:
                    coords[self.axis2.name] = float(v2)
                points.append(coords)
        return points


@dataclass(frozen=True)
class PointResult:
    """Outcome of one grid point."""
    coords: Dict[str, float]
    status: str
    message: str = ""
    steady_state: Optional[SteadyState] = None
    stability: Optional[StabilityReport] = None
    correlations: Optional[CorrelationReport] = None


def _apply_coords(base: SystemParams, coords: Dict[str, float]) -> SystemParams:
    changes = dict(coords)
    if "delta_m0" in changes:
        # sweeping the bare detuning releases a held effective one
        changes.setdefault("delta_m", None)
    return base.with_updates(**changes)


def evaluate_point(base: SystemParams, coords: Dict[str, float],
                   pairs: Sequence[Tuple[str, str]] = DEFAULT_PAIRS,
                   stability_only: bool = False, steady_state_tol: float = 1e-12,
                   max_iter: int = 200, residual_tol: float = RESIDUAL_TOL) -> PointResult:
    """Run the pipeline at ``base`` moved to ``coords``; errors become statuses."""
    ss = None
    report = None
    try:
        params = _apply_coords(base, coords)
        ss = solve_steady_state(params, tol=steady_state_tol, max_iter=max_iter)
        dd = build_drift_diffusion(params, ss)
        report = stability(dd.M, scale=params.omega_b)
        if not report.stable:
            return PointResult(coords, STATUS_UNSTABLE, "", ss, report)
        if stability_only:
            return PointResult(coords, STATUS_OK, "", ss, report)
        cm = solve_lyapunov(dd.M, dd.D, residual_tol=residual_tol)
        correlations = correlation_report(cm, pairs, report)
        return PointResult(coords, STATUS_OK, "", ss, report, correlations)
    except ConvergenceError as e:
        return PointResult(coords, "convergence", str(e), e.last_iterate)
    except NoSteadyStateError as e:
        return PointResult(coords, STATUS_UNSTABLE, str(e), ss, report)
    except NumericalError as e:
        return PointResult(coords, "numerical", str(e), ss, report)
    except PhysicalityError as e:
        return PointResult(coords, "physicality", str(e), ss, report)
    except SingularityError as e:
        return PointResult(coords, "singular", str(e), ss, report)
    except DomainError as e:
        return PointResult(coords, "invalid", str(e), ss, report)


def _measure_columns(pairs: Sequence[Tuple[str, str]]) -> List[str]:
    columns = []
    for u, v in pairs:
        columns += [f"EN_{u}_{v}", f"nu_minus_{u}_{v}", f"S_{u}_to_{v}", f"S_{v}_to_{u}",
                    f"class_{u}_{v}"]
    return columns


@dataclass
class SweepResult:
    """Grid of PointResults in deterministic order."""
    spec: SweepSpec
    points: List[PointResult] = field(default_factory=list)

    def columns(self) -> List[str]:
        cols = []
        for axis in self.spec.axes:
            cols.append(axis.name)
            if axis.name in FREQUENCY_AXES:
                cols.append(f"{axis.name}_over_omega_b")
        cols += ["status", "max_real_eig", "stable", "abs_m_s", "delta_m_eff"]
        if not self.spec.stability_only:
            cols += _measure_columns(self.spec.pairs)
        return cols + ["message"]

    def to_frame(self) -> pd.DataFrame:
        omega_b = self.spec.base.omega_b
        rows = []
        for point in self.points:
            row: Dict[str, Any] = {}
            for axis in self.spec.axes:
                value = point.coords[axis.name]
                row[axis.name] = value
                if axis.name in FREQUENCY_AXES:
                    row[f"{axis.name}_over_omega_b"] = value / omega_b
            row["status"] = point.status
            if point.stability is not None:
                row["max_real_eig"] = point.stability.max_real_eig
                row["stable"] = point.stability.stable
            if point.steady_state is not None:
                row["abs_m_s"] = abs(point.steady_state.m_s)
                row["delta_m_eff"] = point.steady_state.delta_m_eff
            if point.correlations is not None:
                for pc in point.correlations.pairs:
                    u, v = pc.u, pc.v
                    row[f"EN_{u}_{v}"] = pc.E_N
                    row[f"nu_minus_{u}_{v}"] = pc.nu_minus
                    row[f"S_{u}_to_{v}"] = pc.S_u_to_v
                    row[f"S_{v}_to_{u}"] = pc.S_v_to_u
                    row[f"class_{u}_{v}"] = pc.steering_class.value
            row["message"] = point.message
            rows.append(row)
        return pd.DataFrame(rows, columns=self.columns())

    def column(self, name: str) -> np.ndarray:
        """Numeric column as floats (missing values are NaN)."""
        frame = self.to_frame()
        if name not in frame.columns:
            raise KeyError(f"no column {name!r}")
        return pd.to_numeric(frame[name], errors="coerce").to_numpy(dtype=float)

    def write_csv(self, path: str, metadata: Optional[Dict[str, Any]] = None) -> Path:
        """
        Write the grid as CSV, preceded by ``# key: value`` metadata lines.

        Floats are written in round-trip precision; no timestamps are added so
        identical runs give identical files.
        """
        path = Path(path)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            for key, value in (metadata or {}).items():
                f.write(f"# {key}: {value}\n")
            self.to_frame().to_csv(f, index=False)
        return path


def run_sweep(spec: SweepSpec, workers: int = 1, progress: bool = False) -> SweepResult:
    """
    Evaluate every grid point of ``spec``.

    Args:
        spec: Sweep definition
        workers: Process count; 1 runs serially in this process
        progress: Show a tqdm progress bar

    Returns:
        SweepResult with one PointResult per grid point
    """
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers!r}")
    grid = spec.grid()
    task = partial(evaluate_point, spec.base, pairs=spec.pairs,
                   stability_only=spec.stability_only,
                   steady_state_tol=spec.steady_state_tol, max_iter=spec.max_iter,
                   residual_tol=spec.residual_tol)
    logger.debug("sweeping %d points with %d worker(s)", len(grid), workers)

    bar = partial(tqdm, total=len(grid), desc="sweep", unit="pt", disable=not progress)
    if workers == 1:
        points = [task(coords) for coords in bar(grid)]
    else:
        chunksize = max(1, len(grid) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(bar(pool.map(task, grid, chunksize=chunksize)))
    return SweepResult(spec=spec, points=points)


def _axis_values(result: SweepResult) -> np.ndarray:
    if result.spec.axis2 is not None:
        raise DomainError("this analysis needs a 1-D sweep")
    return np.array([p.coords[result.spec.axis1.name] for p in result.points])


def detect_crossovers(result: SweepResult, column_a: str, column_b: str) -> List[float]:
    """
    Axis values where column_a − column_b changes sign on a 1-D sweep.

    Points where either value is missing or the difference is exactly zero are
    skipped; each sign change is located by linear interpolation.
    """
    x = _axis_values(result)
    diff = result.column(column_a) - result.column(column_b)
    keep = np.isfinite(diff) & (diff != 0)
    xs, ds = x[keep], diff[keep]
    crossings = []
    for k in range(len(ds) - 1):
        if ds[k] * ds[k + 1] < 0:
            crossings.append(float(xs[k] + (xs[k + 1] - xs[k]) * ds[k] / (ds[k] - ds[k + 1])))
    return crossings


def onset(result: SweepResult, column: str, threshold: float = 0.0) -> Optional[float]:
    """First axis value of a 1-D sweep where ``column`` exceeds ``threshold``."""
    x = _axis_values(result)
    values = result.column(column)
    hits = np.nonzero(np.nan_to_num(values, nan=-np.inf) > threshold)[0]
    return float(x[hits[0]]) if hits.size else None


def peak(result: SweepResult, column: str) -> Optional[Tuple[float, float]]:
    """(axis value, value) of the largest finite entry of ``column`` on a 1-D sweep."""
    x = _axis_values(result)
    values = result.column(column)
    if not np.any(np.isfinite(values)):
        return None
    k = int(np.nanargmax(values))
    return float(x[k]), float(values[k])


def survival_threshold(result: SweepResult, column: str,
                       threshold: float = 0.0) -> Dict[float, Optional[float]]:
    """
    For every axis1 value of a 2-D sweep, the largest axis2 value at which
    ``column`` still exceeds ``threshold`` (None if it never does).
    """
    if result.spec.axis2 is None:
        raise DomainError("survival threshold needs a 2-D sweep")
    a1, a2 = result.spec.axis1.name, result.spec.axis2.name
    values = np.nan_to_num(result.column(column), nan=-np.inf)
    survival: Dict[float, Optional[float]] = {}
    for point, value in zip(result.points, values):
        key = point.coords[a1]
        survival.setdefault(key, None)
        if value > threshold:
            current = survival[key]
            y = point.coords[a2]
            survival[key] = y if current is None else max(current, y)
    return survival


def summarize(result: SweepResult) -> Dict[str, Any]:
    """Grid size, status counts, stable fraction, maxima of every measure and hierarchy checks."""
    frame = result.to_frame()
    n = len(frame)
    summary: Dict[str, Any] = {
        "grid_size": n,
        "status_counts": {k: int(v) for k, v in frame["status"].value_counts().sort_index().items()},
        "stable_fraction": float(frame["stable"].eq(True).sum()) / n if n else 0.0,
        "maxima": {},
    }
    if result.spec.stability_only:
        summary["max_real_eig_range"] = [float(np.nanmin(result.column("max_real_eig"))),
                                         float(np.nanmax(result.column("max_real_eig")))]
        return summary

    violations = 0
    for u, v in result.spec.pairs:
        for name in (f"EN_{u}_{v}", f"S_{u}_to_{v}", f"S_{v}_to_{u}"):
            values = result.column(name)
            summary["maxima"][name] = float(np.nanmax(values)) if np.any(np.isfinite(values)) else None
        nu = result.column(f"nu_minus_{u}_{v}")
        steer = np.fmax(result.column(f"S_{u}_to_{v}"), result.column(f"S_{v}_to_{u}"))
        violations += int(np.sum((steer > STEERING_THRESHOLD) & (nu >= 0.5)))
    summary["hierarchy_violations"] = violations
    return summary


def narrative(result: SweepResult) -> Dict[str, Any]:
    """
    Features of the curves used to describe entanglement transfer.

    1-D sweeps: onset and peak of every entanglement and steering column, and
    the crossovers between each pair of entanglement columns. 2-D sweeps with a
    temperature axis: the highest temperature at which each pair stays entangled.
    """
    if result.spec.stability_only:
        return {}
    measure_names = [c for c in _measure_columns(result.spec.pairs) if c.startswith(("EN_", "S_"))]
    en_names = [c for c in measure_names if c.startswith("EN_")]
    story: Dict[str, Any] = {}
    if result.spec.axis2 is None:
        story["onset"] = {name: onset(result, name) for name in measure_names}
        story["peak"] = {name: peak(result, name) for name in measure_names}
        story["crossovers"] = {
            f"{a} vs {b}": detect_crossovers(result, a, b)
            for i, a in enumerate(en_names) for b in en_names[i + 1:]
        }
    elif "T" in (result.spec.axis1.name, result.spec.axis2.name):
        transpose = result.spec.axis1.name == "T"
        survival = {}
        for name in en_names:
            if transpose:
                temps = [p.coords["T"] for p, value in zip(result.points, result.column(name))
                         if value > 0]
                survival[name] = max(temps) if temps else None
            else:
                per_axis = [t for t in survival_threshold(result, name).values() if t is not None]
                survival[name] = max(per_axis) if per_axis else None
        story["survival_temperature"] = survival
    return story
