"""Detection thresholds and parameter sweeps over one-parameter state families.

A criterion here is anything with ``evaluate(rho) -> CriterionReport``.
Along an affine family the tensor is affine in ``p``, so ``lhs`` is convex
in ``p`` and the inconclusive set is an interval; bisecting on the verdict
therefore finds its endpoints.
"""

import csv
import enum
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from sepkit.bases import heisenberg_weyl_basis
from sepkit.bloch import Convention
from sepkit.criteria import Criterion, TensorParams, Verdict
from sepkit.states import isotropic, tiles_family, werner

PRESCAN_POINTS = 64
CSV_COLUMNS = ("n", "x", "y", "p", "lhs", "rhs", "margin")


class Family(enum.Enum):
    TILES = "tiles"
    ISOTROPIC = "isotropic"
    WERNER = "werner"


_VALID_RANGE = {Family.TILES: (0.0, 1.0), Family.ISOTROPIC: (0.0, 1.0), Family.WERNER: (-1.0, 1.0)}


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    d: int = 3
    p_range: tuple = None

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if fam is Family.TILES:
            object.__setattr__(self, "d", 3)
        lo, hi = _VALID_RANGE[fam]
        p_range = (lo, hi) if self.p_range is None else tuple(float(v) for v in self.p_range)
        if not (lo <= p_range[0] < p_range[1] <= hi):
            raise ValueError(f"p-range {p_range} must be an increasing interval inside [{lo}, {hi}] for {fam.value}")
        object.__setattr__(self, "p_range", p_range)

    def state(self, p):
        if self.family is Family.TILES:
            return tiles_family(p)
        if self.family is Family.ISOTROPIC:
            return isotropic(self.d, p)
        return werner(self.d, p)


@dataclass(frozen=True)
class ThresholdResult:
    """Final bisection bracket of one verdict change.

    ``p_lo`` and ``p_hi`` straddle the change; ``detected_above`` says which
    side the criterion certifies entanglement on.
    """

    p_star: float
    p_lo: float
    p_hi: float
    iterations: int
    criterion: str
    detected_above: bool

    @property
    def bracket(self):
        return (self.p_lo, self.p_hi)

    def to_dict(self):
        return {
            "p_star": float(f"{self.p_star:.15g}"),
            "bracket": [float(f"{self.p_lo:.15g}"), float(f"{self.p_hi:.15g}")],
            "iterations": self.iterations,
            "criterion": self.criterion,
            "detected_above": self.detected_above,
        }


class NoThresholdError(ValueError):
    """The verdict does not change anywhere on the scanned range."""


def thread_count():
    """Worker cap from ``SEPKIT_THREADS`` (default 1, i.e. serial)."""
    try:
        return max(1, int(os.environ.get("SEPKIT_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _name(criterion):
    return getattr(criterion, "name", type(criterion).__name__)


def margin_curve(spec, criterion, grid):
    """``(p, lhs, rhs, margin)`` for each ``p`` in ``grid``."""
    lo, hi = spec.p_range
    grid = [float(p) for p in grid]
    if any(p < lo or p > hi for p in grid):
        raise ValueError(f"grid leaves the family range [{lo}, {hi}]")

    def row(p):
        rep = criterion.evaluate(spec.state(p))
        return (p, rep.lhs, rep.rhs, rep.margin)

    return _map(row, grid)


def _detected(criterion, spec, p):
    return criterion.evaluate(spec.state(p)).verdict is Verdict.ENTANGLED


def find_thresholds(spec, criterion, tol=1e-5, prescan=PRESCAN_POINTS):
    """Every verdict change on ``spec.p_range``, each refined by bisection to ``tol``.

    A coarse scan of ``prescan`` evenly spaced points locates the brackets.
    """
    lo, hi = spec.p_range
    grid = np.linspace(lo, hi, prescan)
    flags = _map(lambda p: _detected(criterion, spec, float(p)), list(grid))
    results = []
    for k in range(prescan - 1):
        if flags[k] == flags[k + 1]:
            continue
        a, b = float(grid[k]), float(grid[k + 1])
        above = flags[k + 1]
        iterations = 0
        while b - a > tol:
            mid = 0.5 * (a + b)
            if _detected(criterion, spec, mid) == above:
                b = mid
            else:
                a = mid
            iterations += 1
        results.append(ThresholdResult(0.5 * (a + b), a, b, iterations, _name(criterion), above))
    return results


def find_threshold(spec, criterion, tol=1e-5, prescan=PRESCAN_POINTS):
    """The lowest verdict change; raises :class:`NoThresholdError` if there is none."""
    found = find_thresholds(spec, criterion, tol=tol, prescan=prescan)
    if not found:
        raise NoThresholdError(f"{_name(criterion)} gives the same verdict on all of {spec.p_range}")
    return found[0]


@dataclass(frozen=True)
class SweepRow:
    n: int
    x: float
    y: float
    p: float
    lhs: float
    rhs: float
    margin: float


def grid_sweep(spec, n_set, x_rule, y_grid, p_grid, basis_a=None, basis_b=None, convention=Convention.PLAIN):
    """Evaluate every ``(n, y, p)`` with ``x = x_rule(y)``.

    ``x_rule`` is a callable or a ``(slope, intercept)`` pair. Bases default
    to Heisenberg-Weyl on both sides. Rows come back in ``n, y, p`` order.
    """
    if not callable(x_rule):
        slope, intercept = x_rule
        x_rule = lambda y, a=slope, b=intercept: a * y + b  # noqa: E731
    d = spec.d
    basis_a = basis_a or heisenberg_weyl_basis(d)
    basis_b = basis_b or heisenberg_weyl_basis(d)
    states = {float(p): spec.state(float(p)) for p in p_grid}
    cells = [(int(n), float(y), float(p)) for n in n_set for y in y_grid for p in p_grid]

    def run(cell):
        n, y, p = cell
        x = float(x_rule(y))
        crit = Criterion("sweep", basis_a, basis_b, TensorParams(x, y, n, convention))
        rep = crit.evaluate(states[p])
        return SweepRow(n, x, y, p, rep.lhs, rep.rhs, rep.margin)

    return _map(run, cells)


def sweep_csv(rows):
    """CSV text, fixed column order, 15 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.n] + [f"{v:.15g}" for v in (r.x, r.y, r.p, r.lhs, r.rhs, r.margin)])
    return buf.getvalue()


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        fh.write(sweep_csv(rows))


def min_detected_p(rows, tol=1e-9):
    """Smallest ``p`` with ``margin < -tol`` anywhere in the sweep, or ``None``."""
    hits = [r.p for r in rows if r.margin < -tol]
    return min(hits) if hits else None


def optimize_params(rho, n, y_grid, x_grid, basis_a=None, basis_b=None, convention=Convention.PLAIN):
    """Grid point ``(x*, y*, margin*)`` with the most negative margin.

    Ties go to the lexicographically smallest ``(x, y)``. Bases default to
    Heisenberg-Weyl.
    """
    basis_a = basis_a or heisenberg_weyl_basis(rho.d_a)
    basis_b = basis_b or heisenberg_weyl_basis(rho.d_b)
    best = None
    for x in sorted(float(v) for v in x_grid):
        for y in sorted(float(v) for v in y_grid):
            crit = Criterion("opt", basis_a, basis_b, TensorParams(x, y, n, convention))
            margin = crit.evaluate(rho).margin
            if best is None or margin < best[2]:
                best = (x, y, margin)
    return best
