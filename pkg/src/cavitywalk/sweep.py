"""Maximum-over-time delocalisation and the parameter grids behind the figures.

The search is a coarse scan followed by golden-section refinement of every
coarse local maximum that could still hold the global one. Sampling with step
``h`` can miss a peak by at most ``max|S''| h^2 / 8``; the spectrum of ``S``
lies within ``[-8|J|, 8|J|]`` and ``|S - 1/2| <= 1/2``, so Bernstein's
inequality gives ``|S''| <= 32 J^2``. Candidates within twice the resulting
miss of the coarse maximum are refined. Peaks whose refined values tie
within ``TIE_TOL`` resolve to the earliest time.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .correlations import delocalization, delocalization_timeseries, negativity
from .fock import PsiFamily
from .lattice import ArrayModel

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
TIE_TOL = 1e-12
SPOT_CHECK_EVERY = 20
SPOT_CHECK_TOL = 1e-8

FIG_PHIS = tuple(k * math.pi / 4 for k in range(5))
FIG1_THETAS = tuple(np.linspace(0.0, 0.5 * math.pi, 31))
FIG2_SIZES = tuple(range(2, 21))
FIG2_SETTINGS = tuple(
    (theta, phi)
    for theta in (math.pi / 8, math.pi / 4)
    for phi in FIG_PHIS
)


class CrossCheckError(RuntimeError):
    """The propagator route and the sector oracle disagree."""


@dataclass(frozen=True)
class TimeGrid:
    """Scan horizon ``[0, t_max]`` sampled every ``step``."""

    t_max: float
    step: float
    refine: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.t_max) and math.isfinite(self.step)):
            raise ValueError("t_max and step must be finite")
        if not 0.0 < self.step < self.t_max:
            raise ValueError(f"need 0 < step < t_max, got step={self.step}, t_max={self.t_max}")

    @classmethod
    def for_model(cls, model: ArrayModel, horizon: float = 400.0, resolution: float = 0.05,
                  refine: bool = True) -> "TimeGrid":
        """Grid in units of ``1/|J|``: ``t_max = horizon/|J|``, ``step = resolution/|J|``."""
        j = abs(model.hopping)
        if j == 0.0:
            raise ValueError("default grid needs nonzero hopping; pass an explicit TimeGrid")
        return cls(horizon / j, resolution / j, refine)

    def times(self) -> np.ndarray:
        n = int(math.floor(self.t_max / self.step * (1 + 1e-12)))
        t = self.step * np.arange(n + 1)
        if self.t_max - t[-1] > 1e-9 * self.step:
            t = np.append(t, self.t_max)
        return t


@dataclass(frozen=True)
class SweepRow:
    N: int
    r: int
    s: int
    theta: float
    phi: float
    s_max: float
    t_at_max: float
    negativity: float


COLUMNS = ("N", "r", "s", "theta", "phi", "s_max", "t_at_max", "negativity")


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)
    r_convention: str = "r = floor(N/2), s = r + 1"

    def sort(self) -> "SweepResult":
        self.rows.sort(key=lambda row: (row.N, row.theta, row.phi))
        return self

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(row, name) for row in self.rows])


def figure_sites(n_cavities: int) -> tuple[int, int]:
    """Input cavities used by the figure sweeps: ``r = floor(N/2)``, ``s = r + 1``."""
    if n_cavities < 2:
        raise ValueError("figure sweeps need at least two cavities")
    r = n_cavities // 2
    return r, r + 1


def _golden_max(func: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray,
                xtol: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised golden-section search for maxima on independent brackets."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1 = func(x1)
    f2 = func(x2)
    width = float(np.max(hi - lo))
    n_iter = 0 if width <= xtol else int(math.ceil(math.log(xtol / width) / math.log(_INV_PHI)))
    for _ in range(n_iter):
        left = f1 >= f2
        lo, hi = np.where(left, lo, x1), np.where(left, x2, hi)
        new_x1 = np.where(left, hi - _INV_PHI * (hi - lo), x2)
        new_x2 = np.where(left, x1, lo + _INV_PHI * (hi - lo))
        fp = func(np.where(left, new_x1, new_x2))
        f1, f2 = np.where(left, fp, f2), np.where(left, f1, fp)
        x1, x2 = new_x1, new_x2
    return np.where(f1 >= f2, x1, x2), np.maximum(f1, f2)


def search_max(func: Callable[[np.ndarray], np.ndarray], grid: TimeGrid,
               curvature_bound: float) -> tuple[float, float]:
    """Global maximum of ``func`` on ``[0, grid.t_max]``.

    Args:
        func: vectorised objective.
        grid: coarse sampling and refinement switch.
        curvature_bound: upper bound on ``|func''|``; sets which coarse local
            maxima are refined.

    Returns:
        ``(value, time)``; among values tied within ``TIE_TOL`` the earliest time wins.
    """
    t = grid.times()
    f = func(t)
    best = int(np.argmax(f))
    if not grid.refine:
        return float(f[best]), float(t[best])

    slack = 2.0 * curvature_bound * grid.step**2 / 8.0 + TIE_TOL
    is_peak = np.ones(t.size, dtype=bool)
    is_peak[1:] &= f[1:] >= f[:-1]
    is_peak[:-1] &= f[:-1] >= f[1:]
    cand = np.flatnonzero(is_peak & (f >= f[best] - slack))
    lo = t[np.maximum(cand - 1, 0)]
    hi = t[np.minimum(cand + 1, t.size - 1)]
    xtol = 1e-10 * max(1.0, grid.t_max)
    x, fx = _golden_max(func, lo, hi, xtol)
    # never report worse than the coarse sample itself
    take_coarse = f[cand] > fx
    x = np.where(take_coarse, t[cand], x)
    fx = np.where(take_coarse, f[cand], fx)
    top = fx.max()
    winners = np.flatnonzero(fx >= top - TIE_TOL)
    i = winners[np.argmin(x[winners])]
    return float(fx[i]), float(x[i])


def _objective(model: ArrayModel, family: PsiFamily, route: str, backend=None):
    if route == "propagator":
        return lambda times: delocalization(model, family, times, backend=backend)
    if route == "oracle":
        return lambda times: delocalization_timeseries(model, family, times)[:, 1]
    raise ValueError(f"unknown route {route!r}; expected 'propagator' or 'oracle'")


def max_delocalization(model: ArrayModel, family: PsiFamily, grid: TimeGrid | None = None,
                       route: str = "propagator", backend=None) -> tuple[float, float]:
    """Largest delocalisation reached on the grid horizon.

    Returns:
        ``(s_max, t_at_max)`` with ``s_max`` clipped to ``[0, 1]``.
    """
    family.check_fits(model.n_cavities)
    if grid is None:
        grid = TimeGrid.for_model(model)
    # |S''| <= W^2 |S - 1/2|_max with spectral width W = 8|J|
    bound = 0.5 * (8.0 * model.hopping) ** 2
    value, t = search_max(_objective(model, family, route, backend), grid, bound)
    return min(1.0, max(0.0, value)), t


def _row(model: ArrayModel, family: PsiFamily, grid: TimeGrid) -> SweepRow:
    s_max, t_at = max_delocalization(model, family, grid)
    return SweepRow(model.n_cavities, family.r, family.s, family.theta, family.phi,
                    s_max, t_at, negativity(family))


def _spot_check(rows: Sequence[SweepRow], models: dict) -> None:
    for i, row in enumerate(rows):
        if i % SPOT_CHECK_EVERY:
            continue
        family = PsiFamily(row.r, row.s, row.theta, row.phi)
        model = models[row.N]
        oracle = delocalization_timeseries(model, family, [row.t_at_max])[0, 1]
        oracle = min(1.0, max(0.0, oracle))
        if abs(oracle - row.s_max) > SPOT_CHECK_TOL:
            raise CrossCheckError(
                f"row {row}: oracle S={oracle!r} differs from propagator s_max={row.s_max!r}"
            )


def _run(tasks: list, grid: TimeGrid, workers: int, models: dict) -> SweepResult:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda job: _row(job[0], job[1], grid), tasks))
    else:
        rows = [_row(model, family, grid) for model, family in tasks]
    result = SweepResult(rows).sort()
    _spot_check(result.rows, models)
    return result


def theta_phi_sweep(model: ArrayModel, thetas: Iterable[float], phis: Iterable[float],
                    grid: TimeGrid | None = None, workers: int = 1) -> SweepResult:
    """One row per ``(theta, phi)`` with the figure's choice of input cavities."""
    thetas, phis = list(thetas), list(phis)
    if not thetas or not phis:
        raise ValueError("theta and phi grids must be non-empty")
    grid = grid or TimeGrid.for_model(model)
    r, s = figure_sites(model.n_cavities)
    tasks = [(model, PsiFamily(r, s, th, ph)) for th in thetas for ph in phis]
    return _run(tasks, grid, workers, {model.n_cavities: model})


def n_sweep(models: Sequence[ArrayModel], settings: Iterable[tuple[float, float]],
            grid: TimeGrid | None = None, workers: int = 1) -> SweepResult:
    """One row per ``(N, theta, phi)``; all models must share omega and J.

    With ``grid=None`` each chain uses the default grid of its hopping.
    """
    models = list(models)
    settings = list(settings)
    if not models or not settings:
        raise ValueError("models and settings must be non-empty")
    if len({(m.omega, m.hopping) for m in models}) != 1:
        raise ValueError("all models must share omega and hopping")
    grid = grid or TimeGrid.for_model(models[0])
    tasks = []
    for model in models:
        r, s = figure_sites(model.n_cavities)
        tasks += [(model, PsiFamily(r, s, th, ph)) for th, ph in settings]
    return _run(tasks, grid, workers, {m.n_cavities: m for m in models})
