"""Parameter sweeps over the closed-form models.

A sweep varies one dimensionless axis, evaluates the steady-state report
at every grid point, and post-processes the verdict column into maximal
violation intervals whose interior edges are sharpened by bisection.
Sweep points are independent, so they can optionally run on a thread
pool sized by SOLARAUDIT_NUM_THREADS.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .models import (
    DonorAcceptorParams,
    PhotocellParams,
    ThreeLevelParams,
    decay_report,
    donor_acceptor_report,
    hamiltonian_transfer_report,
    photocell_report,
)

SWEEP_AXES = ("omega_ratio", "temp_ratio")
EDGE_TOL = 1e-6

_MODEL_TABLE = {
    "toy_decay": (ThreeLevelParams, decay_report),
    "toy_ham": (ThreeLevelParams, hamiltonian_transfer_report),
    "donor_acceptor": (DonorAcceptorParams, donor_acceptor_report),
    "photocell": (PhotocellParams, photocell_report),
}


def _apply_axis(model, fixed, axis, x):
    """Map an axis value onto the model's parameter dict.

    omega_ratio scales the extraction step against the absorbing gap:
    for the toy models it sets omega_rc = x * omega_abs, for the
    four- and five-level models it lowers omega_beta so that the
    current ratio becomes 1 - x. temp_ratio sets t_loss = x * t_abs.
    """
    values = dict(fixed)
    if axis == "temp_ratio":
        values["t_loss"] = x * values["t_abs"]
    elif model in ("toy_decay", "toy_ham"):
        values["omega_rc"] = x * values["omega_abs"]
    elif model == "donor_acceptor":
        values["omega_beta"] = values["omega_alpha"] - x * (
            values["omega_a"] - values["omega_b"]
        )
    else:
        values["omega_beta"] = values["omega_alpha"] - x * (
            values["omega_x1"] - values["omega_b"]
        )
    return values


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a model, an axis, a grid, and the fixed parameters."""

    model: str
    axis: str
    grid: np.ndarray
    fixed: dict

    def __post_init__(self):
        if self.model not in _MODEL_TABLE:
            raise ConfigError(
                f"unknown sweep model {self.model!r}; use one of: "
                + ", ".join(sorted(_MODEL_TABLE))
            )
        if self.axis == "time":
            raise ConfigError(
                "axis 'time' belongs to the antenna-complex trace command; "
                "sweeps vary omega_ratio or temp_ratio"
            )
        if self.axis not in SWEEP_AXES:
            raise ConfigError(
                f"unknown sweep axis {self.axis!r}; use one of: " + ", ".join(SWEEP_AXES)
            )
        grid = np.array(self.grid, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ConfigError("sweep grid must be one-dimensional with at least 2 points")
        if not np.all(np.isfinite(grid)):
            raise ConfigError("sweep grid must be finite")
        if np.any(np.diff(grid) <= 0):
            raise ConfigError("sweep grid must be strictly increasing")
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "fixed", dict(self.fixed))

    def point_report(self, x):
        """Steady-state report at one axis value."""
        build, report = _MODEL_TABLE[self.model]
        values = _apply_axis(self.model, self.fixed, self.axis, x)
        try:
            params = build(**values)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"sweep point {self.axis} = {x:g}: {exc}")
        return report(params)


@dataclass(frozen=True)
class SweepTable:
    spec: SweepSpec
    reports: tuple
    violations: tuple

    def rows(self):
        return [
            (x, r.j_abs, r.j_loss, r.power, r.ratio, r.sigma, r.verdict)
            for x, r in zip(self.spec.grid, self.reports)
        ]


def _worker_count(workers):
    if workers is None:
        raw = os.environ.get("SOLARAUDIT_NUM_THREADS", "1")
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigError(
                f"SOLARAUDIT_NUM_THREADS must be an integer, got {raw!r}"
            )
    if workers < 1:
        raise ConfigError(f"worker count must be >= 1, got {workers}")
    return workers


def _refine_edge(predicate, lo, hi):
    """Bisect a violation edge inside (lo, hi); predicate flips across it."""
    at_lo = predicate(lo)
    while hi - lo > EDGE_TOL:
        mid = 0.5 * (lo + hi)
        if predicate(mid) == at_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def violation_intervals(spec, reports):
    """Maximal axis intervals where the verdict is 'violation'.

    Interior edges are bisected between the bracketing grid points down
    to EDGE_TOL; edges at the ends of the grid stay at the grid value.
    """
    flags = [r.verdict == "violation" for r in reports]
    grid = spec.grid

    def violating(x):
        return spec.point_report(x).verdict == "violation"

    intervals = []
    i = 0
    n = len(flags)
    while i < n:
        if not flags[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and flags[j + 1]:
            j += 1
        lo = grid[i] if i == 0 else _refine_edge(violating, grid[i - 1], grid[i])
        hi = grid[j] if j == n - 1 else _refine_edge(violating, grid[j], grid[j + 1])
        intervals.append((float(lo), float(hi)))
        i = j + 1
    return intervals


def run_sweep(spec, workers=None):
    count = _worker_count(workers)
    xs = [float(x) for x in spec.grid]
    if count == 1:
        reports = [spec.point_report(x) for x in xs]
    else:
        with ThreadPoolExecutor(max_workers=count) as pool:
            reports = list(pool.map(spec.point_report, xs))
    violations = violation_intervals(spec, reports)
    return SweepTable(spec=spec, reports=tuple(reports), violations=tuple(violations))


@dataclass(frozen=True)
class PowerComparison:
    """Power of both extraction schemes across a temperature-ratio grid."""

    ratios: np.ndarray
    p_decay: np.ndarray
    p_transfer: np.ndarray
    zero_crossing: float

    def rows(self):
        return list(zip(self.ratios, self.p_decay, self.p_transfer))


def power_comparison(omega_abs, omega_rc, gamma, t_abs, ratio_grid):
    """Evaluate decay-scheme and transfer-scheme power over t_loss/t_abs.

    Also locates the temperature ratio where the transfer scheme's power
    changes sign (bisected to EDGE_TOL), or None when the grid shows no
    sign change. The decay scheme has no such crossing: its power has one
    sign at any temperature, which is the point of the comparison.
    """
    grid = np.array(ratio_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ConfigError("ratio grid must be one-dimensional with at least 2 points")
    if np.any(np.diff(grid) <= 0):
        raise ConfigError("ratio grid must be strictly increasing")

    def params_at(tau):
        try:
            return ThreeLevelParams(
                omega_abs=omega_abs,
                omega_rc=omega_rc,
                gamma=gamma,
                t_abs=t_abs,
                t_loss=tau * t_abs,
            )
        except ValueError as exc:
            raise ConfigError(f"temperature ratio {tau:g}: {exc}")

    def transfer_power(tau):
        return hamiltonian_transfer_report(params_at(tau)).power

    p_dec = np.array([decay_report(params_at(tau)).power for tau in grid])
    p_ham = np.array([transfer_power(tau) for tau in grid])

    crossing = None
    for k in range(grid.size - 1):
        a, b = grid[k], grid[k + 1]
        fa, fb = p_ham[k], p_ham[k + 1]
        if fa == 0.0:
            crossing = float(a)
            break
        if fb == 0.0:
            crossing = float(b)
            break
        if (fa < 0) != (fb < 0):
            while b - a > EDGE_TOL:
                mid = 0.5 * (a + b)
                fm = transfer_power(mid)
                if fm == 0.0:
                    a = b = mid
                elif (fm < 0) == (fa < 0):
                    a, fa = mid, fm
                else:
                    b = mid
            crossing = 0.5 * (a + b)
            break
    return PowerComparison(
        ratios=grid, p_decay=p_dec, p_transfer=p_ham, zero_crossing=crossing
    )
