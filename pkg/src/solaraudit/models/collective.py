"""Finite collective reservoir vs its oscillator limit.

The work repository behind the transfer scheme is physically a large set of
two-level units, addressed through collective pseudospin operators of
magnitude j. In the low-excitation regime those operators bosonize onto a
single oscillator (the model the closed forms use). This module builds both
Hamiltonians on the {|0>, |1>} x repository block exactly and compares
their low-lying spectra; the residual must shrink like 1/j.

|2> is left out by construction: the transfer coupling never touches it, so
it only adds decoupled levels that would clutter the low-energy comparison.
"""

import math
from dataclasses import dataclass

import numpy as np

MAX_SPIN = 12


@dataclass(frozen=True)
class CollectiveReservoirParams:
    """Exact-diagonalization setup for one finite-j comparison.

    j is the collective pseudospin magnitude (2j two-level units in the
    symmetric sector); n_max truncates the oscillator ladder; low_count
    is how many of the lowest levels enter the deviation report.
    """

    j: int
    n_max: int = None
    low_count: int = 5

    def __post_init__(self):
        if not isinstance(self.j, int) or self.j < 1:
            raise ValueError(f"j must be a positive integer, got {self.j!r}")
        if self.j > MAX_SPIN:
            raise ValueError(
                f"symmetric-sector dimension overflow: j = {self.j} exceeds "
                f"the exact-diagonalization cap {MAX_SPIN}"
            )
        if self.n_max is None:
            object.__setattr__(self, "n_max", 2 * self.j)
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")
        if not (1 <= self.low_count <= 2 * self.n_max):
            raise ValueError("low_count must fit inside the truncated spectrum")


@dataclass(frozen=True)
class OscillatorLimitReport:
    j: int
    collective_levels: np.ndarray
    oscillator_levels: np.ndarray
    deviations: np.ndarray
    max_deviation: float
    ground_collective: float
    ground_oscillator: float
    splitting_collective: float
    splitting_oscillator: float


def _two_band_hamiltonian(omega_rc, ladder_top, coupling_of, offset):
    """H on basis |sigma, nu>, sigma in {0, 1}, nu in 0..ladder_top.

    Diagonal: sigma * omega_rc + omega_rc * (nu - offset), so the empty
    lower band sits at -offset * omega_rc exactly. Coupling links
    |1, nu> with |0, nu+1> at amplitude coupling_of(nu).
    """
    per = ladder_top + 1
    dim = 2 * per
    h = np.zeros((dim, dim))
    for nu in range(per):
        base = omega_rc * (nu - offset)
        h[nu, nu] = base
        h[per + nu, per + nu] = omega_rc + base
    for nu in range(ladder_top):
        amp = coupling_of(nu)
        h[per + nu, nu + 1] = amp
        h[nu + 1, per + nu] = amp
    return h


def compare_with_oscillator_limit(p, hp):
    """Spectral comparison of the exact collective model vs the oscillator.

    The collective coupling on the pair (|1, nu>, |0, nu+1>) is
    sqrt(gamma) * sqrt((nu+1)(2j - nu)/(2j)); the oscillator replaces the
    square-root factor by sqrt(nu+1). Both share the energy offset
    -j*omega_rc so spectra align level by level. Only the lowest low_count
    levels are compared (the low-excitation regime where the bosonization
    is claimed).
    """
    p.require_weak_coupling()
    if p.gamma <= 0:
        raise ValueError("gamma must be positive for the transfer coupling")
    j = hp.j
    g = math.sqrt(p.gamma)

    def collective_amp(nu):
        return g * math.sqrt((nu + 1.0) * (2.0 * j - nu) / (2.0 * j))

    def oscillator_amp(nu):
        return g * math.sqrt(nu + 1.0)

    h_coll = _two_band_hamiltonian(p.omega_rc, 2 * j, collective_amp, j)
    h_osc = _two_band_hamiltonian(p.omega_rc, hp.n_max, oscillator_amp, j)
    ev_coll = np.linalg.eigvalsh(h_coll)[: hp.low_count]
    ev_osc = np.linalg.eigvalsh(h_osc)[: hp.low_count]
    dev = np.abs(ev_coll - ev_osc)
    return OscillatorLimitReport(
        j=j,
        collective_levels=ev_coll,
        oscillator_levels=ev_osc,
        deviations=dev,
        max_deviation=float(dev.max()),
        ground_collective=float(ev_coll[0]),
        ground_oscillator=float(ev_osc[0]),
        splitting_collective=float(ev_coll[2] - ev_coll[1]) if hp.low_count >= 3 else math.nan,
        splitting_oscillator=float(ev_osc[2] - ev_osc[1]) if hp.low_count >= 3 else math.nan,
    )
