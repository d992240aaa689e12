"""Three-level conversion engine with two work-extraction schemes.

Level layout: |0> and |1> split by omega_rc around zero, |2> at omega_abs.
A hot bath pumps |0> <-> |2> at omega_plus = omega_abs + omega_rc/2, a cold
bath handles |1> <-> |2> at omega_minus = omega_abs - omega_rc/2.

Scheme one ("decay") extracts work through an irreversible sink jump
|0><1| at rate gamma. Scheme two ("hamiltonian transfer") replaces the sink
with a coherent swap into a bosonic work repository; in the weak-coupling
regime the repository occupation follows a birth-death ladder whose net
growth rate carries the power.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..core import DensityMatrix, DissipationChannel, LindbladGenerator, liouvillian_apply
from ..errors import TruncationOverflowError
from ..thermo import BathSpec, ThermoReport, bose_occupation, second_law_verdict

TRUNCATION_POPULATION_TOL = 1e-6


@dataclass(frozen=True)
class ThreeLevelParams:
    omega_abs: float
    omega_rc: float
    gamma: float
    t_abs: float
    t_loss: float
    gamma_h: float = None
    gamma_c: float = None

    def __post_init__(self):
        if self.omega_abs <= 0:
            raise ValueError(f"omega_abs must be positive, got {self.omega_abs}")
        if not (0 < self.omega_rc < 2 * self.omega_abs):
            raise ValueError(
                f"omega_rc must lie in (0, 2*omega_abs), got {self.omega_rc} "
                f"with omega_abs = {self.omega_abs}"
            )
        if self.gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        if self.t_abs <= 0 or self.t_loss <= 0:
            raise ValueError("t_abs and t_loss must be positive")
        if self.gamma_h is None:
            object.__setattr__(self, "gamma_h", self.gamma)
        if self.gamma_c is None:
            object.__setattr__(self, "gamma_c", self.gamma)
        if self.gamma_h < 0 or self.gamma_c < 0:
            raise ValueError("gamma_h and gamma_c must be nonnegative")

    @property
    def omega_plus(self):
        return self.omega_abs + 0.5 * self.omega_rc

    @property
    def omega_minus(self):
        return self.omega_abs - 0.5 * self.omega_rc

    def require_weak_coupling(self):
        if self.omega_rc < 20.0 * self.gamma:
            raise ValueError(
                "hamiltonian transfer scheme needs weak coupling: "
                f"omega_rc >= 20*gamma, got omega_rc = {self.omega_rc}, "
                f"gamma = {self.gamma}"
            )

    def occupations(self):
        n_h = bose_occupation(self.omega_plus, self.t_abs)
        n_c = bose_occupation(self.omega_minus, self.t_loss)
        return n_h, n_c


# ---------------------------------------------------------------- decay scheme


def decay_steady_populations(p):
    """Steady populations [rho00, rho11, rho22] of the sink-jump scheme.

    Closed form of the three-state cycle: with hot rates gh*n_h up / gh*(1+n_h)
    down, cold rates gc*n_c / gc*(1+n_c) and sink rate gamma,

        rho22/rho11 = (gamma + gc n_c) / (gc (1 + n_c))
        rho11/rho00 = gh n_h gc (1+n_c)
                      / (gh (1+n_h) gc n_c + gamma (gh (1+n_h) + gc (1+n_c)))
    """
    n_h, n_c = p.occupations()
    gh, gc, g = p.gamma_h, p.gamma_c, p.gamma
    r21 = (g + gc * n_c) / (gc * (1.0 + n_c))
    den = gh * (1.0 + n_h) * gc * n_c + g * (gh * (1.0 + n_h) + gc * (1.0 + n_c))
    if den == 0.0:
        raise ValueError("all de-excitation pathways vanish; populations undefined")
    r10 = gh * n_h * gc * (1.0 + n_c) / den
    rho0 = 1.0 / (1.0 + r10 * (1.0 + r21))
    rho1 = r10 * rho0
    rho2 = r21 * rho1
    return np.array([rho0, rho1, rho2])


def decay_report(p):
    """Steady-state audit of the decay scheme.

    The cycle flux equals gamma*rho11, so j_abs = omega_plus * flux,
    j_loss = -omega_minus * flux and power = -omega_rc * flux < 0 always.
    """
    pops = decay_steady_populations(p)
    flux = p.gamma * pops[1]
    j_abs = p.omega_plus * flux
    j_loss = -p.omega_minus * flux
    power = -p.omega_rc * flux
    sigma = -j_abs / p.t_abs - j_loss / p.t_loss
    ratio = -j_loss / j_abs if j_abs != 0.0 else math.nan
    verdict = second_law_verdict(j_abs, j_loss, p.t_abs, p.t_loss)
    return ThermoReport(j_abs, j_loss, power, sigma, ratio, verdict, sink_flow=power)


def decay_hamiltonian(p):
    return np.diag([-0.5 * p.omega_rc, 0.5 * p.omega_rc, p.omega_abs]).astype(complex)


def decay_generator(p):
    """Lindblad generator of the decay scheme (dim 3)."""
    h = decay_hamiltonian(p)
    down_hot = np.zeros((3, 3), dtype=complex)
    down_hot[0, 2] = 1.0
    down_cold = np.zeros((3, 3), dtype=complex)
    down_cold[1, 2] = 1.0
    sink_jump = np.zeros((3, 3), dtype=complex)
    sink_jump[0, 1] = 1.0
    channels = []
    channels += BathSpec("abs", p.t_abs, p.gamma_h).thermal_pair(down_hot, p.omega_plus)
    channels += BathSpec("loss", p.t_loss, p.gamma_c).thermal_pair(
        down_cold, p.omega_minus
    )
    channels.append(BathSpec("sink", None, p.gamma).one_way(sink_jump, p.omega_rc))
    return LindbladGenerator(h, channels)


# --------------------------------------------------- hamiltonian transfer scheme


def dressed_frequency(n, gamma):
    """Splitting of the n-th dressed doublet, Omega_n = 2 sqrt(gamma (n+1))."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return 2.0 * math.sqrt(gamma * (n + 1.0))


@dataclass(frozen=True)
class BirthDeathRates:
    """Ladder rates of the repository occupation and the conditional state.

    birth (s) and death (r) are the up/down rates of the occupation ladder;
    k1 is the prefactor in s - r = k1 (exp(-omega_plus/t_abs)
    - exp(-omega_minus/t_loss)). rho_plus, rho_minus, rho_two are the
    conditional three-level populations the ladder rates are built from.
    """

    birth: float
    death: float
    k1: float
    rho_plus: float
    rho_minus: float
    rho_two: float

    @property
    def net(self):
        return self.birth - self.death


def birth_death_rates(p):
    """Birth-death reduction of the weak-coupling transfer scheme.

    The dressed doublets |+,n>, |-,n> share the hot gap omega_plus and the
    cold gap omega_minus up to O(dressed splitting). Eliminating the fast
    three-level dynamics leaves ladder rates

        s = (1/2) gh n_h (rho_plus + rho_minus),  r = gh (1 + n_h) rho_two.
    """
    p.require_weak_coupling()
    if p.gamma_h <= 0 or p.gamma_c <= 0:
        raise ValueError("transfer scheme needs both bath rates positive")
    n_h, n_c = p.occupations()
    gh, gc = p.gamma_h, p.gamma_c
    down_total = gh * (1.0 + n_h) + gc * (1.0 + n_c)
    q = (gh * n_h + gc * n_c) / down_total
    rho_pm = 1.0 / (2.0 + q)
    rho_two = q / (2.0 + q)
    s = gh * n_h * rho_pm
    r = gh * (1.0 + n_h) * rho_two
    k1 = gh * gc * (1.0 + n_h) * (1.0 + n_c) / ((2.0 + q) * down_total)
    return BirthDeathRates(s, r, k1, rho_pm, rho_pm, rho_two)


def hamiltonian_transfer_report(p):
    """Steady-state audit of the transfer scheme.

    All currents ride on the net ladder rate: j_abs = omega_plus (s - r),
    j_loss = -omega_minus (s - r), power = -omega_rc (s - r). Work is
    extracted exactly when the repository grows (s > r).
    """
    bd = birth_death_rates(p)
    net = bd.net
    j_abs = p.omega_plus * net
    j_loss = -p.omega_minus * net
    power = -p.omega_rc * net
    sigma = -j_abs / p.t_abs - j_loss / p.t_loss
    ratio = -j_loss / j_abs if j_abs != 0.0 else math.nan
    verdict = second_law_verdict(j_abs, j_loss, p.t_abs, p.t_loss)
    return ThermoReport(j_abs, j_loss, power, sigma, ratio, verdict, sink_flow=0.0)


def _index(sigma, n, n_max):
    return sigma * (n_max + 1) + n


def transfer_block_hamiltonian(p, n_max, n_offset=0.0):
    """System-plus-repository Hamiltonian on the 3 x (n_max+1) product basis.

    H = omega_abs |2><2| + (omega_rc/2)(|1><1| - |0><0|)
        + sqrt(gamma) (c |1><0| + c^dag |0><1|) + omega_rc (c^dag c - n_offset)
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    dim = 3 * (n_max + 1)
    h = np.zeros((dim, dim), dtype=complex)
    for n in range(n_max + 1):
        base = p.omega_rc * (n - n_offset)
        h[_index(0, n, n_max), _index(0, n, n_max)] = -0.5 * p.omega_rc + base
        h[_index(1, n, n_max), _index(1, n, n_max)] = 0.5 * p.omega_rc + base
        h[_index(2, n, n_max), _index(2, n, n_max)] = p.omega_abs + base
    g = math.sqrt(p.gamma)
    for n in range(1, n_max + 1):
        # c |1><0| : |0, n> -> sqrt(n) |1, n-1>
        amp = g * math.sqrt(n)
        h[_index(1, n - 1, n_max), _index(0, n, n_max)] = amp
        h[_index(0, n, n_max), _index(1, n - 1, n_max)] = amp
    return h


def _dressed_vectors(n, n_max):
    dim = 3 * (n_max + 1)
    plus = np.zeros(dim, dtype=complex)
    minus = np.zeros(dim, dtype=complex)
    inv = 1.0 / math.sqrt(2.0)
    plus[_index(1, n, n_max)] = inv
    plus[_index(0, n + 1, n_max)] = inv
    minus[_index(1, n, n_max)] = -inv
    minus[_index(0, n + 1, n_max)] = inv
    return plus, minus


def _basis_vector(sigma, n, n_max):
    dim = 3 * (n_max + 1)
    v = np.zeros(dim, dtype=complex)
    v[_index(sigma, n, n_max)] = 1.0
    return v


def hamiltonian_transfer_generator(p, n_max, flat_spectrum=True):
    """Secular generator of the transfer scheme in the dressed basis.

    Hot channels connect |2,n+1> with |+,n> and |-,n>, cold channels connect
    |2,n> with them; each of the four carries half the bare rate. With
    flat_spectrum=True occupations are evaluated at the nominal gaps
    omega_plus / omega_minus (the regime behind the birth-death closed
    forms); otherwise at the exact dressed gaps, which differ by half the
    doublet splitting.
    """
    p.require_weak_coupling()
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    top_split = 0.5 * dressed_frequency(n_max - 1, p.gamma)
    if p.omega_minus <= top_split:
        raise ValueError(
            "cold gap omega_minus must exceed half the largest dressed "
            f"splitting ({top_split:.3e}); lower n_max or the coupling"
        )
    h = transfer_block_hamiltonian(p, n_max)
    n_h_flat = bose_occupation(p.omega_plus, p.t_abs)
    n_c_flat = bose_occupation(p.omega_minus, p.t_loss)
    channels = []
    for n in range(n_max):
        plus, minus = _dressed_vectors(n, n_max)
        two_up = _basis_vector(2, n + 1, n_max)
        two_dn = _basis_vector(2, n, n_max)
        split = 0.5 * dressed_frequency(n, p.gamma)
        for sign, dressed in ((+1, plus), (-1, minus)):
            hot_gap = p.omega_plus - sign * split
            cold_gap = p.omega_minus - sign * split
            n_h = n_h_flat if flat_spectrum else bose_occupation(hot_gap, p.t_abs)
            n_c = n_c_flat if flat_spectrum else bose_occupation(cold_gap, p.t_loss)
            lower_hot = np.outer(dressed, two_up.conj())
            lower_cold = np.outer(dressed, two_dn.conj())
            channels.append(
                DissipationChannel(lower_hot, 0.5 * p.gamma_h * (1.0 + n_h), "abs", hot_gap)
            )
            channels.append(
                DissipationChannel(lower_hot.conj().T, 0.5 * p.gamma_h * n_h, "abs", hot_gap)
            )
            channels.append(
                DissipationChannel(lower_cold, 0.5 * p.gamma_c * (1.0 + n_c), "loss", cold_gap)
            )
            channels.append(
                DissipationChannel(lower_cold.conj().T, 0.5 * p.gamma_c * n_c, "loss", cold_gap)
            )
    return LindbladGenerator(h, channels)


def group_number_operator(n_max):
    """Repository quanta counted per dressed group.

    Group n holds |2,n>, |+,n> and |-,n>; since the dressed projectors of a
    doublet sum to |1,n><1,n| + |0,n+1><0,n+1| the operator is diagonal in
    the product basis.
    """
    dim = 3 * (n_max + 1)
    diag = np.zeros(dim)
    for n in range(n_max + 1):
        diag[_index(2, n, n_max)] = n
        diag[_index(1, n, n_max)] = n
        if n >= 1:
            diag[_index(0, n, n_max)] = n - 1
    return np.diag(diag).astype(complex)


def dressed_product_state(p, n_max, tail=0.3):
    """Conditional steady state of the three levels times a geometric ladder.

    Populates groups 1..n_max-1 with geometric weights ~ tail^n and the
    conditional populations from the birth-death reduction. Group 0 is
    skipped on purpose: its |2> member is missing the downward channel to
    the (absent) doublet below, so any weight there shifts the occupation
    growth rate away from s - r. Away from both ladder edges the rate is
    exact for any group weights.
    """
    if not (0.0 <= tail < 1.0):
        raise ValueError("tail must lie in [0, 1)")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    bd = birth_death_rates(p)
    weights = np.array([tail ** (n - 1) for n in range(1, n_max)])
    weights /= weights.sum()
    dim = 3 * (n_max + 1)
    rho = np.zeros((dim, dim), dtype=complex)
    for n in range(1, n_max):
        plus, minus = _dressed_vectors(n, n_max)
        two = _basis_vector(2, n, n_max)
        w = weights[n - 1]
        rho += w * bd.rho_plus * np.outer(plus, plus.conj())
        rho += w * bd.rho_minus * np.outer(minus, minus.conj())
        rho += w * bd.rho_two * np.outer(two, two.conj())
    return DensityMatrix(rho)


def excitation_growth_rate(gen, rho, n_max):
    """d<N>/dt of the group-number operator under the generator."""
    number = group_number_operator(n_max)
    return float(np.trace(number @ liouvillian_apply(gen, rho)).real)


def require_truncation_ok(states, n_max):
    """Raise if any state holds real weight on the truncation edge."""
    for st in states:
        entries = st.entries if isinstance(st, DensityMatrix) else np.asarray(st)
        weight = sum(
            entries[_index(sigma, n_max, n_max), _index(sigma, n_max, n_max)].real
            for sigma in range(3)
        )
        if weight > TRUNCATION_POPULATION_TOL:
            raise TruncationOverflowError(weight, n_max)
