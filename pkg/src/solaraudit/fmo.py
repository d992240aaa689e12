"""Antenna + seven-site pigment complex + reaction-center trap.

A ten-level single-excitation model in cm^-1 units: a shared ground state,
one effective antenna level holding the collective dipole of n_pigments
absorbers, the seven-site exciton block of the FMO monomer, and (when the
trap rate is nonzero) a terminal sink level fed irreversibly from site 3.

Radiation at the diluted-sunlight effective temperature pumps the antenna
and, more weakly, the excitons directly ("abs" bath). Protein vibrations
thermalize the exciton manifold, dephase the sites and carry the
antenna-to-complex transfer ("loss" bath). The sink channel is athermal
by construction; that bookkeeping is exactly what the entropy audit probes.

Times at the interface are picoseconds; internally one time unit is the
inverse wavenumber, so rates in cm^-1 multiply PS_TO_INTERNAL per ps.
"""

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .core import DensityMatrix, DissipationChannel, LindbladGenerator, liouvillian_apply, propagate
from .errors import ConfigError, NumericsError
from .thermo import BathSpec, bose_occupation, entropy_production, heat_current

KB_CM_PER_K = 0.6950348
PS_TO_INTERNAL = 0.18836515673088532  # 2*pi*c*1e-12 with c in cm/s

N_SITES = 7
SINK_SOURCE_SITE = 3  # 1-based site number feeding the trap

SITE_DATA_RESOURCE = "data/fmo_site_hamiltonian.txt"


def kelvin_to_wavenumber(temperature_k):
    if temperature_k <= 0:
        raise ValueError(f"temperature must be positive, got {temperature_k} K")
    return KB_CM_PER_K * temperature_k


def effective_sun_temperature(omega, t_sun_k, lambda_geo):
    """Temperature (K) of geometrically diluted blackbody radiation.

    Defined by exp(-omega/T_eff) = lam*n / (lam*n + 1) with n the thermal
    occupation at the source temperature, i.e. the temperature a bath
    would need for its occupation at omega to equal the diluted one.
    """
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if not (0 < lambda_geo <= 1):
        raise ValueError(f"lambda_geo must lie in (0, 1], got {lambda_geo}")
    n = bose_occupation(omega, kelvin_to_wavenumber(t_sun_k))
    diluted = lambda_geo * n
    if diluted == 0.0:
        raise NumericsError(
            f"diluted occupation underflowed at omega = {omega}, "
            f"t_sun = {t_sun_k} K; effective temperature not representable"
        )
    # log((x+1)/x) written to survive x many orders below 1
    denom = math.log1p(diluted) - math.log(diluted)
    return omega / denom / KB_CM_PER_K


def parse_site_data(text):
    """Parse the bundled plain-text site data format.

    '#' starts a comment. The first seven data lines hold one site energy
    each (cm^-1); the next seven hold the rows of the symmetric coupling
    matrix with zero diagonal.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        data = raw.split("#", 1)[0].strip()
        if not data:
            continue
        try:
            rows.append(([float(tok) for tok in data.split()], lineno))
        except ValueError:
            raise ConfigError(f"site data line {lineno}: malformed number in {data!r}")
    if len(rows) != 2 * N_SITES:
        raise ConfigError(
            f"site data needs {N_SITES} energy lines plus {N_SITES} coupling "
            f"rows, got {len(rows)} data lines"
        )
    energies = []
    for values, lineno in rows[:N_SITES]:
        if len(values) != 1:
            raise ConfigError(f"site data line {lineno}: expected one energy value")
        energies.append(values[0])
    couplings = []
    for values, lineno in rows[N_SITES:]:
        if len(values) != N_SITES:
            raise ConfigError(
                f"site data line {lineno}: expected {N_SITES} coupling values"
            )
        couplings.append(values)
    energies = np.array(energies)
    couplings = np.array(couplings)
    if np.abs(np.diag(couplings)).max() > 0:
        raise ConfigError("coupling matrix must have a zero diagonal")
    if np.abs(couplings - couplings.T).max() > 1e-9:
        raise ConfigError("coupling matrix must be symmetric")
    return energies, couplings


def load_site_data(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_site_data(fh.read())


def builtin_site_data():
    text = resources.files("solaraudit").joinpath(SITE_DATA_RESOURCE).read_text()
    return parse_site_data(text)


@dataclass(frozen=True)
class OhmicDrudeSpectrum:
    """Ohmic spectral density with a Drude cutoff, J(w) = 2 L w wc/(w^2+wc^2)."""

    reorganization: float
    cutoff: float

    def __post_init__(self):
        if self.reorganization < 0:
            raise ValueError("reorganization energy must be >= 0")
        if self.cutoff <= 0:
            raise ValueError("cutoff frequency must be positive")

    def density(self, omega):
        if omega <= 0:
            raise ValueError(f"spectral density needs omega > 0, got {omega}")
        wc = self.cutoff
        return 2.0 * self.reorganization * omega * wc / (omega * omega + wc * wc)

    def dephasing_rate(self, temperature):
        """Zero-frequency limit of J(w) n(w, T): the pure-dephasing rate."""
        if temperature <= 0:
            raise ValueError("temperature must be positive")
        return 2.0 * self.reorganization * temperature / self.cutoff


@dataclass(frozen=True)
class FmoConfig:
    site_energies: np.ndarray
    couplings: np.ndarray
    omega_ant: float
    n_pigments: int
    mu_ant_ind: float
    mu_fmo: float
    lambda_geo: float
    t_sun: float
    t_loss_k: float
    gamma_rad: float
    gamma_sink: float
    gamma_ant_fmo: float
    vib: OhmicDrudeSpectrum

    def __post_init__(self):
        energies = np.array(self.site_energies, dtype=float)
        couplings = np.array(self.couplings, dtype=float)
        if energies.shape != (N_SITES,):
            raise ValueError(f"site_energies must have shape ({N_SITES},)")
        if couplings.shape != (N_SITES, N_SITES):
            raise ValueError(f"couplings must have shape ({N_SITES}, {N_SITES})")
        if np.abs(couplings - couplings.T).max() > 1e-9:
            raise ValueError("couplings must be symmetric")
        if np.abs(np.diag(couplings)).max() > 0:
            raise ValueError("couplings must have a zero diagonal")
        energies.setflags(write=False)
        couplings.setflags(write=False)
        object.__setattr__(self, "site_energies", energies)
        object.__setattr__(self, "couplings", couplings)
        if self.omega_ant <= 0:
            raise ValueError("omega_ant must be positive")
        if not isinstance(self.n_pigments, int) or self.n_pigments < 1:
            raise ValueError("n_pigments must be a positive integer")
        if self.mu_ant_ind <= 0 or self.mu_fmo <= 0:
            raise ValueError("transition dipoles must be positive")
        if not (0 < self.lambda_geo <= 1):
            raise ValueError("lambda_geo must lie in (0, 1]")
        if self.t_sun <= 0 or self.t_loss_k <= 0:
            raise ValueError("t_sun and t_loss_k must be positive (kelvin)")
        if self.gamma_rad <= 0:
            raise ValueError("gamma_rad must be positive")
        if self.gamma_sink < 0 or self.gamma_ant_fmo < 0:
            raise ValueError("gamma_sink and gamma_ant_fmo must be >= 0")

    @classmethod
    def from_mapping(cls, params):
        """Build a config from a flat parameter mapping (CLI/file layer).

        data_file selects the site data ('builtin' for the shipped set);
        gamma_ant_fmo may be None, meaning the gamma_sink/10 default rule.
        """
        try:
            data_file = params.get("data_file", "builtin")
            if data_file == "builtin":
                energies, couplings = builtin_site_data()
            else:
                energies, couplings = load_site_data(data_file)
            gamma_sink = float(params["gamma_sink"])
            gamma_ant_fmo = params.get("gamma_ant_fmo")
            if gamma_ant_fmo is None:
                gamma_ant_fmo = gamma_sink / 10.0
            vib = OhmicDrudeSpectrum(
                reorganization=float(params["vib_reorganization"]),
                cutoff=float(params["vib_cutoff"]),
            )
            return cls(
                site_energies=energies,
                couplings=couplings,
                omega_ant=float(params["omega_ant"]),
                n_pigments=int(params["n_pigments"]),
                mu_ant_ind=float(params["mu_ant_ind"]),
                mu_fmo=float(params["mu_fmo"]),
                lambda_geo=float(params["lambda_geo"]),
                t_sun=float(params["t_sun"]),
                t_loss_k=float(params["t_loss_k"]),
                gamma_rad=float(params["gamma_rad"]),
                gamma_sink=gamma_sink,
                gamma_ant_fmo=float(gamma_ant_fmo),
                vib=vib,
            )
        except KeyError as exc:
            raise ConfigError(f"missing required key {exc.args[0]!r} for the trace model")

    @property
    def t_loss_cm(self):
        return kelvin_to_wavenumber(self.t_loss_k)

    @property
    def t_abs_k(self):
        return effective_sun_temperature(self.omega_ant, self.t_sun, self.lambda_geo)


@dataclass(frozen=True, eq=False)
class FmoModel:
    """Assembled generator plus the labels and scales the trace needs."""

    config: FmoConfig
    generator: LindbladGenerator
    labels: tuple
    sink_index: int
    t_abs_k: float
    t_abs_cm: float
    t_loss_cm: float
    exciton_energies: np.ndarray
    bright_weights: np.ndarray

    @property
    def dim(self):
        return self.generator.dim


def build_model(cfg):
    """Assemble the full generator from a config.

    The sink level exists only when gamma_sink > 0; a rate-zero trap would
    leave an isolated level and a spuriously degenerate stationary space.
    """
    with_sink = cfg.gamma_sink > 0
    dim = 2 + N_SITES + (1 if with_sink else 0)
    labels = ("ground", "antenna") + tuple(f"site{m + 1}" for m in range(N_SITES))
    sink_index = -1
    if with_sink:
        labels = labels + ("sink",)
        sink_index = dim - 1

    site_block = np.diag(cfg.site_energies) + cfg.couplings
    h = np.zeros((dim, dim), dtype=complex)
    h[1, 1] = cfg.omega_ant
    h[2 : 2 + N_SITES, 2 : 2 + N_SITES] = site_block

    energies, w = np.linalg.eigh(site_block)
    bright = np.abs(w.sum(axis=0)) ** 2

    t_abs_k = cfg.t_abs_k
    t_abs = kelvin_to_wavenumber(t_abs_k)
    t_loss = cfg.t_loss_cm

    ground = np.zeros(dim, dtype=complex)
    ground[0] = 1.0
    antenna = np.zeros(dim, dtype=complex)
    antenna[1] = 1.0
    excitons = []
    for k in range(N_SITES):
        v = np.zeros(dim, dtype=complex)
        v[2 : 2 + N_SITES] = w[:, k]
        excitons.append(v)

    channels = []

    # Radiation: collective antenna dipole plus direct exciton absorption.
    rate_ant = cfg.gamma_rad * cfg.n_pigments * (cfg.mu_ant_ind / cfg.mu_fmo) ** 2
    channels += BathSpec("abs", t_abs, rate_ant).thermal_pair(
        np.outer(ground, antenna.conj()), cfg.omega_ant
    )
    for k in range(N_SITES):
        channels += BathSpec("abs", t_abs, cfg.gamma_rad * bright[k]).thermal_pair(
            np.outer(ground, excitons[k].conj()), energies[k]
        )

    # Vibrations: exciton relaxation, site dephasing, antenna-to-complex
    # transfer. All share the protein-bath temperature.
    for i in range(N_SITES):
        for k in range(i + 1, N_SITES):
            gap = energies[k] - energies[i]
            overlap = float(np.sum(w[:, i] ** 2 * w[:, k] ** 2))
            rate = cfg.vib.density(gap) * overlap
            channels += BathSpec("loss", t_loss, rate).thermal_pair(
                np.outer(excitons[i], excitons[k].conj()), gap
            )
    rate_phi = cfg.vib.dephasing_rate(t_loss)
    for m in range(N_SITES):
        site_weight = np.zeros((dim, dim), dtype=complex)
        for k in range(N_SITES):
            site_weight += w[m, k] ** 2 * np.outer(excitons[k], excitons[k].conj())
        channels.append(DissipationChannel(site_weight, rate_phi, "loss", 0.0))
    for k in range(N_SITES):
        gap = cfg.omega_ant - energies[k]
        if gap <= 0:
            raise ConfigError(
                "omega_ant must lie above every exciton energy for downhill "
                f"antenna transfer; exciton at {energies[k]:.1f} cm^-1"
            )
        channels += BathSpec("loss", t_loss, cfg.gamma_ant_fmo * bright[k]).thermal_pair(
            np.outer(excitons[k], antenna.conj()), gap
        )

    if with_sink:
        site3 = np.zeros(dim, dtype=complex)
        site3[2 + SINK_SOURCE_SITE - 1] = 1.0
        sink = np.zeros(dim, dtype=complex)
        sink[sink_index] = 1.0
        # Site 3 is not an eigenstate, so this jump has no sharp Bohr
        # frequency; the nominal site energy is recorded instead.
        channels.append(
            DissipationChannel(
                np.outer(sink, site3.conj()),
                cfg.gamma_sink,
                "sink",
                float(cfg.site_energies[SINK_SOURCE_SITE - 1]),
                check_bohr=False,
            )
        )

    gen = LindbladGenerator(h, channels)
    return FmoModel(
        config=cfg,
        generator=gen,
        labels=labels,
        sink_index=sink_index,
        t_abs_k=t_abs_k,
        t_abs_cm=t_abs,
        t_loss_cm=t_loss,
        exciton_energies=energies,
        bright_weights=bright,
    )


def build_fmo_generator(cfg):
    return build_model(cfg).generator


@dataclass(frozen=True)
class FmoTrace:
    """Per-time-point audit of the trace run. Currents are cm^-1 per ps,
    entropy production is nats per ps, times are ps."""

    t_ps: np.ndarray
    j_abs: np.ndarray
    j_loss: np.ndarray
    sink_flow: np.ndarray
    sigma: np.ndarray
    sink_population: np.ndarray
    t_abs_k: float


def sigma_trace(cfg, t_grid_ps):
    """Propagate from the global ground state and audit every grid time."""
    model = build_model(cfg)
    gen = model.generator
    t_ps = np.asarray(t_grid_ps, dtype=float)
    states = propagate(gen, DensityMatrix.ground(model.dim), t_ps * PS_TO_INTERNAL)
    j_abs = np.empty(t_ps.size)
    j_loss = np.empty(t_ps.size)
    sink_flow = np.empty(t_ps.size)
    sigma = np.empty(t_ps.size)
    sink_pop = np.zeros(t_ps.size)
    for i, rho in enumerate(states):
        rho_dot = liouvillian_apply(gen, rho)
        ja = heat_current(gen, "abs", rho)
        jl = heat_current(gen, "loss", rho)
        sf = heat_current(gen, "sink", rho)
        sig = entropy_production(rho, rho_dot, (ja, jl), (model.t_abs_cm, model.t_loss_cm))
        j_abs[i] = ja * PS_TO_INTERNAL
        j_loss[i] = jl * PS_TO_INTERNAL
        sink_flow[i] = sf * PS_TO_INTERNAL
        sigma[i] = sig * PS_TO_INTERNAL
        if model.sink_index >= 0:
            sink_pop[i] = rho.population(model.sink_index)
    return FmoTrace(
        t_ps=t_ps,
        j_abs=j_abs,
        j_loss=j_loss,
        sink_flow=sink_flow,
        sigma=sigma,
        sink_population=sink_pop,
        t_abs_k=model.t_abs_k,
    )


def default_config(**overrides):
    """Shipped default configuration, optionally with field overrides."""
    from .config import default_section

    params = dict(default_section("fmo"))
    params.update(overrides)
    params.pop("t_max_ps", None)
    params.pop("n_times", None)
    return FmoConfig.from_mapping(params)
