from .three_level import (
    ThreeLevelParams,
    BirthDeathRates,
    birth_death_rates,
    decay_generator,
    decay_report,
    decay_steady_populations,
    dressed_frequency,
    dressed_product_state,
    excitation_growth_rate,
    group_number_operator,
    hamiltonian_transfer_generator,
    hamiltonian_transfer_report,
    require_truncation_ok,
    transfer_block_hamiltonian,
)
from .donor_acceptor import (
    DonorAcceptorParams,
    donor_acceptor_currents,
    donor_acceptor_generator,
    donor_acceptor_report,
    donor_acceptor_steady_state,
)
from .photocell import (
    PhotocellParams,
    photocell_currents,
    photocell_generator,
    photocell_report,
    photocell_steady_state,
)
from .collective import (
    CollectiveReservoirParams,
    OscillatorLimitReport,
    compare_with_oscillator_limit,
)

__all__ = [
    "ThreeLevelParams",
    "BirthDeathRates",
    "birth_death_rates",
    "decay_generator",
    "decay_report",
    "decay_steady_populations",
    "dressed_frequency",
    "dressed_product_state",
    "excitation_growth_rate",
    "group_number_operator",
    "hamiltonian_transfer_generator",
    "hamiltonian_transfer_report",
    "require_truncation_ok",
    "transfer_block_hamiltonian",
    "DonorAcceptorParams",
    "donor_acceptor_currents",
    "donor_acceptor_generator",
    "donor_acceptor_report",
    "donor_acceptor_steady_state",
    "PhotocellParams",
    "photocell_currents",
    "photocell_generator",
    "photocell_report",
    "photocell_steady_state",
    "CollectiveReservoirParams",
    "OscillatorLimitReport",
    "compare_with_oscillator_limit",
]
