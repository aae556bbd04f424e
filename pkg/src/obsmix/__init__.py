"""Observational entropy and ergotropy of two-colour lattice gases."""

__version__ = "0.1.0"

from .combinatorics import (
    BoxGeometry,
    Fractions,
    Morty1Label,
    Morty2Label,
    RickLabel,
    log_volume,
    stirling_log_volume,
    volume_accessible,
    volume_morty1,
    volume_morty2,
    volume_morty3_perceived,
    volume_rick,
)
from .entropy import SectorPartition, observational_entropy, sector_probabilities, shannon
from .errors import ConfigError, DomainError, ObsmixError, VerificationError
from .gasmodels import GasModel, gas_model_bracket
from .thermo import (
    Spectrum,
    observational_ergotropy,
    solve_beta_for_entropy,
    thermal_stats,
    work_difference_averages,
    work_difference_exact,
    work_difference_expansion,
)
