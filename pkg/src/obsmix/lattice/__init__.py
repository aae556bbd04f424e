"""Two-colour lattice gas: basis, Hamiltonian, dynamics and pipelines."""

from .basis import (
    Basis,
    LatticeSpec,
    build_basis,
    default_rick_key,
    morty_partition,
    rick_label,
    rick_partition,
)
from .evolution import EvolutionPlan, evolve, initial_state, time_grid
from .hamiltonian import build_hamiltonian, single_particle_energies
from .momentum import block_eigenvalues, momentum_blocks
from .pipelines import (
    MixingRun,
    ScanRecord,
    TimeSeriesRecord,
    nonsymmetric_ladder,
    run_mixing_timeseries,
    run_static_scan,
    scan_point,
    symmetric_ladder,
)
