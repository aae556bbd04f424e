"""End-to-end runs: entropy and ergotropy during mixing, and size scans."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..combinatorics import Morty1Label, log_volume, volume_morty1, volume_rick
from ..entropy import observational_entropy, sector_probabilities
from ..errors import DomainError, ObsmixError
from ..thermo import (
    Spectrum,
    mean_energy,
    solve_beta_for_entropy,
    thermal_stats,
    work_difference_averages,
    work_difference_expansion,
)
from .basis import LatticeSpec, build_basis, default_rick_key, morty_partition, rick_label, rick_partition
from .evolution import DenseEvolver, EvolutionPlan, evolve, initial_state
from .hamiltonian import build_hamiltonian
from .momentum import block_eigenvalues

ENSEMBLE = "fixed (N_plus, N_minus) block"


@dataclass(frozen=True)
class TimeSeriesRecord:
    t: float
    S_rick: float
    S_morty1: float
    E_mean: float
    beta_obs: float
    W: float
    dW_exact: float
    dW_av: float
    dW_av2: float
    dW_0: float = math.nan
    dW_1: float = math.nan
    dW_2: float = math.nan

    CSV_COLUMNS = ("t", "S_rick", "S_morty1", "E_mean", "beta_obs", "W", "dW_exact", "dW_av", "dW_av2")

    def row(self):
        return [getattr(self, c) for c in self.CSV_COLUMNS]


@dataclass
class MixingRun:
    records: list
    meta: dict = field(default_factory=dict)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])


def expansion_terms(point, dS):
    """``(dW_0, dW_1, dW_2)`` at ``point``; NaN where the series is undefined."""
    if dS == 0:
        return 0.0, 0.0, 0.0
    try:
        return tuple(work_difference_expansion(point, dS, order=k) for k in range(3))
    except DomainError:
        return math.nan, math.nan, math.nan


def _averages(dW):
    if any(math.isnan(x) for x in dW):
        return math.nan, math.nan
    av = work_difference_averages(*dW)
    return av.av, av.av2


def run_mixing_timeseries(spec, plan=None, k=1.0, key=None):
    """Evolve a state confined to one Rick sector and track entropy and work.

    The canonical ensemble lives on the ``(N_plus, N_minus)`` block. At each
    time ``beta(t)`` solves ``S_vN = S_rick(t)``; ``W = E0 - <E>(beta(t))``
    and ``dW_exact = <E>(beta(t)) - <E>(beta(0))`` is what is lost by waiting.
    The series terms are expanded at ``beta(t)`` with ``dS = S(t) - S(0)``.
    """
    plan = plan or EvolutionPlan()
    basis = build_basis(spec)
    H = build_hamiltonian(spec, basis)
    method = plan.resolve_method(basis.dim)
    dense = DenseEvolver(H) if method == "dense" else None
    evals = dense.evals if dense else block_eigenvalues(spec, basis=basis, H=H)
    spectrum = Spectrum.from_eigenvalues(evals)

    key = default_rick_key(spec) if key is None else tuple(key)
    psi0 = initial_state(spec, basis, plan.init_mode, plan.seed, key)
    states, info = evolve(H, psi0, plan, dense=dense)

    rp, mp = rick_partition(basis), morty_partition(basis)
    pr = sector_probabilities(states, rp)
    pm = sector_probabilities(states, mp)
    vr, vm = rp.volumes.tolist(), mp.volumes.tolist()
    S_r = np.array([observational_entropy(p / p.sum(), vr) for p in pr])
    S_m = np.array([observational_entropy(p / p.sum(), vm) for p in pm])
    E_t = np.real(np.einsum("ti,ti->t", states.conj(), (H @ states.T).T))
    E0 = float(E_t[0])

    betas = []
    for s in S_r:
        try:
            betas.append(solve_beta_for_entropy(spectrum, s))
        except DomainError:
            betas.append(math.nan)
    beta0 = betas[0]
    E_beta0 = mean_energy(spectrum, beta0) if not math.isnan(beta0) else math.nan

    records = []
    for j, t in enumerate(plan.times):
        b = betas[j]
        if math.isnan(b):
            W = dW = math.nan
            dWk = (math.nan,) * 3
        else:
            Eb = mean_energy(spectrum, b)
            W = E0 - Eb
            dW = Eb - E_beta0
            dWk = expansion_terms(thermal_stats(spectrum, b), S_r[j] - S_r[0])
        av, av2 = _averages(dWk)
        records.append(
            TimeSeriesRecord(
                t=float(t),
                S_rick=k * float(S_r[j]),
                S_morty1=k * float(S_m[j]),
                E_mean=float(E_t[j]),
                beta_obs=float(b),
                W=float(W),
                dW_exact=float(dW),
                dW_av=float(av),
                dW_av2=float(av2),
                dW_0=float(dWk[0]),
                dW_1=float(dWk[1]),
                dW_2=float(dWk[2]),
            )
        )

    label = rick_label(spec, key)
    v_init = volume_rick(spec.geometry, label) if spec.occupancy == "independent-species" else rp.volumes[rp.index(key)]
    meta = {
        "dim_block": basis.dim,
        "method": info["method"],
        "krylov_residual": info["residual"],
        "init_mode": plan.init_mode,
        "seed": plan.seed,
        "rick_sector": f"{key[0]} blue, {key[1]} red on the left",
        "S_init": k * math.log(int(v_init)),
        "S_fin": k * math.log(basis.dim),
        "E0": E0,
        "ensemble": ENSEMBLE,
    }
    return MixingRun(records, meta)


@dataclass(frozen=True)
class ScanRecord:
    L_A: int
    L_B: int
    N_A: int
    N_B: int
    dim_block: int
    dS: float
    T_obs: float
    dW_exact: float
    dW_0: float
    dW_1: float
    dW_2: float
    dW_av: float
    dW_av2: float
    error: str = ""

    CSV_COLUMNS = (
        "L_A", "L_B", "N_A", "N_B", "dim_block", "dS", "T_obs",
        "dW_exact", "dW_0", "dW_1", "dW_2", "dW_av", "dW_av2", "error",
    )

    def row(self):
        return [getattr(self, c) for c in self.CSV_COLUMNS]

    @property
    def exact_between_12(self):
        lo, hi = sorted((self.dW_1, self.dW_2))
        return bool(lo <= self.dW_exact <= hi)


def symmetric_ladder(Ls, N_A=2, N_B=2):
    """Equal boxes ``L/2`` with ``N_A`` blue left and ``N_B`` red right."""
    out = []
    for L in Ls:
        if L % 2:
            raise DomainError(f"symmetric ladder needs even L, got {L}")
        out.append((L // 2, L // 2, N_A, N_B))
    return out


def nonsymmetric_ladder(L_As, N_A=3, N_B=2):
    """``L_B = floor(N_B L_A / N_A)``."""
    return [(L_A, (N_B * L_A) // N_A, N_A, N_B) for L_A in L_As]


def scan_point(L_A, L_B, N_A, N_B, couplings=None, k=1.0, spectrum_method="auto"):
    """One static comparison between Rick and Morty 1.

    The state has all ``N_A`` blue particles on the left and all ``N_B`` red
    ones on the right. ``dS = ln V^M1 - ln V^R`` uses exact volumes.
    """
    couplings = couplings or {}
    nan = math.nan
    try:
        spec = LatticeSpec(L_A, L_B, N_A, N_B, **couplings)
        N = N_A + N_B
        geom = spec.geometry
        ln_vr = log_volume("rick", geom, (N_A, N_A, N_A, N))
        ln_vm = math.log(volume_morty1(geom, Morty1Label(N_A, N_A, N)))
        dS = ln_vm - ln_vr
        evals = block_eigenvalues(spec, method=spectrum_method)
        dim = int(evals.size)
    except ObsmixError as exc:
        return ScanRecord(L_A, L_B, N_A, N_B, 0, nan, nan, nan, nan, nan, nan, nan, nan, str(exc))
    try:
        spectrum = Spectrum.from_eigenvalues(evals)
        b_M = solve_beta_for_entropy(spectrum, ln_vm)
        b_R = solve_beta_for_entropy(spectrum, ln_vr)
        dW = mean_energy(spectrum, b_M) - mean_energy(spectrum, b_R)
        point = thermal_stats(spectrum, b_M, k=k)
        dWk = expansion_terms(point, dS)
        av, av2 = _averages(dWk)
        return ScanRecord(L_A, L_B, N_A, N_B, dim, k * dS, point.T, dW, *dWk, av, av2)
    except ObsmixError as exc:
        return ScanRecord(L_A, L_B, N_A, N_B, dim, k * dS, nan, nan, nan, nan, nan, nan, nan, str(exc))


def run_static_scan(ladder, couplings=None, k=1.0, threads=1, spectrum_method="auto"):
    """Evaluate :func:`scan_point` on every ``(L_A, L_B, N_A, N_B)`` of ``ladder``.

    Solver failures are recorded in the ``error`` field and the scan goes on.
    Records come back in ladder order whatever the thread count.
    """
    ladder = [tuple(int(v) for v in p) for p in ladder]

    def one(p):
        return scan_point(*p, couplings=couplings, k=k, spectrum_method=spectrum_method)

    if threads <= 1:
        return [one(p) for p in ladder]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(one, ladder))


def records_as_dicts(records):
    return [asdict(r) for r in records]
