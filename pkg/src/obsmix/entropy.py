"""Observational entropy of coarse-grained states.

A coarse-graining is a partition of an orthonormal basis into sectors; the
sector projectors are diagonal in that basis, so a state enters only through
the sector probabilities ``p_j = tr[P_j rho]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._info import binary_entropy, plogp_sum
from .combinatorics import Fractions
from .errors import DomainError

__all__ = [
    "SectorPartition",
    "shannon",
    "observational_entropy",
    "sector_probabilities",
    "entropy_diff_static",
    "entropy_growth",
    "morty_offsets",
]

PROB_TOL = 1e-12


def _check_prob(p, tol=PROB_TOL):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise DomainError("probability vector must be one-dimensional")
    if np.any(p < -tol):
        raise DomainError(f"negative probability {p.min()!r}")
    if abs(p.sum() - 1.0) > max(tol, tol * p.size):
        raise DomainError(f"probabilities sum to {p.sum()!r}, not 1")
    return np.clip(p, 0.0, None)


def shannon(p):
    """Shannon entropy ``-sum p ln p`` in nats, with ``0 ln 0 = 0``.

    Raises
    ------
    DomainError
        If an entry is negative or the vector is not normalised.
    """
    return plogp_sum(_check_prob(p))


def observational_entropy(p, volumes, k=1.0):
    """``k * (-sum p ln p + sum p ln V)``.

    Parameters
    ----------
    p : array_like
        Sector probabilities.
    volumes : array_like
        Sector dimensions, aligned with ``p``. Python ints of any size are
        accepted; sectors with ``p = 0`` never contribute, whatever their size.
    k : float
        Boltzmann constant; entropies are reported in units of ``k``.
    """
    p = _check_prob(p)
    vols = list(volumes)
    if len(vols) != p.size:
        raise DomainError(f"{p.size} probabilities but {len(vols)} volumes")
    mean_log_v = 0.0
    for pj, vj in zip(p, vols):
        if pj > 0:
            if vj < 1:
                raise DomainError(f"occupied sector with volume {vj}")
            mean_log_v += pj * math.log(vj)
    return k * (plogp_sum(p) + mean_log_v)


@dataclass(frozen=True)
class SectorPartition:
    """Partition of ``range(dim)`` into labelled sectors.

    Attributes
    ----------
    labels : tuple
        Sector labels in sector order.
    sector_of : ndarray of int
        ``sector_of[b]`` is the sector index of basis state ``b``.
    """

    labels: tuple
    sector_of: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.asarray(self.sector_of)
        if s.ndim != 1 or (s.size and (s.min() < 0 or s.max() >= len(self.labels))):
            raise DomainError("sector_of must index into labels")
        if s.size and np.any(np.bincount(s, minlength=len(self.labels)) == 0):
            raise DomainError("empty sector in partition")

    @classmethod
    def from_keys(cls, keys):
        """Build from one hashable key per basis state; labels sorted."""
        keys = [tuple(k) if isinstance(k, (list, np.ndarray)) else k for k in keys]
        labels = tuple(sorted(set(keys)))
        pos = {lab: j for j, lab in enumerate(labels)}
        return cls(labels, np.fromiter((pos[k] for k in keys), dtype=np.int64, count=len(keys)))

    @property
    def dim(self):
        return int(self.sector_of.size)

    @property
    def volumes(self):
        return np.bincount(self.sector_of, minlength=len(self.labels))

    def members(self, j):
        return np.flatnonzero(self.sector_of == j)

    def index(self, label):
        return self.labels.index(label)

    def is_refinement_of(self, coarser):
        """True if every sector of ``self`` lies inside one sector of ``coarser``."""
        if coarser.dim != self.dim:
            return False
        image = np.full(len(self.labels), -1)
        for b, j in enumerate(self.sector_of):
            c = coarser.sector_of[b]
            if image[j] == -1:
                image[j] = c
            elif image[j] != c:
                return False
        return True

    def entropy(self, state, kind="pure", k=1.0):
        return observational_entropy(
            sector_probabilities(state, self, kind=kind), self.volumes.tolist(), k=k
        )


def sector_probabilities(state, partition, kind="pure"):
    """Sector probabilities ``p_j = tr[P_j rho]``.

    Parameters
    ----------
    state : array_like
        Pure state vector (``kind="pure"``), diagonal weights
        (``kind="weights"``) or a density matrix (``kind="density"``, only its
        diagonal matters). A 2-D array with ``kind="pure"`` is read as a stack
        of state vectors, one per row.
    partition : SectorPartition
    """
    state = np.asarray(state)
    n = len(partition.labels)
    if kind == "pure":
        w = np.abs(state) ** 2
    elif kind == "weights":
        w = np.asarray(state, dtype=float)
        if np.any(w < -PROB_TOL):
            raise DomainError("negative weight")
    elif kind == "density":
        if state.ndim != 2 or state.shape[0] != state.shape[1]:
            raise DomainError("density matrix must be square")
        w = np.real(np.diagonal(state))
    else:
        raise DomainError(f"unknown state kind {kind!r}")
    if w.shape[-1] != partition.dim:
        raise DomainError(f"state dimension {w.shape[-1]} != partition dimension {partition.dim}")
    if w.ndim == 1:
        return np.bincount(partition.sector_of, weights=w, minlength=n)
    out = np.zeros((w.shape[0], n))
    np.add.at(out, (slice(None), partition.sector_of), w)
    return out


def _as_fractions(f):
    if isinstance(f, Fractions):
        return f
    return Fractions(*f)


def entropy_diff_static(pair, fractions, N):
    """Leading-order ``S_Morty - S_Rick`` for a state in one Rick macrostate.

    ``pair="morty1"`` gives ``N(S(a) + S(r) - S(q))``; ``pair="morty2"``
    gives ``N(S(a) + ln 2 - S(q))``.
    """
    f = _as_fractions(fractions)
    if pair in ("morty1", "M1", 1):
        return N * (f.S_a + f.S_r - f.S_q)
    if pair in ("morty2", "M2", 2):
        return N * (f.S_a + math.log(2.0) - f.S_q)
    raise DomainError(f"unknown observer pair {pair!r}")


def entropy_growth(observer, fractions, N):
    """Leading-order growth from a single macrostate to uniform spreading.

    Rick: ``N(ln 2 + S(r) - S(q))``. Every Morty: ``N(ln 2 - S(a))``.
    """
    f = _as_fractions(fractions)
    if observer == "rick":
        return N * (math.log(2.0) + f.S_r - f.S_q)
    if observer in ("morty1", "morty2", "morty3"):
        return N * (math.log(2.0) - f.S_a)
    raise DomainError(f"unknown observer {observer!r}")


def morty_offsets(fractions, N):
    """Time-independent gaps ``S_M1 - S_M3 = N S(r)`` and ``S_M2 - S_M3 = N ln 2``."""
    f = _as_fractions(fractions)
    return {"morty1": N * binary_entropy(f.r), "morty2": N * math.log(2.0)}
