"""Two-colour occupation basis on a ring of ``L = L_A + L_B`` sites.

Each colour is stored as an ``L``-bit occupation word, bit ``j`` for site
``j``. Sites ``0 .. L_A - 1`` form the left box.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from ..combinatorics import BoxGeometry, RickLabel
from ..entropy import SectorPartition
from ..errors import ConfigError, DomainError

OCCUPANCY_MODES = ("independent-species", "site-exclusive")
STATISTICS = ("fermion", "hard-core-boson")


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry, particle content and couplings of the two-colour ring.

    ``N_plus`` blue and ``N_minus`` red particles. The default couplings sit
    at a chaotic point of the model.
    """

    L_A: int
    L_B: int
    N_plus: int
    N_minus: int
    t1: float = 1.0
    v1: float = 1.0
    t2: float = 0.96
    v2: float = 0.96
    occupancy: str = "independent-species"
    statistics: str = "fermion"

    def __post_init__(self):
        if self.L_A < 1 or self.L_B < 1:
            raise ConfigError("L_A and L_B must be >= 1")
        if self.N_plus < 0 or self.N_minus < 0:
            raise ConfigError("particle numbers must be >= 0")
        if self.occupancy not in OCCUPANCY_MODES:
            raise ConfigError(f"occupancy must be one of {OCCUPANCY_MODES}")
        if self.statistics not in STATISTICS:
            raise ConfigError(f"statistics must be one of {STATISTICS}")
        L = self.L
        if self.occupancy == "independent-species":
            if self.N_plus > L or self.N_minus > L:
                raise DomainError(f"{self.N_plus}+{self.N_minus} particles exceed capacity of {L} sites per colour")
        elif self.N_plus + self.N_minus > L:
            raise DomainError(f"{self.N_plus + self.N_minus} particles exceed {L} sites")
        if L > 62:
            raise ConfigError("at most 62 sites supported")

    @property
    def L(self):
        return self.L_A + self.L_B

    @property
    def N(self):
        return self.N_plus + self.N_minus

    @property
    def geometry(self):
        return BoxGeometry(self.L_A, self.L_B)

    @property
    def left_mask(self):
        return (1 << self.L_A) - 1

    def block_dim(self):
        if self.occupancy == "independent-species":
            return comb(self.L, self.N_plus) * comb(self.L, self.N_minus)
        return comb(self.L, self.N_plus) * comb(self.L - self.N_plus, self.N_minus)

    def color_swapped(self):
        from dataclasses import replace

        return replace(self, N_plus=self.N_minus, N_minus=self.N_plus)


def species_words(L, n):
    """All ``L``-bit words with ``n`` set bits, ascending."""
    words = [sum(1 << j for j in c) for c in itertools.combinations(range(L), n)]
    return np.array(sorted(words), dtype=np.int64)


def popcount(a):
    return np.bitwise_count(np.asarray(a, dtype=np.int64)).astype(np.int64)


@dataclass(frozen=True, eq=False)
class Basis:
    """Ordered basis of one ``(N_plus, N_minus)`` block.

    States are sorted lexicographically by ``(plus word, minus word)``. In
    independent-species mode state ``b`` is ``(plus_words[b // n_minus],
    minus_words[b % n_minus])``.
    """

    spec: LatticeSpec
    plus_list: np.ndarray
    minus_list: np.ndarray
    plus: np.ndarray
    minus: np.ndarray

    @property
    def dim(self):
        return int(self.plus.size)

    @property
    def block(self):
        return (self.spec.N_plus, self.spec.N_minus)

    @property
    def keys(self):
        return (self.plus << self.spec.L) | self.minus

    def index(self, plus_word, minus_word):
        """Basis positions of the given word pairs (``-1`` if absent)."""
        keys = (np.asarray(plus_word, dtype=np.int64) << self.spec.L) | np.asarray(minus_word, dtype=np.int64)
        allk = self.keys
        pos = np.searchsorted(allk, keys)
        pos = np.clip(pos, 0, allk.size - 1)
        return np.where(allk[pos] == keys, pos, -1)

    def occupations(self):
        """Arrays ``(n_plus, n_minus)`` of shape ``(dim, L)``."""
        sites = np.arange(self.spec.L)
        return (self.plus[:, None] >> sites) & 1, (self.minus[:, None] >> sites) & 1

    def word_string(self, b):
        """Site string with ``0``, ``+``, ``-`` and ``2`` (both colours)."""
        L = self.spec.L
        p, m = int(self.plus[b]), int(self.minus[b])
        sym = {(0, 0): "0", (1, 0): "+", (0, 1): "-", (1, 1): "2"}
        return "".join(sym[(p >> j) & 1, (m >> j) & 1] for j in range(L))


def build_basis(spec):
    """Enumerate the ``(N_plus, N_minus)`` block of ``spec``."""
    P = species_words(spec.L, spec.N_plus)
    M = species_words(spec.L, spec.N_minus)
    plus = np.repeat(P, M.size)
    minus = np.tile(M, P.size)
    if spec.occupancy == "site-exclusive":
        keep = (plus & minus) == 0
        plus, minus = plus[keep], minus[keep]
    if plus.size == 0:
        raise DomainError("empty basis")
    return Basis(spec, P, M, plus, minus)


def left_counts(basis):
    mask = basis.spec.left_mask
    return popcount(basis.plus & mask), popcount(basis.minus & mask)


def rick_partition(basis):
    """Sectors keyed by ``(blue on left, red on left)``."""
    bl, rl = left_counts(basis)
    return SectorPartition.from_keys(list(zip(bl.tolist(), rl.tolist())))


def morty_partition(basis):
    """Sectors keyed by the total number on the left."""
    bl, rl = left_counts(basis)
    return SectorPartition.from_keys((bl + rl).tolist())


def rick_label(spec, key):
    """Convert a Rick sector key ``(blue left, red left)`` into a :class:`RickLabel`."""
    bl, rl = key
    return RickLabel(bl, spec.N_plus, bl + rl, spec.N)


def default_rick_key(spec):
    """All blue on the left, all red on the right."""
    if spec.N_plus > spec.L_A or spec.N_minus > spec.L_B:
        raise DomainError("all-blue-left/all-red-right does not fit the boxes")
    return (spec.N_plus, 0)
