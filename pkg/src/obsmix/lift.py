"""Colour-blind observers and the lift of their operators to the coloured space.

Setting: ``N`` particles on ``L`` sites, at most one particle per site, each
blue (``+``) or red (``-``). Erasing colours sends a coloured basis state to
its *configuration*, the set of occupied sites. A colour-blind observer
models the system on the configuration space alone.

Inside a fixed-colour block ``(N_plus, N - N_plus)`` every configuration
carries the same ``m = C(N, N_plus)`` colourings. A *frame* picks, for every
configuration ``x``, a bijection ``pi_x`` from colourings to ``0..m-1``; it
identifies the block with ``config space (x) C^m`` through
``|x, s> -> |x> (x) |pi_x(s)>``. The canonical frame reads colours left to
right; random frames are a seeded part of the fiber choice.

In a frame, the lift of a configuration vector ``c`` is ``c (x) C^m``. All
lifted objects follow from this:

* projectors ``P_M (x) 1``,
* Hamiltonians ``sum_E E P_E (x) 1`` (degenerate levels fused),
* densities ``(+)_blocks lambda sum_r r |r><r| (x) sigma_r``,
* unitaries ``sum_u u P_u (x) V`` with one seeded Haar ``V`` per block.

The literal preimage ``{psi : K psi ~ c}`` spanned by enumerated colourings
is also available (``method="enumerate"``) as a diagnostic. For vectors
supported on more than one configuration it is strictly larger than
``c (x) C^m``, and lifts of orthogonal vectors then overlap.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.stats import unitary_group

from .errors import DomainError, VerificationError
from .lattice.basis import species_words

EIG_TOL = 1e-9
SYMBOLS = {0: "0", 1: "+", -1: "-"}


# ---------------------------------------------------------------------------
# random objects


def haar_unitary(n, rng):
    if n == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(n, random_state=rng)


def random_density(n, rng, rank=None):
    """Density matrix ``G G^dag / tr`` with ``G`` complex Gaussian ``n x rank``."""
    rank = n if rank is None else rank
    G = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_unit_vector(n, rng):
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


def block_haar(sectors, n, rng):
    """Direct sum of independent Haar unitaries, one per index set in ``sectors``."""
    U = np.zeros((n, n), dtype=complex)
    for idx in sectors:
        U[np.ix_(idx, idx)] = haar_unitary(len(idx), rng)
    return U


# ---------------------------------------------------------------------------
# spaces


def _colorings(N, N_plus):
    """Colour tuples (``+1``/``-1`` per occupied site, left to right), sorted."""
    out = []
    for plus_pos in itertools.combinations(range(N), N_plus):
        s = [-1] * N
        for p in plus_pos:
            s[p] = 1
        out.append(tuple(s))
    return sorted(out, reverse=True)


@dataclass(frozen=True, eq=False)
class ColoredSpace:
    """Site-exclusive coloured space with ``N`` particles on ``L`` sites.

    Basis order: block ``N_plus`` ascending, then configuration word
    ascending, then colouring in :func:`_colorings` order.
    """

    L: int
    N: int
    blocks: tuple
    configs: np.ndarray
    colorings: dict
    frames: dict = field(repr=False)

    @classmethod
    def build(cls, L, N, blocks=None, frame_seed=None):
        if not 0 <= N <= L:
            raise DomainError(f"need 0 <= N <= L, got N={N}, L={L}")
        blocks = tuple(range(N + 1)) if blocks is None else tuple(sorted(set(blocks)))
        if any(not 0 <= b <= N for b in blocks):
            raise DomainError(f"blocks must lie in 0..{N}")
        configs = species_words(L, N)
        cols = {b: _colorings(N, b) for b in blocks}
        rng = None if frame_seed is None else np.random.default_rng(frame_seed)
        frames = {}
        for b in blocks:
            m = len(cols[b])
            if rng is None:
                frames[b] = np.tile(np.arange(m), (configs.size, 1))
            else:
                frames[b] = np.array([rng.permutation(m) for _ in range(configs.size)])
        return cls(L, N, blocks, configs, cols, frames)

    @property
    def n_config(self):
        return int(self.configs.size)

    def m(self, b):
        return len(self.colorings[b])

    @property
    def block_dims(self):
        return {b: self.n_config * self.m(b) for b in self.blocks}

    @property
    def dim(self):
        return sum(self.block_dims.values())

    def offset(self, b):
        return sum(self.block_dims[c] for c in self.blocks if c < b)

    def block_slice(self, b):
        o = self.offset(b)
        return slice(o, o + self.block_dims[b])

    def index(self, b, x, s):
        """Physical index of block ``b``, configuration ``x``, colouring ``s``."""
        return self.offset(b) + x * self.m(b) + s

    def block_of(self):
        out = np.empty(self.dim, dtype=int)
        for b in self.blocks:
            out[self.block_slice(b)] = b
        return out

    def states(self):
        """Yield ``(index, block, x, s, plus word, minus word)``."""
        sites_of = [[j for j in range(self.L) if (int(w) >> j) & 1] for w in self.configs]
        idx = 0
        for b in self.blocks:
            for x, sites in enumerate(sites_of):
                for s, col in enumerate(self.colorings[b]):
                    pw = sum(1 << j for j, c in zip(sites, col) if c == 1)
                    mw = sum(1 << j for j, c in zip(sites, col) if c == -1)
                    yield idx, b, x, s, pw, mw
                    idx += 1

    def words(self):
        st = list(self.states())
        return np.array([t[4] for t in st], dtype=np.int64), np.array([t[5] for t in st], dtype=np.int64)

    def label(self, i):
        p, m = self.words()
        p, m = int(p[i]), int(m[i])
        return "".join("+" if (p >> j) & 1 else "-" if (m >> j) & 1 else "0" for j in range(self.L))

    def ket(self, string):
        """Coloured basis vector from a site string such as ``"0+-0"``."""
        if len(string) != self.L:
            raise DomainError(f"state string must have {self.L} sites")
        pw = sum(1 << j for j, ch in enumerate(string) if ch == "+")
        mw = sum(1 << j for j, ch in enumerate(string) if ch == "-")
        p, m = self.words()
        hit = np.flatnonzero((p == pw) & (m == mw))
        if hit.size != 1:
            raise DomainError(f"{string!r} is not a basis state of this space")
        v = np.zeros(self.dim, dtype=complex)
        v[hit[0]] = 1.0
        return v

    def config_ket(self, string):
        w = sum(1 << j for j, ch in enumerate(string) if ch == "1")
        hit = np.flatnonzero(self.configs == w)
        if len(string) != self.L or hit.size != 1:
            raise DomainError(f"{string!r} is not a configuration with {self.N} particles")
        v = np.zeros(self.n_config, dtype=complex)
        v[hit[0]] = 1.0
        return v

    def erasure(self):
        """The colour-erasing map ``K`` as an ``n_config x dim`` matrix."""
        K = np.zeros((self.n_config, self.dim))
        for i, b, x, s, _, _ in self.states():
            K[x, i] = 1.0
        return K

    def frame_matrix(self, b):
        """Permutation ``F`` with ``phys = F @ tensor`` inside block ``b``."""
        m = self.m(b)
        n = self.n_config * m
        F = np.zeros((n, n))
        for x in range(self.n_config):
            for s in range(m):
                F[x * m + s, x * m + self.frames[b][x, s]] = 1.0
        return F

    def lift_block(self, A_M, inner, b):
        F = self.frame_matrix(b)
        return F @ np.kron(A_M, inner) @ F.T

    def direct_sum(self, blocks):
        """Assemble ``{b: matrix}`` into a block-diagonal full-space matrix."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for b, A in blocks.items():
            sl = self.block_slice(b)
            out[sl, sl] = A
        return out

    def color_occupation(self, site, color=1):
        """Diagonal operator counting colour ``color`` at ``site``."""
        p, m = self.words()
        w = p if color == 1 else m
        return np.diag(((w >> site) & 1).astype(float))


# ---------------------------------------------------------------------------
# spectral helpers


def group_levels(values, vectors, tol=EIG_TOL):
    """Group eigenpairs with nearby eigenvalues into eigenspaces.

    Returns a list of ``(value, basis)`` with ``basis`` columns orthonormal.
    """
    order = np.argsort(values.real if np.isrealobj(values) else np.angle(values))
    vals = values[order]
    vecs = vectors[:, order]
    groups = []
    start = 0
    for j in range(1, len(vals) + 1):
        if j == len(vals) or abs(vals[j] - vals[start]) > tol:
            groups.append((vals[start:j].mean(), vecs[:, start:j]))
            start = j
    # unit-circle values can wrap around angle -pi/pi
    if len(groups) > 1 and np.iscomplexobj(values) and abs(groups[0][0] - groups[-1][0]) <= tol:
        v0, B0 = groups.pop(0)
        v1, B1 = groups.pop()
        groups.append((v1, np.hstack([B1, B0])))
    return groups


def hermitian_spectral(A, tol=EIG_TOL):
    A = np.asarray(A)
    if np.abs(A - A.conj().T).max() > 1e-10:
        raise DomainError("operator is not Hermitian")
    w, V = np.linalg.eigh(A)
    return group_levels(w, V, tol)


def unitary_spectral(U, tol=EIG_TOL):
    """Eigenspaces of a unitary through the complex Schur form."""
    U = np.asarray(U, dtype=complex)
    if np.abs(U @ U.conj().T - np.eye(U.shape[0])).max() > 1e-10:
        raise DomainError("operator is not unitary")
    T, Z = sla.schur(U, output="complex")
    return group_levels(np.diag(T).copy(), Z, tol)


def _projector(B):
    return B @ B.conj().T


# ---------------------------------------------------------------------------
# lifts


@dataclass
class LiftedSubspace:
    basis: np.ndarray
    rank: int
    kernel: np.ndarray
    spanning: np.ndarray
    method: str

    @property
    def kernel_dim(self):
        return self.kernel.shape[1]

    @property
    def image(self):
        """Orthonormal basis of the span with kernel directions removed."""
        if self.kernel_dim == 0:
            return self.basis
        coef = self.basis.conj().T @ self.kernel
        _, _, Vh = np.linalg.svd(coef.conj().T)
        return self.basis @ Vh[self.kernel_dim:].conj().T


def _orth(M, rtol=1e-10):
    if M.shape[1] == 0:
        return M
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > rtol * max(1.0, s[0] if s.size else 0.0)))
    return U[:, :r]


def lift_subspace(space, c, block=None, method="frame"):
    """Coloured vectors whose colour-erased image is proportional to ``c``.

    Parameters
    ----------
    c : array_like
        Non-zero configuration-space vector.
    block : int, optional
        Restrict to the block with ``block`` blue particles; default all
        blocks of ``space``.
    method : {"frame", "enumerate"}
        ``frame`` returns ``c (x) C^m`` in each block. ``enumerate`` spans
        ``sum_x c_x |x, s_x>`` over every choice of colouring ``s_x`` per
        configuration in the support (across blocks when ``block`` is None).

    Returns
    -------
    LiftedSubspace
        Orthonormal ``basis`` of the span and the ``kernel`` of ``K`` inside
        it; ``image`` drops the kernel directions. Lifted projectors use the
        full ``basis``: inside a block every ``c (x) (e_j - e_k)`` is a kernel
        vector, so dropping them would break completeness. A block absent
        from ``space`` gives an empty basis.
    """
    c = np.asarray(c, dtype=complex)
    if c.shape != (space.n_config,):
        raise DomainError(f"configuration vector must have length {space.n_config}")
    nrm = np.linalg.norm(c)
    if nrm == 0:
        raise DomainError("cannot lift the zero vector")
    c = c / nrm
    if block is not None and block not in space.blocks:
        empty = np.zeros((space.dim, 0), dtype=complex)
        return LiftedSubspace(empty, 0, empty, empty, method)
    blocks = space.blocks if block is None else (block,)
    cols = []
    if method == "frame":
        for b in blocks:
            F = space.frame_matrix(b)
            sl = space.block_slice(b)
            for j in range(space.m(b)):
                e = np.zeros(space.m(b))
                e[j] = 1.0
                v = np.zeros(space.dim, dtype=complex)
                v[sl] = F @ np.kron(c, e)
                cols.append(v)
    elif method == "enumerate":
        supp = np.flatnonzero(np.abs(c) > 1e-14)
        choices = [(b, s) for b in blocks for s in range(space.m(b))]
        if len(choices) ** len(supp) > 200000:
            raise DomainError("too many colourings to enumerate")
        for pick in itertools.product(choices, repeat=len(supp)):
            v = np.zeros(space.dim, dtype=complex)
            for x, (b, s) in zip(supp, pick):
                v[space.index(b, x, s)] = c[x]
            cols.append(v)
    else:
        raise DomainError(f"unknown method {method!r}")
    spanning = np.array(cols).T
    basis = _orth(spanning)
    K = space.erasure()
    # kernel of K restricted to span(basis)
    KB = K @ basis
    _, s, Vh = np.linalg.svd(KB)
    r = int(np.sum(s > 1e-10))
    kernel = basis @ Vh[r:].conj().T
    return LiftedSubspace(basis, basis.shape[1], kernel, spanning, method)


def lift_projector(space, P_M, method="frame", check=True):
    """Projector onto the span of the lifts of ``P_M``'s range.

    Built from the spectral decomposition of ``P_M``: every range vector is
    lifted and the union orthonormalised.

    Raises
    ------
    VerificationError
        With ``check``, if the lifted ranges are not mutually orthogonal (the
        rank falls short of ``rank(P_M) * sum_b m_b``). Only happens for
        ``method="enumerate"``.
    """
    P_M = np.asarray(P_M)
    if np.abs(P_M @ P_M - P_M).max() > 1e-10 or np.abs(P_M - P_M.conj().T).max() > 1e-10:
        raise DomainError("P_M is not an orthogonal projector")
    w, V = np.linalg.eigh(P_M)
    rng_vecs = V[:, w > 0.5]
    if rng_vecs.shape[1] == 0:
        return np.zeros((space.dim, space.dim), dtype=complex)
    Q = _orth(np.hstack([lift_subspace(space, v, method=method).basis for v in rng_vecs.T]))
    if check and method == "frame":
        want = rng_vecs.shape[1] * sum(space.m(b) for b in space.blocks)
        if Q.shape[1] != want:
            raise VerificationError(f"lifted range has rank {Q.shape[1]}, expected {want}")
    return _projector(Q)


def lift_measurement(space, projectors, method="frame", tol=1e-10):
    """Lift a complete perceived measurement, checking the lifted sectors.

    Raises
    ------
    VerificationError
        If two lifted sectors overlap or they fail to resolve the identity,
        which happens when lifted ranges of orthogonal vectors are not
        orthogonal.
    """
    lifted = [lift_projector(space, P, method=method, check=False) for P in projectors]
    for i in range(len(lifted)):
        for j in range(i + 1, len(lifted)):
            ov = np.abs(lifted[i] @ lifted[j]).max()
            if ov > tol:
                raise VerificationError(f"lifted sectors {i} and {j} overlap (max |P_i P_j| = {ov:.3g})")
    gap = np.abs(sum(lifted) - np.eye(space.dim)).max()
    if gap > tol:
        raise VerificationError(f"lifted sectors do not resolve the identity (gap {gap:.3g})")
    return lifted


@dataclass
class LiftedHamiltonian:
    H: np.ndarray
    levels: list  # (E, perceived eigenspace basis, lifted projector)


def lift_hamiltonian(space, H_M, tol=EIG_TOL):
    """``sum_E E P_E`` with ``P_E`` the lift of the (fused) eigenspace of ``E``."""
    levels = []
    H = np.zeros((space.dim, space.dim), dtype=complex)
    for E, B in hermitian_spectral(H_M, tol):
        P = space.direct_sum({b: space.lift_block(_projector(B), np.eye(space.m(b)), b) for b in space.blocks})
        levels.append((float(np.real(E)), B, P))
        H += E * P
    return LiftedHamiltonian(H, levels)


@dataclass
class LiftedUnitary:
    U: np.ndarray
    levels: list  # (u, perceived eigenspace basis, lifted projector)
    fiber: dict  # block -> fiber unitary (or list of them)


def lift_unitary(space, U_M, fiber_seed=0, independent_fibers=False, tol=EIG_TOL):
    """Lift ``U_M = sum_u u P_u`` to ``sum_u u (P_u (x) V)`` blockwise.

    Each block gets one seeded Haar unitary ``V`` on its colour fiber, shared
    by every eigenvalue ``u``, so each ``U_u = P_u (x) V`` mixes its lifted
    eigenspace with a Haar-distributed fiber rotation.

    ``independent_fibers=True`` instead draws a separate ``V_u`` per
    eigenvalue. The result is still unitary and block-diagonal, but it no
    longer reproduces ``U_M`` on colour-blind measurements; it serves as a
    negative control.
    """
    rng = np.random.default_rng(fiber_seed)
    spectral = unitary_spectral(U_M, tol)
    blocks = {}
    fibers = {}
    for b in space.blocks:
        m = space.m(b)
        if independent_fibers:
            Vs = [haar_unitary(m, rng) for _ in spectral]
        else:
            V = haar_unitary(m, rng)
            Vs = [V] * len(spectral)
        fibers[b] = Vs if independent_fibers else Vs[0]
        blocks[b] = sum(u * space.lift_block(_projector(B), V, b) for (u, B), V in zip(spectral, Vs))
    U = space.direct_sum(blocks)
    if np.abs(U @ U.conj().T - np.eye(space.dim)).max() > 1e-10:
        raise VerificationError("lifted unitary is not unitary")
    levels = [
        (u, B, space.direct_sum({b: space.lift_block(_projector(B), np.eye(space.m(b)), b) for b in space.blocks}))
        for u, B in spectral
    ]
    return LiftedUnitary(U, levels, fibers)


def lift_density(space, rho_M, weights=None, inner_seed=0, inner_rank=None):
    """``(+)_b lambda_b sum_r r |r><r| (x) sigma_{b,r}`` with seeded random ``sigma``.

    Parameters
    ----------
    weights : dict or sequence, optional
        ``lambda`` over the blocks of ``space``; uniform by default. Weights
        on blocks absent from ``space`` are dropped with a warning and the
        rest renormalised.
    inner_rank : int, optional
        Rank of each ``sigma``; full rank by default.
    """
    rho_M = np.asarray(rho_M)
    if abs(np.trace(rho_M).real - 1.0) > 1e-10:
        raise DomainError("rho_M must have unit trace")
    if weights is None:
        lam = {b: 1.0 / len(space.blocks) for b in space.blocks}
    else:
        lam = dict(weights) if isinstance(weights, dict) else dict(zip(space.blocks, weights))
        missing = [b for b in lam if b not in space.blocks and lam[b] > 0]
        if missing:
            warnings.warn(f"blocks {missing} are empty here; their weight is dropped", stacklevel=2)
        lam = {b: float(lam.get(b, 0.0)) for b in space.blocks}
        tot = sum(lam.values())
        if tot <= 0 or any(v < 0 for v in lam.values()):
            raise DomainError("block weights must be non-negative with positive sum")
        lam = {b: v / tot for b, v in lam.items()}
    r_vals, r_vecs = np.linalg.eigh(rho_M)
    if r_vals.min() < -1e-10:
        raise DomainError("rho_M is not positive")
    rng = np.random.default_rng(inner_seed)
    blocks = {}
    for b in space.blocks:
        m = space.m(b)
        acc = np.zeros((space.block_dims[b],) * 2, dtype=complex)
        for r, v in zip(r_vals, r_vecs.T):
            sigma = random_density(m, rng, None if inner_rank is None else min(inner_rank, m))
            if r > 1e-15:
                acc += r * space.lift_block(np.outer(v, v.conj()), sigma, b)
        blocks[b] = lam[b] * acc
    return space.direct_sum(blocks)


# ---------------------------------------------------------------------------
# perceived setup


@dataclass
class PerceivedSystem:
    """What the colour-blind observer believes: ``H_M``, ``rho_M``, ``C_M``."""

    L: int
    N: int
    H_M: np.ndarray
    rho_M: np.ndarray
    sectors: list  # index arrays of the coarse-graining C_M
    sector_labels: list = field(default_factory=list)
    block_weights: dict | None = None

    @property
    def n_config(self):
        return self.H_M.shape[0]

    def sector_projectors(self):
        out = []
        for idx in self.sectors:
            P = np.zeros((self.n_config, self.n_config))
            P[idx, idx] = 1.0
            out.append(P)
        return out


def perceived_lattice_system(L=4, N=2, L_A=2, seed=0, couplings=None):
    """Single-colour ring Hamiltonian, a random ``rho_M`` and left-count sectors."""
    from .lattice.basis import LatticeSpec, build_basis
    from .lattice.hamiltonian import build_hamiltonian

    spec = LatticeSpec(L_A, L - L_A, N, 0, **(couplings or {}))
    basis = build_basis(spec)
    H_M = build_hamiltonian(spec, basis).toarray()
    rng = np.random.default_rng(seed)
    rho_M = random_density(basis.dim, rng)
    left = np.bitwise_count(basis.plus & spec.left_mask)
    labels = sorted(set(left.tolist()))
    sectors = [np.flatnonzero(left == n) for n in labels]
    return PerceivedSystem(L, N, H_M, rho_M, sectors, labels)


def extraction_unitary(H_M, rho):
    """Send eigenvectors of ``rho`` (largest weight first) to energy eigenvectors (lowest first)."""
    _, E_vecs = np.linalg.eigh(H_M)
    w, R = np.linalg.eigh(rho)
    R = R[:, np.argsort(-w, kind="stable")]
    return E_vecs @ R.conj().T


def coarse_grained_state(rho_M, sectors):
    n = rho_M.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for idx in sectors:
        p = np.trace(rho_M[np.ix_(idx, idx)]).real
        out[idx, idx] = p / len(idx)
    return out


# ---------------------------------------------------------------------------
# verification


@dataclass
class Check:
    name: str
    value: float
    tol: float
    passed: bool
    detail: str = ""


@dataclass
class Report:
    checks: list = field(default_factory=list)
    seeds: dict = field(default_factory=dict)
    failed_assumptions: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def add(self, name, value, tol, detail="", passed=None):
        ok = (value <= tol) if passed is None else passed
        self.checks.append(Check(name, float(value), float(tol), bool(ok), detail))
        return ok

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        return next(c for c in self.checks if c.name == name)


def off_block_norm(space, A):
    blk = space.block_of()
    mask = blk[:, None] != blk[None, :]
    return float(np.abs(np.asarray(A)[mask]).max()) if mask.any() else 0.0


def admissible_measurements(space, perceived):
    """Colour-blind measurements: positions, energy levels and ``C_M`` sectors."""
    n = perceived.n_config
    out = []
    for x in range(n):
        P = np.zeros((n, n))
        P[x, x] = 1.0
        out.append((f"position[{x}]", P))
    for j, (E, B) in enumerate(hermitian_spectral(perceived.H_M)):
        out.append((f"energy[{j}]", _projector(B)))
    for lab, P in zip(perceived.sector_labels or range(len(perceived.sectors)), perceived.sector_projectors()):
        out.append((f"sector[{lab}]", P))
    return out


def check_assumptions(space, perceived, H, rho, U, U_M, tol=1e-8):
    """Measure each assumption's violation for a coloured realisation.

    Returns ``{name: (value, description)}``; a value above ``tol`` means
    the assumption fails.
    """
    K = space.erasure()
    H_lift = lift_hamiltonian(space, perceived.H_M).H
    meas = admissible_measurements(space, perceived)
    lifted = [(name, P, lift_projector(space, P)) for name, P in meas]
    rho_M, H_M = perceived.rho_M, perceived.H_M
    a2 = max(abs(np.trace(rho @ PL).real - np.trace(rho_M @ P).real) for _, P, PL in lifted)
    rho_t = U @ rho @ U.conj().T
    rho_Mt = U_M @ rho_M @ U_M.conj().T
    a3 = max(abs(np.trace(rho_t @ PL).real - np.trace(rho_Mt @ P).real) for _, P, PL in lifted)
    a8 = max(np.abs(H - H_lift).max(), np.abs(K @ H - H_M @ K).max())
    return {
        "a2 density consistency": (a2, "tr[rho lift(P)] vs tr[rho_M P] on admissible P"),
        "a3 unitary consistency": (a3, "same after applying U and U_M"),
        "a5 density superselection": (off_block_norm(space, rho), "rho coherence across colour blocks"),
        "a6 unitary superselection": (off_block_norm(space, U), "U coupling across colour blocks"),
        "a7 colour conservation": (off_block_norm(space, H), "H coupling across colour blocks"),
        "a8 colour-blind energy": (a8, "|H - lift(H_M)| and |K H - H_M K|"),
    }


def verify_lemma_overlap(n_samples=200, tol=1e-10, sizes=((3, 1), (3, 2), (4, 2), (4, 3)), seed=0,
                         method="frame"):
    """Overlap identity ``tr[P_E |psi><psi|] = |<E|psi_M>|^2`` on random samples.

    Each sample draws a size, a random frame, a random Hermitian ``H_M`` or
    unitary ``U_M`` (alternating), a random ``psi_M``, a block and a random
    vector ``psi`` in the lift of ``psi_M`` within that block. For degenerate
    levels ``|<E|psi_M>|^2`` is the weight on the whole eigenspace.
    """
    rng = np.random.default_rng(seed)
    rep = Report(seeds={"seed": seed})
    worst = 0.0
    worst_hit = 0.0
    for k in range(n_samples):
        L, N = sizes[k % len(sizes)]
        space = ColoredSpace.build(L, N, frame_seed=int(rng.integers(2**32)))
        n = space.n_config
        psi_M = random_unit_vector(n, rng)
        if k % 2 == 0:
            A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            levels = hermitian_spectral(A + A.conj().T)
        else:
            levels = unitary_spectral(haar_unitary(n, rng))
        b = space.blocks[int(rng.integers(len(space.blocks)))]
        sub = lift_subspace(space, psi_M, block=b, method=method)
        if method == "frame":
            psi = sub.basis @ random_unit_vector(sub.rank, rng)
        else:
            # a random combination of the enumerated vectors with unit image
            coef = random_unit_vector(sub.spanning.shape[1], rng)
            psi = sub.spanning @ coef
            psi /= np.linalg.norm(psi)
        for _, B in levels:
            P = space.direct_sum({c: space.lift_block(_projector(B), np.eye(space.m(c)), c) for c in space.blocks})
            lhs = np.vdot(psi, P @ psi).real
            rhs = np.linalg.norm(B.conj().T @ psi_M) ** 2
            worst = max(worst, abs(lhs - rhs))
            worst_hit = max(worst_hit, rhs)
    rep.add("lemma overlap", worst, tol, f"{n_samples} samples, method={method}")
    rep.extra["max_rhs"] = worst_hit
    return rep


def verify_work_equality(perceived=None, n_unitaries=20, fiber_seeds=(0, 1, 2), tol=1e-8, seed=0,
                         H_override=None, independent_fibers=False, identity_unitary=False):
    """Colour-blind work prediction versus the work done on the coloured system.

    For every sampled ``U~_M`` (block-Haar over the ``C_M`` sectors) the
    perceived protocol is ``U_M = U_ext U~_M``, with ``U_ext`` sending the
    coarse-grained state's eigenvectors to energy order. For every fiber seed
    the coloured system is rebuilt (random frame, lifted ``rho``, ``H`` and
    ``U``) and both works are compared pointwise.

    Parameters
    ----------
    H_override : callable, optional
        ``H_override(space, H_lift) -> H`` replaces the lifted Hamiltonian, e.g.
        to add a colour-dependent field.
    identity_unitary : bool
        Use ``U_M = 1`` instead of the extraction protocol.

    Returns
    -------
    Report
        Checks ``work equality``, ``first-term identity``, ``fiber
        independence`` and ``coarse-grained average``. Any violated assumption
        is listed in ``failed_assumptions`` together with its size.
    """
    perceived = perceived or perceived_lattice_system()
    rng = np.random.default_rng(seed)
    rep = Report(seeds={"seed": seed, "fiber_seeds": list(fiber_seeds)})
    H_M, rho_M = perceived.H_M, perceived.rho_M
    n = perceived.n_config
    rho_cg = coarse_grained_state(rho_M, perceived.sectors)
    U_ext = extraction_unitary(H_M, rho_cg)
    E_init_M = np.trace(H_M @ rho_M).real

    spaces = {}
    for f in fiber_seeds:
        space = ColoredSpace.build(perceived.L, perceived.N, frame_seed=f)
        lh = lift_hamiltonian(space, H_M)
        H = lh.H if H_override is None else H_override(space, lh.H)
        rho = lift_density(space, rho_M, perceived.block_weights, inner_seed=f)
        spaces[f] = (space, H, rho)

    worst = 0.0
    first_term = 0.0
    spread = 0.0
    W_M_samples = []
    failed = {}
    for j in range(n_unitaries):
        U_t = np.eye(n) if identity_unitary else block_haar(perceived.sectors, n, rng)
        U_M = np.eye(n) if identity_unitary else U_ext @ U_t
        W_M = E_init_M - np.trace(H_M @ U_M @ rho_M @ U_M.conj().T).real
        W_M_samples.append(W_M)
        Ws = []
        for f, (space, H, rho) in spaces.items():
            lu = lift_unitary(space, U_M, fiber_seed=(f, j), independent_fibers=independent_fibers)
            U = lu.U
            E0 = np.trace(H @ rho).real
            W = E0 - np.trace(H @ U @ rho @ U.conj().T).real
            Ws.append(W)
            worst = max(worst, abs(W - W_M))
            first_term = max(first_term, abs(E0 - E_init_M))
            if j < 2:
                for name, (val, desc) in check_assumptions(space, perceived, H, rho, U, U_M, tol).items():
                    if val > tol:
                        failed[name] = max(failed.get(name, 0.0), val)
        spread = max(spread, max(Ws) - min(Ws))

    rep.add("work equality", worst, tol, f"{n_unitaries} unitaries x {len(fiber_seeds)} fibers")
    rep.add("first-term identity", first_term, tol)
    rep.add("fiber independence", spread, tol)
    W_M_samples = np.array(W_M_samples)
    W_cg = E_init_M - np.trace(H_M @ U_ext @ rho_cg @ U_ext.conj().T).real
    if not identity_unitary and n_unitaries > 1:
        sem = W_M_samples.std(ddof=1) / math.sqrt(n_unitaries)
        dev = abs(W_M_samples.mean() - W_cg)
        rep.add("coarse-grained average", dev, 5 * sem, "mean over U~_M vs tr[H_M(rho_M - U_ext rho_cg U_ext^dag)]")
    rep.extra.update({"W_cg": W_cg, "W_M_mean": float(W_M_samples.mean()), "n_samples": n_unitaries * len(spaces)})
    rep.failed_assumptions = sorted(failed.items())
    for name, val in rep.failed_assumptions:
        rep.add(f"assumption {name}", val, tol)
    return rep


def color_field_override(eps=0.3, site=0):
    """``H + eps n_{site,+}``: a colour-dependent perturbation."""

    def make(space, H):
        return H + eps * space.color_occupation(site, color=1)

    return make
