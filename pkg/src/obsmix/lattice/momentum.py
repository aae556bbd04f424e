"""Block spectra via translation symmetry of the ring.

Translating every particle by one site commutes with the Hamiltonian. In the
Jordan-Wigner ordering used by :mod:`.hamiltonian` a particle wrapping from
site ``L-1`` to ``0`` is moved past the other ``n - 1`` particles of its
colour, which costs a sign ``(-1)^(n-1)`` for fermions. Splitting the block
into the ``L`` momentum sectors cuts the cost of a full diagonalisation by
roughly ``L^2``.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .basis import build_basis
from .hamiltonian import build_hamiltonian

DENSE_SPECTRUM_MAX = 6000


def _rotate(words, L):
    full = (1 << L) - 1
    return ((words << 1) | (words >> (L - 1))) & full


def translation(basis):
    """``T|b> = sign[b] |image[b]>`` as index and sign arrays."""
    L = basis.spec.L
    p2, m2 = _rotate(basis.plus, L), _rotate(basis.minus, L)
    image = basis.index(p2, m2)
    if np.any(image < 0):
        raise DomainError("basis is not closed under translation")
    sign = np.ones(basis.dim)
    if basis.spec.statistics == "fermion":
        top = L - 1
        for words, n in ((basis.plus, basis.spec.N_plus), (basis.minus, basis.spec.N_minus)):
            wraps = (words >> top) & 1
            if (n - 1) % 2:
                sign = np.where(wraps == 1, -sign, sign)
    return image, sign


def orbits(basis):
    """Representative, shift and sign for every state, plus orbit data.

    For state ``s`` returns ``rep[s]``, ``shift[s]`` and ``sgn[s]`` with
    ``|s> = sgn[s] T^shift[s] |rep[s]>``. ``period[r]`` and ``chi[r]`` satisfy
    ``T^period |r> = chi |r>`` for representatives ``r``.
    """
    L = basis.spec.L
    image, sign = translation(basis)
    n = basis.dim
    cur = np.arange(n)
    acc = np.ones(n)
    rep = np.arange(n)
    d_at = np.zeros(n, dtype=np.int64)
    s_at = np.ones(n)
    period = np.zeros(n, dtype=np.int64)
    chi = np.ones(n)
    for d in range(1, L + 1):
        acc = acc * sign[cur]
        cur = image[cur]
        better = cur < rep
        rep = np.where(better, cur, rep)
        d_at = np.where(better, d, d_at)
        s_at = np.where(better, acc, s_at)
        first = (cur == np.arange(n)) & (period == 0)
        period[first] = d
        chi[first] = acc[first]
    # T^d|s> = s_at |rep>  =>  |s> = s_at T^(L-d) |rep>
    shift = (L - d_at) % L
    return rep, shift, s_at, period, chi


def momentum_blocks(spec, basis=None, H=None):
    """Yield ``(kappa, H_k)`` for ``k = 2 pi kappa / L``; empty sectors skipped."""
    basis = basis or build_basis(spec)
    H = build_hamiltonian(spec, basis) if H is None else H
    L = spec.L
    rep, shift, sgn, period, chi = orbits(basis)
    reps = np.flatnonzero(rep == np.arange(basis.dim))
    Hc = H.tocsc()
    cols = Hc[:, reps].tocoo()
    src_rep = reps[cols.col]
    tgt = cols.row
    tgt_rep = rep[tgt]
    base = cols.data * sgn[tgt]
    for kappa in range(L):
        k = 2 * np.pi * kappa / L
        # allowed iff exp(-i k R) chi = 1
        phase = np.exp(-1j * k * period[reps]) * chi[reps]
        ok = np.abs(phase - 1.0) < 1e-9
        if not ok.any():
            continue
        pos = np.full(basis.dim, -1)
        pos[reps[ok]] = np.arange(ok.sum())
        keep = (pos[src_rep] >= 0) & (pos[tgt_rep] >= 0)
        val = base[keep] * np.exp(1j * k * shift[tgt[keep]]) * np.sqrt(
            period[src_rep[keep]] / period[tgt_rep[keep]]
        )
        m = int(ok.sum())
        Hk = np.zeros((m, m), dtype=complex)
        np.add.at(Hk, (pos[tgt_rep[keep]], pos[src_rep[keep]]), val)
        yield kappa, Hk


def block_eigenvalues(spec, basis=None, H=None, method="auto"):
    """Sorted eigenvalues of the ``(N_plus, N_minus)`` block.

    ``method`` is ``dense``, ``momentum`` or ``auto`` (dense up to
    :data:`DENSE_SPECTRUM_MAX` states).
    """
    basis = basis or build_basis(spec)
    if method == "auto":
        method = "dense" if basis.dim <= DENSE_SPECTRUM_MAX else "momentum"
    if method == "dense":
        H = build_hamiltonian(spec, basis) if H is None else H
        return np.linalg.eigvalsh(H.toarray())
    if method == "momentum":
        parts = [np.linalg.eigvalsh(Hk) for _, Hk in momentum_blocks(spec, basis, H)]
        ev = np.sort(np.concatenate(parts))
        if ev.size != basis.dim:
            raise DomainError(f"momentum sectors hold {ev.size} states, block has {basis.dim}")
        return ev
    raise DomainError(f"unknown spectrum method {method!r}")
