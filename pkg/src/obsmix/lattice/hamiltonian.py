"""Colour-blind extended Hubbard-type ring.

    H = sum_colour sum_i [t1 c+_i c_{i+1} + t2 c+_i c_{i+2} + h.c.]
        + sum_i [v1 n_i n_{i+1} + v2 n_i n_{i+2}]

with periodic wrap, ``n_i`` the total (both colours) occupation, and the sum
over ``i`` taken literally: on very short rings a bond can appear more than
once and its amplitudes add up.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .basis import popcount


def _between_mask(i, j):
    lo, hi = min(i, j), max(i, j)
    return ((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1)


def hopping_matrix(words, L, amplitudes, fermion=True):
    """Single-colour hopping operator on a sorted list of occupation words.

    Parameters
    ----------
    words : ndarray of int64
        Sorted occupation words with a fixed particle number.
    amplitudes : dict
        ``{range r: t_r}``; each ``r`` adds ``t_r (c+_i c_{i+r} + h.c.)``
        for every site ``i``.
    fermion : bool
        Attach the Jordan-Wigner string ``(-1)^(particles strictly between)``.
    """
    n = words.size
    rows, cols, vals = [], [], []
    for r, t in amplitudes.items():
        if t == 0:
            continue
        for i in range(L):
            j = (i + r) % L
            # c+_i c_j and its conjugate c+_j c_i
            for dst, src in ((i, j), (j, i)):
                if dst == src:
                    rows.append(np.arange(n))
                    cols.append(np.arange(n))
                    vals.append(t * ((words >> src) & 1).astype(float))
                    continue
                ok = ((words >> src) & 1 == 1) & ((words >> dst) & 1 == 0)
                old = np.flatnonzero(ok)
                new_words = words[old] ^ (1 << src) ^ (1 << dst)
                new = np.searchsorted(words, new_words)
                sign = np.ones(old.size)
                if fermion:
                    sign = 1.0 - 2.0 * (popcount(words[old] & _between_mask(src, dst)) & 1)
                rows.append(new)
                cols.append(old)
                vals.append(t * sign)
    if not rows:
        return sp.csr_matrix((n, n))
    return sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()


def interaction_diagonal(basis, v1, v2):
    """``sum_i v1 n_i n_{i+1} + v2 n_i n_{i+2}`` on every basis state."""
    L = basis.spec.L
    n_p, n_m = basis.occupations()
    n = (n_p + n_m).astype(float)
    out = np.zeros(basis.dim)
    for r, v in ((1, v1), (2, v2)):
        if v:
            out += v * np.sum(n * np.roll(n, -r, axis=1), axis=1)
    return out


def build_hamiltonian(spec, basis, color_field=None):
    """Sparse Hamiltonian of one ``(N_plus, N_minus)`` block.

    Parameters
    ----------
    color_field : ndarray, optional
        Per-site potential felt by blue particles only. Breaks colour
        blindness; used to build negative controls.

    Returns
    -------
    scipy.sparse.csr_matrix
        Real symmetric matrix in the ordering of ``basis``.
    """
    L = spec.L
    fermion = spec.statistics == "fermion"
    amps = {1: spec.t1, 2: spec.t2}
    Tp = hopping_matrix(basis.plus_list, L, amps, fermion)
    Tm = hopping_matrix(basis.minus_list, L, amps, fermion)
    Ip = sp.identity(basis.plus_list.size, format="csr")
    Im = sp.identity(basis.minus_list.size, format="csr")
    H = sp.kron(Tp, Im, format="csr") + sp.kron(Ip, Tm, format="csr")
    diag = interaction_diagonal(basis, spec.v1, spec.v2)
    if color_field is not None:
        n_p, _ = basis.occupations()
        diag = diag + n_p @ np.asarray(color_field, dtype=float)
    if spec.occupancy == "site-exclusive":
        # product-basis positions of the surviving states
        full_pos = np.searchsorted(basis.plus_list, basis.plus) * basis.minus_list.size + np.searchsorted(
            basis.minus_list, basis.minus
        )
        H = H[full_pos][:, full_pos]
    H = H + sp.diags(diag)
    H = H.tocsr()
    H.sum_duplicates()
    H.eliminate_zeros()
    return H


def single_particle_energies(L, t1, t2):
    """Plane-wave dispersion ``2 t1 cos(2 pi m/L) + 2 t2 cos(4 pi m/L)``."""
    m = np.arange(L)
    return 2 * t1 * np.cos(2 * np.pi * m / L) + 2 * t2 * np.cos(4 * np.pi * m / L)
