import itertools
from functools import reduce
from math import comb

import numpy as np
import pytest

from obsmix.combinatorics import Morty1Label, volume_morty1, volume_rick
from obsmix.errors import ConfigError, DomainError
from obsmix.lattice import (
    LatticeSpec,
    block_eigenvalues,
    build_basis,
    build_hamiltonian,
    initial_state,
    morty_partition,
    rick_label,
    rick_partition,
    single_particle_energies,
)

# ---------------------------------------------------------------------------
# independent oracle: dense operators on the full 2L-mode Fock space


def fock_operators(n_modes):
    """Jordan-Wigner annihilators, mode 0 is the most significant qubit."""
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    Z = np.diag([1.0, -1.0])
    I = np.eye(2)
    ops = []
    for m in range(n_modes):
        ops.append(reduce(np.kron, [Z] * m + [a] + [I] * (n_modes - m - 1)))
    return ops


def fock_hamiltonian(L, t1, t2, v1, v2):
    c = fock_operators(2 * L)
    dim = 2 ** (2 * L)
    H = np.zeros((dim, dim))
    n = [c[i].T @ c[i] + c[L + i].T @ c[L + i] for i in range(L)]
    for colour in (0, L):
        for r, t in ((1, t1), (2, t2)):
            for i in range(L):
                j = (i + r) % L
                hop = c[colour + i].T @ c[colour + j]
                H += t * (hop + hop.T)
    for r, v in ((1, v1), (2, v2)):
        for i in range(L):
            H += v * n[i] @ n[(i + r) % L]
    return H, c


def fock_block_spectrum(L, Np, Nm, couplings, exclusive=False):
    H, c = fock_hamiltonian(L, **couplings)
    Np_op = sum(c[i].T @ c[i] for i in range(L))
    Nm_op = sum(c[L + i].T @ c[L + i] for i in range(L))
    keep = (np.isclose(np.diag(Np_op), Np)) & (np.isclose(np.diag(Nm_op), Nm))
    if exclusive:
        dbl = sum(c[i].T @ c[i] @ c[L + i].T @ c[L + i] for i in range(L))
        keep &= np.isclose(np.diag(dbl), 0)
    idx = np.flatnonzero(keep)
    return np.linalg.eigvalsh(H[np.ix_(idx, idx)])


COUPLINGS = dict(t1=1.0, t2=0.96, v1=1.0, v2=0.96)


@pytest.mark.parametrize("L_A,L_B,Np,Nm", [(2, 1, 1, 1), (2, 2, 1, 1), (2, 2, 2, 1), (2, 2, 2, 2), (3, 2, 2, 1)])
def test_block_spectrum_matches_fock_oracle(L_A, L_B, Np, Nm):
    spec = LatticeSpec(L_A, L_B, Np, Nm, **COUPLINGS)
    ours = block_eigenvalues(spec, method="dense")
    ref = fock_block_spectrum(L_A + L_B, Np, Nm, COUPLINGS)
    np.testing.assert_allclose(ours, ref, atol=1e-10)


@pytest.mark.parametrize("L_A,L_B,Np,Nm", [(2, 2, 1, 1), (2, 2, 2, 1), (3, 2, 2, 2)])
def test_site_exclusive_matches_projected_oracle(L_A, L_B, Np, Nm):
    spec = LatticeSpec(L_A, L_B, Np, Nm, occupancy="site-exclusive", **COUPLINGS)
    ours = block_eigenvalues(spec, method="dense")
    ref = fock_block_spectrum(L_A + L_B, Np, Nm, COUPLINGS, exclusive=True)
    np.testing.assert_allclose(ours, ref, atol=1e-10)


# ---------------------------------------------------------------------------


@pytest.mark.parametrize("L_A,L_B,Np,Nm", [(3, 3, 2, 2), (5, 5, 2, 2), (6, 4, 2, 2), (2, 1, 3, 0)])
def test_basis_dimensions(L_A, L_B, Np, Nm):
    spec = LatticeSpec(L_A, L_B, Np, Nm)
    L = L_A + L_B
    assert build_basis(spec).dim == spec.block_dim() == comb(L, Np) * comb(L, Nm)
    if Np + Nm <= L:
        ex = LatticeSpec(L_A, L_B, Np, Nm, occupancy="site-exclusive")
        assert build_basis(ex).dim == comb(L, Np) * comb(L - Np, Nm)


def test_desk_dimension():
    assert build_basis(LatticeSpec(6, 4, 2, 2)).dim == 2025


def test_capacity_errors():
    with pytest.raises(DomainError):
        LatticeSpec(2, 1, 4, 0)
    with pytest.raises(DomainError):
        LatticeSpec(2, 1, 2, 2, occupancy="site-exclusive")
    with pytest.raises(ConfigError):
        LatticeSpec(0, 3, 1, 1)
    with pytest.raises(ConfigError):
        LatticeSpec(3, 3, 1, 1, statistics="anyon")


def test_basis_ordering_and_lookup():
    b = build_basis(LatticeSpec(2, 2, 1, 1))
    assert np.all(np.diff(b.keys) > 0)
    j = 7
    assert b.index(b.plus[j], b.minus[j]) == j
    assert b.index(0b0001, 0b0001 << 5) == -1
    assert set(b.word_string(j)) <= set("0+-2")
    assert sum(b.word_string(k).count("2") for k in range(b.dim)) == 4


@pytest.mark.parametrize("L_A,L_B,Np,Nm", [(3, 3, 2, 2), (4, 2, 2, 1), (3, 4, 1, 3)])
def test_hamiltonian_is_real_symmetric(L_A, L_B, Np, Nm):
    spec = LatticeSpec(L_A, L_B, Np, Nm)
    H = build_hamiltonian(spec, build_basis(spec))
    assert abs(H - H.T).max() == 0.0
    assert not np.iscomplexobj(H.data)


@pytest.mark.parametrize("L", [2, 3, 4, 5, 7, 8])
def test_single_particle_dispersion(L):
    spec = LatticeSpec(1, L - 1, 1, 0, t1=1.0, t2=0.96, v1=0.0, v2=0.0)
    ev = block_eigenvalues(spec, method="dense")
    np.testing.assert_allclose(ev, np.sort(single_particle_energies(L, 1.0, 0.96)), atol=1e-12)


def test_two_site_ring_doubles_the_bond():
    spec = LatticeSpec(1, 1, 1, 0, t1=0.7, t2=0.0, v1=0.0, v2=0.0)
    np.testing.assert_allclose(block_eigenvalues(spec, method="dense"), [-1.4, 1.4], atol=1e-14)


def test_boson_and_fermion_agree_for_one_particle_per_colour():
    f = LatticeSpec(3, 3, 1, 1)
    b = LatticeSpec(3, 3, 1, 1, statistics="hard-core-boson")
    np.testing.assert_allclose(block_eigenvalues(f, method="dense"), block_eigenvalues(b, method="dense"), atol=1e-12)


@pytest.mark.parametrize("L_A,L_B,Np,Nm", [(3, 3, 2, 1), (4, 3, 3, 1), (3, 2, 1, 2)])
def test_colour_swap_isospectral(L_A, L_B, Np, Nm):
    spec = LatticeSpec(L_A, L_B, Np, Nm)
    a = block_eigenvalues(spec, method="dense")
    b = block_eigenvalues(spec.color_swapped(), method="dense")
    np.testing.assert_allclose(a, b, atol=1e-10)


def test_colour_field_breaks_blindness():
    spec = LatticeSpec(3, 3, 2, 1)
    field = np.zeros(6)
    field[0] = 0.3
    H0 = build_hamiltonian(spec, build_basis(spec))
    H1 = build_hamiltonian(spec, build_basis(spec), color_field=field)
    sw = spec.color_swapped()
    Hs = build_hamiltonian(sw, build_basis(sw), color_field=field)
    assert abs(H1 - H0).max() == pytest.approx(0.3)
    assert not np.allclose(np.linalg.eigvalsh(H1.toarray()), np.linalg.eigvalsh(Hs.toarray()))


@pytest.mark.parametrize(
    "L_A,L_B,Np,Nm,stat",
    [
        (3, 3, 2, 2, "fermion"),
        (4, 3, 2, 2, "fermion"),
        (3, 2, 3, 2, "fermion"),
        (3, 3, 2, 1, "hard-core-boson"),
        (2, 2, 1, 1, "fermion"),
    ],
)
def test_momentum_blocks_match_dense(L_A, L_B, Np, Nm, stat):
    spec = LatticeSpec(L_A, L_B, Np, Nm, statistics=stat)
    np.testing.assert_allclose(
        block_eigenvalues(spec, method="momentum"), block_eigenvalues(spec, method="dense"), atol=1e-10
    )


def test_momentum_site_exclusive():
    spec = LatticeSpec(3, 3, 2, 2, occupancy="site-exclusive")
    np.testing.assert_allclose(
        block_eigenvalues(spec, method="momentum"), block_eigenvalues(spec, method="dense"), atol=1e-10
    )


@pytest.mark.parametrize("L_A,L_B,Np,Nm", [(3, 3, 2, 2), (4, 2, 3, 1), (2, 5, 2, 3)])
def test_partitions_match_volumes(L_A, L_B, Np, Nm):
    spec = LatticeSpec(L_A, L_B, Np, Nm)
    b = build_basis(spec)
    rp, mp = rick_partition(b), morty_partition(b)
    for key, V in zip(rp.labels, rp.volumes):
        assert V == volume_rick(spec.geometry, rick_label(spec, key))
    for NA, V in zip(mp.labels, mp.volumes):
        assert V == volume_morty1(spec.geometry, Morty1Label(Np, NA, spec.N))
    assert rp.is_refinement_of(mp)
    assert rp.dim == b.dim


def test_initial_state_confined():
    spec = LatticeSpec(3, 3, 2, 1)
    b = build_basis(spec)
    rp = rick_partition(b)
    for mode in ("basis", "haar"):
        psi = initial_state(spec, b, mode=mode, seed=4)
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        outside = np.ones(b.dim, bool)
        outside[rp.members(rp.index((2, 0)))] = False
        assert np.all(psi[outside] == 0)
    with pytest.raises(DomainError):
        initial_state(spec, b, key=(3, 0))


def test_exhaustive_word_enumeration():
    spec = LatticeSpec(2, 2, 2, 1)
    b = build_basis(spec)
    want = sorted(
        (sum(1 << i for i in p) << 4) | sum(1 << i for i in m)
        for p in itertools.combinations(range(4), 2)
        for m in itertools.combinations(range(4), 1)
    )
    assert b.keys.tolist() == want


def test_two_site_range_two_interaction_pairs_a_site_with_itself():
    # on L = 2 the literal sum makes n_i n_{i+2} = n_i, a shift of v2 per particle
    spec = LatticeSpec(1, 1, 1, 0, t1=0.0, t2=0.0, v1=0.0, v2=0.5)
    np.testing.assert_allclose(block_eigenvalues(spec, method="dense"), [0.5, 0.5], atol=1e-14)
