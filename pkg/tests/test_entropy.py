import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from obsmix.combinatorics import BoxGeometry, Fractions, log_volume
from obsmix.entropy import (
    SectorPartition,
    entropy_diff_static,
    entropy_growth,
    morty_offsets,
    observational_entropy,
    sector_probabilities,
    shannon,
)
from obsmix.errors import DomainError

LN2 = math.log(2.0)


def S(x):
    return -x * math.log(x) - (1 - x) * math.log(1 - x) if 0 < x < 1 else 0.0


@pytest.mark.parametrize("p,want", [((1, 0), 0.0), ((0.5, 0.5), LN2), ((0.25,) * 4, 2 * LN2)])
def test_shannon_examples(p, want):
    assert shannon(p) == pytest.approx(want, abs=1e-15)


def test_shannon_rejects_bad_input():
    with pytest.raises(DomainError):
        shannon([1.2, -0.2])
    with pytest.raises(DomainError):
        shannon([0.3, 0.3])


def test_observational_entropy_examples():
    assert observational_entropy([0, 1, 0], [3, 17, 5]) == pytest.approx(math.log(17))
    V = np.array([1, 4, 6, 4, 1])
    assert observational_entropy(V / V.sum(), V.tolist()) == pytest.approx(math.log(16))
    want = LN2 + 0.5 * math.log(2) + 0.5 * math.log(8)
    assert observational_entropy([0.5, 0.5], [2, 8]) == pytest.approx(want)
    assert observational_entropy([0.5, 0.5], [2, 8], k=2.0) == pytest.approx(2 * want)
    with pytest.raises(DomainError):
        observational_entropy([0.5, 0.5], [2])


def test_observational_entropy_huge_volumes():
    big = 10**400
    assert observational_entropy([1.0, 0.0], [big, 3]) == pytest.approx(400 * math.log(10))


@given(
    arrays(float, st.integers(1, 8), elements=st.floats(0, 1)).filter(lambda a: a.sum() > 1e-3),
    st.data(),
)
def test_observational_entropy_bounds(w, data):
    p = w / w.sum()
    V = data.draw(st.lists(st.integers(1, 50), min_size=p.size, max_size=p.size))
    s = observational_entropy(p, V)
    assert -1e-12 <= s <= math.log(sum(V)) + 1e-12


@given(st.lists(st.integers(1, 40), min_size=1, max_size=8))
def test_uniform_spreading_saturates(V):
    V = np.array(V)
    assert observational_entropy(V / V.sum(), V.tolist()) == pytest.approx(math.log(V.sum()), abs=1e-12)


def test_saturation_only_when_uniform():
    V = [2, 6]
    assert observational_entropy([0.4, 0.6], V) < math.log(8) - 1e-3


# ---------------------------------------------------------------------------
# partitions


def test_partition_basics():
    part = SectorPartition.from_keys(["b", "a", "b", "c", "a", "b"])
    assert part.labels == ("a", "b", "c")
    assert part.volumes.tolist() == [2, 3, 1]
    assert part.members(1).tolist() == [0, 2, 5]
    coarse = SectorPartition.from_keys([0, 0, 0, 1, 0, 0])
    assert part.is_refinement_of(coarse)
    assert not coarse.is_refinement_of(part)


def test_sector_probabilities_examples():
    part = SectorPartition.from_keys([0, 0, 1, 1])
    e2 = np.zeros(4)
    e2[2] = 1.0
    assert sector_probabilities(e2, part).tolist() == [0.0, 1.0]
    psi = np.array([1, 0, 1, 0]) / math.sqrt(2)
    assert sector_probabilities(psi, part) == pytest.approx([0.5, 0.5])
    batch = np.vstack([e2, psi])
    np.testing.assert_allclose(sector_probabilities(batch, part), [[0, 1], [0.5, 0.5]], atol=1e-15)
    assert sector_probabilities(np.diag([0.1, 0.2, 0.3, 0.4]), part, kind="density") == pytest.approx([0.3, 0.7])
    with pytest.raises(DomainError):
        sector_probabilities(np.ones(3), part)


def test_haar_concentration():
    keys = [0] * 5 + [1] * 20 + [2] * 75
    part = SectorPartition.from_keys(keys)
    d = part.dim
    V = part.volumes
    for seed in range(100):
        r = np.random.default_rng(seed)
        z = r.standard_normal(d) + 1j * r.standard_normal(d)
        p = sector_probabilities(z / np.linalg.norm(z), part)
        assert np.all(np.abs(p - V / d) <= 5 * np.sqrt(V) / d)


def _random_density(n, r):
    G = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


@pytest.mark.parametrize("seed", range(10))
def test_observational_entropy_exceeds_von_neumann(seed):
    r = np.random.default_rng(seed)
    n = 12
    rho = _random_density(n, r)
    lam = np.linalg.eigvalsh(rho)
    s_vn = -sum(x * math.log(x) for x in lam if x > 0)
    for keys in ([0] * 12, list(range(12)), [j % 3 for j in range(12)], r.integers(0, 4, 12).tolist()):
        part = SectorPartition.from_keys(keys)
        assert part.entropy(rho, kind="density") >= s_vn - 1e-10


# ---------------------------------------------------------------------------
# closed forms


def test_entropy_diff_static_examples():
    half = Fractions(0.5, 0.5, 0.5)
    for pair in ("morty1", "morty2"):
        assert entropy_diff_static(pair, half, 10) == pytest.approx(10 * LN2)
    one_species = Fractions(0.0, 0.3, 0.0)
    assert entropy_diff_static("morty1", one_species, 7) == pytest.approx(0.0, abs=1e-15)
    f = Fractions(0.25, 0.5, 0.25)
    assert f.q == pytest.approx((0.25, 0.25, 0.0, 0.5))
    want = 8 * (S(0.5) + S(0.25) - shannon([0.25, 0.25, 0.5]))
    assert entropy_diff_static("morty1", f, 8) == pytest.approx(want)


def test_entropy_growth_examples():
    # all blue left, all red right: p_i = a = r = 1/2
    assert entropy_growth("rick", Fractions(0.5, 0.5, 0.5), 12) == pytest.approx(12 * LN2)
    for clone in ("morty1", "morty2", "morty3"):
        assert entropy_growth(clone, Fractions(0.5, 0.5, 0.5), 12) == pytest.approx(0.0, abs=1e-15)
    assert entropy_growth("morty2", Fractions(0.25, 0.25, 0.5), 1) == pytest.approx(LN2 - S(0.25))
    assert LN2 - S(0.25) == pytest.approx(0.1308, abs=1e-4)


def test_morty_offsets():
    off = morty_offsets(Fractions(0.25, 0.5, 0.25), 8)
    assert off["morty1"] == pytest.approx(8 * S(0.25))
    assert off["morty2"] == pytest.approx(8 * LN2)


def test_morty3_to_morty2_gap_from_volumes():
    # the perceived (single-species) volume misses the colour factor 2^N at r = 1/2
    N, w = 40, 10**6
    g = BoxGeometry.symmetric(w)
    gap = log_volume("morty2", g, (20, N)) - log_volume("morty3", g, (20, N))
    assert gap == pytest.approx(N * LN2, rel=1e-3)


@pytest.mark.parametrize("N", [8, 16, 32, 64])
def test_closed_forms_track_exact_volumes(N):
    w = 100 * N
    g = BoxGeometry.symmetric(w)
    h = N // 2
    ln_r = log_volume("rick", g, (h, h, h, N))
    exact1 = log_volume("morty1", g, (h, h, N)) - ln_r
    exact2 = log_volume("morty2", g, (h, N)) - ln_r
    f = Fractions(0.5, 0.5, 0.5)
    bound = 3 * math.log(N) / N
    assert abs(exact1 - entropy_diff_static("morty1", f, N)) / (N * LN2) < bound
    assert abs(exact2 - entropy_diff_static("morty2", f, N)) / (N * LN2) < bound
    growth = log_volume("accessible", g, (h, N)) - ln_r
    assert abs(growth - entropy_growth("rick", f, N)) / (N * LN2) < bound
