"""Small-instance oracles run by ``obsmix selftest``.

Each check returns ``(name, value, tol, passed, detail)``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter

import numpy as np

from .combinatorics import (
    BoxGeometry,
    Morty1Label,
    RickLabel,
    volume_accessible,
    volume_morty1,
    volume_morty2,
    volume_rick,
)
from .thermo import Spectrum, entropy_vn, solve_beta_for_entropy


def _words(L):
    return [(w, bin(w).count("1")) for w in range(1 << L)]


def brute_force_rick_counts(L_A, L_B):
    """Count independent-species basis states by ``(i, N_plus, N_A, N)``."""
    L = L_A + L_B
    left = (1 << L_A) - 1
    counts = Counter()
    words = _words(L)
    for p, n_p in words:
        i = bin(p & left).count("1")
        for m, n_m in words:
            counts[(i, n_p, i + bin(m & left).count("1"), n_p + n_m)] += 1
    return counts


def check_volume_identities(max_side=4, max_N=4):
    bad = 0
    cases = 0
    for L_A, L_B in itertools.product(range(1, max_side + 1), repeat=2):
        g = BoxGeometry(L_A, L_B)
        for N in range(max_N + 1):
            for N_p in range(N + 1):
                tot = 0
                for N_A in range(N + 1):
                    labels = (RickLabel(i, N_p, N_A, N) for i in range(max(0, N_A - (N - N_p)), min(N_p, N_A) + 1))
                    # labels that overflow a side have no states
                    m1 = sum(volume_rick(g, lab) for lab in labels if lab.fits(g))
                    bad += m1 != volume_morty1(g, Morty1Label(N_p, N_A, N))
                    tot += m1
                    cases += 1
                bad += tot != volume_accessible(g, N_p, N)
            for N_A in range(N + 1):
                s = sum(volume_morty1(g, Morty1Label(N_p, N_A, N)) for N_p in range(N + 1))
                bad += s != volume_morty2(g, N_A, N)
    return ("volume sum identities", float(bad), 0.0, bad == 0, f"{cases} labels")


def check_enumeration(max_side=3):
    bad = 0
    for L_A, L_B in itertools.product(range(1, max_side + 1), repeat=2):
        g = BoxGeometry(L_A, L_B)
        for (i, N_p, N_A, N), c in brute_force_rick_counts(L_A, L_B).items():
            bad += c != volume_rick(g, RickLabel(i, N_p, N_A, N))
    return ("Rick volumes vs basis enumeration", float(bad), 0.0, bad == 0, f"sides up to {max_side}")


def check_solver(seed=0, n=100):
    rng = np.random.default_rng(seed)
    spec = Spectrum.from_eigenvalues(np.sort(rng.normal(size=12)))
    lo, hi = math.log(spec.g0), math.log(spec.dim)
    worst = 0.0
    for S in rng.uniform(lo + 1e-3, hi - 1e-3, n):
        worst = max(worst, abs(entropy_vn(spec, solve_beta_for_entropy(spec, S)) - S))
    zero = solve_beta_for_entropy(spec, hi) == 0.0
    return ("entropy solver roundtrip", worst, 1e-10, worst <= 1e-10 and zero, f"{n} targets, beta(ln d) = 0: {zero}")


def run_selftest(seed=0):
    from .lift import verify_lemma_overlap

    out = [check_volume_identities(), check_enumeration(), check_solver(seed)]
    lemma = verify_lemma_overlap(n_samples=200, seed=seed)
    c = lemma.checks[0]
    out.append((c.name, c.value, c.tol, c.passed, c.detail))
    return out
