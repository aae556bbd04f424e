"""Macrostate volumes of a two-colour lattice gas split into two boxes.

Four observers coarse-grain the same Hilbert space at different
resolutions:

* ``rick``   sees ``(i, N_plus, N_A, N)``: blue count on the left, total blue,
  total on the left, total particles;
* ``morty1`` sees ``(N_plus, N_A, N)``;
* ``morty2`` sees ``(N_A, N)`` and knows two colours exist;
* ``morty3`` sees ``(N_A, N)`` and believes all particles are alike, so the
  volumes it assigns are the *perceived* single-species ones.

Exact volumes are Python integers. Each colour is counted independently on
each side (a site may hold one particle of each colour), so the accessible
space of a fixed ``(N_plus, N)`` block has dimension
``C(L, N_plus) * C(L, N - N_plus)``.

The ``stirling_*`` functions give the dilute-limit asymptotics (Stirling for
single binomials, Laplace's method for the sums), including the logarithmic
corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._info import binary_entropy, plogp_sum
from .errors import DomainError, InvalidLabel

__all__ = [
    "BoxGeometry",
    "RickLabel",
    "Morty1Label",
    "Morty2Label",
    "Fractions",
    "binomial_exact",
    "log_binomial",
    "log_binomial_sum",
    "volume_rick",
    "volume_morty1",
    "volume_morty2",
    "volume_morty2_symmetric",
    "volume_morty3_perceived",
    "volume_accessible",
    "volume_reduced",
    "log_volume",
    "stirling_log_volume",
    "OBSERVERS",
]

OBSERVERS = ("rick", "morty1", "morty2", "morty3", "accessible")

_LN_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class BoxGeometry:
    """Two boxes of ``L_A`` (left) and ``L_B`` (right) sites."""

    L_A: int
    L_B: int

    def __post_init__(self):
        if self.L_A < 1 or self.L_B < 1:
            raise DomainError(f"box sizes must be >= 1, got {self.L_A}, {self.L_B}")

    @classmethod
    def symmetric(cls, w):
        return cls(w, w)

    @property
    def L(self):
        return self.L_A + self.L_B

    @property
    def is_symmetric(self):
        return self.L_A == self.L_B

    @property
    def w(self):
        if not self.is_symmetric:
            raise DomainError("w is only defined for equal box sizes")
        return self.L_A

    def swapped(self):
        return BoxGeometry(self.L_B, self.L_A)

    def ln_w_eff(self, a):
        """``a ln L_A + (1 - a) ln L_B``; equals ``ln w`` for equal boxes."""
        return a * math.log(self.L_A) + (1.0 - a) * math.log(self.L_B)


@dataclass(frozen=True)
class RickLabel:
    i: int
    N_plus: int
    N_A: int
    N: int

    def __post_init__(self):
        i, Np, NA, N = self.i, self.N_plus, self.N_A, self.N
        if min(i, Np, NA, N) < 0 or Np > N or NA > N:
            raise InvalidLabel(f"malformed Rick label {self}")
        if i > min(Np, NA) or N - Np - (NA - i) < 0:
            raise InvalidLabel(f"malformed Rick label {self}")

    def placements(self):
        """Counts (blue-left, red-left, blue-right, red-right)."""
        return (
            self.i,
            self.N_A - self.i,
            self.N_plus - self.i,
            self.N - self.N_plus - (self.N_A - self.i),
        )

    def fits(self, geom):
        bl, rl, br, rr = self.placements()
        return bl <= geom.L_A and rl <= geom.L_A and br <= geom.L_B and rr <= geom.L_B

    def color_swapped(self):
        return RickLabel(self.N_A - self.i, self.N - self.N_plus, self.N_A, self.N)

    def fractions(self):
        return Fractions.from_counts(self.i, self.N_plus, self.N_A, self.N)


@dataclass(frozen=True)
class Morty1Label:
    N_plus: int
    N_A: int
    N: int

    def __post_init__(self):
        if min(self.N_plus, self.N_A, self.N) < 0 or self.N_plus > self.N or self.N_A > self.N:
            raise InvalidLabel(f"malformed Morty-1 label {self}")

    @property
    def is_canonical(self):
        return 2 * self.N_A <= self.N and 2 * self.N_plus <= self.N

    def canonical(self, geom):
        """Return ``(geom', label')`` with ``N_A <= N_B`` and ``N_plus <= N_minus``.

        Swapping colours is a symmetry of every geometry; swapping sides also
        swaps ``L_A`` and ``L_B``. Volumes are unchanged.
        """
        Np, NA, N = self.N_plus, self.N_A, self.N
        if 2 * Np > N:
            Np = N - Np
        if 2 * NA > N:
            NA = N - NA
            geom = geom.swapped()
        return geom, Morty1Label(Np, NA, N)


@dataclass(frozen=True)
class Morty2Label:
    N_A: int
    N: int

    def __post_init__(self):
        if min(self.N_A, self.N) < 0 or self.N_A > self.N:
            raise InvalidLabel(f"malformed Morty label {self}")


@dataclass(frozen=True)
class Fractions:
    """Intensive label coordinates.

    ``p_i = i/N``, ``a = N_A/N``, ``r = N_plus/N`` and the four occupation
    fractions ``q = (p_i, a - p_i, r - p_i, 1 - r - a + p_i)``.
    """

    p_i: float
    a: float
    r: float

    def __post_init__(self):
        if min(self.q) < -1e-12:
            raise DomainError(f"inconsistent fractions {self}: q = {self.q}")

    @classmethod
    def from_counts(cls, i, N_plus, N_A, N):
        if N <= 0:
            raise DomainError("fractions need N > 0")
        return cls(i / N, N_A / N, N_plus / N)

    @property
    def q(self):
        p, a, r = self.p_i, self.a, self.r
        return (p, a - p, r - p, 1.0 - r - a + p)

    @property
    def S_q(self):
        return plogp_sum([max(x, 0.0) for x in self.q])

    @property
    def S_a(self):
        return binary_entropy(self.a)

    @property
    def S_r(self):
        return binary_entropy(self.r)


# ---------------------------------------------------------------------------
# binomials


def binomial_exact(n, k):
    """``C(n, k)`` as an exact integer; zero when ``k > n`` or ``k < 0``."""
    if n < 0:
        raise DomainError(f"binomial_exact needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def log_binomial(n, k):
    """Natural log of ``C(n, k)`` through log-gamma.

    Accurate to ~1e-13 relative; works for ``n`` far beyond what exact
    integers would allow.
    """
    if k < 0 or n < 0 or k > n:
        raise DomainError(f"log_binomial needs 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return 0.0
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_binomial_sum(n, k):
    """Reference ``ln C(n, k)`` as ``sum_j ln((n - k + j) / j)``.

    Slow (O(min(k, n-k)) terms) and independent of log-gamma; used to
    cross-check :func:`log_binomial`.
    """
    if k < 0 or n < 0 or k > n:
        raise DomainError(f"log_binomial_sum needs 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    return math.fsum(math.log(n - k + j) - math.log(j) for j in range(1, k + 1))


# ---------------------------------------------------------------------------
# exact volumes


def _rick_term(geom, i, N_plus, N_A, N):
    # zero for any placement that is negative or overflows its side
    bl, rl, br, rr = i, N_A - i, N_plus - i, N - N_plus - (N_A - i)
    if min(bl, rl, br, rr) < 0:
        return 0
    return (
        binomial_exact(geom.L_A, bl)
        * binomial_exact(geom.L_A, rl)
        * binomial_exact(geom.L_B, br)
        * binomial_exact(geom.L_B, rr)
    )


def volume_rick(geom, label):
    """Dimension of Rick's macrostate ``(i, N_plus, N_A, N)``."""
    if not label.fits(geom):
        raise InvalidLabel(f"{label} does not fit {geom}")
    return _rick_term(geom, label.i, label.N_plus, label.N_A, label.N)


def volume_morty1(geom, label):
    """Sum of Rick volumes over ``i = 0 .. min(N_plus, N_A)``.

    Terms whose placements overflow a side contribute zero. The result does
    not depend on whether ``label`` is in canonical order.
    """
    Np, NA, N = label.N_plus, label.N_A, label.N
    return sum(_rick_term(geom, i, Np, NA, N) for i in range(min(Np, NA) + 1))


def volume_morty2(geom, N_A, N):
    """Plain double sum over ``N_plus = 0..N`` and ``i``."""
    Morty2Label(N_A, N)
    return sum(volume_morty1(geom, Morty1Label(Np, N_A, N)) for Np in range(N + 1))


def volume_morty2_symmetric(geom, N_A, N):
    """Colour-symmetric rewrite ``2 * sum_{N_plus <= N/2} V^M1`` (even ``N``).

    For even ``N`` the middle term ``N_plus = N/2`` appears once, not twice;
    it is counted once here so the rewrite is an identity. Cross-check only.
    """
    Morty2Label(N_A, N)
    half = N // 2
    total = 2 * sum(volume_morty1(geom, Morty1Label(Np, N_A, N)) for Np in range((N + 1) // 2))
    if N % 2 == 0:
        total += volume_morty1(geom, Morty1Label(half, N_A, N))
    return total


def volume_morty3_perceived(geom, N_A, N):
    """Single-species volume ``C(L_A, N_A) C(L_B, N - N_A)``."""
    Morty2Label(N_A, N)
    if N_A > geom.L_A or N - N_A > geom.L_B:
        raise InvalidLabel(f"N_A={N_A}, N={N} exceeds box capacity of {geom}")
    return binomial_exact(geom.L_A, N_A) * binomial_exact(geom.L_B, N - N_A)


def volume_accessible(geom, N_plus, N):
    """``C(L, N_plus) C(L, N - N_plus)``: the whole fixed-colour block."""
    if N_plus < 0 or N_plus > N:
        raise InvalidLabel(f"N_plus={N_plus} not in [0, {N}]")
    return binomial_exact(geom.L, N_plus) * binomial_exact(geom.L, N - N_plus)


def volume_reduced(geom, N):
    """``C(L, N)``: the accessible space as seen by a colour-blind observer."""
    return binomial_exact(geom.L, N)


def _as_label(observer, label):
    if isinstance(label, (RickLabel, Morty1Label, Morty2Label)):
        return label
    label = tuple(label)
    if observer == "rick":
        return RickLabel(*label)
    if observer in ("morty1", "accessible") and len(label) == 3:
        return Morty1Label(*label)
    if observer == "accessible" and len(label) == 2:
        return Morty1Label(label[0], 0, label[1])
    return Morty2Label(*label)


def log_volume(observer, geom, label):
    """``ln`` of the exact volume for any observer.

    ``label`` is a label object or a plain tuple: ``(i, N_plus, N_A, N)`` for
    Rick, ``(N_plus, N_A, N)`` for Morty 1, ``(N_A, N)`` for Morty 2/3 and
    ``(N_plus, N)`` for the accessible block.
    """
    label = _as_label(observer, label)
    if observer == "rick":
        v = volume_rick(geom, label)
    elif observer == "morty1":
        v = volume_morty1(geom, label)
    elif observer == "morty2":
        v = volume_morty2(geom, label.N_A, label.N)
    elif observer == "morty3":
        v = volume_morty3_perceived(geom, label.N_A, label.N)
    elif observer == "accessible":
        v = volume_accessible(geom, label.N_plus, label.N)
    else:
        raise DomainError(f"unknown observer {observer!r}")
    if v == 0:
        raise InvalidLabel(f"{observer} label {label} has zero volume in {geom}")
    return math.log(v)


# ---------------------------------------------------------------------------
# asymptotics


def _log_corr(N, parts):
    # -1/2 sum ln(2 pi N q) over the non-zero parts only
    return -0.5 * sum(_LN_2PI + math.log(N * q) for q in parts if q > 0)


def _stirling_rick(geom, N, q):
    a = q[0] + q[1]
    S_q = plogp_sum([max(x, 0.0) for x in q])
    lead = N * (geom.ln_w_eff(a) - math.log(N) + S_q + 1.0)
    return lead + _log_corr(N, q)


def stirling_log_volume(observer, geom, label, form="printed"):
    """Dilute-limit ``ln V`` with logarithmic corrections.

    Unequal boxes use ``a ln L_A + (1 - a) ln L_B`` in place of ``ln w``. A
    zero occupation fraction drops its ``-1/2 ln(2 pi N q_j)`` term; when a
    Laplace width vanishes (``a`` or ``r`` at 0 or 1) the sum collapses to
    its single surviving term.

    Parameters
    ----------
    form : {"printed", "corrected"}
        Only affects the Laplace sums (``morty1``, ``morty2``). ``printed``
        uses the constants ``-3/2 ln(2 pi N)`` and ``-ln(4 pi N)``.
        ``corrected`` keeps the peak term's ``prod_j q_j`` in full, which adds
        ``-1/2 ln(a(1-a) r(1-r))`` for Morty 1 and replaces Morty 2's
        constant by ``-ln(2 pi N) - 1/2 ln(a(1-a))``. Only the corrected form
        converges to the exact value at fixed ``N`` as the boxes grow.
    """
    if form not in ("printed", "corrected"):
        raise DomainError(f"unknown form {form!r}")
    label = _as_label(observer, label)
    N = label.N
    if N == 0:
        return 0.0
    ln_N = math.log(N)

    if observer == "rick":
        if not label.fits(geom):
            raise InvalidLabel(f"{label} does not fit {geom}")
        return _stirling_rick(geom, N, label.fractions().q)

    if observer == "morty1":
        a, r = label.N_A / N, label.N_plus / N
        if a * (1 - a) * r * (1 - r) == 0.0:
            p = a * r
            return _stirling_rick(geom, N, (p, a - p, r - p, 1 - r - a + p))
        lead = N * (geom.ln_w_eff(a) - ln_N + binary_entropy(a) + binary_entropy(r) + 1.0)
        corr = -1.5 * (_LN_2PI + ln_N)
        if form == "corrected":
            corr -= 0.5 * math.log(a * (1 - a) * r * (1 - r))
        return lead + corr

    if observer == "morty2":
        a = label.N_A / N
        if a * (1 - a) == 0.0:
            # everything on one side: Vandermonde collapses to C(2 L_side, N)
            lead = N * (geom.ln_w_eff(a) + math.log(2.0) - ln_N + 1.0)
            return lead - 0.5 * (_LN_2PI + ln_N)
        lead = N * (geom.ln_w_eff(a) - ln_N + binary_entropy(a) + math.log(2.0) + 1.0)
        if form == "corrected":
            return lead - (_LN_2PI + ln_N) - 0.5 * math.log(a * (1 - a))
        return lead - math.log(4.0 * math.pi * N)

    if observer == "morty3":
        a = label.N_A / N
        lead = N * (geom.ln_w_eff(a) - ln_N + binary_entropy(a) + 1.0)
        return lead + _log_corr(N, (a, 1.0 - a))

    if observer == "accessible":
        r = label.N_plus / N
        lead = N * (math.log(geom.L) - ln_N + binary_entropy(r) + 1.0)
        return lead + _log_corr(N, (r, 1.0 - r))

    raise DomainError(f"unknown observer {observer!r}")
