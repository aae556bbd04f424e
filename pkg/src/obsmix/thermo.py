"""Canonical statistics on discrete spectra and observational work.

Everything here works in units where energies are whatever the Hamiltonian
uses and ``beta`` is an inverse energy; the Boltzmann constant ``k`` only
converts ``beta`` into a temperature ``T = 1/(k beta)`` and nats into
reported entropy units.

Cumulant bookkeeping follows ``d kappa_n / d beta = -kappa_{n+1}``:

* ``v = kappa_2`` (energy variance),
* ``x = dv/dbeta = -kappa_3``,
* ``y = dx/dbeta = kappa_4``,

so that ``S' = -beta v``, ``S'' = -v - beta x`` and ``S''' = -2x - beta y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import Degenerate, DomainError, OutOfRange

__all__ = [
    "Spectrum",
    "ThermalPoint",
    "thermal_stats",
    "entropy_vn",
    "mean_energy",
    "solve_beta_for_entropy",
    "observational_ergotropy",
    "work_difference_exact",
    "delta_beta_expansion",
    "work_difference_expansion",
    "work_difference_heat_capacity",
    "log_heat_capacity_slope",
    "WorkAverages",
    "work_difference_averages",
]

SOLVER_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Distinct energy levels with integer degeneracies.

    Parameters
    ----------
    levels : array_like
        Strictly increasing energies.
    degeneracies : array_like of int
        Multiplicities, all at least one.
    """

    levels: np.ndarray
    degeneracies: np.ndarray

    def __post_init__(self):
        lv = np.asarray(self.levels, dtype=float).ravel()
        dg = np.asarray(self.degeneracies, dtype=np.int64).ravel()
        if lv.size == 0 or lv.size != dg.size:
            raise DomainError("levels and degeneracies must be non-empty and aligned")
        if np.any(dg < 1):
            raise DomainError("degeneracies must be >= 1")
        if np.any(np.diff(lv) <= 0):
            raise DomainError("levels must be strictly increasing")
        if not np.all(np.isfinite(lv)):
            raise DomainError("levels must be finite")
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "degeneracies", dg)

    @classmethod
    def from_eigenvalues(cls, eigenvalues, atol=1e-9):
        """Group sorted eigenvalues closer than ``atol`` (relative to scale) into levels."""
        e = np.sort(np.asarray(eigenvalues, dtype=float).ravel())
        if e.size == 0:
            raise DomainError("empty eigenvalue list")
        tol = atol * max(1.0, float(np.max(np.abs(e))))
        breaks = np.flatnonzero(np.diff(e) > tol) + 1
        groups = np.split(e, breaks)
        return cls(np.array([g.mean() for g in groups]), np.array([g.size for g in groups]))

    @classmethod
    def from_dict(cls, d):
        items = sorted(d.items())
        return cls([k for k, _ in items], [g for _, g in items])

    @property
    def dim(self):
        return int(self.degeneracies.sum())

    @property
    def g0(self):
        return int(self.degeneracies[0])

    @property
    def E_min(self):
        return float(self.levels[0])

    @property
    def E_max(self):
        return float(self.levels[-1])

    @property
    def is_degenerate(self):
        return self.levels.size == 1

    def eigenvalues(self):
        return np.repeat(self.levels, self.degeneracies)


@dataclass(frozen=True)
class ThermalPoint:
    """Canonical-state summary at inverse temperature ``beta``."""

    beta: float
    lnZ: float
    E_mean: float
    v: float
    x: float
    y: float
    S_vN: float
    k: float = 1.0

    @property
    def Z(self):
        return math.exp(self.lnZ)

    @property
    def X(self):
        return self.x / self.v

    @property
    def Y(self):
        return self.y / self.v

    @property
    def T(self):
        return math.inf if self.beta == 0 else 1.0 / (self.k * self.beta)

    @property
    def C_tilde(self):
        """Dimensionless heat capacity ``C_E / k = v beta^2``."""
        return self.v * self.beta**2

    @property
    def C_E(self):
        return self.k * self.C_tilde


def _weights(spectrum, beta):
    # shifted by E_min: the ground weight is exp(0) and nothing can overflow for beta >= 0
    e = spectrum.levels - spectrum.E_min
    w = spectrum.degeneracies * np.exp(-beta * e)
    return e, w


def thermal_stats(spectrum, beta, k=1.0):
    """Moments of ``exp(-beta H)/Z`` on ``spectrum``.

    Parameters
    ----------
    spectrum : Spectrum
    beta : float
        Non-negative, finite inverse temperature.
    k : float
        Boltzmann constant stored on the result (affects ``T`` only).

    Returns
    -------
    ThermalPoint
    """
    beta = float(beta)
    if not math.isfinite(beta) or beta < 0:
        raise DomainError(f"beta must be finite and >= 0, got {beta!r}")
    e, w = _weights(spectrum, beta)
    Zs = w.sum()
    if not (math.isfinite(Zs) and Zs >= 1.0):
        raise DomainError(f"Boltzmann sum {Zs!r} failed the overflow guard")
    p = w / Zs
    em = float(p @ e)
    d = e - em
    d2 = d * d
    v = float(p @ d2)
    mu3 = float(p @ (d2 * d))
    mu4 = float(p @ (d2 * d2))
    lnZs = math.log(Zs)
    return ThermalPoint(
        beta=beta,
        lnZ=lnZs - beta * spectrum.E_min,
        E_mean=spectrum.E_min + em,
        v=v,
        x=-mu3,
        y=mu4 - 3.0 * v * v,
        S_vN=lnZs + beta * em,
        k=k,
    )


def entropy_vn(spectrum, beta):
    e, w = _weights(spectrum, beta)
    Zs = w.sum()
    return math.log(Zs) + beta * float(w @ e) / Zs


def mean_energy(spectrum, beta):
    e, w = _weights(spectrum, beta)
    return spectrum.E_min + float(w @ e) / w.sum()


def solve_beta_for_entropy(spectrum, S_target, tol=SOLVER_TOL):
    """Non-negative ``beta`` whose canonical state has entropy ``S_target``.

    ``S_vN(beta)`` falls monotonically from ``ln d`` at ``beta = 0`` to
    ``ln g0`` as ``beta -> inf``. Targets within ``tol`` of ``ln d`` return
    exactly ``0.0``. Otherwise the root is bracketed by doubling an upper
    bound and refined with Brent's bracketing method.

    Raises
    ------
    Degenerate
        The spectrum has a single level.
    OutOfRange
        ``S_target`` is below ``ln g0 + tol`` or above ``ln d + tol``.
    """
    if spectrum.is_degenerate:
        raise Degenerate("single-level spectrum: temperature is undefined")
    S_target = float(S_target)
    lo_S = math.log(spectrum.g0)
    hi_S = math.log(spectrum.dim)
    if not math.isfinite(S_target) or S_target > hi_S + tol or S_target < lo_S + tol:
        raise OutOfRange(S_target, lo_S + tol, hi_S)
    if abs(S_target - hi_S) <= tol:
        return 0.0

    def f(b):
        return entropy_vn(spectrum, b) - S_target

    b_hi = 1.0 / (spectrum.E_max - spectrum.E_min)
    while f(b_hi) > 0:
        b_hi *= 2.0
        if b_hi > 1e300:
            raise OutOfRange(S_target, lo_S + tol, hi_S)
    beta = brentq(f, 0.0, b_hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    if abs(f(beta)) > tol:
        # brent stops on the beta tolerance; finish with plain bisection on |S - S*|
        lo, hi = 0.0, b_hi
        for _ in range(2000):
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if abs(fm) <= tol or mid in (lo, hi):
                beta = mid
                break
            if fm > 0:
                lo = mid
            else:
                hi = mid
    return float(beta)


def observational_ergotropy(spectrum, E_init, S_C, tol=SOLVER_TOL):
    """``E_init - <E>(beta*)`` with ``S_vN(beta*) = S_C``. May be negative."""
    if not spectrum.E_min - 1e-9 <= E_init <= spectrum.E_max + 1e-9:
        raise DomainError(f"E_init={E_init!r} outside the spectrum")
    beta = solve_beta_for_entropy(spectrum, S_C, tol)
    return E_init - mean_energy(spectrum, beta)


def work_difference_exact(spectrum, S_M, S_R, tol=SOLVER_TOL):
    """``<E>(beta_M) - <E>(beta_R)``, the ergotropy gap between two observers."""
    if S_M == S_R:
        return 0.0
    b_M = solve_beta_for_entropy(spectrum, S_M, tol)
    b_R = solve_beta_for_entropy(spectrum, S_R, tol)
    return mean_energy(spectrum, b_M) - mean_energy(spectrum, b_R)


def _delta(point, dS):
    if point.beta == 0:
        raise Degenerate("expansion parameter undefined at beta = 0")
    if point.v <= 0:
        raise Degenerate("expansion parameter undefined for zero variance")
    return dS / (point.v * point.beta**2)


def delta_beta_expansion(point, dS, order=3):
    """Series for the inverse-temperature gap ``beta_R - beta_M``.

    Solves ``S(beta + db) = S(beta) - dS`` perturbatively in
    ``delta = dS / (v beta^2)``::

        db = beta delta [1 - (1 + beta X)/2 delta
                         + (3 + 4 beta X + 3 beta^2 X^2 - beta^2 Y)/6 delta^2]

    ``order`` is the number of series terms kept (1 to 3).
    """
    if order not in (1, 2, 3):
        raise DomainError("order must be 1, 2 or 3")
    if dS == 0:
        return 0.0
    d = _delta(point, dS)
    b, X, Y = point.beta, point.X, point.Y
    coeffs = [1.0, -(1.0 + b * X) / 2.0, (3.0 + 4 * b * X + 3 * (b * X) ** 2 - b * b * Y) / 6.0]
    return b * d * sum(c * d**j for j, c in enumerate(coeffs[:order]))


def log_heat_capacity_slope(point):
    """``T d ln C / dT = -beta X - 2`` for the canonical heat capacity."""
    return -point.beta * point.X - 2.0


def work_difference_heat_capacity(kT, dS, C_tilde, dlnC_dlnT, order=2):
    """``kT dS [1 - dS/(2C) + (1 - T dlnC/dT) dS^2/(6 C^2)]`` truncated at ``order``.

    ``dS`` is in nats and ``C_tilde`` is the heat capacity in units of ``k``.
    """
    if order not in (0, 1, 2):
        raise DomainError("order must be 0, 1 or 2")
    s = dS / C_tilde
    terms = [1.0, -s / 2.0, (1.0 - dlnC_dlnT) * s * s / 6.0]
    return kT * dS * sum(terms[: order + 1])


def work_difference_expansion(point, dS, order=2, form="moment"):
    """Perturbative ergotropy gap ``DeltaW_order`` around ``point``.

    ``point`` is the canonical state at the higher-entropy observer's
    temperature and ``dS >= 0`` the entropy gap in nats.

    form="moment"
        ``(dS/beta) [1 - delta/2 + (3 + beta X)/6 delta^2]``.
    form="heat-capacity"
        The same series written with ``C_tilde = v beta^2`` and
        ``T dlnC/dT = -beta X - 2``.
    """
    if order not in (0, 1, 2):
        raise DomainError("order must be 0, 1 or 2")
    if dS == 0:
        return 0.0
    if form == "moment":
        d = _delta(point, dS)
        terms = [1.0, -d / 2.0, (3.0 + point.beta * point.X) * d * d / 6.0]
        return dS / point.beta * sum(terms[: order + 1])
    if form == "heat-capacity":
        _delta(point, dS)
        return work_difference_heat_capacity(
            1.0 / point.beta, dS, point.C_tilde, log_heat_capacity_slope(point), order
        )
    raise DomainError(f"unknown form {form!r}")


class WorkAverages(NamedTuple):
    av: float
    av2: float
    degenerate: bool


def work_difference_averages(dW0, dW1, dW2):
    """Two heuristics for summing the alternating series.

    ``av`` is the midpoint of the first- and second-order values. ``av2``
    treats the higher orders as a geometric series with ratio
    ``q = w2/w1`` (``w1 = dW1 - dW0``, ``w2 = dW2 - dW1``), giving
    ``dW2 - w2 q / (1 + q)``. When ``w1 = 0`` or ``q = -1`` the ratio is
    undefined; ``av2`` then falls back to ``dW2`` and ``degenerate`` is set.
    """
    av = 0.5 * (dW1 + dW2)
    w1 = dW1 - dW0
    w2 = dW2 - dW1
    if w1 == 0 or w1 + w2 == 0:
        return WorkAverages(av, dW2, True)
    q = w2 / w1
    return WorkAverages(av, dW2 - w2 * q / (1.0 + q), False)
