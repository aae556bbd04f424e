"""Unitary time evolution ``psi(t) = exp(-iHt) psi0`` on a time grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from ..errors import ConfigError, ConvergenceError, DomainError
from .basis import default_rick_key, rick_partition

DENSE_THRESHOLD = 4096
KRYLOV_TOL = 1e-10


def time_grid(n_points=60, t_max=20.0):
    return np.linspace(0.0, t_max, n_points)


@dataclass(frozen=True)
class EvolutionPlan:
    """How to evolve: grid, propagator and initial-state recipe."""

    times: tuple = tuple(time_grid())
    method: str = "auto"
    init_mode: str = "basis"
    seed: int = 0
    krylov_tol: float = KRYLOV_TOL
    krylov_dim: int = 40
    dense_threshold: int = DENSE_THRESHOLD

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size == 0 or t[0] < 0 or np.any(np.diff(t) <= 0):
            raise ConfigError("times must be non-negative and strictly increasing")
        if self.method not in ("auto", "dense", "krylov"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.init_mode not in ("basis", "haar"):
            raise ConfigError(f"unknown init_mode {self.init_mode!r}")
        object.__setattr__(self, "times", tuple(float(x) for x in t))

    def resolve_method(self, dim):
        if self.method == "auto":
            return "dense" if dim <= self.dense_threshold else "krylov"
        return self.method


def initial_state(spec, basis, mode="basis", seed=0, key=None):
    """Unit vector confined to one Rick sector.

    Parameters
    ----------
    key : tuple, optional
        Rick sector ``(blue on left, red on left)``; default all blue left and
        all red right.
    mode : {"basis", "haar"}
        ``basis`` puts all weight on the first basis state of the sector;
        ``haar`` draws an isotropic random vector on the sector from ``seed``.
    """
    part = rick_partition(basis)
    key = default_rick_key(spec) if key is None else tuple(key)
    if key not in part.labels:
        raise DomainError(f"Rick sector {key} is empty for this block")
    members = part.members(part.index(key))
    psi = np.zeros(basis.dim, dtype=complex)
    if mode == "basis":
        psi[members[0]] = 1.0
    elif mode == "haar":
        rng = np.random.default_rng(seed)
        z = rng.standard_normal(members.size) + 1j * rng.standard_normal(members.size)
        psi[members] = z / np.linalg.norm(z)
    else:
        raise ConfigError(f"unknown initial-state mode {mode!r}")
    return psi


class DenseEvolver:
    def __init__(self, H, evals=None, evecs=None):
        if evecs is None:
            Hd = H.toarray() if hasattr(H, "toarray") else np.asarray(H)
            evals, evecs = np.linalg.eigh(Hd)
        self.evals = evals
        self.evecs = evecs

    def run(self, psi0, times):
        c0 = self.evecs.conj().T @ psi0
        phases = np.exp(-1j * np.outer(times, self.evals))
        return (phases * c0) @ self.evecs.T


def lanczos_step(H, psi, dt, m_max, tol):
    """Propagate ``psi`` by at most ``dt`` with one Lanczos basis.

    Returns ``(psi_new, tau, err)`` where ``tau <= dt`` is the step actually
    taken and ``err`` the a-posteriori estimate
    ``beta_m |<e_m| exp(-i T_m tau) |e_1>|``.
    """
    nrm = np.linalg.norm(psi)
    n = psi.size
    m_max = min(m_max, n)
    V = np.zeros((m_max, n), dtype=complex)
    alpha = np.zeros(m_max)
    beta = np.zeros(m_max)
    V[0] = psi / nrm
    m = m_max
    for j in range(m_max):
        w = H @ V[j]
        alpha[j] = np.vdot(V[j], w).real
        w = w - alpha[j] * V[j]
        if j:
            w = w - beta[j - 1] * V[j - 1]
        # full reorthogonalisation keeps the small basis orthonormal
        w = w - V[: j + 1].T @ (V[: j + 1].conj() @ w)
        beta[j] = np.linalg.norm(w)
        if beta[j] < 1e-13 * max(1.0, abs(alpha[j])):
            m = j + 1
            beta[j] = 0.0
            break
        if j + 1 < m_max:
            V[j + 1] = w / beta[j]
    theta, S = eigh_tridiagonal(alpha[:m], beta[: m - 1])
    s0 = S[0].conj()

    def coeffs(tau):
        return S @ (np.exp(-1j * theta * tau) * s0)

    tau = dt
    while True:
        c = coeffs(tau)
        err = nrm * beta[m - 1] * abs(c[-1])
        if err <= tol:
            break
        tau *= 0.5
        if tau < 1e-12 * max(dt, 1.0):
            raise ConvergenceError(
                f"Krylov step did not reach tolerance {tol:g} (residual {err:.3g})", residual=err
            )
    return nrm * (c @ V[:m]), tau, err


def krylov_evolve(H, psi0, times, tol=KRYLOV_TOL, m_max=40):
    """Lanczos propagation along ``times`` with adaptive sub-stepping.

    Returns the states and the largest per-step error estimate.
    """
    out = np.empty((len(times), psi0.size), dtype=complex)
    psi = psi0.astype(complex)
    t_now = 0.0
    worst = 0.0
    for k, t in enumerate(times):
        while t - t_now > 1e-14 * max(1.0, t):
            try:
                psi, tau, err = lanczos_step(H, psi, t - t_now, m_max, tol)
            except ConvergenceError as exc:
                raise ConvergenceError(f"time index {k} (t = {t:g}): {exc}", residual=exc.residual) from exc
            t_now += tau
            worst = max(worst, err)
        t_now = t
        out[k] = psi
    return out, worst


def evolve(H, psi0, plan, dense=None):
    """States at every grid time, shape ``(len(plan.times), dim)``.

    Parameters
    ----------
    dense : DenseEvolver, optional
        Reuse an existing eigendecomposition.

    Returns
    -------
    states : ndarray
    info : dict
        ``method`` and, for Krylov, the worst per-step ``residual``.
    """
    times = np.asarray(plan.times)
    method = plan.resolve_method(psi0.size)
    if method == "dense":
        ev = dense or DenseEvolver(H)
        return ev.run(psi0, times), {"method": "dense", "residual": 0.0}
    states, worst = krylov_evolve(H, psi0, times, plan.krylov_tol, plan.krylov_dim)
    return states, {"method": "krylov", "residual": worst}
