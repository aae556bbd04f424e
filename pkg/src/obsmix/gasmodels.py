"""Second-order work-gap brackets for textbook heat-capacity laws.

Each model gives ``DeltaW / (kT DeltaS)`` to second order in ``DeltaS``.
:func:`gas_model_terms` writes out the closed form for each model by hand,
while :func:`gas_model_heat_capacity` supplies ``C/k`` and ``T dlnC/dT`` so
the same bracket can be rebuilt from the general heat-capacity series in
:mod:`obsmix.thermo`. The tests compare the two routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .thermo import work_difference_heat_capacity

MODELS = (
    "ideal",
    "debye-low-T",
    "quantum-critical-metal",
    "liquid-helium",
    "s-wave-superconductor",
)

# constants each model reads; everything else is ignored
_REQUIRED = {
    "ideal": (),
    "debye-low-T": ("T_D",),
    "quantum-critical-metal": ("m", "A"),
    "liquid-helium": ("A", "B", "alpha", "T_c"),
    "s-wave-superconductor": ("A", "Delta"),
}

# past this expansion parameter the truncated series is not trustworthy
EXPANSION_WARN = 0.5


@dataclass(frozen=True)
class GasModel:
    """A heat-capacity law evaluated at observational temperature ``T``.

    Parameters
    ----------
    model : str
        One of :data:`MODELS`.
    N : float
        Particle number.
    T : float
        Observational temperature.
    params : dict
        Model constants (``A``, ``B``, ``alpha``, ``T_c``, ``T_D``, ``m``,
        ``Delta``) as required by the model.
    k : float
        Boltzmann constant.
    """

    model: str
    N: float
    T: float
    params: dict = field(default_factory=dict)
    k: float = 1.0

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"unknown gas model {self.model!r}; choose from {MODELS}")
        if self.N <= 0 or self.T <= 0 or self.k <= 0:
            raise DomainError("N, T and k must be positive")
        missing = [p for p in _REQUIRED[self.model] if p not in self.params]
        if missing:
            raise DomainError(f"{self.model} needs constants {missing}")
        for p in _REQUIRED[self.model]:
            if p != "alpha" and self.params[p] <= 0:
                raise DomainError(f"constant {p} must be positive")
        if self.model == "liquid-helium" and self.T <= self.params["T_c"]:
            raise DomainError("liquid-helium law needs T > T_c")

    def __getattr__(self, name):
        try:
            return self.__dict__["params"][name]
        except KeyError:
            raise AttributeError(name) from None

    @property
    def t(self):
        return self.T / self.params["T_c"] - 1.0


def gas_model_heat_capacity(g):
    """Return ``(C/k, T dlnC/dT)`` for the model at its temperature."""
    N, T, k = g.N, g.T, g.k
    if g.model == "ideal":
        return 1.5 * N, 0.0
    if g.model == "debye-low-T":
        return 324.0 * N * (T / g.T_D) ** 3, 3.0
    if g.model == "quantum-critical-metal":
        c = g.A / (N * T ** (1.0 / 3.0))
        return math.pi / 6.0 * g.m * N * T * (1.0 + c) / k, 1.0 - (c / 3.0) / (1.0 + c)
    if g.model == "liquid-helium":
        t = g.t
        tail = g.B * t ** (-g.alpha)
        slope = -g.alpha * tail * (1.0 + t) / t / (g.A + tail)
        return N * (g.A + tail), slope
    if g.model == "s-wave-superconductor":
        return g.A * N * math.sqrt(T) * math.exp(-g.Delta / (k * T)), 0.5 + g.Delta / (k * T)
    raise DomainError(g.model)


def gas_model_terms(g, dS):
    """The three bracket terms ``(1, first, second)`` written per model."""
    N, T, k = g.N, g.T, g.k
    if g.model == "ideal":
        s = dS / N
        return 1.0, -s / 3.0, 2.0 / 27.0 * s * s
    if g.model == "debye-low-T":
        z = dS / (324.0 * N) * (g.T_D / T) ** 3
        return 1.0, -z / 2.0, -z * z / 3.0
    if g.model == "quantum-critical-metal":
        u = dS / (N * T * (1.0 + g.A / (N * T ** (1.0 / 3.0))))
        first = -3.0 * k / (math.pi * g.m) * u
        second = 2.0 * k * k / (math.pi**2 * g.m**2 * (1.0 + N * T ** (1.0 / 3.0) / g.A)) * u * u
        return 1.0, first, second
    if g.model == "liquid-helium":
        t = g.t
        u = dS / (N * (g.A + g.B * t ** (-g.alpha)))
        coef = 1.0 + (1.0 + t) * g.alpha / ((1.0 + g.A / g.B * t**g.alpha) * t)
        return 1.0, -u / 2.0, coef * u * u / 6.0
    if g.model == "s-wave-superconductor":
        u = dS * math.exp(g.Delta / (k * T)) / (g.A * N * math.sqrt(T))
        return 1.0, -u / 2.0, (1.0 - 2.0 * g.Delta / (k * T)) * u * u / 12.0
    raise DomainError(g.model)


def gas_model_bracket(g, dS):
    """``DeltaW / (kT DeltaS)`` to second order for model ``g``."""
    return math.fsum(gas_model_terms(g, dS))


def gas_model_bracket_general(g, dS):
    """The same bracket through the generic heat-capacity series."""
    if dS == 0:
        return 1.0
    C, slope = gas_model_heat_capacity(g)
    return work_difference_heat_capacity(1.0, dS, C, slope, order=2) / dS


def gas_model_warnings(g, dS):
    """Human-readable reasons the truncated series may be unreliable."""
    out = []
    C, _ = gas_model_heat_capacity(g)
    ratio = dS / C
    if abs(ratio) > EXPANSION_WARN:
        out.append(f"expansion parameter dS/C = {ratio:.3g} is not small")
    _, first, second = gas_model_terms(g, dS)
    if abs(second) > abs(first) > 0:
        out.append("second-order term exceeds first-order term")
    if g.model == "liquid-helium" and g.t < 0.1:
        out.append(f"close to the lambda point (t = {g.t:.3g}); slope term diverges")
    if g.model in ("debye-low-T", "s-wave-superconductor", "quantum-critical-metal") and C < 1.0:
        out.append("heat capacity below k: low-temperature regime, expansion fragile")
    return out
