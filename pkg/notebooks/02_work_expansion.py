# %% [markdown]
# # Work gap between observers and its series
#
# A canonical state at the higher-entropy observer's temperature is compared
# with the one at the lower entropy. The exact energy gap is set against the
# zeroth, first and second order series in the entropy gap.

# %%
from decimal import Decimal, getcontext

import numpy as np

from obsmix.lattice import LatticeSpec, block_eigenvalues
from obsmix.thermo import Spectrum, thermal_stats, work_difference_averages, work_difference_expansion

spec = LatticeSpec(5, 5, 2, 2)
spectrum = Spectrum.from_eigenvalues(block_eigenvalues(spec, method="dense"))
print("block dim", spectrum.dim, "distinct levels", spectrum.levels.size)

# %%
beta = 0.5
point = thermal_stats(spectrum, beta)
print(f"v = {point.v:.4f}  C/k = {point.C_tilde:.4f}  T dlnC/dT = {-beta * point.X - 2:.4f}")

# %% [markdown]
# Exact values in 50-digit decimals, so rounding does not mask the
# high-order residuals.

# %%
getcontext().prec = 50
lv = [Decimal(float(x)) - Decimal(float(spectrum.E_min)) for x in spectrum.levels]
dg = [Decimal(int(g)) for g in spectrum.degeneracies]


def S_E(b):
    b = Decimal(b)
    w = [g * (-b * e).exp() for g, e in zip(dg, lv)]
    Z = sum(w)
    E = sum(wi * e for wi, e in zip(w, lv)) / Z
    return Z.ln() + b * E, E


S_M, E_M = S_E(beta)
rows = []
for target in np.logspace(-4, -1, 7):
    S_R, E_R = S_E(beta + target / (point.v * beta))
    dS, dW = float(S_M - S_R), float(E_M - E_R)
    dWk = [work_difference_expansion(point, dS, order=k) for k in range(3)]
    rows.append((dS, dW, *dWk))
    print(f"dS={dS:.2e}  dW={dW:.6e}  " + "  ".join(f"err{k}={abs(dW - x):.1e}" for k, x in enumerate(dWk)))

# %% [markdown]
# Fitted exponents: the absolute error of order `k` falls as `dS^(k+2)`
# because every term carries the prefactor `dS`; the relative error falls as
# `dS^(k+1)`.

# %%
arr = np.array(rows)
for k in range(3):
    err = np.abs(arr[:, 1] - arr[:, 2 + k])
    a = np.polyfit(np.log(arr[:, 0]), np.log(err), 1)[0]
    r = np.polyfit(np.log(arr[:, 0]), np.log(err / arr[:, 1]), 1)[0]
    print(f"order {k}: absolute slope {a:.3f}, relative slope {r:.3f}")

# %%
print(work_difference_averages(1.0, 0.9, 0.93))
