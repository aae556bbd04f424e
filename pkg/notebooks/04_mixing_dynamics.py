# %% [markdown]
# # Entropy growth and lost ergotropy during mixing
#
# Six plus four sites, two blue particles in the left box and two red in the
# right (block dimension 2025). The state starts in one Rick sector and
# evolves under the colour-blind ring Hamiltonian.

# %%
import math

import numpy as np

from obsmix.lattice import EvolutionPlan, LatticeSpec, run_mixing_timeseries, time_grid

spec = LatticeSpec(6, 4, 2, 2)
run = run_mixing_timeseries(spec, EvolutionPlan(times=tuple(time_grid(60, 20.0))))
for k, v in run.meta.items():
    print(f"{k:16s} {v}")

# %%
t, S, W = run.column("t"), run.column("S_rick"), run.column("W")
for j in range(0, 60, 6):
    r = run.records[j]
    print(f"t={r.t:6.2f}  S_rick={r.S_rick:.4f}  S_morty1={r.S_morty1:.4f}  beta={r.beta_obs:.4f}  W={r.W:.4f}")

# %% [markdown]
# The entropy saturates near `ln 2025`. Ergotropy falls as the entropy grows.

# %%
print("late mean S", S[t >= 10].mean(), "ln dim", math.log(2025))
print("Pearson r(W, S)", np.corrcoef(W, S)[0, 1])

# %% [markdown]
# Late in the run the observational temperature is very high, `beta` is
# close to zero, and the series in `dS / (v beta^2)` has no small parameter.
# The expansion columns blow up there; the exact column does not.

# %%
print(run.column("dW_exact")[-3:], run.column("dW_av")[-3:])
