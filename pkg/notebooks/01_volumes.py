# %% [markdown]
# # Macrostate volumes and mixing entropy
#
# Two boxes of `w` sites each hold blue and red particles. Rick sees colours
# and box occupations, Morty 1 only how many of each colour are on the left,
# Morty 2 only how many particles are on the left. Their observational
# entropies are logs of the volumes below.

# %%
import math

import numpy as np

from obsmix.combinatorics import BoxGeometry, log_volume, stirling_log_volume

# %% [markdown]
# ## Small box, exact integers

# %%
g = BoxGeometry.symmetric(5)
for obs, lab in [("rick", (3, 3, 3, 6)), ("morty1", (3, 3, 6)), ("morty2", (3, 6)), ("accessible", (3, 6))]:
    print(f"{obs:10s} ln V = {log_volume(obs, g, lab):8.4f}   V = {math.exp(log_volume(obs, g, lab)):.0f}")

# %% [markdown]
# ## Mixing entropy per particle
#
# All blue left, all red right, half the particles of each colour. Both Mortys
# see about `N ln 2` more entropy than Rick; the gap closes like `ln N / N`.

# %%
for N in (4, 8, 16, 32, 64, 128):
    g = BoxGeometry.symmetric(100 * N)
    h = N // 2
    ln_r = log_volume("rick", g, (h, h, h, N))
    d1 = log_volume("morty1", g, (h, h, N)) - ln_r
    d2 = log_volume("morty2", g, (h, N)) - ln_r
    print(f"N={N:4d}  dS1/N = {d1 / N:.5f}  dS2/N = {d2 / N:.5f}  ln 2 = {math.log(2):.5f}")

# %% [markdown]
# ## Laplace forms
#
# The textbook Laplace estimate of the Morty sums keeps a constant offset of
# about 1.37 nats. The corrected form shrinks to the `1/N` Stirling tail.

# %%
N = 40
for w in (10**3, 10**4, 10**5, 10**6):
    g = BoxGeometry.symmetric(w)
    exact = log_volume("morty1", g, (20, 20, N))
    pr = stirling_log_volume("morty1", g, (20, 20, N), form="printed")
    co = stirling_log_volume("morty1", g, (20, 20, N), form="corrected")
    print(f"w={w:>8d}  exact - printed = {exact - pr:.4f}   exact - corrected = {exact - co:.4f}")
