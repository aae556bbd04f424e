# %% [markdown]
# # A colour-blind observer's prediction is exact
#
# Morty 3 cannot see colour. He models the system on configuration space.
# Lifting his Hamiltonian, state and protocol to the coloured space with the
# colour fiber left free shows that the work he predicts is the work done.

# %%
import numpy as np

from obsmix.lift import (
    ColoredSpace,
    color_field_override,
    lift_projector,
    lift_subspace,
    verify_lemma_overlap,
    verify_work_equality,
)

sp = ColoredSpace.build(2, 1)
K = sp.erasure()
print("K|0+> =", K @ sp.ket("0+").real, "= |01>:", sp.config_ket("01").real)

# %% [markdown]
# The literal preimage of `(|01> + |10>)/sqrt 2` is spanned by four vectors
# of rank three. The frame lift `c (x) C^m` keeps one per colouring.

# %%
c = (sp.config_ket("01") + sp.config_ket("10")) / np.sqrt(2)
enum = lift_subspace(sp, c, method="enumerate")
frame = lift_subspace(sp, c)
print("enumerate: spanning", enum.spanning.shape[1], "rank", enum.rank, "kernel", enum.kernel_dim)
print("frame:     rank", frame.rank, "kernel", frame.kernel_dim)
P = lift_projector(sp, np.eye(2))
print("lift of the identity is the identity:", np.allclose(P, np.eye(sp.dim)))

# %%
lemma = verify_lemma_overlap(n_samples=200)
print(lemma.checks[0])
print(verify_lemma_overlap(n_samples=40, method="enumerate", sizes=((3, 2),)).checks[0])

# %%
rep = verify_work_equality(n_unitaries=20, fiber_seeds=(0, 1, 2))
for chk in rep.checks:
    print(f"{chk.name:24s} {chk.value:.2e}  tol {chk.tol:.1e}  {'ok' if chk.passed else 'FAIL'}")

# %% [markdown]
# Negative controls: a colour-dependent field on one site, and fiber
# rotations chosen independently per eigenvalue of the protocol.

# %%
neg = verify_work_equality(n_unitaries=5, H_override=color_field_override(0.3))
print("colour field:", neg.failed_assumptions)
ind = verify_work_equality(n_unitaries=4, independent_fibers=True)
print("independent fibers:", ind.failed_assumptions)
