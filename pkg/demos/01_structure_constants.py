# %% [markdown]
# # Structure constants and the exterior derivative
#
# A Lie algebra with a complex structure and a compatible metric is encoded by
# two arrays C and D in a unitary frame.  The exterior derivative on
# left-invariant forms follows from them, and d^2 = 0 holds exactly when the
# Jacobi identity does.

# %%
import numpy as np

from hermitia import exterior
from hermitia.lie_hermitian import catalog, chern_torsion, random_dense, random_two_step, validate

S = catalog("iwasawa")
print(exterior.differential(exterior.phi(2, 3), S))  # d phi_3 = -phi_1 ^ phi_2

# %%
kt = catalog("kodaira_thurston")
print(exterior.differential(exterior.phi(1, 2), kt))  # d phi_2 = phi_1 ^ phibar_1
print(chern_torsion(kt).T[0])  # T^1_{ik}

# %% [markdown]
# Random two-step algebras always satisfy Jacobi; dense random tables almost never do.

# %%
for S in (random_two_step(4, 2, 0), random_dense(3, 42)):
    basis = exterior.basis_differentials(S)
    d2 = max(exterior.differential(f, S, basis).max_abs() for f in basis)
    print(validate(S).ok, f"max |d(d phi)| = {d2:.2e}")
