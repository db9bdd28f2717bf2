# %% [markdown]
# # The (r, s) plane of canonical connections
#
# theta^D = theta + t gamma with t = (1 - r + rs)/2, plus the conjugate block
# s beta.  The curvature identities relating Chern, Bismut and D^r_s are checked
# by computing both sides independently.

# %%
from hermitia.connections import NAMED_POINTS, connection_form_D
from hermitia.curvature import curvature_D, curvature_from_structure, verify_identities
from hermitia.lie_hermitian import catalog, random_two_step

S = catalog("kodaira_thurston")
D = connection_form_D(S, NAMED_POINTS["levi_civita"])
print(D.entry(1, 0))  # -1/2 phi_1

# %%
Rb = curvature_from_structure(catalog("iwasawa"), "bismut")
print("R^b_{2 2bar 1 1bar} =", Rb.component(2, 2, 1, 1))

# %%
rep = verify_identities(random_two_step(4, 2, 3), tol=1e-8)
for name, value in sorted(rep.residuals.items()):
    print(f"{name:20s} {value:.1e}")

# %%
RD = curvature_D(S, (0.5, -1.5))
print("hermitian defect", RD.hermitian_defect())
