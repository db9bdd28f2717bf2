# %% [markdown]
# # Balanced BTP threefolds
#
# Constant holomorphic sectional curvature c for D^r_s on a Bismut
# torsion-parallel manifold forces a specific Bismut curvature.  Comparing that
# with the known curvature patterns rules out every case except the Chern
# connection on the rank-3 (Chern flat) model.

# %%
from hermitia.models import BTP3_CASES, WallachPattern, btp3_constancy_analysis, wallach_rb

R = wallach_rb(WallachPattern(b=0.2, p=0.5 + 0.1j, q=-1j))
print([R.component(*c).real for c in [(1, 1, 1, 1), (2, 2, 2, 2), (1, 1, 2, 2), (2, 2, 3, 3)]])

# %%
for case in BTP3_CASES:
    for params in [(1, 0), (-1, 0), (0, 1)]:
        v = btp3_constancy_analysis(case, params)
        print(f"{case:8s} {params!s:8s} {v.status:11s} {v.equation:45s} value={v.value:+.4f}")
