# %% [markdown]
# # Where can holomorphic sectional curvature be constant?
#
# Scan the admissible (r, s) domain for nilpotent examples, then look at the
# Hopf manifold, whose D^r_s has zero holomorphic sectional curvature exactly
# on the curve (1 - r + rs)^2 + s^2 = 4.

# %%
from hermitia.analysis import scan_parameters
from hermitia.lie_hermitian import catalog

for name in ("kodaira_thurston", "iwasawa"):
    rows = scan_parameters(catalog(name), step=0.25)
    const = [(r.r, r.s, r.hsc.c) for r in rows if r.hsc.constant]
    print(name, len(rows), "grid points, constant at", const)

# %%
from hermitia.models import HopfPoint, hopf_flat_params, hopf_hsc_report

pt = HopfPoint.at([0.6, 0.8j])
for r, s in [(-1, 0), (3, 0), (1, 0), (0, 1)]:
    rep = hopf_hsc_report(pt, (r, s))
    print((r, s), "on curve" if rep.on_chen_nie else "off curve", rep.verdict.constant, round(rep.witness_value, 4) + 0.0)

# %%
print(sorted(hopf_flat_params(2)), sorted(hopf_flat_params(3)))
