# %% [markdown]
# # Closed-form AoI moments
#
# One renewal cycle lasts Y slots: a geometric number of charge-and-transmit
# attempts, each of length X = 1 + Poisson(g). The average AoI and its
# variance follow from the first four moments of Y.

# %%
from extreme_aoi.analytics import (
    aoi_moments,
    aoi_variance,
    aoi_variance_from_moments,
    aoi_variance_massive_n,
    average_aoi,
    average_aoi_massive_n,
    y_moments,
)

# %% [markdown]
# The variance polynomial and the assembly from raw moments agree to
# rounding error.

# %%
for g, p in [(1.0, 0.1), (10.0, 0.5), (100.0, 0.2)]:
    m = aoi_moments(g, p)
    check = aoi_variance_from_moments(*y_moments(g, p))
    print(f"g={g:5.0f} p={p:.1f}  mean AoI={m.mean_aoi:10.4f}  variance={m.var_aoi:14.2f}  "
          f"(assembly {check:14.2f})")

# %% [markdown]
# With an unbounded antenna array every attempt succeeds (p = 0), and the
# general formulas reduce to the simpler limit forms.

# %%
for g in (0.5, 10.0, 100.0):
    print(f"g={g:6.1f}  mean {average_aoi(g, 0.0):.6f} = {average_aoi_massive_n(g):.6f}   "
          f"variance {aoi_variance(g, 0.0):.6f} = {aoi_variance_massive_n(g):.6f}")
