# %% [markdown]
# # Monte Carlo simulation
#
# Two simulators share one cycle bookkeeping:
#
# * analytic sampling draws X and the decode outcome straight from their laws;
# * physical mode draws Rayleigh fading for every slot and decodes on
#   log2(1 + SNR) >= R.

# %%
from extreme_aoi.analytics import aoi_variance, average_aoi
from extreme_aoi.experiment import load_config
from extreme_aoi.model import derive
from extreme_aoi.sim import (
    RunConfig,
    replicate_and_merge,
    run_analytic_sampling,
    run_physical,
    sawtooth_trajectory,
)

params = load_config("fig2-g10").system
d = derive(params)
phys = run_physical(params, 200_000, seed=1)
ana = run_analytic_sampling(d.g, d.p, 200_000, seed=1)

print(f"closed form  mean={average_aoi(d.g, d.p):.3f}  variance={aoi_variance(d.g, d.p):.1f}")
for name, s in (("physical", phys), ("analytic", ana)):
    print(f"{name:9s}   mean={s.empirical_mean_aoi:.3f}  variance={s.empirical_var_cycle:.1f}  "
          f"success rate={s.success_rate:.4f}")

# %% [markdown]
# The AoI trajectory is a sawtooth: it climbs by one each slot and drops to
# one when an update gets through. Each cycle of length Y contributes exactly
# Y(Y+1)/2 to the area.

# %%
slots, aoi = sawtooth_trajectory(ana, 60)
print(" ".join(str(v) for v in aoi.tolist()))

# %% [markdown]
# Replications run on independent streams and merge exactly, whatever order
# they finish in.

# %%
merged = replicate_and_merge(RunConfig(mode="analytic", g=d.g, p=d.p), 400_000, 4, master_seed=7)
print(f"4 replications: {merged.cycles_K} cycles, mean={merged.empirical_mean_aoi:.3f}")
