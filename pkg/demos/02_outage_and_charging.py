# %% [markdown]
# # From link parameters to (g, p)
#
# Every statistic in the package depends on two numbers:
#
# * `g`, the mean number of slots of harvested energy needed to fill the
#   capacitor, and
# * `p`, the probability that a transmission attempt is in outage.
#
# `derive` maps physical parameters onto them.

# %%
import numpy as np

from extreme_aoi import SystemParams, derive
from extreme_aoi.experiment import PRESETS, load_config
from extreme_aoi.model import dbm_to_watts

# %% [markdown]
# The figure presets fix all link parameters. The noise power is our own
# choice for each preset, so the derived outage probability is printed next
# to it.

# %%
for name in PRESETS:
    cfg = load_config(name)
    g, p, theta = cfg.gp()
    n0 = cfg.system.noise_power_N0 if cfg.system else float("nan")
    print(f"{name:11s} g={g:9.3f} p={p:.4f} N0={n0:.3g}")

# %% [markdown]
# The charging load scales linearly with the capacitor size and inversely
# with transmit power. The outage probability does not depend on transmit
# power at all, because the transmitter spends exactly the stored energy S.

# %%
base = load_config("fig2-g10").system
for dbm in (30, 35, 40, 45, 50):
    d = derive(base.with_(tx_power_Pt=dbm_to_watts(dbm)))
    print(f"Pt={dbm} dBm  g={d.g:8.3f}  p={d.p:.4f}")

# %% [markdown]
# More receive antennas shrink the outage probability quickly.

# %%
for n in (1, 2, 4, 8, 16, 64):
    d = derive(base.with_(antennas_N=n))
    print(f"N={n:2d}  p={d.p:.3e}  expected attempts per update={d.expected_attempts:.3f}")
