# %% [markdown]
# # The `extreme-aoi` command line
#
# The same pipelines are available as subcommands: analyze, simulate,
# validate, sweep and tail. Here they are driven through `main` so the demo
# runs without a shell. Exit codes are 0 for success, 1 for a failed
# validation and 2 for configuration errors.

# %%
from extreme_aoi.cli import main

code = main(["analyze", "--preset", "fig2-g10", "--alphas", "0.9,0.99", "--format", "csv"])
print("exit code", code)

# %% [markdown]
# A transmit-power sweep in dBm, as in the fourth figure preset:

# %%
main(["sweep", "--preset", "fig4", "--steps", "5"])

# %% [markdown]
# Validation runs the simulator against the closed forms. With the default
# tolerances the moment metrics pass and the tail quantile check does not,
# which is reported and returns exit code 1.

# %%
code = main(["validate", "--preset", "fig2-g10", "--cycles", "200000", "--format", "csv"])
print("exit code", code)
