# %% [markdown]
# # Special functions
#
# The outage probability of an N-antenna receiver is a regularized
# incomplete gamma function of integer order, and the closed-form CVaR of a
# Gumbel law needs the logarithmic integral li(a) on (0, 1). Both are
# implemented in `extreme_aoi.specfun` with log-space summation so they stay
# accurate for hundreds of antennas.

# %%
import math

from extreme_aoi.specfun import (
    log_integral,
    regularized_lower_gamma,
    regularized_upper_gamma,
    upper_incomplete_gamma_int,
)

# %% [markdown]
# For integer order the upper incomplete gamma is a finite sum,
# Gamma(n, x) = (n-1)! e^{-x} sum_{k<n} x^k / k!. A quick check against the
# first few orders at x = 1:

# %%
for n in range(1, 6):
    direct = math.factorial(n - 1) * math.exp(-1.0) * sum(1.0 / math.factorial(k) for k in range(n))
    print(f"Gamma({n}, 1) = {upper_incomplete_gamma_int(n, 1.0):.10f}   finite sum {direct:.10f}")

# %% [markdown]
# The regularized pair P and Q always sums to one. Near either end the
# smaller of the two is computed directly, so tiny outage probabilities keep
# full relative precision instead of collapsing to 0.

# %%
for n, x in [(1, 0.1), (8, 0.1), (64, 10.0), (256, 200.0)]:
    p, q = regularized_lower_gamma(n, x), regularized_upper_gamma(n, x)
    print(f"n={n:3d} x={x:6.1f}  P={p:.6e}  Q={q:.6e}  P+Q-1={p + q - 1:+.1e}")

# %% [markdown]
# li(a) is negative on (0, 1) and diverges to minus infinity as a -> 1.

# %%
for a in (0.1, 0.5, 0.9, 0.99, 0.999999):
    print(f"li({a}) = {log_integral(a):.12f}")
