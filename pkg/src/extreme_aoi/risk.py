"""
Tail-risk metrics of the extreme AoI: VaR and CVaR.

Analytic values come from the moment-matched Gumbel law; empirical values
from order statistics of a sample.
"""
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .analytics import ConditioningWarning
from .specfun import EULER_GAMMA, DomainError, log_integral

__all__ = [
    "RiskReport",
    "InsufficientSamplesError",
    "var_at",
    "cvar_at",
    "cvar_bracket",
    "cvar_quadrature",
    "empirical_var",
    "empirical_cvar",
    "risk_report",
    "empirical_risk_report",
]


class InsufficientSamplesError(ValueError):
    """Too few samples to resolve the requested tail level."""


@dataclass(frozen=True)
class RiskReport:
    alpha: float
    var_value: float
    cvar_value: float
    source: str  # "analytic" or "empirical"


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"confidence level must lie in (0, 1), got {alpha!r}")


def var_at(fit, alpha):
    """
    Value-at-risk: the ``alpha`` quantile of the fitted Gumbel law.

    ``mu - sigma * ln(-ln alpha)``
    """
    _check_alpha(alpha)
    return fit.mu_hat - fit.sigma_hat * math.log(-math.log(alpha))


@lru_cache(maxsize=4096)
def cvar_bracket(alpha):
    """
    Standardised CVaR of the unit Gumbel law, ``(gamma_E + a ln(-ln a) - li(a)) / (1 - a)``.

    This is ``1/(1-a) * int_a^1 -ln(-ln y) dy`` in closed form (integration
    by parts, using ``y ln(-ln y) - li(y) -> -gamma_E`` as ``y -> 1``).
    Depends on ``alpha`` only, so it is cached; ``lru_cache`` is safe to
    share between threads.
    """
    _check_alpha(alpha)
    if alpha > 1.0 - 1e-6:
        warnings.warn(f"alpha={alpha!r} is within 1e-6 of 1: CVaR bracket is ill-conditioned",
                      ConditioningWarning, stacklevel=3)
    a = float(alpha)
    return (EULER_GAMMA + a * math.log(-math.log(a)) - log_integral(a)) / (1.0 - a)


def cvar_at(fit, alpha):
    """
    Conditional value-at-risk: mean of the fitted law above its ``alpha`` quantile.

    ``mu + sigma * cvar_bracket(alpha)``. As ``alpha -> 0`` this tends to the
    Gumbel mean ``mu + gamma_E sigma``.
    """
    return fit.mu_hat + fit.sigma_hat * cvar_bracket(alpha)


def cvar_quadrature(fit, alpha, subintervals=64):
    """
    CVaR by direct numerical averaging of :func:`var_at` over ``[alpha, 1]``.

    The range is cut into `subintervals` pieces graded geometrically toward 1,
    where the integrand diverges like ``-ln(1 - y)``; each piece goes to
    adaptive Gauss-Kronrod quadrature. Used to cross-check :func:`cvar_at`.
    """
    _check_alpha(alpha)
    subintervals = max(int(subintervals), 64)
    width = 1.0 - alpha
    # integrate over the gap s = 1 - y so points near y = 1 keep full precision
    r = (min(1e-15, 0.5 * width) / width) ** (1.0 / subintervals)
    edges = np.append(width * r ** np.arange(subintervals + 1), 0.0)[::-1]

    def integrand(s):
        return -math.log(-math.log1p(-s)) if s > 0.0 else 0.0

    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)
        total += val
    return fit.mu_hat + fit.sigma_hat * total / width


def _sorted_samples(samples, alpha):
    _check_alpha(alpha)
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    need = math.ceil(1.0 / (1.0 - alpha) - 1e-9)
    if x.size < max(need, 1):
        raise InsufficientSamplesError(
            f"alpha={alpha} needs at least {need} samples, got {x.size}")
    return x


def _lower_index(n, alpha):
    # 0-based index ceil(alpha*n) - 1, guarded against 0.95*100 = 95.00000000000001
    k = math.ceil(round(alpha * n, 9)) - 1
    return min(max(k, 0), n - 1)


def empirical_var(samples, alpha):
    """
    Empirical VaR: the lower order statistic at level ``alpha``.

    Sort ascending and take index ``ceil(alpha * n) - 1`` (0-based). No
    interpolation, so results are bit-reproducible.

    Examples
    --------
    >>> empirical_var(range(1, 101), 0.95)
    95.0
    """
    x = _sorted_samples(samples, alpha)
    return float(x[_lower_index(x.size, alpha)])


def empirical_cvar(samples, alpha):
    """
    Empirical CVaR: mean of the upper ``1 - alpha`` fraction of the sample.

    Samples strictly above :func:`empirical_var` contribute fully; the
    quantile itself contributes the fraction of ``(1 - alpha) n`` weight the
    strict exceedances leave unfilled.
    """
    x = _sorted_samples(samples, alpha)
    n = x.size
    q = x[_lower_index(n, alpha)]
    above = x[x > q]
    tail_weight = round((1.0 - alpha) * n, 9)
    fragment = max(tail_weight - above.size, 0.0)
    if tail_weight <= 0:
        return float(q)
    return float((above.sum() + fragment * q) / (above.size + fragment))


def risk_report(fit, alpha):
    return RiskReport(alpha=alpha, var_value=var_at(fit, alpha),
                      cvar_value=cvar_at(fit, alpha), source="analytic")


def empirical_risk_report(samples, alpha):
    return RiskReport(alpha=alpha, var_value=empirical_var(samples, alpha),
                      cvar_value=empirical_cvar(samples, alpha), source="empirical")
