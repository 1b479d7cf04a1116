"""
Closed-form AoI statistics.

The charging period ``X`` is ``1 + Poisson(g)`` and the interarrival time
``Y`` is the sum of ``L`` independent charging periods, where ``L`` is
geometric with success probability ``1 - p``. All results follow from the
first four raw moments of ``Y``.
"""
import math
import warnings
from dataclasses import dataclass
from typing import Tuple

from .specfun import EULER_GAMMA, DomainError

__all__ = [
    "AoiMoments",
    "GumbelFit",
    "ConditioningWarning",
    "RegimeWarning",
    "x_moment",
    "y_moment",
    "y_moments",
    "geometric_factorial_moment",
    "average_aoi",
    "aoi_variance",
    "aoi_variance_from_moments",
    "average_aoi_massive_n",
    "aoi_variance_massive_n",
    "aoi_moments",
    "gumbel_fit",
    "gumbel_cdf",
    "gumbel_pdf",
]

VALIDITY_LG_THRESHOLD = 10.0


class ConditioningWarning(UserWarning):
    """Inputs close to a singularity; results lose relative accuracy."""


class RegimeWarning(UserWarning):
    """Gumbel approximation used outside its intended regime (L*g <= 10)."""


def _check_gp(g, p, allow_zero_g=False):
    if not math.isfinite(g) or g < 0 or (g == 0 and not allow_zero_g):
        raise DomainError(f"g must be > 0, got {g!r}")
    if not 0.0 <= p < 1.0:
        raise DomainError(f"p must lie in [0, 1), got {p!r}")
    if 1.0 - p < 1e-6:
        warnings.warn(f"1 - p = {1.0 - p:.3g}: closed forms are ill-conditioned",
                      ConditioningWarning, stacklevel=3)


def x_moment(n, g):
    """
    Raw moment ``E[X**n]`` of the charging period, ``n`` in 1..4.

    ``X = 1 + Poisson(g)``; ``g = 0`` gives the degenerate ``X = 1``.
    """
    if g < 0 or not math.isfinite(g):
        raise DomainError(f"g must be >= 0, got {g!r}")
    if n == 1:
        return 1.0 + g
    if n == 2:
        return 1.0 + g * (3.0 + g)
    if n == 3:
        return 1.0 + g * (7.0 + g * (6.0 + g))
    if n == 4:
        return 1.0 + g * (15.0 + g * (25.0 + g * (10.0 + g)))
    raise DomainError(f"moment order must be in 1..4, got {n!r}")


def geometric_factorial_moment(j, p):
    """
    ``sum_{k>=1} k(k-1)...(k-j+1) p**(k-1) (1-p)`` for j in 1..4.

    Equals ``j! p**(j-1) / (1-p)**j``: the j-th factorial moment of the
    number of attempts.
    """
    if j not in (1, 2, 3, 4):
        raise DomainError(f"order must be in 1..4, got {j!r}")
    return math.factorial(j) * p ** (j - 1) / (1.0 - p) ** j


def y_moments(g, p) -> Tuple[float, float, float, float]:
    """First four raw moments of the interarrival time ``Y``."""
    _check_gp(g, p, allow_zero_g=True)
    m1, m2, m3, m4 = (x_moment(n, g) for n in (1, 2, 3, 4))
    f1, f2, f3, f4 = (geometric_factorial_moment(j, p) for j in (1, 2, 3, 4))
    # E[Y^n | L=k] is a polynomial in k built from falling factorials
    # k, k(k-1), ...; mixing over L swaps each for its factorial moment.
    ey1 = f1 * m1
    ey2 = f1 * m2 + f2 * m1 ** 2
    ey3 = f1 * m3 + 3.0 * f2 * m2 * m1 + f3 * m1 ** 3
    ey4 = (f1 * m4 + 4.0 * f2 * m3 * m1 + 6.0 * f3 * m2 * m1 ** 2
           + 3.0 * f2 * m2 ** 2 + f4 * m1 ** 4)
    return ey1, ey2, ey3, ey4


def y_moment(n, g, p):
    """
    Raw moment ``E[Y**n]`` of the interarrival time, ``n`` in 1..4.

    Examples
    --------
    >>> y_moment(1, 10.0, 0.5)
    22.0
    """
    if n not in (1, 2, 3, 4):
        raise DomainError(f"moment order must be in 1..4, got {n!r}")
    return y_moments(g, p)[n - 1]


def average_aoi(g, p):
    """
    Long-run average AoI in slots.

    ``(1 + 3g + g^2) / (2(g+1)) + (1+g) p / (1-p) + 1/2``, which equals
    ``(E[Y^2]/E[Y] + 1) / 2``.
    """
    _check_gp(g, p, allow_zero_g=True)
    return (1.0 + g * (3.0 + g)) / (2.0 * (g + 1.0)) + (1.0 + g) * p / (1.0 - p) + 0.5


def aoi_variance(g, p):
    """
    AoI variance in slots squared, closed form quintic in ``g``.

    This is ``E[Q^2]/E[Y] - mean^2`` with ``Q = Y(Y+1)/2`` the area under
    one sawtooth tooth. It is not the per-slot variance of the sawtooth.
    """
    _check_gp(g, p, allow_zero_g=True)
    c5 = 1.0 + p * (11.0 + p * (11.0 + p))
    c4 = 12.0 + p * (78.0 + p * (32.0 - 2.0 * p))
    c3 = 42.0 + p * (174.0 + p * (26.0 - 2.0 * p))
    c2 = 2.0 * (25.0 + p * (89.0 + p * (5.0 + p)))
    c1 = 4.0 * (5.0 + p * (22.0 + 3.0 * p))
    c0 = 4.0 * p * (p + 5.0)
    poly = c0 + g * (c1 + g * (c2 + g * (c3 + g * (c4 + g * c5))))
    return poly / (4.0 * (g + 1.0) ** 2 * (1.0 - p) ** 3)


def aoi_variance_from_moments(ey1, ey2, ey3, ey4):
    """
    Assemble the AoI variance from raw moments of ``Y``.

    ``(E[Y^4]/4 + E[Y^3]/2 + E[Y^2]/4) / E[Y] - (E[Y^2] + E[Y])^2 / (4 E[Y]^2)``
    """
    return (ey4 / 4.0 + ey3 / 2.0 + ey2 / 4.0) / ey1 - (ey2 + ey1) ** 2 / (4.0 * ey1 ** 2)


def average_aoi_massive_n(g):
    """Average AoI with an unbounded antenna array (``p = 0``)."""
    if g < 0:
        raise DomainError(f"g must be >= 0, got {g!r}")
    return (2.0 + g * (4.0 + g)) / (2.0 + 2.0 * g)


def aoi_variance_massive_n(g):
    """AoI variance with an unbounded antenna array (``p = 0``)."""
    if g < 0:
        raise DomainError(f"g must be >= 0, got {g!r}")
    return g * (20.0 + g * (50.0 + g * (42.0 + g * (12.0 + g)))) / (4.0 * (g + 1.0) ** 2)


@dataclass(frozen=True)
class AoiMoments:
    """Average AoI, AoI variance and the raw ``Y`` moments behind them."""

    mean_aoi: float
    var_aoi: float
    y_moments: Tuple[float, float, float, float]
    g: float = math.nan
    p: float = math.nan


def aoi_moments(g, p):
    """Bundle :func:`average_aoi`, :func:`aoi_variance` and the ``Y`` moments."""
    return AoiMoments(mean_aoi=average_aoi(g, p), var_aoi=aoi_variance(g, p),
                      y_moments=y_moments(g, p), g=float(g), p=float(p))


@dataclass(frozen=True)
class GumbelFit:
    """
    Moment-matched Gumbel law for the extreme AoI.

    Attributes
    ----------
    mu_hat, sigma_hat : float
        Location and scale (slots).
    validity_Lg : float
        ``E[L] * g = g / (1 - p)``; NaN when the fit was built from bare
        moments without ``(g, p)``.
    regime_warning : bool
        True when ``validity_Lg <= 10``.
    """

    mu_hat: float
    sigma_hat: float
    validity_Lg: float = math.nan
    regime_warning: bool = False

    def __post_init__(self):
        if not self.sigma_hat > 0:
            raise DomainError(f"sigma_hat must be > 0, got {self.sigma_hat!r}")

    @property
    def mean(self):
        return self.mu_hat + EULER_GAMMA * self.sigma_hat

    @property
    def variance(self):
        return self.sigma_hat ** 2 * math.pi ** 2 / 6.0


def gumbel_fit(moments):
    """
    Fit a Gumbel law by matching its mean and variance to the AoI moments.

    ``sigma = sqrt(6 V) / pi`` and ``mu = mean - gamma_E * sigma``.
    A :class:`RegimeWarning` is emitted, and ``regime_warning`` set, when
    ``g / (1 - p) <= 10``.
    """
    if not moments.var_aoi > 0:
        raise DomainError(f"var_aoi must be > 0 for a Gumbel fit, got {moments.var_aoi!r}")
    sigma = math.sqrt(6.0 * moments.var_aoi) / math.pi
    mu = moments.mean_aoi - EULER_GAMMA * sigma
    lg = moments.g / (1.0 - moments.p)
    flag = bool(lg <= VALIDITY_LG_THRESHOLD)
    if flag:
        warnings.warn(f"L*g = {lg:.4g} <= {VALIDITY_LG_THRESHOLD:g}; the Gumbel approximation "
                      "of the extreme AoI may be poor", RegimeWarning, stacklevel=2)
    return GumbelFit(mu_hat=mu, sigma_hat=sigma, validity_Lg=lg, regime_warning=flag)


def gumbel_cdf(x, fit):
    """Gumbel CDF ``exp(-exp(-(x - mu)/sigma))``; saturates to 0/1 in the tails."""
    z = (x - fit.mu_hat) / fit.sigma_hat
    if z < -700.0:
        return 0.0
    return math.exp(-math.exp(-z))


def gumbel_pdf(x, fit):
    """Gumbel density."""
    z = (x - fit.mu_hat) / fit.sigma_hat
    if z < -700.0:
        return 0.0
    return math.exp(-z - math.exp(-z)) / fit.sigma_hat
