"""
Age-of-information statistics and extreme-value risk for a wireless-powered
status-update link, with a Monte Carlo simulator to check every closed form.
"""
from .specfun import EULER_GAMMA, DomainError, log_integral, regularized_upper_gamma, upper_incomplete_gamma_int
from .model import DerivedParams, SystemParams, dbm_to_watts, derive, outage_probability
from .analytics import (
    AoiMoments,
    GumbelFit,
    aoi_moments,
    aoi_variance,
    aoi_variance_massive_n,
    average_aoi,
    average_aoi_massive_n,
    gumbel_cdf,
    gumbel_fit,
    x_moment,
    y_moment,
)
from .risk import RiskReport, cvar_at, empirical_cvar, empirical_var, var_at
from .sim import SimStats, block_maxima, replicate_and_merge, run_analytic_sampling, run_physical

__version__ = "0.1.0"
