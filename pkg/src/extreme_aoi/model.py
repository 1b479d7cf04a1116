"""
Physical link parameters and the two quantities derived from them.

Every closed form downstream depends on the physical inputs only through

* ``g``, the mean number of extra slots needed to fill the capacitor, and
* ``p``, the probability that one transmission attempt is in outage.

Path loss ``w * d**alpha`` divides the received power on both links, i.e.
the per-slot harvest is ``eta * Pt * |u|^2 / (w * d_e**alpha)`` and the
effective SNR is ``S * sum|h|^2 / (w * d_c**alpha * N0)``.
"""
import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

from .specfun import DomainError, regularized_lower_gamma, regularized_upper_gamma

__all__ = [
    "SystemParams",
    "DerivedParams",
    "derive",
    "outage_probability",
    "charging_load",
    "snr_threshold",
    "dbm_to_watts",
    "watts_to_dbm",
]


@dataclass(frozen=True)
class SystemParams:
    """
    Physical inputs of the wireless-powered status-update link.

    Units are SI throughout: joules, watts, meters. One slot is one time
    unit, so energy per slot and power coincide numerically.

    Parameters
    ----------
    capacitor_size_S : float
        Capacitor size (J).
    noise_power_N0 : float
        Receiver noise power (W).
    antennas_N : int
        Receive antennas combined by MRC.
    conversion_eta : float
        RF-to-DC efficiency in (0, 1].
    tx_power_Pt : float
        Energy transmitter power (W).
    atten_w : float
        Propagation attenuation at the 1 m reference distance.
    dist_comm_dc, dist_energy_de : float
        Communication and power-transfer link distances (m).
    pathloss_alpha : float
        Path-loss exponent.
    rate_R : float
        Target rate (bit/s/Hz).
    snr_scale : float, optional
        Direct value of S/N0. When given it replaces
        ``capacitor_size_S / noise_power_N0`` in the outage formula.
    """

    capacitor_size_S: float
    noise_power_N0: float
    antennas_N: int = 1
    conversion_eta: float = 0.5
    tx_power_Pt: float = 10.0
    atten_w: float = 1e3
    dist_comm_dc: float = 10.0
    dist_energy_de: float = 10.0
    pathloss_alpha: float = 2.4
    rate_R: float = 0.1
    snr_scale: Optional[float] = None

    def __post_init__(self):
        for name in ("capacitor_size_S", "noise_power_N0", "tx_power_Pt", "atten_w",
                     "dist_comm_dc", "dist_energy_de", "pathloss_alpha", "rate_R"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        if isinstance(self.antennas_N, bool) or int(self.antennas_N) != self.antennas_N \
                or self.antennas_N < 1:
            raise DomainError(f"antennas_N must be an integer >= 1, got {self.antennas_N!r}")
        object.__setattr__(self, "antennas_N", int(self.antennas_N))
        if not 0.0 < self.conversion_eta <= 1.0:
            raise DomainError(f"conversion_eta must lie in (0, 1], got {self.conversion_eta!r}")
        if self.snr_scale is not None and not (math.isfinite(self.snr_scale) and self.snr_scale > 0):
            raise DomainError(f"snr_scale must be finite and > 0, got {self.snr_scale!r}")
        if self.pathloss_alpha < 2.0:
            warnings.warn(f"pathloss_alpha={self.pathloss_alpha} is below the free-space value 2",
                          stacklevel=3)

    def with_(self, **changes):
        """Copy with some fields replaced."""
        return replace(self, **changes)

    @property
    def energy_pathloss(self):
        """Attenuation ``w * d_e**alpha`` of the power-transfer link."""
        return self.atten_w * self.dist_energy_de ** self.pathloss_alpha

    @property
    def comm_pathloss(self):
        """Attenuation ``w * d_c**alpha`` of the communication link."""
        return self.atten_w * self.dist_comm_dc ** self.pathloss_alpha

    @property
    def effective_snr_scale(self):
        if self.snr_scale is not None:
            return self.snr_scale
        return self.capacitor_size_S / self.noise_power_N0


@dataclass(frozen=True)
class DerivedParams:
    """Sufficient statistics ``g`` and ``p`` plus the gamma argument ``theta``."""

    g: float
    p: float
    snr_threshold_theta: float

    @property
    def expected_attempts(self):
        """Mean number of attempts per successful update, ``1/(1-p)``."""
        return 1.0 / (1.0 - self.p)


def dbm_to_watts(x):
    """Convert dBm to watts: ``10**((x - 30)/10)``."""
    return 10.0 ** ((x - 30.0) / 10.0)


def watts_to_dbm(x):
    """Convert watts to dBm."""
    return 10.0 * math.log10(x) + 30.0


def charging_load(params):
    """``g = w d_e^alpha S / (eta Pt)``."""
    return params.energy_pathloss * params.capacitor_size_S / (params.conversion_eta * params.tx_power_Pt)


def snr_threshold(params):
    """``theta = w d_c^alpha (2^R - 1) / (S/N0)``."""
    return params.comm_pathloss * math.expm1(params.rate_R * math.log(2.0)) / params.effective_snr_scale


def derive(params):
    """
    Compute ``g``, ``p`` and ``theta`` from physical parameters.

    Raises
    ------
    DomainError
        If the outage probability rounds to 1, i.e. no attempt can ever
        succeed; the message reports the offending gamma argument.
    """
    g = charging_load(params)
    theta = snr_threshold(params)
    p = regularized_lower_gamma(params.antennas_N, theta)
    success = regularized_upper_gamma(params.antennas_N, theta)
    if not success > 0.0 or p >= 1.0:
        raise DomainError(
            f"outage probability is 1 to machine precision: theta={theta:.6g} with "
            f"N={params.antennas_N} leaves success probability {success:.3g}")
    return DerivedParams(g=g, p=p, snr_threshold_theta=theta)


def outage_probability(params):
    """Outage probability ``p = 1 - Q(N, theta)`` of one transmission attempt."""
    return derive(params).p
