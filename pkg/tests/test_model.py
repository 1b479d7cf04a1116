import math

import numpy as np
import pytest

from extreme_aoi.model import (
    SystemParams,
    dbm_to_watts,
    derive,
    outage_probability,
    watts_to_dbm,
)
from extreme_aoi.specfun import DomainError, regularized_upper_gamma

FIG2 = dict(capacitor_size_S=2e-4, noise_power_N0=1e-9, conversion_eta=0.5, tx_power_Pt=10.0,
            atten_w=1e3, dist_comm_dc=10.0, dist_energy_de=10.0, pathloss_alpha=2.4, rate_R=0.1)


def params(**changes):
    return SystemParams(**{**FIG2, **changes})


def with_theta(theta, n):
    """Parameters whose gamma argument equals `theta` (via snr_scale)."""
    base = params(antennas_N=n)
    scale = base.comm_pathloss * (2 ** base.rate_R - 1) / theta
    return base.with_(snr_scale=scale)


def test_g_is_ten_at_10m():
    # 40 dBm, S = 0.2 mJ, d = 10 m
    assert derive(params()).g == pytest.approx(10.0, rel=0.01)


def test_g_is_hundred_at_26m():
    assert derive(params(dist_energy_de=26.0, dist_comm_dc=26.0)).g == pytest.approx(100.0, rel=0.01)


def test_zero_rate_limit():
    d = derive(params(rate_R=1e-12))
    assert d.snr_threshold_theta < 1e-12
    assert d.p < 1e-12


@pytest.mark.parametrize("dbm, watts", [(40, 10.0), (30, 1.0), (0, 1e-3)])
def test_dbm(dbm, watts):
    assert dbm_to_watts(dbm) == pytest.approx(watts, rel=1e-15)
    assert watts_to_dbm(dbm_to_watts(dbm)) == pytest.approx(dbm, rel=1e-12, abs=1e-12)


def test_outage_examples():
    assert outage_probability(with_theta(math.log(2.0), 1)) == pytest.approx(0.5, rel=1e-12)
    assert outage_probability(with_theta(1.0, 256)) < 1e-12
    assert outage_probability(with_theta(1.0, 2)) == pytest.approx(0.2642411176571153, rel=1e-12)


def test_p_and_success_sum_to_one():
    for n in (1, 2, 4, 16):
        d = derive(params(antennas_N=n))
        assert d.p + regularized_upper_gamma(n, d.snr_threshold_theta) == pytest.approx(1.0, abs=2e-16)


def test_rejects_certain_outage():
    with pytest.raises(DomainError, match="theta"):
        derive(params(noise_power_N0=1.0))


@pytest.mark.parametrize("field, value", [
    ("capacitor_size_S", 0.0), ("noise_power_N0", -1.0), ("antennas_N", 0), ("antennas_N", 1.5),
    ("conversion_eta", 1.5), ("tx_power_Pt", math.inf), ("rate_R", 0.0),
])
def test_invalid_params(field, value):
    with pytest.raises(DomainError, match=field):
        params(**{field: value})


def test_low_pathloss_exponent_warns():
    with pytest.warns(UserWarning, match="free-space"):
        params(pathloss_alpha=1.8)


def test_monotonicity_by_pairwise_perturbation():
    rng = np.random.default_rng(3)
    for _ in range(50):
        base = params(capacitor_size_S=10 ** rng.uniform(-5, -3), noise_power_N0=10 ** rng.uniform(-10, -8.5),
                      antennas_N=int(rng.integers(1, 6)), rate_R=rng.uniform(0.05, 0.5),
                      dist_comm_dc=rng.uniform(5, 20))
        p0 = derive(base).p
        if not 1e-12 < p0 < 1 - 1e-9:
            continue
        assert derive(base.with_(rate_R=base.rate_R * 1.1)).p > p0
        assert derive(base.with_(dist_comm_dc=base.dist_comm_dc * 1.1)).p > p0
        assert derive(base.with_(noise_power_N0=base.noise_power_N0 * 1.1)).p > p0
        assert derive(base.with_(antennas_N=base.antennas_N + 1)).p < p0
        assert derive(base.with_(capacitor_size_S=base.capacitor_size_S * 1.1)).p < p0


def test_g_scaling():
    base = params()
    g = derive(base).g
    assert derive(base.with_(capacitor_size_S=3 * base.capacitor_size_S)).g == pytest.approx(3 * g, rel=1e-14)
    assert derive(base.with_(tx_power_Pt=2 * base.tx_power_Pt)).g == pytest.approx(g / 2, rel=1e-14)
    d2 = base.with_(dist_energy_de=base.dist_energy_de * 2 ** (1 / base.pathloss_alpha))
    assert derive(d2).g == pytest.approx(2 * g, rel=1e-12)


def test_derive_is_pure():
    assert derive(params()) == derive(params())
