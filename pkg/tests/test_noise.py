import math
import random

import pytest

from gponqkd.errors import ConfigurationError, InvalidQuantityError
from gponqkd.noise import (
    ClassicalSource,
    DetectorSpec,
    backward_raman_power,
    forward_raman_power,
    noise_budget,
)
from gponqkd.quantities import dbm_to_watts
from gponqkd.topology import Topology

from oracles import backward_quad, budget_by_integration, forward_quad

ALPHA_025 = 0.25 * math.log(10) / 10


def test_forward_examples():
    assert forward_raman_power(1e-3, 2e-9, 100, 0, 0.0576) == 0.0
    # 1e-3 * 2e-9 * 100 * 10 * exp(-0.576)
    assert forward_raman_power(1e-3, 2e-9, 100, 10, 0.0576) == pytest.approx(1.1240e-9, rel=5e-4)
    assert forward_raman_power(1e-3, 2e-9, 100, 10, 0.0576) == pytest.approx(1.12428489e-9, rel=1e-8)
    assert forward_raman_power(2e-3, 2e-9, 100, 10, 0.0576) == pytest.approx(
        2 * forward_raman_power(1e-3, 2e-9, 100, 10, 0.0576), rel=1e-15
    )


def test_backward_examples():
    assert backward_raman_power(1e-3, 2e-9, 100, 0, 0.0576) == 0.0
    assert backward_raman_power(1e-3, 2e-9, 100, 10, 0.0576) == pytest.approx(1.1873e-9, rel=5e-4)
    assert backward_raman_power(1e-3, 2e-9, 100, 10, 0.0576) == pytest.approx(1.18749283e-9, rel=1e-8)
    saturation = 1e-3 * 2e-9 * 100 / (2 * 0.0576)
    assert backward_raman_power(1e-3, 2e-9, 100, 1e4, 0.0576) == pytest.approx(saturation, rel=1e-12)


@pytest.mark.parametrize("fn", [forward_raman_power, backward_raman_power])
def test_raman_rejects_bad_attenuation(fn):
    with pytest.raises(InvalidQuantityError):
        fn(1e-3, 2e-9, 100, 10, 0.0)
    with pytest.raises(InvalidQuantityError):
        fn(-1e-3, 2e-9, 100, 10, 0.05)


def test_forward_peaks_at_inverse_alpha():
    a = ALPHA_025
    peak = forward_raman_power(1e-3, 1e-9, 100, 1 / a, a)
    for L in (0.5 / a, 0.9 / a, 1.1 / a, 2 / a, 5 / a):
        assert forward_raman_power(1e-3, 1e-9, 100, L, a) < peak


def test_backward_monotone_to_saturation():
    a = ALPHA_025
    values = [backward_raman_power(1e-3, 1e-9, 100, L, a) for L in range(0, 400, 5)]
    assert all(x <= y for x, y in zip(values, values[1:]))
    assert values[-1] == pytest.approx(1e-3 * 1e-9 * 100 / (2 * a), rel=1e-12)


def test_closed_forms_match_integration():
    rng = random.Random(20240611)
    for _ in range(100):
        P = 10 ** rng.uniform(-6, -1)
        rho = 10 ** rng.uniform(-13, -8)
        B = rng.uniform(1, 200)
        L = rng.uniform(0.01, 100)
        a = rng.uniform(0.02, 0.1)
        assert forward_raman_power(P, rho, B, L, a) == pytest.approx(forward_quad(P, rho, B, L, a), rel=1e-6)
        assert backward_raman_power(P, rho, B, L, a) == pytest.approx(backward_quad(P, rho, B, L, a), rel=1e-6)


def test_detector_duty_cycle():
    assert DetectorSpec().duty_cycle == pytest.approx(0.1125, rel=1e-12)
    with pytest.raises(InvalidQuantityError):
        DetectorSpec(efficiency=0.0)


def test_zero_power_leaves_only_dark_counts(detector):
    srcs = [ClassicalSource(1490, 0.0), ClassicalSource(1310, 0.0)]
    b = noise_budget(Topology.build(12, 2, 32), srcs, detector, 0.6)
    assert (b.d1, b.d2, b.d3, b.d4) == (0, 0, 0, 0)
    assert b.d0 == pytest.approx(1000 * 0.1125, rel=1e-12)


def test_missing_source_is_configuration_error(detector, sources):
    with pytest.raises(ConfigurationError):
        noise_budget(Topology.build(12, 2, 32), sources[:1], detector, 0.6)
    with pytest.raises(ConfigurationError):
        noise_budget(Topology.build(12, 2, 32), [*sources, sources[0]], detector, 0.6)


@pytest.mark.parametrize("n", [1, 4, 32, 128])
def test_bypass_scales_fiber1_terms_by_n(n, sources, detector):
    t = Topology.build(12, 2, n, bypass_wdm_extra_db=0.0)
    thr = noise_budget(t, sources, detector, 0.6)
    byp = noise_budget(t.with_architecture("bypass"), sources, detector, 0.6)
    assert byp.d1 == pytest.approx(n * thr.d1, rel=1e-12)
    assert byp.d4 == pytest.approx(n * thr.d4, rel=1e-12)
    assert byp.q_signal == pytest.approx(n * thr.q_signal, rel=1e-12)
    assert (byp.d0, byp.d2, byp.d3) == (thr.d0, thr.d2, thr.d3)


@pytest.mark.parametrize("arch", ["through", "bypass"])
@pytest.mark.parametrize("l1, l2, n", [(12, 2, 32), (20, 2, 4), (12, 12, 128)])
def test_budget_matches_integrated_oracle(arch, l1, l2, n, sources, detector):
    b = noise_budget(Topology.build(l1, l2, n, arch), sources, detector, 0.6)
    ref = budget_by_integration(
        l1, l2, n, arch == "bypass",
        p_down_w=dbm_to_watts(3.0), p_up_w=dbm_to_watts(0.5), rho=5e-12,
    )
    for name, expected in ref.items():
        assert getattr(b, name) == pytest.approx(expected, rel=1e-6), name


def test_budget_linear_in_launch_power(detector):
    t = Topology.build(15, 2, 16)
    base = noise_budget(t, [ClassicalSource(1490, 1e-3), ClassicalSource(1310, 1e-3)], detector, 0.6)
    down2 = noise_budget(t, [ClassicalSource(1490, 2e-3), ClassicalSource(1310, 1e-3)], detector, 0.6)
    up3 = noise_budget(t, [ClassicalSource(1490, 1e-3), ClassicalSource(1310, 3e-3)], detector, 0.6)
    assert down2.d1 == pytest.approx(2 * base.d1, rel=1e-12)
    assert down2.d2 == pytest.approx(2 * base.d2, rel=1e-12)
    assert down2.d3 == pytest.approx(base.d3, rel=1e-12)
    assert up3.d3 == pytest.approx(3 * base.d3, rel=1e-12)
    assert up3.d4 == pytest.approx(3 * base.d4, rel=1e-12)
    assert up3.d1 == pytest.approx(base.d1, rel=1e-12)


def test_duty_factor_scales_pump(detector):
    t = Topology.build(12, 2, 8)
    full = noise_budget(t, [ClassicalSource(1490, 1e-3), ClassicalSource(1310, 1e-3)], detector, 0.6)
    half = noise_budget(t, [ClassicalSource(1490, 1e-3), ClassicalSource(1310, 1e-3, duty_factor=0.5)],
                        detector, 0.6)
    assert half.d3 == pytest.approx(0.5 * full.d3, rel=1e-12)
    assert half.d1 == full.d1
