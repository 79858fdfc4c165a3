import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from gponqkd.analysis import (
    calibrate_ratio,
    k_from_ratio,
    multiplier_k,
    noise_ratio,
    snr_bypass,
    snr_report,
    snr_through,
)
from gponqkd.errors import DegenerateInputError, InvalidQuantityError, OutOfModelError
from gponqkd.noise import NoiseBudget, noise_budget
from gponqkd.topology import Architecture, Topology


def budget(q, d0, d1, d2, d3, d4, arch=None):
    return NoiseBudget(d0=d0, d1=d1, d2=d2, d3=d3, d4=d4, q_signal=q, architecture=arch)


def test_snr_through_examples():
    assert snr_through(budget(100, 20, 20, 20, 20, 20)) == 1.0
    assert snr_through(budget(0, 1, 1, 1, 1, 1)) == 0.0
    assert snr_through(budget(7, 1, 1, 1, 1, 1)) == pytest.approx(1.4, rel=1e-15)
    with pytest.raises(DegenerateInputError):
        snr_through(budget(1, 0, 0, 0, 0, 0))


def test_snr_bypass_examples():
    b = budget(1, 1, 1, 1, 1, 1)
    assert snr_bypass(b, 1) == snr_through(b)
    assert snr_bypass(b, 2) == pytest.approx(2 / 7, rel=1e-15)
    clean = budget(3, 2, 0, 1, 4, 0)
    for n in (1, 3, 64):
        assert snr_bypass(clean, n) == pytest.approx(n * snr_through(clean), rel=1e-15)
    with pytest.raises(DegenerateInputError):
        snr_bypass(budget(1, 0, 0, 0, 0, 0), 4)


def test_snr_bypass_refuses_bypass_budget():
    with pytest.raises(InvalidQuantityError):
        snr_bypass(budget(1, 1, 1, 1, 1, 1, Architecture.BYPASS), 4)


def test_multiplier_examples():
    assert multiplier_k(budget(1, 1, 1, 1, 1, 1), 2) == pytest.approx(10 / 7, rel=1e-15)
    assert multiplier_k(budget(1, 3, 0, 2, 5, 0), 37) == 37.0
    assert multiplier_k(budget(1, 0, 2, 0, 0, 9), 37) == 1.0


def test_k_from_ratio_examples():
    assert k_from_ratio(0, 16) == 16.0
    assert k_from_ratio(math.inf, 16) == 1.0
    assert k_from_ratio(1e15, 16) == pytest.approx(1.0, rel=1e-12)
    assert k_from_ratio(1, 4) == pytest.approx(1.6, rel=1e-15)
    with pytest.raises(InvalidQuantityError):
        k_from_ratio(-0.1, 4)


def test_calibrate_examples():
    assert calibrate_ratio(4, 4) == 0.0
    assert calibrate_ratio(2.09, 4) == pytest.approx(1.91 / 4.36, rel=1e-12)
    assert calibrate_ratio(2.09, 4) == pytest.approx(0.43807, abs=5e-6)
    assert calibrate_ratio(34.73, 128) == pytest.approx(0.021603, abs=5e-7)
    assert calibrate_ratio(24.04, 32) == pytest.approx(0.010796, abs=5e-7)


@pytest.mark.parametrize("k", [1.0, 0.5, 4.01, math.nan])
def test_calibrate_rejects_out_of_model(k):
    with pytest.raises(OutOfModelError):
        calibrate_ratio(k, 4)


def test_noise_ratio():
    assert noise_ratio(budget(1, 1, 2, 1, 1, 3)) == pytest.approx(5 / 3)
    assert noise_ratio(budget(1, 0, 2, 0, 0, 0)) == math.inf


rate = st.floats(1e-6, 1e6)
ratio = st.integers(1, 1024)


@given(rate, rate, rate, rate, rate, rate, ratio)
def test_k_is_snr_ratio(q, d0, d1, d2, d3, d4, n):
    b = budget(q, d0, d1, d2, d3, d4)
    assert multiplier_k(b, n) == pytest.approx(snr_bypass(b, n) / snr_through(b), rel=1e-12)
    rep = snr_report(b, n)
    assert rep.k == pytest.approx(rep.snr_bypass / rep.snr_through, rel=1e-12)
    assert rep.k == pytest.approx(k_from_ratio(rep.ratio, n), rel=1e-12)


@given(rate, rate, rate, rate, rate, ratio)
def test_k_bounds(d0, d1, d2, d3, d4, n):
    k = multiplier_k(budget(1, d0, d1, d2, d3, d4), n)
    assert 1.0 <= k <= n


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), ratio)
def test_k_equality_cases(fixed, scaled, n):
    assert multiplier_k(budget(1, fixed, 0, 0, 0, 0), n) == n
    assert multiplier_k(budget(1, 0, scaled, 0, 0, 0), n) == 1.0
    if n > 1:
        assert 1.0 < multiplier_k(budget(1, fixed, scaled, 0, 0, 0), n) < n


@given(st.floats(1e-6, 1e6), ratio)
def test_calibration_round_trip(r, n):
    assume(n > 1)
    k = k_from_ratio(r, n)
    assume(k > 1)
    assert calibrate_ratio(k, n) == pytest.approx(r, rel=1e-9)


@given(st.floats(1e-3, 1e3))
def test_k_decreasing_in_r_increasing_in_n(r):
    ks = [k_from_ratio(r, n) for n in (2, 4, 8, 16, 1024, 2**20)]
    assert all(a < b for a, b in zip(ks, ks[1:]))
    assert ks[-1] < (1 + r) / r
    assert k_from_ratio(r, 2**40) == pytest.approx((1 + r) / r, rel=1e-9)
    assert k_from_ratio(r * 1.5, 16) < k_from_ratio(r, 16)


@pytest.mark.parametrize("n", [4, 32, 128])
def test_multiplier_matches_native_bypass_budget(n, sources, detector):
    t = Topology.build(12, 2, n, bypass_wdm_extra_db=0.0)
    thr = noise_budget(t, sources, detector, 0.6)
    byp = noise_budget(t.with_architecture("bypass"), sources, detector, 0.6)
    assert snr_through(byp) == pytest.approx(snr_bypass(thr, n), rel=1e-12)
    assert snr_through(byp) / snr_through(thr) == pytest.approx(multiplier_k(thr, n), rel=1e-12)
