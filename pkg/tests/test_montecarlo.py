import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import GAMMA_TH, link, relay
from owc_relay.errors import DomainError
from owc_relay.geometry import PointingGeometry, pointing_params
from owc_relay.montecarlo import (SimSpec, combine, coupled_draws, draw_hop_snrs, ks_statistic, simulate,
                                  wilson_interval)
from owc_relay.relay import RelayConfig, e2e_cdf_bound, outage_exact

MID = relay(1.0)


def test_wilson_interval_contains_estimate():
    lo, hi = wilson_interval(30, 1000)
    assert lo < 0.03 < hi
    assert wilson_interval(0, 1000)[0] == 0.0
    assert wilson_interval(1000, 1000)[1] == 1.0
    with pytest.raises(DomainError):
        wilson_interval(0, 0)


@given(st.integers(1, 10 ** 6), st.floats(0.0, 1.0))
def test_wilson_bounds_in_unit_interval(n, frac):
    k = int(frac * n)
    lo, hi = wilson_interval(k, n)
    assert 0.0 <= lo <= k / n <= hi <= 1.0


def test_wilson_matches_closed_form_value():
    # textbook example: 8 of 10, z = 1.96 gives (0.4902, 0.9433)
    lo, hi = wilson_interval(8, 10, z=1.96)
    assert lo == pytest.approx(0.4902, abs=1e-4)
    assert hi == pytest.approx(0.9433, abs=1e-4)


def test_chunking_is_bit_identical():
    base = dict(trials=20_000, master_seed=77, gamma_th=GAMMA_TH)
    a = simulate(SimSpec(chunk_size=1000, **base), MID)
    b = simulate(SimSpec(chunk_size=10_000, **base), MID)
    c = simulate(SimSpec(chunk_size=1000, workers=4, **base), MID)
    assert a == b == c


def test_chunk_sizes_from_contract():
    base = dict(trials=100_000, master_seed=5, gamma_th=GAMMA_TH, mode="relay_min")
    assert simulate(SimSpec(chunk_size=1000, **base), MID) == simulate(SimSpec(chunk_size=100_000, **base), MID)


def test_prefix_stability():
    # a trial's draws depend only on (seed, trial index)
    short = draw_hop_snrs(MID, 3, 4, 500)
    full = draw_hop_snrs(MID, 3, 4, 1000)
    for s, f in zip(short, full):
        assert np.array_equal(s, f[:500])


def test_seed_changes_result():
    spec = dict(trials=10_000, gamma_th=GAMMA_TH)
    assert simulate(SimSpec(master_seed=1, **spec), MID) != simulate(SimSpec(master_seed=2, **spec), MID)


def test_trial_wise_ordering():
    draws = coupled_draws(MID, 50_000, 9)
    assert np.all(draws["relay_true"] <= draws["relay_harmonic"])
    assert np.all(draws["relay_harmonic"] <= draws["relay_min"])


@pytest.mark.parametrize("gth_db", [-5.0, 6.0, 20.0, 40.0])
def test_outage_ordering_by_mode(gth_db):
    spec = dict(trials=20_000, master_seed=4, gamma_th=10 ** (gth_db / 10))
    p = {m: simulate(SimSpec(mode=m, **spec), MID).outage_hat
         for m in ("relay_true", "relay_harmonic", "relay_min")}
    assert p["relay_true"] >= p["relay_harmonic"] >= p["relay_min"]


@pytest.mark.parametrize("d_r", [0.5, 0.35])
def test_min_mode_matches_bound_cdf(d_r):
    cfg = relay(1.0, d_r)
    res = simulate(SimSpec(trials=1_000_000, mode="relay_min", gamma_th=GAMMA_TH), cfg)
    assert abs(res.outage_hat - e2e_cdf_bound(GAMMA_TH, cfg)) <= 3 * res.outage_half_width


def test_harmonic_mode_matches_quadrature():
    res = simulate(SimSpec(trials=400_000, mode="relay_harmonic", gamma_th=GAMMA_TH), MID)
    assert abs(res.outage_hat - outage_exact(GAMMA_TH, MID, "harmonic")) <= 3 * res.outage_half_width


def test_direct_mode_matches_cdf():
    ln = link(1.6)
    from owc_relay.channel import snr_cdf

    res = simulate(SimSpec(trials=400_000, mode="direct", gamma_th=GAMMA_TH), ln)
    assert abs(res.outage_hat - snr_cdf(GAMMA_TH, ln)) <= 3 * res.outage_half_width


def test_half_width_shrinks_with_trials():
    spec = dict(master_seed=8, gamma_th=GAMMA_TH, mode="relay_min")
    a = simulate(SimSpec(trials=100_000, **spec), MID).outage_half_width
    b = simulate(SimSpec(trials=200_000, **spec), MID).outage_half_width
    assert b / a == pytest.approx(1 / math.sqrt(2), rel=0.20)


def test_standard_errors_and_report():
    res = simulate(SimSpec(trials=5_000, gamma_th=GAMMA_TH), MID)
    assert res.avg_snr_se >= 0 and res.rate_se >= 0
    assert 0 <= res.outage_lo <= res.outage_hat <= res.outage_hi <= 1
    assert not res.ci_reliable
    rep = res.to_report()
    assert rep.method == "monte_carlo"
    assert any("indicative" in n for n in rep.notes)


def test_half_duplex_halves_rate():
    spec = SimSpec(trials=5_000, gamma_th=GAMMA_TH)
    half = RelayConfig(MID.hop1, MID.hop2, half_duplex_penalty=True)
    assert simulate(spec, half).rate_hat == pytest.approx(simulate(spec, MID).rate_hat / 2, rel=1e-15)


def test_pointing_in_metres_matches_normalised():
    pp = pointing_params(500.0, PointingGeometry())
    spec = SimSpec(trials=5_000, gamma_th=GAMMA_TH, mode="relay_min")
    a = simulate(spec, MID)
    b = simulate(spec, MID, pointing=(pp, pp))
    assert a.outage_hat == b.outage_hat
    assert a.avg_snr_hat == pytest.approx(b.avg_snr_hat, rel=1e-9)


def test_combine_modes():
    g1, g2 = np.array([1.0, 4.0]), np.array([3.0, 4.0])
    assert np.allclose(combine("relay_true", [g1, g2]), [3 / 5, 16 / 9])
    assert np.allclose(combine("relay_harmonic", [g1, g2]), [0.75, 2.0])
    assert np.allclose(combine("relay_min", [g1, g2]), [1.0, 4.0])
    with pytest.raises(DomainError):
        combine("other", [g1, g2])


def test_ks_statistic_on_known_sample():
    s = np.array([0.1, 0.4, 0.7])
    assert ks_statistic(s, s) == pytest.approx(max(1 / 3 - 0.1, 2 / 3 - 0.4, 1 - 0.7, 0.1, 0.4 - 1 / 3,
                                                   0.7 - 2 / 3))


@pytest.mark.parametrize("kwargs", [
    dict(trials=0), dict(master_seed=-1), dict(master_seed=2 ** 64), dict(chunk_size=1500),
    dict(mode="relay"), dict(gamma_th=0.0), dict(workers=0),
])
def test_spec_validation(kwargs):
    with pytest.raises(DomainError):
        SimSpec(**kwargs)


def test_mode_target_mismatch():
    with pytest.raises(DomainError):
        simulate(SimSpec(trials=1000, mode="direct"), MID)
    with pytest.raises(DomainError):
        simulate(SimSpec(trials=1000), link(1.0))


@given(st.lists(st.tuples(st.floats(1e-300, 1e300), st.floats(1e-300, 1e300)), min_size=1, max_size=50))
def test_combiner_ordering_is_exact(pairs):
    g1, g2 = (np.array(v) for v in zip(*pairs))
    true, harm, low = (combine(m, [g1, g2]) for m in ("relay_true", "relay_harmonic", "relay_min"))
    assert np.all(true <= harm) and np.all(harm <= low)
