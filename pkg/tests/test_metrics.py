"""Effective gain bookkeeping, SINR/rate formulas, local scores, outage."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ris_lab.channel import FadingSpec, generate, perfect_view, restrict
from ris_lab.metrics import (
    EffectiveGains,
    RateReport,
    ScoreWorkspace,
    effective_centralized,
    effective_distributed,
    outage_capacity,
    rates,
    rates_batch,
    rates_from_e,
    score,
)
from ris_lab.model import PhaseConfig, Position, RadioParams, SurfaceSpec, Topology


def _hand_gains(seed=0, k=2, m=3, n=4):
    rng = np.random.default_rng(seed)
    hd = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    h = rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m))
    g = rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m))
    cfg = PhaseConfig.from_array(rng.integers(0, n, size=m), n)
    return hd, h, g, cfg


def _loop_e(hd, h, g, cfg):
    """Reference effective matrix computed with explicit loops."""
    k, m = h.shape
    phasors = cfg.unit_phasors()
    e = np.array(hd, dtype=complex, copy=True)
    for j in range(k):
        for i in range(k):
            for mm in range(m):
                e[j, i] += h[j, mm] * phasors[mm] * g[i, mm]
    return e


def test_effective_gains_matches_loop_reference():
    hd, h, g, cfg = _hand_gains()
    gains = EffectiveGains(hd, [h], [g], [cfg])
    np.testing.assert_allclose(gains.e, _loop_e(hd, h, g, cfg), rtol=1e-12)


def test_effective_gains_two_surfaces():
    hd, h1, g1, c1 = _hand_gains(seed=1)
    _, h2, g2, c2 = _hand_gains(seed=2)
    gains = EffectiveGains(hd, [h1, h2], [g1, g2], [c1, c2])
    expect = _loop_e(hd, h1, g1, c1) + _loop_e(np.zeros_like(hd), h2, g2, c2)
    np.testing.assert_allclose(gains.e, expect, rtol=1e-12)


def test_incremental_update_tracks_recompute():
    hd, h, g, cfg = _hand_gains(m=6, n=8)
    gains = EffectiveGains(hd, [h], [g], [cfg])
    rng = np.random.default_rng(42)
    for _ in range(200):
        m = int(rng.integers(0, 6))
        new = int(rng.integers(0, 8))
        gains.update_one_element(0, m, int(gains.levels[0][m]), new)
    np.testing.assert_allclose(gains.e, gains.recompute(), rtol=0, atol=1e-12)


def test_incremental_drift_stays_below_contract():
    """After many thousands of moves the running e may not drift past 1e-9."""
    hd, h, g, cfg = _hand_gains(m=4, n=4)
    gains = EffectiveGains(hd, [h], [g], [cfg])
    rng = np.random.default_rng(7)
    for _ in range(10000):
        m = int(rng.integers(0, 4))
        new = int(rng.integers(0, 4))
        gains.update_one_element(0, m, int(gains.levels[0][m]), new)
    assert np.max(np.abs(gains.e - gains.recompute())) < 1e-9


def test_stale_old_level_rejected():
    hd, h, g, cfg = _hand_gains()
    gains = EffectiveGains(hd, [h], [g], [cfg])
    wrong = (gains.levels[0][0] + 1) % 4
    with pytest.raises(ValueError):
        gains.update_one_element(0, 0, int(wrong), 0)


def test_set_levels_matches_fresh_build():
    hd, h, g, cfg = _hand_gains(m=5)
    gains = EffectiveGains(hd, [h], [g], [cfg])
    new = np.array([3, 1, 0, 2, 2])
    gains.set_levels(0, new)
    fresh = EffectiveGains(hd, [h], [g], [PhaseConfig.from_array(new, 4)])
    np.testing.assert_allclose(gains.e, fresh.e, atol=1e-12)


def test_moved_e_batch_matches_single_moves():
    hd, h, g, cfg = _hand_gains(m=5, n=8)
    gains = EffectiveGains(hd, [h], [g], [cfg])
    moves = [(0, 3), (2, 7), (4, 1)]
    batch = gains.moved_e_batch(0, moves)
    for row, (m, lvl) in zip(batch, moves):
        trial = EffectiveGains(hd, [h], [g], [cfg])
        trial.update_one_element(0, m, int(cfg.levels[m]), lvl)
        np.testing.assert_allclose(row, trial.e, atol=1e-12)


def test_config_e_batch_matches_fresh_builds():
    hd, h, g, cfg = _hand_gains(m=4, n=4)
    gains = EffectiveGains(hd, [h], [g], [cfg])
    rows = np.array([[0, 0, 0, 0], [3, 2, 1, 0], [1, 1, 1, 1]])
    batch = gains.config_e_batch(0, rows)
    for row_e, lv in zip(batch, rows):
        fresh = EffectiveGains(hd, [h], [g], [PhaseConfig.from_array(lv, 4)])
        np.testing.assert_allclose(row_e, fresh.e, atol=1e-12)


def test_effective_gains_validation():
    hd, h, g, cfg = _hand_gains()
    with pytest.raises(ValueError):
        EffectiveGains(hd, [h], [g], [cfg, cfg])
    with pytest.raises(ValueError):
        EffectiveGains(hd, [h], [g], [PhaseConfig.zeros(2, 4)])
    with pytest.raises(ValueError):
        EffectiveGains(hd, [h, h], [g, g], [cfg, PhaseConfig.zeros(3, 8)])


def test_rates_from_e_hand_oracle():
    e = np.array([[1.0 + 0j, 0.5j], [0.25, 2.0 - 1.0j]])
    radio = RadioParams(tx_powers_dbm=(20.0, 10.0), noise_dbm=-80.0)
    report = rates_from_e(e, radio)
    p = [0.1, 0.01]
    sigma2 = 1e-11
    for i in range(2):
        sig = p[i] * abs(e[i, i]) ** 2
        interf = sum(p[j] * abs(e[j, i]) ** 2 for j in range(2) if j != i)
        sinr = sig / (sigma2 + interf)
        assert report.sinr[i] == pytest.approx(sinr, rel=1e-12)
        assert report.rates[i] == pytest.approx(math.log2(1.0 + sinr), rel=1e-12)
    assert report.sum_rate == pytest.approx(float(np.sum(report.rates)))
    assert report.min_rate == pytest.approx(float(np.min(report.rates)))


def test_rates_uses_current_gains():
    hd, h, g, cfg = _hand_gains()
    gains = EffectiveGains(hd, [h], [g], [cfg])
    radio = RadioParams(tx_powers_dbm=(20.0, 20.0))
    report = rates(gains, radio)
    np.testing.assert_allclose(report.sinr, rates_from_e(gains.e, radio).sinr)


def test_rates_batch_matches_per_row():
    rng = np.random.default_rng(5)
    batch = rng.standard_normal((6, 3, 3)) + 1j * rng.standard_normal((6, 3, 3))
    radio = RadioParams(tx_powers_dbm=(20.0, 15.0, 10.0))
    sums, mins = rates_batch(batch, radio)
    for c in range(6):
        rep = rates_from_e(batch[c], radio)
        assert sums[c] == pytest.approx(rep.sum_rate, rel=1e-12)
        assert mins[c] == pytest.approx(rep.min_rate, rel=1e-12)


def _distributed_setup(k=2, m=3, seed=11):
    tx = tuple(Position(0.0, 10.0 * j) for j in range(k))
    rx = tuple(Position(40.0, 10.0 * i) for i in range(k))
    surfaces = tuple(SurfaceSpec(center=Position(5.0, 10.0 * s + 2.0), element_count=m) for s in range(k))
    topo = Topology(tx=tx, rx=rx, surfaces=surfaces, mode="distributed")
    radio = RadioParams(tx_powers_dbm=(20.0,) * k)
    ch = generate(topo, radio, FadingSpec(), seed=seed)
    return ch, radio


def test_score_hand_oracle():
    ch, radio = _distributed_setup()
    tx = 0
    cfg = PhaseConfig.from_array([1, 3, 0], 4)
    local = restrict(perfect_view(ch), tx)
    got = score(local, radio, tx, cfg)

    # explicit-loop reference from the raw coefficients
    phasors = cfg.unit_phasors()
    k = ch.k
    b = np.zeros(k, dtype=complex)
    for j in range(k):
        b[j] = ch.direct[tx, j]
        for m in range(3):
            b[j] += ch.incident[tx][tx, m] * phasors[m] * ch.reflective[tx][j, m]
    p = radio.tx_powers_watts[tx]
    own = p * abs(b[tx]) ** 2
    cross = sum(p * abs(b[j]) ** 2 for j in range(k) if j != tx)
    assert got == pytest.approx(own / (radio.noise_watts + cross), rel=1e-12)


def test_score_modes():
    ch, radio = _distributed_setup()
    cfg = PhaseConfig.zeros(3, 4)
    local = restrict(perfect_view(ch), 1)
    ws = ScoreWorkspace(local, radio, 1, cfg)
    p = radio.tx_powers_watts[1]
    power = p * np.abs(ws.b) ** 2
    own = power[1]
    cross = power.sum() - own
    assert ws.value("score") == pytest.approx(own / (radio.noise_watts + cross))
    assert ws.value("snr_only") == pytest.approx(own / radio.noise_watts)
    assert ws.value("sir_only") == pytest.approx(own / cross)
    with pytest.raises(ValueError):
        ws.value("other")


def test_score_workspace_incremental_and_batches():
    ch, radio = _distributed_setup(m=5)
    cfg = PhaseConfig.zeros(5, 4)
    ws = ScoreWorkspace(restrict(perfect_view(ch), 0), radio, 0, cfg)
    rng = np.random.default_rng(3)
    for _ in range(100):
        ws.update_one_element(int(rng.integers(0, 5)), int(rng.integers(0, 4)))
    np.testing.assert_allclose(ws.b, ws.recompute(), atol=1e-12)

    moves = [(0, 1), (4, 3)]
    batch = ws.moved_b_batch(moves)
    for row, (m, lvl) in zip(batch, moves):
        probe = ScoreWorkspace(
            restrict(perfect_view(ch), 0), radio, 0, PhaseConfig.from_array(ws.levels, 4)
        )
        probe.update_one_element(m, lvl)
        np.testing.assert_allclose(row, probe.b, atol=1e-12)

    rows = np.array([[0, 1, 2, 3, 0], [3, 3, 3, 3, 3]])
    cb = ws.config_b_batch(rows)
    for row, lv in zip(cb, rows):
        probe = ScoreWorkspace(restrict(perfect_view(ch), 0), radio, 0, PhaseConfig.from_array(lv, 4))
        np.testing.assert_allclose(row, probe.b, atol=1e-12)


def test_effective_builders_check_mode():
    ch, _ = _distributed_setup()
    with pytest.raises(ValueError):
        effective_centralized(ch, PhaseConfig.zeros(3, 4))
    effective_distributed(ch, [PhaseConfig.zeros(3, 4), PhaseConfig.zeros(3, 4)])

    tx = (Position(0, 0),)
    rx = (Position(10, 0),)
    topo = Topology(tx=tx, rx=rx, surfaces=(SurfaceSpec(center=Position(5, 5), element_count=3),), mode="centralized")
    ch_c = generate(topo, RadioParams(tx_powers_dbm=(20.0,)), FadingSpec(), seed=1)
    with pytest.raises(ValueError):
        effective_distributed(ch_c, [PhaseConfig.zeros(3, 4)])
    effective_centralized(ch_c, PhaseConfig.zeros(3, 4))


def test_outage_capacity_enumerated():
    samples = list(range(1, 11))  # 1..10
    # need = ceil(0.9 * 10) = 9 -> 9 samples >= result -> sorted[1] = 2
    assert outage_capacity(samples, 0.1) == 2.0
    # need = ceil(0.5 * 10) = 5 -> sorted[5] = 6
    assert outage_capacity(samples, 0.5) == 6.0
    # need = ceil(0.05 * 10) = 1 -> max
    assert outage_capacity(samples, 0.95) == 10.0
    assert outage_capacity([3.5], 0.1) == 3.5
    with pytest.raises(ValueError):
        outage_capacity(samples, 0.0)
    with pytest.raises(ValueError):
        outage_capacity(samples, 1.0)
    with pytest.raises(ValueError):
        outage_capacity([], 0.1)


@given(
    st.lists(st.floats(min_value=-100, max_value=100, allow_nan=False), min_size=1, max_size=60),
    st.floats(min_value=0.01, max_value=0.99),
)
def test_outage_capacity_quantile_property(samples, gamma):
    r0 = outage_capacity(samples, gamma)
    arr = np.asarray(samples)
    assert r0 in arr
    frac = np.mean(arr >= r0)
    assert frac >= (1.0 - gamma) - 1e-12
    # the next strictly larger sample value would violate the guarantee
    larger = arr[arr > r0]
    if larger.size:
        nxt = float(np.min(larger))
        assert np.mean(arr >= nxt) < math.ceil((1.0 - gamma) * arr.size) / arr.size + 1e-12


def test_rate_report_fields():
    rep = RateReport(sinr=np.array([1.0, 3.0]), rates=np.array([1.0, 2.0]))
    assert rep.sum_rate == 3.0
    assert rep.min_rate == 1.0
