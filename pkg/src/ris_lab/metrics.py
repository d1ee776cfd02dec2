"""Effective gains, SINR/rate metrics, per-transmitter scores, outage.

EffectiveGains keeps the K x K matrix of effective channel coefficients
e[j, i] = sum_s sum_m g_m^{(s,i)} exp(j*theta_m^(s)) h_m^{(j,s)} + hd[j, i]
together with per-(surface, element) cross products so a single-element
phase change costs O(K^2) instead of O(K^2 M).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, CsiView
from .model import PhaseConfig, RadioParams

# full recompute cadence; keeps incremental drift far below the 1e-9 contract
_RESYNC_EVERY = 4096


def _phase_table(n_levels: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n_levels) / n_levels)


class EffectiveGains:
    """Mutable evaluation workspace for one channel realization.

    Surfaces are indexed in channel order; levels[s] holds the current
    integer phase levels of surface s.
    """

    def __init__(self, hd: np.ndarray, incident: list, reflective: list,
                 configs: list[PhaseConfig]):
        if len(incident) != len(reflective) or len(incident) != len(configs):
            raise ValueError("one config per surface required")
        self.hd = np.asarray(hd, dtype=complex)
        self.k = self.hd.shape[0]
        self.n_levels = configs[0].n_levels if configs else 1
        self.table = _phase_table(self.n_levels)
        self.h = [np.asarray(h, dtype=complex) for h in incident]
        self.g = [np.asarray(g, dtype=complex) for g in reflective]
        # w[s][j, i, m] = h[s][j, m] * g[s][i, m]
        self.w = [np.einsum("jm,im->jim", h, g) for h, g in zip(self.h, self.g)]
        self.levels = [np.array(c.levels, dtype=np.int64) for c in configs]
        for s, c in enumerate(configs):
            if c.n_levels != self.n_levels:
                raise ValueError("all surfaces must share one phase resolution")
            if len(c.levels) != self.h[s].shape[1]:
                raise ValueError(f"config length mismatch on surface {s}")
        self._updates = 0
        self.e = self._full_e()

    def _full_e(self) -> np.ndarray:
        e = self.hd.astype(complex).copy()
        for s in range(len(self.h)):
            p = self.table[self.levels[s]]
            e += (self.h[s] * p[None, :]) @ self.g[s].T
        return e

    def recompute(self) -> np.ndarray:
        """Rebuild e from scratch (reference path for drift checks)."""
        return self._full_e()

    def update_one_element(self, s: int, m: int, old_level: int, new_level: int) -> "EffectiveGains":
        """Apply a single-element move; O(K^2)."""
        if self.levels[s][m] != old_level:
            raise ValueError(f"stale old_level {old_level} for surface {s} element {m}")
        delta = self.table[new_level] - self.table[old_level]
        self.e += self.w[s][:, :, m] * delta
        self.levels[s][m] = new_level
        self._updates += 1
        if self._updates >= _RESYNC_EVERY:
            self.e = self._full_e()
            self._updates = 0
        return self

    def set_levels(self, s: int, levels: np.ndarray) -> None:
        """Replace surface s's whole configuration."""
        levels = np.asarray(levels, dtype=np.int64)
        old_p = self.table[self.levels[s]]
        new_p = self.table[levels]
        self.e += (self.h[s] * (new_p - old_p)[None, :]) @ self.g[s].T
        self.levels[s] = levels.copy()
        self._updates += 1
        if self._updates >= _RESYNC_EVERY:
            self.e = self._full_e()
            self._updates = 0

    def moved_e_batch(self, s: int, moves: list[tuple[int, int]]) -> np.ndarray:
        """e matrices for single-element candidate moves on surface s.

        Returns (C, K, K) where row c applies moves[c] = (element, level)
        to the current configuration.
        """
        idx = np.fromiter((mv[0] for mv in moves), dtype=np.int64, count=len(moves))
        lvl = np.fromiter((mv[1] for mv in moves), dtype=np.int64, count=len(moves))
        delta = self.table[lvl] - self.table[self.levels[s][idx]]
        # (K, K, C) -> (C, K, K)
        return self.e[None, :, :] + np.transpose(self.w[s][:, :, idx] * delta[None, None, :], (2, 0, 1))

    def config_e_batch(self, s: int, level_rows: np.ndarray) -> np.ndarray:
        """e matrices for whole replacement configs of surface s, (C, K, K)."""
        p_now = self.table[self.levels[s]]
        p_new = self.table[np.asarray(level_rows, dtype=np.int64)]  # (C, M)
        return self.e[None, :, :] + np.einsum("cm,jim->cji", p_new - p_now[None, :], self.w[s])


def effective_centralized(channels: ChannelSet, config: PhaseConfig) -> EffectiveGains:
    if channels.topology.mode != "centralized":
        raise ValueError("effective_centralized needs a centralized channel set")
    return EffectiveGains(channels.direct, [channels.incident[0]], [channels.reflective[0]], [config])


def effective_distributed(channels: ChannelSet, configs: list[PhaseConfig]) -> EffectiveGains:
    if channels.topology.mode != "distributed":
        raise ValueError("effective_distributed needs a distributed channel set")
    return EffectiveGains(channels.direct, list(channels.incident), list(channels.reflective), list(configs))


def update_one_element(gains: EffectiveGains, s: int, m: int, old_level: int, new_level: int) -> EffectiveGains:
    return gains.update_one_element(s, m, old_level, new_level)


@dataclass(frozen=True)
class RateReport:
    sinr: np.ndarray
    rates: np.ndarray

    @property
    def sum_rate(self) -> float:
        return float(np.sum(self.rates))

    @property
    def min_rate(self) -> float:
        return float(np.min(self.rates))


def rates_from_e(e: np.ndarray, radio: RadioParams) -> RateReport:
    p = radio.tx_powers_watts
    sigma2 = radio.noise_watts
    power = p[:, None] * np.abs(e) ** 2  # [j, i]
    signal = np.diag(power)
    interference = power.sum(axis=0) - signal
    sinr = signal / (sigma2 + interference)
    return RateReport(sinr=sinr, rates=np.log2(1.0 + sinr))


def rates(gains: EffectiveGains, radio: RadioParams) -> RateReport:
    """Per-user SINRs and achievable rates from the current gains."""
    return rates_from_e(gains.e, radio)


def rates_batch(e_batch: np.ndarray, radio: RadioParams) -> tuple[np.ndarray, np.ndarray]:
    """(sum_rate, min_rate) arrays for a (C, K, K) batch of e matrices."""
    p = radio.tx_powers_watts
    sigma2 = radio.noise_watts
    power = p[None, :, None] * np.abs(e_batch) ** 2
    signal = np.diagonal(power, axis1=1, axis2=2)
    interference = power.sum(axis=1) - signal
    r = np.log2(1.0 + signal / (sigma2 + interference))
    return r.sum(axis=1), r.min(axis=1)


class ScoreWorkspace:
    """Local objective of transmitter `tx` in a distributed network.

    Uses only Tx_tx's own links: its surface's incident channel from
    itself, that surface's reflective channels to every receiver, and its
    direct channels to every receiver.  b[j] is the coefficient Tx_tx's
    signal reaches Rx_j with through its own surface.
    """

    def __init__(self, view: CsiView, radio: RadioParams, tx: int, config: PhaseConfig):
        k = view.k
        self.tx = tx
        self.radio = radio
        self.n_levels = config.n_levels
        self.table = _phase_table(self.n_levels)
        h_own = view.incident(tx, tx)  # (M,)
        g = np.stack([view.reflective(tx, i) for i in range(k)])  # (K, M)
        self.w = g * h_own[None, :]  # (K, M)
        self.hd_row = view.direct_row(tx).astype(complex)  # (K,)
        self.levels = np.array(config.levels, dtype=np.int64)
        if len(self.levels) != self.w.shape[1]:
            raise ValueError("config length mismatch")
        self._updates = 0
        self.b = self._full_b()

    def _full_b(self) -> np.ndarray:
        return self.w @ self.table[self.levels] + self.hd_row

    def recompute(self) -> np.ndarray:
        return self._full_b()

    def update_one_element(self, m: int, new_level: int) -> None:
        delta = self.table[new_level] - self.table[self.levels[m]]
        self.b += self.w[:, m] * delta
        self.levels[m] = new_level
        self._updates += 1
        if self._updates >= _RESYNC_EVERY:
            self.b = self._full_b()
            self._updates = 0

    def set_levels(self, levels: np.ndarray) -> None:
        levels = np.asarray(levels, dtype=np.int64)
        self.b += self.w @ (self.table[levels] - self.table[self.levels])
        self.levels = levels.copy()
        self._updates += 1
        if self._updates >= _RESYNC_EVERY:
            self.b = self._full_b()
            self._updates = 0

    def moved_b_batch(self, moves: list[tuple[int, int]]) -> np.ndarray:
        idx = np.fromiter((mv[0] for mv in moves), dtype=np.int64, count=len(moves))
        lvl = np.fromiter((mv[1] for mv in moves), dtype=np.int64, count=len(moves))
        delta = self.table[lvl] - self.table[self.levels[idx]]
        return self.b[None, :] + (self.w[:, idx] * delta[None, :]).T

    def config_b_batch(self, level_rows: np.ndarray) -> np.ndarray:
        p_now = self.table[self.levels]
        p_new = self.table[np.asarray(level_rows, dtype=np.int64)]
        return self.b[None, :] + (p_new - p_now[None, :]) @ self.w.T

    def score_of_b(self, b, mode: str = "score"):
        """Score for one b vector (K,) or a batch (C, K)."""
        b = np.asarray(b)
        batch = b.ndim == 2
        p_i = float(self.radio.tx_powers_watts[self.tx])
        sigma2 = self.radio.noise_watts
        power = p_i * np.abs(b) ** 2
        own = power[..., self.tx]
        cross = power.sum(axis=-1) - own
        if mode == "score":
            den = sigma2 + cross
        elif mode == "snr_only":
            den = sigma2
        elif mode == "sir_only":
            den = cross
        else:
            raise ValueError(f"unknown score mode {mode!r}")
        return own / den if batch else float(own / den)

    def value(self, mode: str = "score") -> float:
        return self.score_of_b(self.b, mode)


def score(view: CsiView, radio: RadioParams, tx: int, config: PhaseConfig,
          mode: str = "score") -> float:
    """Local SINR-like score of transmitter tx under its own surface config.

    The denominator uses tx's own power on the interference it radiates
    toward other receivers (mode "score"); "snr_only" drops interference,
    "sir_only" drops noise.
    """
    return ScoreWorkspace(view, radio, tx, config).value(mode)


def outage_capacity(samples, gamma: float) -> float:
    """Largest sample value R0 with at least ceil((1-gamma)*n) samples >= R0.

    Empirical lower quantile without interpolation; gamma in (0, 1).
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must be in (0, 1)")
    arr = np.sort(np.asarray(samples, dtype=float))
    n = arr.size
    if n == 0:
        raise ValueError("need at least one sample")
    need = math.ceil((1.0 - gamma) * n)
    if need <= 0:
        return float(arr[-1])
    return float(arr[n - need])
