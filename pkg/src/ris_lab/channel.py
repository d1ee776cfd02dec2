"""Channel generation, CSI corruption, and per-transmitter scope restriction.

Link naming (indices 0-based everywhere):
  direct[j, i]        Tx_j -> Rx_i scalar channel
  incident[s][j, m]   Tx_j -> element m of surface s
  reflective[s][i, m] element m of surface s -> Rx_i

Randomness is derived from one master seed through documented substreams:
the stream for a link is SeedSequence(master, spawn_key=(kind, s, a, b))
with kind 0=direct (a=j, b=i), 1=incident (a=j, b=0), 2=reflective
(a=0, b=i), 3=corruption noise (same sub-keying).  Substreams make draws
independent of generation order, so parallel trials and per-arm reuse
stay reproducible.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .model import PhaseConfig, Position, RadioParams, SurfaceSpec, Topology, path_gain

LINK_DIRECT = 0
LINK_INCIDENT = 1
LINK_REFLECTIVE = 2
LINK_NOISE = 3

NOISELESS = math.inf


class ScopeError(Exception):
    """Raised when a CSI view is asked for a coefficient outside its scope."""


@dataclass(frozen=True)
class FadingSpec:
    """Small-scale fading model selector.

    kind "los_rayleigh": deterministic LoS phasors on Tx->RIS (centralized
    mode; Rayleigh in distributed mode where a shared LoS is not assumed),
    Rayleigh elsewhere.  kind "rician": Rician mixing on Tx->RIS with
    linear factor kappa.  kind "nakagami": Nakagami-m magnitudes with
    uniform phases on all links; the direct-link distance is replaced by
    the cosine-law combination of the two surface legs at angle psi.
    """

    kind: str = "los_rayleigh"
    rician_kappa: float = 2.0
    nakagami_m_direct: float = 3.0
    nakagami_m_tx_ris: float = 1.5
    nakagami_m_ris_rx: float = 2.5
    nakagami_psi_deg: float = 86.0

    def __post_init__(self):
        if self.kind not in ("los_rayleigh", "rician", "nakagami"):
            raise ValueError(f"unknown fading kind {self.kind!r}")
        if self.rician_kappa < 0:
            raise ValueError("rician_kappa must be >= 0")


@dataclass(frozen=True)
class ChannelSet:
    """One realization of every link plus its second-order statistics.

    *_ms arrays hold per-coefficient mean-square values E|c|^2 (the
    generation power of each coefficient); incident_los[s] marks surfaces
    whose incident rows are deterministic phasors.
    """

    topology: Topology
    radio: RadioParams
    fading: FadingSpec
    direct: np.ndarray
    incident: tuple[np.ndarray, ...]
    reflective: tuple[np.ndarray, ...]
    direct_ms: np.ndarray
    incident_ms: tuple[np.ndarray, ...]
    reflective_ms: tuple[np.ndarray, ...]
    incident_los: tuple[bool, ...]

    @property
    def k(self) -> int:
        return self.direct.shape[0]

    @property
    def m_per_surface(self) -> tuple[int, ...]:
        return tuple(h.shape[1] for h in self.incident)


def _as_seedseq(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def child_seed(seed, *key: int) -> np.random.SeedSequence:
    """SeedSequence for one documented substream of a master seed."""
    base = _as_seedseq(seed)
    return np.random.SeedSequence(entropy=base.entropy, spawn_key=tuple(base.spawn_key) + key)


def substream(seed, *key: int) -> np.random.Generator:
    """Generator for one documented substream of a master seed."""
    return np.random.default_rng(child_seed(seed, *key))


def _complex_normal(rng: np.random.Generator, shape, var) -> np.ndarray:
    """Circular complex Gaussian with per-entry variance `var` (E|z|^2)."""
    scale = np.sqrt(np.asarray(var, dtype=float) / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def _nakagami(rng: np.random.Generator, m: float, omega, shape) -> np.ndarray:
    # |h|^2 ~ Gamma(shape=m, scale=omega/m) gives E|h|^2 = omega
    power = rng.gamma(m, np.asarray(omega, dtype=float) / m, size=shape)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=shape)
    return np.sqrt(power) * np.exp(1j * phase)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _cosine_law(d1: float, d2: float, psi_rad: float) -> float:
    return math.sqrt(d1 * d1 + d2 * d2 - 2.0 * d1 * d2 * math.cos(psi_rad))


def generate(topology: Topology, radio: RadioParams, fading: FadingSpec, seed) -> ChannelSet:
    """Draw one full channel realization.

    Identical (topology, radio, fading, seed) inputs give bit-identical
    outputs.  Per-link variances come from exact endpoint geometry
    (element positions for surface legs).
    """
    k = topology.k
    lam = radio.wavelength
    tx = topology.tx
    rx = topology.rx
    psi = math.radians(fading.nakagami_psi_deg)

    # direct links
    direct = np.zeros((k, k), dtype=complex)
    direct_ms = np.zeros((k, k))
    for j in range(k):
        for i in range(k):
            if fading.kind == "nakagami":
                ref = topology.surfaces[0] if topology.mode == "centralized" else topology.surfaces[j]
                d1 = tx[j].distance_to(ref.center)
                d2 = ref.center.distance_to(rx[i])
                d = _cosine_law(d1, d2, psi)
            else:
                d = tx[j].distance_to(rx[i])
            gain = path_gain(radio.c0_db, d, radio.alpha_direct)
            direct_ms[j, i] = gain
            rng = substream(seed, LINK_DIRECT, 0, j, i)
            if fading.kind == "nakagami":
                direct[j, i] = _nakagami(rng, fading.nakagami_m_direct, gain, None)
            else:
                direct[j, i] = _complex_normal(rng, None, gain)

    incident = []
    incident_ms = []
    incident_los = []
    reflective = []
    reflective_ms = []
    for s, surf in enumerate(topology.surfaces):
        m = surf.element_count
        elems = surf.element_positions(lam)

        h = np.zeros((k, m), dtype=complex)
        h_ms = np.zeros((k, m))
        los = False
        for j in range(k):
            d_m = np.hypot(elems[:, 0] - tx[j].x, elems[:, 1] - tx[j].y)
            gain = 10.0 ** (radio.c0_db / 10.0) * d_m ** (-radio.alpha_tx_ris)
            h_ms[j] = gain
            rng = substream(seed, LINK_INCIDENT, s, j, 0)
            if fading.kind == "los_rayleigh":
                if topology.mode == "centralized":
                    # deterministic LoS phasor per element
                    h[j] = np.sqrt(gain) * np.exp(-1j * 2.0 * np.pi * d_m / lam)
                    los = True
                else:
                    h[j] = _complex_normal(rng, m, gain)
            elif fading.kind == "rician":
                kap = fading.rician_kappa
                los_part = np.exp(-1j * 2.0 * np.pi * d_m / lam)
                scatter = _complex_normal(rng, m, 1.0)
                h[j] = np.sqrt(gain) * (
                    math.sqrt(kap / (kap + 1.0)) * los_part + math.sqrt(1.0 / (kap + 1.0)) * scatter
                )
            else:
                h[j] = _nakagami(rng, fading.nakagami_m_tx_ris, gain, m)
        incident.append(_freeze(h))
        incident_ms.append(_freeze(h_ms))
        incident_los.append(los)

        g = np.zeros((k, m), dtype=complex)
        g_ms = np.zeros((k, m))
        for i in range(k):
            d_m = np.hypot(elems[:, 0] - rx[i].x, elems[:, 1] - rx[i].y)
            gain = 10.0 ** (radio.c0_db / 10.0) * d_m ** (-radio.alpha_ris_rx)
            g_ms[i] = gain
            rng = substream(seed, LINK_REFLECTIVE, s, 0, i)
            if fading.kind == "nakagami":
                g[i] = _nakagami(rng, fading.nakagami_m_ris_rx, gain, m)
            else:
                g[i] = _complex_normal(rng, m, gain)
        reflective.append(_freeze(g))
        reflective_ms.append(_freeze(g_ms))

    return ChannelSet(
        topology=topology,
        radio=radio,
        fading=fading,
        direct=_freeze(direct),
        incident=tuple(incident),
        reflective=tuple(reflective),
        direct_ms=_freeze(direct_ms),
        incident_ms=tuple(incident_ms),
        reflective_ms=tuple(reflective_ms),
        incident_los=tuple(incident_los),
    )


GLOBAL_SCOPE = "global"


@dataclass(frozen=True)
class CsiView:
    """Channel knowledge handed to an optimizer.

    fidelity_db is the per-link estimation SNR in dB (inf = perfect CSI).
    scope "global" exposes every coefficient; scope ("local", i) exposes
    only Tx_i's own links: h_d[i, .], incident[i][i, .], reflective[i][., .]
    of surface i.  Statistics (mean-square arrays) stay visible in every
    scope; out-of-scope coefficient access raises ScopeError.
    """

    _channels: ChannelSet
    fidelity_db: float = NOISELESS
    scope: object = GLOBAL_SCOPE

    @property
    def k(self) -> int:
        return self._channels.k

    @property
    def m_per_surface(self) -> tuple[int, ...]:
        return self._channels.m_per_surface

    @property
    def topology(self) -> Topology:
        return self._channels.topology

    @property
    def stats(self):
        ch = self._channels
        return {
            "direct_ms": ch.direct_ms,
            "incident_ms": ch.incident_ms,
            "reflective_ms": ch.reflective_ms,
        }

    def _local_tx(self):
        return None if self.scope == GLOBAL_SCOPE else self.scope[1]

    @property
    def channels(self) -> ChannelSet:
        if self.scope != GLOBAL_SCOPE:
            raise ScopeError("full channel set not available under local scope")
        return self._channels

    def direct(self, j: int, i: int) -> complex:
        t = self._local_tx()
        if t is not None and j != t:
            raise ScopeError(f"direct({j},{i}) outside scope of tx {t}")
        return self._channels.direct[j, i]

    def direct_row(self, j: int) -> np.ndarray:
        t = self._local_tx()
        if t is not None and j != t:
            raise ScopeError(f"direct row {j} outside scope of tx {t}")
        return self._channels.direct[j]

    def incident(self, s: int, j: int) -> np.ndarray:
        t = self._local_tx()
        if t is not None and (s != t or j != t):
            raise ScopeError(f"incident(s={s}, j={j}) outside scope of tx {t}")
        return self._channels.incident[s][j]

    def reflective(self, s: int, i: int) -> np.ndarray:
        t = self._local_tx()
        if t is not None and s != t:
            raise ScopeError(f"reflective(s={s}, i={i}) outside scope of tx {t}")
        return self._channels.reflective[s][i]


def corrupt(truth: ChannelSet, p_db: float, seed, corrupt_los: bool = True) -> CsiView:
    """Additive noisy-p CSI model.

    Each coefficient c becomes c + e with e ~ CN(0, E|c|^2 * 10^(-p/10));
    for deterministic LoS rows the reference power is the squared LoS
    amplitude.  p_db = inf returns the truth unchanged.  corrupt_los=False
    leaves deterministic LoS rows clean.
    """
    if p_db == NOISELESS:
        return CsiView(_channels=truth, fidelity_db=NOISELESS)
    factor = 10.0 ** (-p_db / 10.0)
    k = truth.k

    direct = truth.direct.copy()
    for j in range(k):
        for i in range(k):
            rng = substream(seed, LINK_NOISE, LINK_DIRECT, j, i)
            direct[j, i] += _complex_normal(rng, None, truth.direct_ms[j, i] * factor)

    incident = []
    reflective = []
    for s in range(len(truth.incident)):
        h = truth.incident[s].copy()
        if corrupt_los or not truth.incident_los[s]:
            for j in range(k):
                rng = substream(seed, LINK_NOISE, LINK_INCIDENT * 10 + s, j, 0)
                h[j] += _complex_normal(rng, h.shape[1], truth.incident_ms[s][j] * factor)
        g = truth.reflective[s].copy()
        for i in range(k):
            rng = substream(seed, LINK_NOISE, LINK_REFLECTIVE * 10 + s, 0, i)
            g[i] += _complex_normal(rng, g.shape[1], truth.reflective_ms[s][i] * factor)
        incident.append(_freeze(h))
        reflective.append(_freeze(g))

    noisy = ChannelSet(
        topology=truth.topology,
        radio=truth.radio,
        fading=truth.fading,
        direct=_freeze(direct),
        incident=tuple(incident),
        reflective=tuple(reflective),
        direct_ms=truth.direct_ms,
        incident_ms=truth.incident_ms,
        reflective_ms=truth.reflective_ms,
        incident_los=truth.incident_los,
    )
    return CsiView(_channels=noisy, fidelity_db=p_db)


def restrict(view: CsiView, tx: int) -> CsiView:
    """Local-CSIT view for transmitter `tx` (distributed topologies only)."""
    if view.topology.mode != "distributed":
        raise ScopeError("local CSI restriction requires a distributed topology")
    if not 0 <= tx < view.k:
        raise ValueError(f"tx index {tx} out of range")
    return CsiView(_channels=view._channels, fidelity_db=view.fidelity_db, scope=("local", tx))


def perfect_view(truth: ChannelSet) -> CsiView:
    return CsiView(_channels=truth, fidelity_db=NOISELESS)


def dump_csv(channels: ChannelSet, path: str) -> None:
    """Write every coefficient as link_type,surface,tx,rx,element,re,im rows."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["link_type", "surface", "tx", "rx", "element", "re", "im"])
        k = channels.k
        for j in range(k):
            for i in range(k):
                c = channels.direct[j, i]
                w.writerow(["direct", "", j, i, "", f"{c.real:.9g}", f"{c.imag:.9g}"])
        for s, h in enumerate(channels.incident):
            for j in range(k):
                for m in range(h.shape[1]):
                    c = h[j, m]
                    w.writerow(["incident", s, j, "", m, f"{c.real:.9g}", f"{c.imag:.9g}"])
        for s, g in enumerate(channels.reflective):
            for i in range(k):
                for m in range(g.shape[1]):
                    c = g[i, m]
                    w.writerow(["reflective", s, "", i, m, f"{c.real:.9g}", f"{c.imag:.9g}"])
