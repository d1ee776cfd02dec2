"""Geometry, radio parameters, and quantized phase configurations.

All coordinates are 2-D points in meters.  Surfaces are uniform linear
arrays of passive elements; each element applies a unit-modulus phase
shift drawn from an N-point lattice (N a power of two).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299792458.0


def dbm_to_watts(p_dbm: float) -> float:
    """Convert a power in dBm to watts."""
    return 10.0 ** (p_dbm / 10.0) / 1000.0


def watts_to_dbm(p_watts: float) -> float:
    """Convert a power in watts to dBm.  Requires p_watts > 0."""
    if p_watts <= 0.0:
        raise ValueError(f"power must be positive, got {p_watts}")
    return 10.0 * math.log10(p_watts * 1000.0)


def path_gain(c0_db: float, distance_m: float, exponent: float) -> float:
    """Distance-based channel power gain 10^(c0_db/10) * d^(-exponent).

    c0_db is the reference gain at 1 m.  No near-field clamp: distances
    below 1 m still use the formula.  Requires distance_m > 0.
    """
    if distance_m <= 0.0:
        raise ValueError(f"distance must be positive, got {distance_m}")
    return 10.0 ** (c0_db / 10.0) * distance_m ** (-exponent)


@dataclass(frozen=True)
class Position:
    """A 2-D point in meters."""

    x: float
    y: float

    def distance_to(self, other: "Position") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


@dataclass(frozen=True)
class SurfaceSpec:
    """A uniform linear array of reflecting elements.

    Element m (1-indexed) sits at center + (m-1) * spacing * orientation.
    spacing=None means half a wavelength, resolved against the carrier
    when element positions are materialized.
    """

    center: Position
    element_count: int
    spacing: float | None = None
    orientation: tuple[float, float] = (1.0, 0.0)

    def __post_init__(self):
        if self.element_count < 1:
            raise ValueError("element_count must be >= 1")
        norm = math.hypot(*self.orientation)
        if not math.isclose(norm, 1.0, rel_tol=1e-9):
            raise ValueError(f"orientation must be a unit vector, |v|={norm}")
        if self.spacing is not None and self.spacing <= 0.0:
            raise ValueError("spacing must be positive")

    def element_positions(self, wavelength: float | None = None) -> np.ndarray:
        """(M, 2) array of element coordinates."""
        spacing = self.spacing
        if spacing is None:
            if wavelength is None:
                raise ValueError("spacing unset; wavelength required to resolve lambda/2 default")
            spacing = wavelength / 2.0
        idx = np.arange(self.element_count, dtype=float)
        direction = np.array(self.orientation, dtype=float)
        return self.center.as_array()[None, :] + idx[:, None] * spacing * direction[None, :]


@dataclass(frozen=True)
class Topology:
    """Node layout: K transmitters, K receivers, and one or K surfaces.

    mode "centralized" uses a single shared surface; mode "distributed"
    assigns surface i to transmitter i (one surface per transmitter).
    """

    tx: tuple[Position, ...]
    rx: tuple[Position, ...]
    surfaces: tuple[SurfaceSpec, ...]
    mode: str = "centralized"

    def __post_init__(self):
        if self.mode not in ("centralized", "distributed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if len(self.tx) != len(self.rx):
            raise ValueError("need one receiver per transmitter")
        if len(self.tx) == 0:
            raise ValueError("need at least one transmitter")
        if self.mode == "centralized" and len(self.surfaces) != 1:
            raise ValueError("centralized topology takes exactly one surface")
        if self.mode == "distributed" and len(self.surfaces) != len(self.tx):
            raise ValueError("distributed topology needs one surface per transmitter")

    @property
    def k(self) -> int:
        return len(self.tx)


@dataclass(frozen=True)
class RadioParams:
    """Carrier, powers, noise, and path-loss configuration."""

    tx_powers_dbm: tuple[float, ...]
    noise_dbm: float = -80.0
    carrier_hz: float = 1.8e9
    c0_db: float = -30.0
    alpha_direct: float = 3.5
    alpha_tx_ris: float = 2.0
    alpha_ris_rx: float = 2.1

    def __post_init__(self):
        if self.carrier_hz <= 0.0:
            raise ValueError("carrier must be positive")
        if len(self.tx_powers_dbm) == 0:
            raise ValueError("need at least one transmit power")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    @property
    def noise_watts(self) -> float:
        return dbm_to_watts(self.noise_dbm)

    @property
    def tx_powers_watts(self) -> np.ndarray:
        return np.array([dbm_to_watts(p) for p in self.tx_powers_dbm])


@dataclass(frozen=True)
class PhaseConfig:
    """A point on the quantized phase lattice.

    levels[m] in {0, ..., n_levels-1}; element m applies phase
    2*pi*levels[m]/n_levels.  n_levels must be a power of two (b-bit
    phase shifters give 2^b levels).
    """

    levels: tuple[int, ...]
    n_levels: int

    def __post_init__(self):
        n = self.n_levels
        if n < 1 or (n & (n - 1)) != 0:
            raise ValueError(f"n_levels must be a power of two, got {n}")
        for k in self.levels:
            if not isinstance(k, (int, np.integer)) or not 0 <= k < n:
                raise ValueError(f"level {k!r} outside [0, {n})")

    def __len__(self) -> int:
        return len(self.levels)

    def phases(self) -> np.ndarray:
        """Phase angles in radians, one per element."""
        return 2.0 * np.pi * np.asarray(self.levels, dtype=float) / self.n_levels

    def unit_phasors(self) -> np.ndarray:
        return np.exp(1j * self.phases())

    @staticmethod
    def zeros(m: int, n_levels: int) -> "PhaseConfig":
        return PhaseConfig(levels=(0,) * m, n_levels=n_levels)

    @staticmethod
    def from_array(levels: np.ndarray, n_levels: int) -> "PhaseConfig":
        return PhaseConfig(levels=tuple(int(k) for k in levels), n_levels=n_levels)


def phase_of(config: PhaseConfig, m: int) -> float:
    """Phase angle applied by element m (0-indexed)."""
    return 2.0 * math.pi * config.levels[m] / config.n_levels
