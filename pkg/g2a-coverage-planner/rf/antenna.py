"""
3D directional antenna model.

A beam is a rectangular main lobe of half-widths (Ψ, Φ) around the boresight,
with linear gain G0 / (Ψ·Φ) (radians) inside the lobe and S0 outside.

Angles:
    - headings are measured counter-clockwise from the +x axis
    - elevation is measured up from the horizontal plane
    - tilt Θ > 0 elevates the boresight above the horizon
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import config
from errors import SingularGeometry

TWO_PI = 2.0 * np.pi


def wrap_angle(angle):
    """Wrap radians to (-π, π]."""
    wrapped = angle - TWO_PI * np.ceil((np.asarray(angle, dtype=float) - np.pi) / TWO_PI)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


def heading_deg(origin: Sequence[float], target: Sequence[float]) -> float:
    """Horizontal heading (deg in [0, 360)) from origin to target."""
    dx = float(target[0]) - float(origin[0])
    dy = float(target[1]) - float(origin[1])
    return float(np.degrees(np.arctan2(dy, dx)) % 360.0)


class AntennaModel(BaseModel):
    """Main-lobe constant G0 and side-lobe gain S0 (both linear)."""

    model_config = ConfigDict(frozen=True)

    g0: float = Field(default_factory=lambda: config.ANTENNA_G0, gt=0.0)
    s0: float = Field(default_factory=lambda: config.ANTENNA_S0, gt=0.0)

    @model_validator(mode="after")
    def _side_lobe_below_main(self):
        # widest admissible lobe is just under π x π rad
        if self.s0 >= self.g0 / np.pi ** 2:
            raise ValueError(f"S0={self.s0} must stay below G0/pi^2={self.g0 / np.pi ** 2:.4f}")
        return self

    def main_lobe_gain(self, h_hpbw_deg, v_hpbw_deg):
        """Linear main-lobe gain G0 / (Ψ_rad·Φ_rad)."""
        return self.g0 / (np.radians(h_hpbw_deg) * np.radians(v_hpbw_deg))

    @property
    def side_lobe_dbi(self) -> float:
        return float(10.0 * np.log10(self.s0))


class BeamConfig(BaseModel):
    """
    One beam ε = {Ψ, Φ, Θ} plus its boresight azimuth.

    Ψ, Φ in (0°, 180°), Θ in [-90°, 90°]; the azimuth is normalized to
    [0°, 360°).
    """

    model_config = ConfigDict(frozen=True)

    h_hpbw: float = Field(gt=0.0, lt=180.0)
    v_hpbw: float = Field(gt=0.0, lt=180.0)
    tilt: float = Field(ge=-90.0, le=90.0)
    azimuth: float = 0.0
    pattern_id: Optional[int] = None

    @field_validator("azimuth")
    @classmethod
    def _normalize_azimuth(cls, value: float) -> float:
        value = float(value) % 360.0
        return 0.0 if value >= 360.0 else value

    @property
    def h_hpbw_rad(self) -> float:
        return float(np.radians(self.h_hpbw))

    @property
    def v_hpbw_rad(self) -> float:
        return float(np.radians(self.v_hpbw))

    @property
    def tilt_rad(self) -> float:
        return float(np.radians(self.tilt))

    @property
    def azimuth_rad(self) -> float:
        return float(np.radians(self.azimuth))

    def with_azimuth(self, azimuth: float) -> "BeamConfig":
        return self.model_copy(update={"azimuth": float(azimuth) % 360.0})


DEFAULT_PATTERNS: Tuple[Tuple[float, float], ...] = (
    (110.0, 25.0),
    (90.0, 25.0),
    (65.0, 25.0),
    (45.0, 25.0),
    (25.0, 25.0),
    (110.0, 15.0),
    (90.0, 15.0),
    (65.0, 15.0),
    (65.0, 8.0),
)


class BeamPatternCodebook(BaseModel):
    """Ordered (H-HPBW, V-HPBW) pairs; pattern ids run 1..K."""

    model_config = ConfigDict(frozen=True)

    patterns: Tuple[Tuple[float, float], ...] = DEFAULT_PATTERNS

    @field_validator("patterns")
    @classmethod
    def _check_patterns(cls, patterns):
        if not patterns:
            raise ValueError("Codebook needs at least one pattern")
        for h, v in patterns:
            if not (0.0 < h < 180.0 and 0.0 < v < 180.0):
                raise ValueError(f"Pattern ({h}, {v}) outside (0, 180) degrees")
        return patterns

    @classmethod
    def default(cls) -> "BeamPatternCodebook":
        return cls()

    @property
    def size(self) -> int:
        return len(self.patterns)

    @property
    def ids(self) -> List[int]:
        return list(range(1, self.size + 1))

    def get(self, pattern_id: int) -> Tuple[float, float]:
        """(H-HPBW, V-HPBW) of pattern_id (1-based)."""
        if not 1 <= int(pattern_id) <= self.size:
            raise KeyError(f"Pattern id {pattern_id} outside 1..{self.size}")
        return self.patterns[int(pattern_id) - 1]

    def beam(self, pattern_id: int, tilt: float, azimuth: float = 0.0) -> BeamConfig:
        h, v = self.get(pattern_id)
        return BeamConfig(h_hpbw=h, v_hpbw=v, tilt=tilt, azimuth=azimuth, pattern_id=int(pattern_id))


def in_main_lobe(h_hpbw_deg, v_hpbw_deg, azimuth_offset, elevation_offset):
    """|φ| ≤ Ψ and |ϕ| ≤ Φ (offsets in radians, widths in degrees)."""
    return (np.abs(azimuth_offset) <= np.radians(h_hpbw_deg)) & (
        np.abs(elevation_offset) <= np.radians(v_hpbw_deg)
    )


def antenna_gain(beam: BeamConfig, azimuth_offset, elevation_offset, antenna: AntennaModel = None):
    """
    Antenna gain in dBi at a boresight offset.

    Args:
        beam: Beam configuration
        azimuth_offset: φ in (-π, π]
        elevation_offset: ϕ in (-π, π]
        antenna: Antenna constants (defaults from config)

    Returns:
        10·log10(G0/(Ψ·Φ)) inside the main lobe, 10·log10(S0) outside
    """
    antenna = antenna or AntennaModel()
    main = 10.0 * np.log10(antenna.main_lobe_gain(beam.h_hpbw, beam.v_hpbw))
    inside = in_main_lobe(beam.h_hpbw, beam.v_hpbw, azimuth_offset, elevation_offset)
    gain = np.where(inside, main, antenna.side_lobe_dbi)
    return float(gain) if gain.ndim == 0 else gain


def boresight_offsets(station, beam: BeamConfig, voxel) -> Tuple[float, float]:
    """
    Signed offsets (φ, ϕ) of a voxel from the beam boresight.

    Args:
        station: BaseStation (or any object with a `position`)
        beam: Beam configuration
        voxel: (x, y, z) point

    Returns:
        (φ, ϕ) in radians, both wrapped to (-π, π]

    Raises:
        SingularGeometry: voxel coincides with the station
    """
    origin = np.asarray(getattr(station, "position", station), dtype=float)
    delta = np.asarray(voxel, dtype=float) - origin
    d_2d = float(np.hypot(delta[0], delta[1]))
    if d_2d == 0.0 and delta[2] == 0.0:
        raise SingularGeometry(f"Voxel {tuple(voxel)} coincides with the station")

    heading = np.arctan2(delta[1], delta[0])
    elevation = np.arctan2(delta[2], d_2d)
    return wrap_angle(heading - beam.azimuth_rad), wrap_angle(elevation - beam.tilt_rad)
