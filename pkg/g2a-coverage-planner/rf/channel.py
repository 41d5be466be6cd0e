"""
Ground-to-air channel model (3GPP TR 36.777 aerial extensions).

Path loss mixes the LOS and NLOS expressions with the LOS probability:

    PL(d_2D, h_t) = p_L * PL_L + (1 - p_L) * PL_N

All functions accept scalars or numpy arrays and broadcast.

Usage:
    from rf.channel import ChannelParams, path_loss

    params = ChannelParams.load("RMa-AV", carrier_frequency_ghz=2.6)
    pl = path_loss(1000.0, 100.0, params)
"""

import json
from functools import lru_cache
from pathlib import Path
from typing import Dict, Literal, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import config
from errors import SingularGeometry

FREE_SPACE_REFERENCE_DB = 20.0 * np.log10(40.0 * np.pi / 3.0)


class LogFit(BaseModel):
    """max(slope * log10(h) + intercept, floor)."""

    model_config = ConfigDict(frozen=True)

    slope: float
    intercept: float
    floor: Optional[float] = None

    def __call__(self, h):
        value = self.slope * np.log10(h) + self.intercept
        return value if self.floor is None else np.maximum(value, self.floor)


class LosProbabilityCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True)

    ground_max_height_m: float
    ground_form: Literal["exponential", "mixture"]
    ground_d1_m: float
    ground_p1_m: float
    all_los_height_m: float
    aerial_p1: LogFit
    aerial_d1: LogFit


class PathLossTerm(BaseModel):
    """
    intercept + [free-space reference] + max(slope + height_slope*log10(h), slope_floor)*log10(d_3D)
    + frequency_coeff*log10(f_GHz)
    """

    model_config = ConfigDict(frozen=True)

    intercept: float
    slope: float
    height_slope: float = 0.0
    slope_floor: Optional[float] = None
    frequency_coeff: float = 20.0
    free_space_reference: bool = False
    at_least_los: bool = False

    def __call__(self, d_3d, h, frequency_ghz: float):
        slope = self.slope + self.height_slope * np.log10(h)
        if self.slope_floor is not None:
            slope = np.maximum(slope, self.slope_floor)
        value = self.intercept + slope * np.log10(d_3d) + self.frequency_coeff * np.log10(frequency_ghz)
        if self.free_space_reference:
            value = value + FREE_SPACE_REFERENCE_DB
        return value


class PathLossCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True)

    min_height_m: float
    los: PathLossTerm
    nlos: PathLossTerm


class ChannelCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True)

    description: str = ""
    los_probability: LosProbabilityCoefficients
    path_loss: PathLossCoefficients


@lru_cache(maxsize=8)
def _read_table(path: str) -> Dict[str, Dict]:
    with open(path, "r", encoding="utf-8") as f:
        table = json.load(f)
    logger.debug(f"Loaded channel table {path} ({', '.join(table)})")
    return table


def load_channel_table(path: Optional[Path] = None) -> Dict[str, ChannelCoefficients]:
    """
    Load the environment -> coefficient table.

    Args:
        path: JSON table (default: bundled CHANNEL_TABLE_FILE)
    """
    path = Path(path) if path else config.get_channel_table_path()
    raw = _read_table(str(path))
    return {name: ChannelCoefficients(**record) for name, record in raw.items()}


class ChannelParams(BaseModel):
    """Carrier frequency, environment and its coefficient set."""

    model_config = ConfigDict(frozen=True)

    environment: Literal["RMa-AV", "UMa-AV"] = "RMa-AV"
    carrier_frequency_ghz: float = Field(default_factory=lambda: config.CARRIER_FREQUENCY_GHZ, gt=0.0)
    coefficients: ChannelCoefficients

    @model_validator(mode="before")
    @classmethod
    def _resolve_coefficients(cls, data):
        """Fill coefficients from the bundled table when only the environment is given."""
        if isinstance(data, dict) and data.get("coefficients") is None:
            environment = data.get("environment") or config.CHANNEL_ENVIRONMENT
            table = load_channel_table()
            if environment not in table:
                raise ValueError(f"Unknown channel environment '{environment}' (known: {sorted(table)})")
            data = {**data, "environment": environment, "coefficients": table[environment]}
        return data

    @classmethod
    def load(
        cls,
        environment: str = None,
        carrier_frequency_ghz: float = None,
        table_path: Optional[Path] = None,
    ) -> "ChannelParams":
        """Resolve an environment name against a coefficient table."""
        environment = environment or config.CHANNEL_ENVIRONMENT
        table = load_channel_table(table_path)
        if environment not in table:
            raise ValueError(f"Unknown channel environment '{environment}' (known: {sorted(table)})")
        return cls(
            environment=environment,
            carrier_frequency_ghz=carrier_frequency_ghz or config.CARRIER_FREQUENCY_GHZ,
            coefficients=table[environment],
        )


def los_probability(d_2d, h_t, params: ChannelParams):
    """
    LOS probability p_L for a 2D distance and height difference.

    Args:
        d_2d: Horizontal distance (m), >= 0
        h_t: Height difference (m), >= 0
        params: Channel parameters

    Returns:
        Probability in [0, 1] (float for scalar input)
    """
    c = params.coefficients.los_probability
    d = np.asarray(d_2d, dtype=float)
    h = np.asarray(h_t, dtype=float)
    d_safe = np.maximum(d, 1e-9)

    if c.ground_form == "exponential":
        ground = np.exp(-(d - c.ground_d1_m) / c.ground_p1_m)
    else:
        ground = c.ground_d1_m / d_safe + np.exp(-d / c.ground_p1_m) * (1.0 - c.ground_d1_m / d_safe)
    ground = np.where(d <= c.ground_d1_m, 1.0, ground)

    h_aerial = np.maximum(h, c.ground_max_height_m)
    p1 = c.aerial_p1(h_aerial)
    d1 = c.aerial_d1(h_aerial)
    aerial = d1 / d_safe + np.exp(-d / p1) * (1.0 - d1 / d_safe)
    aerial = np.where(d <= d1, 1.0, aerial)

    p = np.where(h <= c.ground_max_height_m, ground, aerial)
    p = np.where(h > c.all_los_height_m, 1.0, p)
    p = np.clip(p, 0.0, 1.0)
    return float(p) if p.ndim == 0 else p


def _distances(d_2d, h_t):
    d = np.asarray(d_2d, dtype=float)
    h = np.asarray(h_t, dtype=float)
    d_3d = np.hypot(d, h)
    if np.any(d_3d == 0.0):
        raise SingularGeometry("Path loss undefined at zero 3D distance")
    return d, h, d_3d


def path_loss_los(d_3d, h_t, params: ChannelParams):
    """LOS path loss PL_L (dB) at 3D distance d_3d and height difference h_t."""
    c = params.coefficients.path_loss
    h = np.maximum(np.asarray(h_t, dtype=float), c.min_height_m)
    d = np.maximum(np.asarray(d_3d, dtype=float), config.MIN_LINK_DISTANCE_M)
    return c.los(d, h, params.carrier_frequency_ghz)


def path_loss_nlos(d_3d, h_t, params: ChannelParams):
    """NLOS path loss PL_N (dB)."""
    c = params.coefficients.path_loss
    h = np.maximum(np.asarray(h_t, dtype=float), c.min_height_m)
    d = np.maximum(np.asarray(d_3d, dtype=float), config.MIN_LINK_DISTANCE_M)
    value = c.nlos(d, h, params.carrier_frequency_ghz)
    if c.nlos.at_least_los:
        value = np.maximum(value, c.los(d, h, params.carrier_frequency_ghz))
    return value


def path_loss(d_2d, h_t, params: ChannelParams, p_los=None):
    """
    LOS/NLOS mixed path loss (dB).

    Args:
        d_2d: Horizontal distance (m)
        h_t: Height difference (m)
        params: Channel parameters
        p_los: Override for the LOS probability (forces a pure regime)

    Returns:
        Path loss in dB (float for scalar input)

    Raises:
        SingularGeometry: zero 3D distance
    """
    d, h, d_3d = _distances(d_2d, h_t)
    p = los_probability(d, h, params) if p_los is None else np.asarray(p_los, dtype=float)
    value = p * path_loss_los(d_3d, h, params) + (1.0 - p) * path_loss_nlos(d_3d, h, params)
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value
