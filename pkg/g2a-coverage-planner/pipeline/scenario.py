"""
Scenario files.

A scenario is a single JSON document; bulk topologies may live in a stations
CSV side-file (columns id, x, y and optionally z, name) referenced by
"stations_csv", relative to the JSON file. Omitted fields fall back to the
defaults in config.py.

Example:
    {
        "name": "equilateral",
        "stations": [
            {"id": 1, "x": 0, "y": 0},
            {"id": 2, "x": 600, "y": 0},
            {"id": 3, "x": 300, "y": 519.6}
        ],
        "tau_dbm": -90,
        "overlap_cap": 0.0001
    }
"""

import hashlib
import json
import math
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd
from loguru import logger
from pydantic import AliasChoices, BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config import config
from errors import ScenarioNotFound, ScenarioParseError, ScenarioValidationError
from geometry.stations import BaseStation
from geometry.triangulation import validate_topology
from optimizer.swarm import SwarmConfig
from rf.antenna import AntennaModel, BeamPatternCodebook
from rf.channel import ChannelParams
from rf.link_budget import RadioContext


class OptimizerSettings(BaseModel):
    """Optimizer and baseline settings of a scenario."""

    model_config = ConfigDict(frozen=True)

    particles: int = Field(default_factory=lambda: config.SWARM_PARTICLES, ge=1)
    iterations: int = Field(default_factory=lambda: config.SWARM_ITERATIONS, ge=1)
    c1: float = Field(default_factory=lambda: config.SWARM_C1, gt=0.0)
    c2: float = Field(default_factory=lambda: config.SWARM_C2, gt=0.0)
    d1: float = Field(default_factory=lambda: config.SWARM_D1, gt=0.0)
    d2: float = Field(default_factory=lambda: config.SWARM_D2, gt=0.0)
    w_min: float = Field(default_factory=lambda: config.SWARM_W_MIN, gt=0.0)
    w_max: float = Field(default_factory=lambda: config.SWARM_W_MAX, gt=0.0)
    leakage_weight: float = Field(default_factory=lambda: config.LEAKAGE_WEIGHT, ge=0.0)
    es_tilt_levels: int = Field(default_factory=lambda: config.ES_TILT_LEVELS, ge=1)
    es_budget: int = Field(default_factory=lambda: config.ES_BUDGET, ge=1)
    es_pattern_ids: Optional[Tuple[int, ...]] = None
    baseline_pattern_id: int = Field(default_factory=lambda: config.BASELINE_PATTERN_ID, ge=1)
    baseline_tilt: float = Field(default_factory=lambda: config.BASELINE_TILT_DEG, ge=-90.0, le=90.0)
    uncoordinated_tilt_levels: int = Field(default_factory=lambda: config.UNCOORDINATED_TILT_LEVELS, ge=1)


class Scenario(BaseModel):
    """Fully resolved planning scenario."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str = "scenario"
    stations: List[BaseStation]
    h_max: float = Field(default_factory=lambda: config.DEFAULT_H_MAX_M, gt=0.0)
    voxel_resolution: float = Field(default_factory=lambda: config.VOXEL_RESOLUTION_M, gt=0.0)
    tau_dbm: float = Field(
        default_factory=lambda: config.DEFAULT_TAU_DBM,
        validation_alias=AliasChoices("tau_dbm", "tau"),
        allow_inf_nan=False,
    )
    transmit_power_dbm: float = Field(
        default_factory=lambda: config.DEFAULT_TRANSMIT_POWER_DBM,
        validation_alias=AliasChoices("transmit_power_dbm", "transmit_power"),
        allow_inf_nan=False,
    )
    overlap_cap: float = Field(default_factory=lambda: config.DEFAULT_OVERLAP_CAP, ge=0.0, le=1.0)
    channel: ChannelParams = Field(default_factory=lambda: ChannelParams.load())
    antenna: AntennaModel = Field(default_factory=AntennaModel)
    codebook: BeamPatternCodebook = Field(default_factory=BeamPatternCodebook.default)
    tilt_box: Tuple[float, float] = (-90.0, 90.0)
    layer_bounds: Optional[List[float]] = None
    band_height: float = Field(default_factory=lambda: config.REPORT_BAND_HEIGHT_M, gt=0.0)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    seed: int = Field(0, ge=0)

    @field_validator("tilt_box")
    @classmethod
    def _tilt_box(cls, box):
        lo, hi = box
        if not -90.0 <= lo <= hi <= 90.0:
            raise ValueError(f"tilt_box must satisfy -90 <= lo <= hi <= 90, got {box}")
        return box

    @model_validator(mode="after")
    def _references(self):
        if self.voxel_resolution > self.h_max:
            raise ValueError(f"voxel_resolution {self.voxel_resolution} exceeds h_max {self.h_max}")
        if self.layer_bounds is not None:
            bounds = self.layer_bounds
            if len(bounds) < 2 or abs(bounds[0]) > 1e-9 or abs(bounds[-1] - self.h_max) > 1e-9:
                raise ValueError("layer_bounds must run from 0 to h_max")
            if any(b <= a for a, b in zip(bounds, bounds[1:])):
                raise ValueError("layer_bounds must be strictly increasing")
        ids = [self.optimizer.baseline_pattern_id, *(self.optimizer.es_pattern_ids or ())]
        missing = [i for i in ids if not 1 <= i <= self.codebook.size]
        if missing:
            raise ValueError(f"Pattern ids {missing} not in codebook 1..{self.codebook.size}")
        return self

    @property
    def radio(self) -> RadioContext:
        return RadioContext(
            transmit_power_dbm=self.transmit_power_dbm,
            channel=self.channel,
            antenna=self.antenna,
        )

    @property
    def baseline_pattern_id(self) -> int:
        return self.optimizer.baseline_pattern_id

    @property
    def baseline_tilt(self) -> float:
        return self.optimizer.baseline_tilt

    def station(self, station_id: int) -> BaseStation:
        return next(s for s in self.stations if s.id == station_id)

    def swarm_config(self, seed: Optional[int] = None) -> SwarmConfig:
        """SwarmConfig from the optimizer settings and the overlap cap."""
        o = self.optimizer
        return SwarmConfig(
            particle_count=o.particles,
            iterations=o.iterations,
            c1=o.c1,
            c2=o.c2,
            d1=o.d1,
            d2=o.d2,
            w_min=o.w_min,
            w_max=o.w_max,
            leakage_weight=o.leakage_weight,
            overlap_cap=self.overlap_cap,
            seed=self.seed if seed is None else seed,
        )

    def fingerprint(self) -> str:
        """sha256 of the canonical JSON dump."""
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _line_of(text: str, key: str) -> Optional[int]:
    """1-based line of the first occurrence of "key" in the document."""
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return number
    return None


def _read_stations_csv(path: Path) -> List[dict]:
    if not path.exists():
        raise ScenarioNotFound(f"Stations file not found: {path}")
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ScenarioParseError(f"Cannot parse stations file {path}: {e}")

    missing = {"id", "x", "y"} - set(frame.columns)
    if missing:
        raise ScenarioValidationError(
            f"Stations file {path} lacks columns {sorted(missing)}",
            field="stations_csv",
            line=1,
        )

    records = []
    for row in frame.to_dict(orient="records"):
        record = {"id": int(row["id"]), "x": float(row["x"]), "y": float(row["y"])}
        if "z" in row and not (isinstance(row["z"], float) and math.isnan(row["z"])):
            record["z"] = float(row["z"])
        if "name" in row and isinstance(row["name"], str):
            record["name"] = row["name"]
        records.append(record)
    return records


def load_scenario(path) -> Scenario:
    """
    Load and validate a scenario file.

    Args:
        path: Scenario JSON file

    Returns:
        Scenario with defaults applied

    Raises:
        ScenarioNotFound: file (or its stations CSV) missing
        ScenarioParseError: invalid JSON / CSV
        ScenarioValidationError: a field failed validation (field and line named)
        InsufficientStations, DegenerateTopology: unusable station layout
    """
    path = Path(path)
    if not path.exists():
        raise ScenarioNotFound(f"Scenario file not found: {path}")

    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"Invalid JSON in {path}: {e.msg}", line=e.lineno)

    if not isinstance(raw, dict):
        raise ScenarioValidationError(f"{path}: top level must be an object", field=None, line=1)

    stations_csv = raw.pop("stations_csv", None)
    if stations_csv:
        raw["stations"] = list(raw.get("stations", [])) + _read_stations_csv(path.parent / stations_csv)

    try:
        scenario = Scenario.model_validate(raw)
    except ValidationError as e:
        error = e.errors()[0]
        loc = [str(part) for part in error["loc"]]
        field = ".".join(loc) if loc else None
        key = next((part for part in loc if not part.isdigit()), None)
        line = _line_of(text, key) if key else None
        raise ScenarioValidationError(f"{path}: {field or 'scenario'}: {error['msg']}", field=field, line=line)

    validate_topology(scenario.stations)
    logger.info(f"Loaded scenario '{scenario.name}' from {path}: {len(scenario.stations)} stations")
    return scenario


def save_scenario(scenario: Scenario, path) -> Path:
    """Write a scenario as JSON; load_scenario reads it back unchanged."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(scenario.model_dump_json(indent=2), encoding="utf-8")
    logger.debug(f"Saved scenario '{scenario.name}' to {path}")
    return path
