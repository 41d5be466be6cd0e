"""
Inter-region overlap of prism coverage structures.

Compares triangular (TP), square (SP) and hexagonal (HP) prism cells whose
sites cover a sphere of radius r. Every cell edge cuts an arched region off
the coverage sphere; the overlap ratio ζ is the arched volume per cell over
the cell volume:

    TP: ζ = (16√3 - 27)·π·r / (6H)   ≈ 0.37 r/H
    SP: ζ = 4(√2 - 1)·π·r / (3H)     ≈ 1.74 r/H
    HP: ζ = 7π·r / (3√3·H)           ≈ 4.23 r/H

`monte_carlo_overlap` estimates the same ratios by sampling the solids
(spherical cap minus cones/cylinders) directly, so it does not share any
arithmetic with the closed forms.

Usage:
    from prisms.overlap import PrismStructure, analytic_overlap

    zeta = analytic_overlap(PrismStructure(kind="TP", coverage_radius=2.0, height=1.0)).zeta
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import config
from errors import PremiseViolated
from geometry.stations import TriangleRegion, triangle_metrics

StructureKind = Literal["TP", "SP", "HP"]

ANALYTIC_COEFFICIENTS: Dict[str, float] = {
    "TP": (16.0 * np.sqrt(3.0) - 27.0) * np.pi / 6.0,
    "SP": 4.0 * (np.sqrt(2.0) - 1.0) * np.pi / 3.0,
    "HP": 7.0 * np.pi / (3.0 * np.sqrt(3.0)),
}

# arched regions per cell
ARC_COUNT: Dict[str, int] = {"TP": 3, "SP": 4, "HP": 6}


class PrismStructure(BaseModel):
    """Regular prism cell with coverage radius r and height H (0 < H ≤ r)."""

    model_config = ConfigDict(frozen=True)

    kind: StructureKind
    coverage_radius: float = Field(gt=0.0)
    height: float = Field(gt=0.0)

    @model_validator(mode="after")
    def _premise(self):
        if self.height > self.coverage_radius:
            raise PremiseViolated(
                f"{self.kind}: height H={self.height} must not exceed coverage radius r={self.coverage_radius}"
            )
        return self

    @property
    def site_spacing(self) -> float:
        """d1 = r, d2 = √2·r/2, d3 = r/2."""
        r = self.coverage_radius
        return {"TP": r, "SP": np.sqrt(2.0) * r / 2.0, "HP": r / 2.0}[self.kind]

    @property
    def ratio(self) -> float:
        return self.coverage_radius / self.height

    @property
    def cell_volume(self) -> float:
        d = self.site_spacing
        area = {
            "TP": np.sqrt(3.0) / 4.0 * d ** 2,
            "SP": d ** 2,
            "HP": 3.0 * np.sqrt(3.0) / 2.0 * d ** 2,
        }[self.kind]
        return float(area * self.height)


class OverlapResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: StructureKind
    ratio: float
    zeta: float = Field(ge=0.0)
    method: Literal["analytic", "monte_carlo"]
    sample_count: Optional[int] = None
    std_error: Optional[float] = None


def _check_premise(structure: PrismStructure) -> None:
    # model_construct skips validators
    if not 0.0 < structure.height <= structure.coverage_radius:
        raise PremiseViolated(f"Premise 0 < H <= r violated: H={structure.height}, r={structure.coverage_radius}")


def analytic_overlap(structure: PrismStructure) -> OverlapResult:
    """
    Closed-form overlap ratio of a structure.

    Raises:
        PremiseViolated: H > r
    """
    _check_premise(structure)
    zeta = ANALYTIC_COEFFICIENTS[structure.kind] * structure.ratio
    return OverlapResult(kind=structure.kind, ratio=structure.ratio, zeta=float(zeta), method="analytic")


@dataclass(frozen=True)
class _AxialSolid:
    """Solid of revolution about the x axis removed from the arched region."""

    shape: Literal["cylinder", "cone"]
    x_start: float
    x_end: float
    radius: float

    def contains(self, x: np.ndarray, rho: np.ndarray) -> np.ndarray:
        inside = (x >= self.x_start) & (x <= self.x_end)
        if self.shape == "cylinder":
            return inside & (rho <= self.radius)
        # cone: full radius at x_start, apex at x_end
        limit = self.radius * (self.x_end - x) / (self.x_end - self.x_start)
        return inside & (rho <= limit)


def _arched_region(kind: str, r: float) -> Tuple[float, List[_AxialSolid]]:
    """Cap height and the solids removed from the cap, on a unit-axis sphere of radius r."""
    if kind == "TP":
        return r * (1.0 - np.sqrt(3.0) / 2.0), []
    if kind == "SP":
        h = r * (1.0 - np.sqrt(2.0) / 2.0)
        return h, [_AxialSolid("cone", r - h, r, h)]
    h = r / 2.0
    radius = np.sqrt(3.0) * r / 4.0
    return h, [
        _AxialSolid("cylinder", r / 2.0, 3.0 * r / 4.0, radius),
        _AxialSolid("cone", 3.0 * r / 4.0, r, radius),
    ]


def _count_hits(rng: np.random.Generator, n: int, r: float, cap_height: float, solids: Sequence[_AxialSolid]) -> int:
    base_radius = np.sqrt(r ** 2 - (r - cap_height) ** 2)
    x = rng.uniform(r - cap_height, r, n)
    y = rng.uniform(-base_radius, base_radius, n)
    z = rng.uniform(-base_radius, base_radius, n)
    rho = np.hypot(y, z)

    hit = x ** 2 + rho ** 2 <= r ** 2
    for solid in solids:
        hit &= ~solid.contains(x, rho)
    return int(hit.sum())


def monte_carlo_overlap(
    structure: PrismStructure,
    n_samples: int = None,
    seed: int = 0,
    partitions: int = None,
) -> OverlapResult:
    """
    Monte-Carlo estimate of the overlap ratio.

    Samples uniformly over the bounding box of one arched region and scales
    the hit fraction by the box volume. The sample budget is split across
    partitions with independent child seeds; hits are summed, so the result
    is reproducible for a fixed (seed, partitions) pair.

    Args:
        structure: Prism structure
        n_samples: Total samples (>= 10^4; default MC_SAMPLES)
        seed: Master seed
        partitions: Sample partitions (default MC_PARTITIONS)

    Returns:
        OverlapResult with sample_count and std_error

    Raises:
        PremiseViolated: H > r
    """
    _check_premise(structure)
    n_samples = int(n_samples or config.MC_SAMPLES)
    partitions = max(1, int(partitions or config.MC_PARTITIONS))
    if n_samples < 10_000:
        raise ValueError(f"Monte-Carlo needs at least 10^4 samples, got {n_samples}")

    r = structure.coverage_radius
    cap_height, solids = _arched_region(structure.kind, r)
    base_radius = np.sqrt(r ** 2 - (r - cap_height) ** 2)
    box_volume = cap_height * (2.0 * base_radius) ** 2

    sizes = [len(part) for part in np.array_split(np.arange(n_samples), partitions)]
    rngs = [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(partitions)]

    if partitions > 1 and config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            hits = sum(executor.map(lambda job: _count_hits(job[0], job[1], r, cap_height, solids), zip(rngs, sizes)))
    else:
        hits = sum(_count_hits(rng, size, r, cap_height, solids) for rng, size in zip(rngs, sizes))

    p = hits / n_samples
    scale = ARC_COUNT[structure.kind] / structure.cell_volume
    zeta = scale * box_volume * p
    std_error = scale * box_volume * np.sqrt(p * (1.0 - p) / n_samples)

    logger.debug(f"MC {structure.kind} r/H={structure.ratio:g}: zeta={zeta:.5f} ± {std_error:.5f} ({n_samples} samples)")
    return OverlapResult(
        kind=structure.kind,
        ratio=structure.ratio,
        zeta=float(zeta),
        method="monte_carlo",
        sample_count=n_samples,
        std_error=float(std_error),
    )


def triangle_coverage_area(triangle, radius: float) -> float:
    """
    Total sector area Σ n_i·π·R²/360 of the three vertex antennas.

    Args:
        triangle: TriangleRegion or its three inner angles (deg)
        radius: Radiation radius R > 0

    Returns:
        Sector area; equals 0.5·π·R² since the angles sum to 180°
    """
    if radius <= 0:
        raise ValueError(f"Radius must be positive, got {radius}")
    angles = triangle.inner_angles if isinstance(triangle, TriangleRegion) else tuple(triangle)
    return float(sum(angles) * np.pi * radius ** 2 / 360.0)


def longest_edge_overlap_ratio(triangle) -> float:
    """
    ζ = (S - S0) / S0 with S the sector area at R = L/2 and S0 the triangle area.

    Args:
        triangle: TriangleRegion or three (x, y) vertices

    Raises:
        DegenerateTriangle: collinear vertices
    """
    vertices = triangle.vertices if isinstance(triangle, TriangleRegion) else triangle
    angles, area, longest = triangle_metrics(vertices)
    sector = triangle_coverage_area(angles, 0.5 * longest)
    return float((sector - area) / area)


def zeta_table(
    ratios: Sequence[float] = None,
    n_samples: int = None,
    seed: int = 0,
    partitions: int = None,
) -> pd.DataFrame:
    """
    Analytic and Monte-Carlo ζ for TP/SP/HP over r/H ratios (H = 1).

    Returns:
        DataFrame with columns kind, r_over_h, zeta_analytic, zeta_mc,
        std_error, within_3se
    """
    ratios = list(ratios or config.zeta_ratios_list)
    rows = []
    for ratio in ratios:
        for kind in ("TP", "SP", "HP"):
            structure = PrismStructure(kind=kind, coverage_radius=float(ratio), height=1.0)
            exact = analytic_overlap(structure)
            estimate = monte_carlo_overlap(structure, n_samples=n_samples, seed=seed, partitions=partitions)
            rows.append({
                "kind": kind,
                "r_over_h": float(ratio),
                "zeta_analytic": exact.zeta,
                "zeta_mc": estimate.zeta,
                "std_error": estimate.std_error,
                "within_3se": abs(estimate.zeta - exact.zeta) <= 3.0 * estimate.std_error,
            })

    table = pd.DataFrame(rows, columns=["kind", "r_over_h", "zeta_analytic", "zeta_mc", "std_error", "within_3se"])
    logger.info(f"Zeta table: {len(ratios)} ratios x 3 structures")
    return table
