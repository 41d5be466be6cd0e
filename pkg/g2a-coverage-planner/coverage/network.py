"""Network-level aggregation of per-triangle coverage ratios."""

from typing import Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, model_validator

from errors import EmptyInput


def average_gcr(entries: Iterable[Tuple[float, float]]) -> float:
    """
    Area-weighted mean GCR ϱ = Σ b_t·s_t / Σ b_t.

    Args:
        entries: (area b_t, gcr s_t) pairs; areas > 0

    Raises:
        EmptyInput: no entries
        ValueError: non-positive area
    """
    entries = list(entries)
    if not entries:
        raise EmptyInput("average_gcr needs at least one (area, gcr) entry")

    total_area = 0.0
    weighted = 0.0
    for area, gcr in entries:
        if area <= 0:
            raise ValueError(f"Triangle area must be positive, got {area}")
        total_area += area
        weighted += area * gcr
    return weighted / total_area


class TriangleEntry(BaseModel):
    triangle_id: int
    area: float = Field(gt=0.0)
    gcr: float = Field(ge=0.0, le=1.0)


class NetworkReport(BaseModel):
    """Per-triangle (b_t, s_t) rows and their area-weighted average."""

    entries: List[TriangleEntry]
    average_gcr: float = Field(ge=0.0, le=1.0)
    triangle_count: int = Field(ge=0)
    network_cor: Optional[float] = Field(default=None, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _bounded(self):
        if self.entries:
            gcrs = [e.gcr for e in self.entries]
            if not min(gcrs) - 1e-12 <= self.average_gcr <= max(gcrs) + 1e-12:
                raise ValueError(f"Average GCR {self.average_gcr} outside [{min(gcrs)}, {max(gcrs)}]")
        return self

    @classmethod
    def from_entries(cls, entries: Sequence[TriangleEntry], network_cor: Optional[float] = None) -> "NetworkReport":
        """
        Raises:
            EmptyInput: no entries
        """
        rho = average_gcr((e.area, e.gcr) for e in entries)
        return cls(
            entries=list(entries),
            average_gcr=min(1.0, max(0.0, rho)),
            triangle_count=len(entries),
            network_cor=network_cor,
        )
