"""Per-source valuation report: Shapley, LOO and volume side by side."""

from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from demandvalue.core.series import DemandPanel, FloatArray
from demandvalue.errors import InvalidInputError
from demandvalue.valuation.shapley import volume_shares


class SourceValue(BaseModel):
    """One report row."""

    source_id: str
    shapley: float
    shapley_share: float
    loo: float
    loo_share: float
    volume_share: float = Field(..., ge=0.0, le=1.0)
    rides: float = Field(..., ge=0.0)
    rides_pct: float = Field(..., ge=0.0, le=100.0)
    shapley_rank: int = Field(..., ge=1)
    volume_rank: int = Field(..., ge=1)

    model_config = ConfigDict(extra="forbid")


class ValueReport(BaseModel):
    """Valuation of every source in one panel plus run metadata."""

    zone: str
    metric: str
    forecaster: str
    algorithm: str
    rounds: int | None = None
    tau: float | None = None
    convergence_threshold: float | None = None
    seed: int | None = None
    v_full: float
    tte: int = Field(..., ge=0)
    permutations_used: int = Field(0, ge=0)
    truncation_skips: int = Field(0, ge=0)
    shapley_volume_r2: float | None = None
    rows: list[SourceValue] = Field(default_factory=list)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_volume_shares(self) -> "ValueReport":
        total = sum(row.volume_share for row in self.rows)
        if self.rows and abs(total - 1.0) > 1e-9:
            raise ValueError(f"volume shares sum to {total}, expected 1")
        return self

    def to_frame(self) -> pd.DataFrame:
        """One row per source, in panel order."""
        return pd.DataFrame([row.model_dump() for row in self.rows])

    def metadata(self) -> dict[str, Any]:
        return self.model_dump(exclude={"rows"})


def _shares(values: FloatArray) -> FloatArray:
    # A zero sum leaves nothing to split
    total = values.sum()
    return values / total if total != 0 else np.zeros_like(values)


def _ranks(values: FloatArray) -> list[int]:
    """1 for the largest value; ties keep panel order."""
    ranked = pd.Series(values).rank(method="first", ascending=False)
    return [int(r) for r in ranked]


def shapley_volume_r2(shapley: FloatArray, rides: FloatArray) -> float | None:
    """Squared Pearson correlation between Shapley values and ride counts.

    None when there are fewer than two sources or either side is constant.
    """
    x = np.asarray(shapley, dtype=np.float64)
    y = np.asarray(rides, dtype=np.float64)
    if len(x) < 2 or np.ptp(x) == 0 or np.ptp(y) == 0:
        return None
    r = np.corrcoef(x, y)[0, 1]
    return float(r * r)


def build_value_report(
    panel: DemandPanel,
    shapley: FloatArray,
    loo: FloatArray,
    v_full: float,
    tte: int,
    metric: str,
    forecaster: str,
    algorithm: str,
    **params: Any,
) -> ValueReport:
    """Assemble a report for ``panel`` from already computed values."""
    shapley = np.asarray(shapley, dtype=np.float64)
    loo = np.asarray(loo, dtype=np.float64)
    if len(shapley) != panel.n_sources or len(loo) != panel.n_sources:
        raise InvalidInputError(
            "Value vectors do not match the panel's sources",
            {"n_sources": panel.n_sources, "shapley": len(shapley), "loo": len(loo)},
        )

    rides = panel.totals()
    volume = volume_shares(panel)
    shapley_share = _shares(shapley)
    loo_share = _shares(loo)
    shapley_rank = _ranks(shapley)
    volume_rank = _ranks(rides)

    rows = [
        SourceValue(
            source_id=source,
            shapley=float(shapley[i]),
            shapley_share=float(shapley_share[i]),
            loo=float(loo[i]),
            loo_share=float(loo_share[i]),
            volume_share=float(volume[i]),
            rides=float(rides[i]),
            rides_pct=float(volume[i] * 100.0),
            shapley_rank=shapley_rank[i],
            volume_rank=volume_rank[i],
        )
        for i, source in enumerate(panel.sources)
    ]

    return ValueReport(
        zone=panel.zone,
        metric=metric,
        forecaster=forecaster,
        algorithm=algorithm,
        v_full=float(v_full),
        tte=tte,
        shapley_volume_r2=shapley_volume_r2(shapley, rides),
        rows=rows,
        **params,
    )
