from datetime import datetime, timezone
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from demandvalue.forecast.forecasters import FORECASTERS
from demandvalue.forecast.metrics import METRICS, NORMALIZERS

AlgorithmName = Literal["exact", "mc", "tmc", "rs", "trs", "ss", "tss"]
ALGORITHMS: tuple[str, ...] = ("exact", "mc", "tmc", "rs", "trs", "ss", "tss")
TRUNCATED_ALGORITHMS: tuple[str, ...] = ("tmc", "trs", "tss")


class AlgorithmSpec(BaseModel):
    """Shapley algorithm and its parameters."""

    name: AlgorithmName = Field("exact", description="exact, mc, rs, ss or a t-prefixed truncated variant")
    rounds: int = Field(4, ge=1, description="Permutations per player for rs/ss")
    tau: float = Field(0.95, gt=0.0, le=1.0, description="Truncation threshold as a fraction of v(N)")
    convergence_threshold: float = Field(0.01, gt=0.0, lt=1.0)
    seed: int | None = Field(None, ge=0)
    min_permutations: int | None = Field(None, ge=1)
    max_permutations: int | None = Field(None, ge=1)

    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="after")
    def require_seed(self) -> "AlgorithmSpec":
        if self.stochastic and self.seed is None:
            raise ValueError(f"algorithm {self.name} needs a seed")
        return self

    @property
    def stochastic(self) -> bool:
        return self.name != "exact"

    @property
    def truncated(self) -> bool:
        return self.name in TRUNCATED_ALGORITHMS

    @property
    def sampler(self) -> str:
        """Permutation source: exact, mc, rs or ss."""
        return self.name[1:] if self.truncated else self.name

    def with_seed(self, seed: int) -> "AlgorithmSpec":
        return self.model_copy(update={"seed": seed})

    def params(self) -> dict:
        """Parameters that apply to this algorithm, for reports and manifests."""
        params: dict = {"seed": self.seed}
        if self.sampler in ("rs", "ss"):
            params["rounds"] = self.rounds
        if self.sampler == "mc":
            params["convergence_threshold"] = self.convergence_threshold
        if self.truncated:
            params["tau"] = self.tau
        return params


def _naive_utc(value: datetime | None) -> datetime | None:
    if value is None or value.tzinfo is None:
        return value
    return value.astimezone(timezone.utc).replace(tzinfo=None)


class RunConfig(BaseModel):
    """Flat run configuration shared by every CLI command.

    Files and manifests use the same keys, so a manifest can be replayed as
    a config file.
    """

    # Input
    input: str | None = Field(None, description="Trip CSV path, or generator name for the synthetic schema")
    schema_name: Literal["generic", "chicago", "nyc", "synthetic"] = Field("generic", alias="schema")
    date_from: datetime | None = Field(None, alias="from")
    date_to: datetime | None = Field(None, alias="to")
    zone: str | None = None
    per_zone: bool = False
    source_column: Literal["company", "driver"] = "company"
    top_k: int | None = Field(None, ge=1)
    bin_hours: int = Field(1, ge=1, le=168)
    control_start: datetime | None = None
    data_seed: int = Field(0, ge=0, description="Seed of synthetic panels")

    # Model
    forecaster: str = "seasonal_profile"
    metric: str = "cossim"
    metrics: list[str] = Field(default_factory=lambda: ["cossim", "numsim", "rdtw"])
    normalization: str = "mean"

    # Algorithms
    algo: AlgorithmName = "exact"
    algorithms: list[AlgorithmName] | None = None
    rounds: int = Field(4, ge=1)
    tau: float = Field(0.95, gt=0.0, le=1.0)
    taus: list[float] = Field(default_factory=lambda: [0.6, 0.7, 0.8, 0.9, 0.95, 1.0])
    conv_threshold: float = Field(0.01, gt=0.0, lt=1.0)
    reps: int = Field(50, ge=1)
    seed: int | None = Field(None, ge=0)
    workers: int = Field(1, ge=1)

    # Analyses
    thresholds: list[float] = Field(default_factory=lambda: [0.1, 0.2])
    accuracy_floor: float | None = Field(None, ge=0.0, le=1.0)
    k_values: list[int] | None = None
    samples_per_k: int = Field(100, ge=1)
    target_fraction: float = Field(0.95, gt=0.0, le=1.0)
    target: float | None = Field(None, le=1.0)
    batch_size: int = Field(5, ge=1)
    max_batches: int = Field(10, ge=1)
    top: int = Field(4, ge=1, description="Rank agreement depth for metric-compare")
    strict: bool = False

    # Output
    out: str = "results"

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    @field_validator("date_from", "date_to", "control_start")
    @classmethod
    def validate_naive(cls, v):
        return _naive_utc(v)

    @field_validator("forecaster")
    @classmethod
    def validate_forecaster(cls, v):
        if v not in FORECASTERS:
            raise ValueError(f"unknown forecaster {v}; available: {sorted(FORECASTERS)}")
        return v

    @field_validator("metric")
    @classmethod
    def validate_metric(cls, v):
        if v not in METRICS:
            raise ValueError(f"unknown metric {v}; available: {sorted(METRICS)}")
        return v

    @field_validator("metrics")
    @classmethod
    def validate_metrics(cls, v):
        unknown = [m for m in v if m not in METRICS]
        if unknown or not v:
            raise ValueError(f"metrics must be a non-empty subset of {sorted(METRICS)}")
        return v

    @field_validator("normalization")
    @classmethod
    def validate_normalization(cls, v):
        if v not in NORMALIZERS:
            raise ValueError(f"unknown normalization {v}; available: {sorted(NORMALIZERS)}")
        return v

    @field_validator("taus")
    @classmethod
    def validate_taus(cls, v):
        if not v or any(not 0.0 < t <= 1.0 for t in v):
            raise ValueError("taus must be fractions in (0, 1]")
        return v

    @model_validator(mode="after")
    def validate_windows(self) -> "RunConfig":
        if self.date_from and self.date_to and self.date_from >= self.date_to:
            raise ValueError("'from' must be before 'to'")
        if self.control_start and self.date_from and self.control_start <= self.date_from:
            raise ValueError("control_start must be after 'from'")
        if self.control_start and self.date_to and self.control_start >= self.date_to:
            raise ValueError("control_start must be before 'to'")
        return self

    @model_validator(mode="after")
    def require_seed(self) -> "RunConfig":
        names = [self.algo, *(self.algorithms or [])]
        if self.seed is None and any(name != "exact" for name in names):
            raise ValueError("a seed is required for stochastic algorithms")
        return self

    def algorithm_spec(self, name: str | None = None, seed: int | None = None) -> AlgorithmSpec:
        """Algorithm settings for ``name`` (defaults to ``algo``)."""
        return AlgorithmSpec(
            name=name or self.algo,
            rounds=self.rounds,
            tau=self.tau,
            convergence_threshold=self.conv_threshold,
            seed=seed if seed is not None else self.seed,
        )

    def to_manifest(self) -> dict:
        """JSON-ready config using file keys."""
        return self.model_dump(mode="json", by_alias=True)
