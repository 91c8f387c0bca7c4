import itertools
from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.estimator.dispersive import DispersiveVariant
from app.estimator.localized import LocalizedVariant
from app.estimator.strichartz import Endpoint, check_admissible, check_weighted_hypotheses, dual_exponent
from app.schemas.kernel import KernelSpec
from app.wavesys.initial_data import DataProfile


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# -------------------------------------------------------------------------
# Config sections
# -------------------------------------------------------------------------
class GridSection(StrictModel):
    half_length: float = Field(..., gt=0, description="Box half-length L")
    points_per_axis: int = Field(..., ge=8, description="Even number of points per axis")

    @field_validator("points_per_axis")
    @classmethod
    def check_even(cls, value: int) -> int:
        if value % 2:
            raise ValueError(f"points_per_axis must be even, got {value}")
        return value


class ToleranceSection(StrictModel):
    refine: bool = Field(False, description="Run the refinement gate (n doubled) for estimator checks")
    stability_factor: Optional[float] = Field(None, gt=0, description="Tolerated relative change under refinement")
    kernel_tolerance: Optional[float] = Field(None, gt=0, description="Absolute quadrature tolerance")


class AcceptanceGate(StrictModel):
    """
    Bound on a result column or a per-point summary value.

    Behaviors:
      - `column` is looked up in the point summaries first, then in the valid result rows
      - aggregate picks the value compared against min/max: every value, their max, min or last
    """

    column: str
    min: Optional[float] = None
    max: Optional[float] = None
    aggregate: Literal["all", "max", "min", "last"] = "all"

    @model_validator(mode="after")
    def check_bounds(self):
        if self.min is None and self.max is None:
            raise ValueError(f"acceptance gate on {self.column!r} needs min or max")
        return self


class OutputSection(StrictModel):
    directory: Optional[str] = Field(None, description="Run directory; defaults to OUTPUT_DIR/<name>")


class ExperimentConfig(StrictModel):
    """
    One run: an experiment id, its fixed parameters and the sweep axes expanded as a
    cartesian product in the order they are written.
    """

    experiment: str
    name: Optional[str] = None
    seed: int = 0
    grid: Optional[GridSection] = None
    family: Optional[dict[str, Any]] = None
    params: dict[str, Any] = Field(default_factory=dict)
    sweep: dict[str, list[Any]] = Field(default_factory=dict)
    tolerances: ToleranceSection = Field(default_factory=ToleranceSection)
    acceptance: list[AcceptanceGate] = Field(default_factory=list)
    output: OutputSection = Field(default_factory=OutputSection)

    @field_validator("sweep")
    @classmethod
    def check_axes(cls, value: dict[str, list[Any]]) -> dict[str, list[Any]]:
        for key, axis in value.items():
            if not axis:
                raise ValueError(f"sweep axis {key!r} is empty")
        return value

    @property
    def run_name(self) -> str:
        return self.name or self.experiment

    def points(self) -> list[dict[str, Any]]:
        """Sweep points in deterministic order (last axis fastest), merged over params."""
        keys = list(self.sweep)
        combos = itertools.product(*(self.sweep[key] for key in keys)) if keys else [()]
        return [{**self.params, **dict(zip(keys, combo))} for combo in combos]


# -------------------------------------------------------------------------
# Per-experiment parameter models
# -------------------------------------------------------------------------
def _as_exponent(value):
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
        return np.inf
    return value


class KernelParams(StrictModel):
    k: int
    iota: Literal[0, 1, 2] = 0
    M: int = Field(0, ge=0)
    sign: Literal[1, -1] = 1
    homogeneous: bool = False
    times: list[float] = Field(default_factory=lambda: [1.0, 10.0, 100.0])
    radius_factors: list[float] = Field(default_factory=lambda: [0.25, 1.0, 3.0])

    @field_validator("times")
    @classmethod
    def check_times(cls, value: list[float]) -> list[float]:
        if not value or any(t < 0 for t in value):
            raise ValueError("times must be a nonempty list of nonnegative values")
        return value

    @model_validator(mode="after")
    def check_kernel(self):
        self.kernel_spec()
        return self

    def kernel_spec(self) -> KernelSpec:
        return KernelSpec(k=self.k, iota=self.iota, M=self.M, sign=self.sign, homogeneous=self.homogeneous)


class KernelSlopeParams(KernelParams):
    regime: Literal["light-cone", "core"] = "light-cone"
    window: tuple[float, float] = (20.0, 200.0)
    count: int = Field(16, ge=8, description="Log-spaced times inside the window")


class LowFrequencyKernelParams(KernelParams):
    k: Literal[-1] = -1
    iota: Literal[0, 1] = 0
    M: Literal[0] = 0
    homogeneous: Literal[False] = False
    times: list[float] = Field(default_factory=lambda: [1.0, 10.0, 100.0, 200.0])
    radius_factors: list[float] = Field(default_factory=lambda: [0.0, 0.25, 1.0, 3.0])


class LowFrequencyLogKernelParams(LowFrequencyKernelParams):
    iota: Literal[2] = 2


class FamilyCheckParams(StrictModel):
    """Fields shared by the estimator checks; family overrides are split off beforehand."""

    sign: Literal[1, -1] = 1


class DispersiveParams(FamilyCheckParams):
    k: int
    times: list[float]
    variant: DispersiveVariant = DispersiveVariant.SHELL


class StrichartzParams(FamilyCheckParams):
    k: int
    p: float
    r: Optional[float] = None
    t0: float = 0.0
    t: float = Field(10.0, gt=0)
    endpoint: Optional[Endpoint] = None
    homogeneous: bool = False

    @field_validator("p", "r", mode="before")
    @classmethod
    def parse_infinity(cls, value):
        return _as_exponent(value)

    @model_validator(mode="after")
    def check_pair(self):
        if self.r is None:
            self.r = dual_exponent(self.p)
        check_admissible(self.p, self.r)
        at_endpoint = self.p == 2 and self.r == np.inf
        if at_endpoint and self.endpoint is None:
            raise ValueError("(p, r) = (2, inf) needs the endpoint variant 'log'")
        if self.endpoint == Endpoint.INVERSE:
            raise ValueError("the inverse-gradient endpoint is checked by the strichartz-inverse-gradient experiment")
        if self.endpoint is not None and not at_endpoint:
            raise ValueError(f"endpoint variants are defined at (2, inf), got ({self.p}, {self.r})")
        if self.t0 > self.t:
            raise ValueError(f"time window [{self.t0}, {self.t}] is empty")
        return self


class StrichartzInverseParams(FamilyCheckParams):
    """P_k |D|^-1 at the pair (2, inf); the pair and the endpoint variant are fixed."""

    k: int
    t0: float = 0.0
    t: float = Field(10.0, gt=0)
    homogeneous: bool = False

    @model_validator(mode="after")
    def check_window(self):
        if self.t0 > self.t:
            raise ValueError(f"time window [{self.t0}, {self.t}] is empty")
        return self


class LogEndpointParams(FamilyCheckParams):
    """The (2, inf) endpoint evaluated on [0, t_short] and [0, t_long]."""

    k: int
    t_short: float = Field(10.0, gt=0)
    t_long: float = Field(100.0, gt=0)
    homogeneous: bool = False

    @model_validator(mode="after")
    def check_horizons(self):
        if self.t_long <= self.t_short:
            raise ValueError(f"t_long ({self.t_long}) must exceed t_short ({self.t_short})")
        return self


class WeightedStrichartzParams(FamilyCheckParams):
    k: int
    p: float
    beta1: float
    beta2: float
    item: Literal[1, 2] = 1
    t0: float = 0.0
    t: float = Field(10.0, gt=0)

    @model_validator(mode="after")
    def check_hypotheses(self):
        check_weighted_hypotheses(self.beta1, self.beta2, self.p, self.item)
        return self


class WeightedStrichartzFirstParams(WeightedStrichartzParams):
    item: Literal[1] = 1


class WeightedStrichartzSecondParams(WeightedStrichartzParams):
    item: Literal[2] = 2


class LocalizedParams(FamilyCheckParams):
    k: int
    times: list[float]
    j: int = -1
    iota: Literal[0, 1, 2] = 0
    variant: LocalizedVariant = LocalizedVariant.PROJECTED
    delta: Optional[float] = Field(None, gt=0, lt=1.0 / 3.0)
    theta: float = Field(1.0, ge=0, le=1)
    operator: Literal["sine", "cosine"] = "sine"


class WeightedL2L2Params(FamilyCheckParams):
    k: int
    beta1: float = Field(..., gt=0, lt=1)
    beta2: float
    times: list[float]

    @model_validator(mode="after")
    def check_betas(self):
        if not self.beta1 <= self.beta2 < 1:
            raise ValueError(f"β₂ = {self.beta2} violates the hypothesis β₁ ≤ β₂ < 1")
        return self


class ShellTransportParams(FamilyCheckParams):
    k: int
    alpha: float = Field(..., gt=0, lt=1.5)
    times: list[float]


class WeightedShellParams(StrictModel):
    beta: float = Field(..., gt=-1.5, lt=1.5, description="Weight exponent; <x>^{2 beta} is A2 for |beta| < 3/2")
    k: Optional[int] = None


class A2Params(StrictModel):
    alpha: float = Field(..., gt=-3, lt=3, description="Power of |x|")
    rel_tol: float = Field(1e-6, gt=0)
    max_side_exponent: int = Field(40, ge=0, le=60)
    reference_alpha: Optional[float] = Field(
        None, gt=-3, lt=3, description="Also report the ratio to the characteristic at this power"
    )


class HuygensParams(StrictModel):
    t: float = Field(..., gt=0)
    c: float = Field(1.0, gt=0)
    margin: Optional[float] = Field(None, ge=0)


class KirchhoffParams(StrictModel):
    t: float = Field(..., gt=0)
    c: float = Field(1.0, gt=0)
    points: int = Field(20, ge=1, description="Random evaluation points")
    spread: float = Field(1.0, ge=0, description="Evaluation points are drawn from B(0, spread)")


class SystemRunParams(StrictModel):
    preset: str
    preset_params: dict[str, Any] = Field(default_factory=dict)
    profile: DataProfile = DataProfile.COMPACT_BUMP
    epsilon: float = Field(0.01, ge=0)
    data_seed: int = 0
    support_radius: float = Field(1.0, gt=0)
    width: float = Field(1.0, gt=0)
    length: float = Field(1.0, gt=0)
    order: int = Field(4, ge=1)
    mu: float = Field(0.5, gt=0, lt=1)
    delta: Optional[float] = Field(None, gt=0, lt=1.0 / 3.0)
    T: float = Field(10.0, gt=0)
    cadence: float = Field(1.0, gt=0)
    dt: Optional[float] = Field(None, gt=0)


class ScatteringParams(SystemRunParams):
    transient: float = Field(5.0, ge=0, description="Start of the window where the metric must not grow")


class LinearLimitParams(SystemRunParams):
    pass


class LifespanParams(SystemRunParams):
    epsilons: list[float] = Field(..., min_length=1)
    blowup_threshold: float = Field(10.0, gt=1)

    @field_validator("epsilons")
    @classmethod
    def check_descending(cls, value: list[float]) -> list[float]:
        if any(b >= a for a, b in zip(value, value[1:])):
            raise ValueError(f"epsilons must be strictly descending, got {value}")
        if any(e < 0 for e in value):
            raise ValueError("epsilons must be nonnegative")
        return value
