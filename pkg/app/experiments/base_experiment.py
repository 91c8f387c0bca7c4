from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, ClassVar

from pydantic import BaseModel

from app.fields import Grid3, make_grid
from app.schemas.experiment import ExperimentConfig


class ExperimentError(ValueError):
    """Raised when a config lacks a section the experiment needs."""
    pass


@dataclass
class PointResult:
    """Rows and scalar summary of one sweep point."""

    rows: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)


def scalar_items(values: dict[str, Any]) -> dict[str, Any]:
    """Keep the entries that fit in a table cell."""
    return {key: value for key, value in values.items() if isinstance(value, (int, float, str, bool)) or value is None}


class BaseExperiment(ABC):
    """
    Abstract base class for all experiments (kernel sweeps, estimator checks, solver runs).
    Ensures a consistent interface across the catalog.
    """

    experiment_id: ClassVar[str]
    reference: ClassVar[str]
    statement: ClassVar[str]
    operation: ClassVar[str]
    params_model: ClassVar[type[BaseModel]]
    needs_grid: ClassVar[bool] = False
    columns: ClassVar[tuple[str, ...] | None] = None

    def validate_point(self, config: ExperimentConfig, point: dict[str, Any]) -> BaseModel:
        """
        Validate one sweep point before anything is computed.

        Raises:
            pydantic.ValidationError or ValueError naming the violated hypothesis
        """
        if self.needs_grid and config.grid is None:
            raise ExperimentError(f"{self.experiment_id} needs a [grid] section")
        return self.params_model.model_validate(point)

    def make_grid(self, config: ExperimentConfig) -> Grid3:
        return make_grid(config.grid.half_length, config.grid.points_per_axis)

    @abstractmethod
    def run_point(self, config: ExperimentConfig, params: BaseModel, point: dict[str, Any] | None = None) -> PointResult:
        """
        Evaluate one validated sweep point.

        Returns:
            PointResult with table rows (a `flags` entry marks invalid rows) and scalar summary
        """
        pass

    def get_info(self) -> dict:
        """Return catalog metadata: id, the result it checks, the statement and the operation it calls."""
        return {
            "id": self.experiment_id,
            "reference": self.reference,
            "statement": self.statement,
            "operation": self.operation,
            "parameters": sorted(self.params_model.model_fields),
        }
