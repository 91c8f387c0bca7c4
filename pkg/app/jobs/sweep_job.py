"""
Sweep Job
---------
Evaluates the validated sweep points of one experiment:
 - points run in a joblib worker pool (threads; numpy and scipy release the GIL)
 - results come back in sweep order whatever the pool size
 - a failing point is recorded with its error instead of aborting the sweep
"""

import logging
import threading
from dataclasses import dataclass
from typing import Any, Optional

import joblib
from pydantic import BaseModel

from app.core.config import settings
from app.experiments import BaseExperiment, PointResult
from app.schemas.experiment import ExperimentConfig


# -------------------------------------------------------------------------
# Logging Wrapper
# -------------------------------------------------------------------------
class SweepJobLogger:
    """Thin wrapper around global logging for structured messages."""
    _instance = None
    _lock = threading.Lock()

    def __new__(cls, name: str = "app.jobs.sweep_job"):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    instance = super().__new__(cls)
                    instance.logger = logging.getLogger(name)
                    cls._instance = instance
        return cls._instance

    def section_header(self, title: str):
        sep = "=" * 80
        self.logger.info(f"\n{sep}\n{title}\n{sep}")

    def info(self, msg: str):
        self.logger.info(msg)

    def warning(self, msg: str):
        self.logger.warning(msg)

    def error(self, msg: str, exc: Optional[Exception] = None):
        self.logger.error(msg)
        if exc:
            self.logger.exception(exc)

    def task_complete(self, summary: str = "Sweep completed"):
        sep = "=" * 80
        self.logger.info(f"\n{sep}\n{summary}\n{sep}\n")


@dataclass
class PointOutcome:
    index: int
    point: dict[str, Any]
    result: Optional[PointResult] = None
    error: Optional[str] = None
    error_type: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def evaluate_point(
    experiment: BaseExperiment,
    config: ExperimentConfig,
    index: int,
    point: dict[str, Any],
    params: BaseModel,
) -> PointOutcome:
    logger = SweepJobLogger()
    try:
        result = experiment.run_point(config, params, point)
    except (ValueError, ArithmeticError) as e:
        logger.error(f"Sweep point #{index} {point} failed: {type(e).__name__}: {e}")
        return PointOutcome(index=index, point=point, error=str(e), error_type=type(e).__name__)
    logger.info(f"Sweep point #{index} done ({len(result.rows)} rows)")
    return PointOutcome(index=index, point=point, result=result)


def run_sweep(
    experiment: BaseExperiment,
    config: ExperimentConfig,
    points: list[dict[str, Any]],
    validated: list[BaseModel],
    workers: Optional[int] = None,
) -> list[PointOutcome]:
    """
    Evaluate every sweep point.

    Args:
        experiment: catalog entry
        config: validated run configuration
        points: merged parameter dicts in sweep order
        validated: the matching parameter models
        workers: pool size (settings.WORKERS by default)

    Returns:
        outcomes in sweep order
    """
    logger = SweepJobLogger()
    workers = settings.WORKERS if workers is None else workers
    logger.section_header(f"Sweep: {config.run_name} ({experiment.experiment_id}, {len(points)} points, {workers} workers)")

    if workers == 1:
        outcomes = [evaluate_point(experiment, config, i, p, v) for i, (p, v) in enumerate(zip(points, validated))]
    else:
        outcomes = joblib.Parallel(n_jobs=workers, prefer="threads")(
            joblib.delayed(evaluate_point)(experiment, config, i, p, v)
            for i, (p, v) in enumerate(zip(points, validated))
        )

    failed = sum(outcome.failed for outcome in outcomes)
    logger.task_complete(f"Sweep completed: {len(outcomes) - failed} points ok, {failed} failed")
    return list(outcomes)
