"""
Experiment Service
------------------
Orchestrates one run:
 - dispatches the validated sweep to the sweep job
 - joins the point rows in sweep order and separates flagged rows
 - evaluates the acceptance gates on point summaries and valid rows only
 - maps the outcome to an exit status
"""

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Optional

import numpy as np
import pandas as pd

from app.jobs.sweep_job import PointOutcome, run_sweep
from app.schemas.experiment import AcceptanceGate
from app.services.config_service import LoadedConfig

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

FLAGS_COLUMN = "flags"


class ExitStatus(IntEnum):
    OK = 0
    CONFIG_ERROR = 1
    NUMERICAL_FAILURE = 2
    ACCEPTANCE_FAILURE = 3


@dataclass
class GateVerdict:
    column: str
    aggregate: str
    passed: bool
    value: Optional[float]
    min: Optional[float]
    max: Optional[float]
    reason: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "column": self.column,
            "aggregate": self.aggregate,
            "min": self.min,
            "max": self.max,
            "value": self.value,
            "passed": self.passed,
            "reason": self.reason,
        }


@dataclass
class RunOutcome:
    loaded: LoadedConfig
    outcomes: list[PointOutcome]
    results: pd.DataFrame
    flagged: pd.DataFrame
    verdicts: list[GateVerdict] = field(default_factory=list)
    status: ExitStatus = ExitStatus.OK
    reason: str = ""

    @property
    def failed_points(self) -> list[PointOutcome]:
        return [outcome for outcome in self.outcomes if outcome.failed]


# -------------------------------------------------------------------------
# Result tables
# -------------------------------------------------------------------------
def collect_rows(outcomes: list[PointOutcome]) -> pd.DataFrame:
    """All rows in sweep order, with the `flags` column normalized to strings."""
    rows = [row for outcome in outcomes if outcome.result is not None for row in outcome.result.rows]
    frame = pd.DataFrame(rows)
    if frame.empty:
        return frame
    if FLAGS_COLUMN not in frame.columns:
        frame[FLAGS_COLUMN] = ""
    frame[FLAGS_COLUMN] = frame[FLAGS_COLUMN].fillna("").astype(str)
    return frame


def split_flagged(frame: pd.DataFrame) -> tuple[pd.DataFrame, pd.DataFrame]:
    """(valid rows, flagged rows)."""
    if frame.empty:
        return frame, frame
    mask = frame[FLAGS_COLUMN] != ""
    return frame.loc[~mask].reset_index(drop=True), frame.loc[mask].reset_index(drop=True)


# -------------------------------------------------------------------------
# Acceptance gates
# -------------------------------------------------------------------------
def gate_values(gate: AcceptanceGate, outcomes: list[PointOutcome], valid: pd.DataFrame) -> list[float]:
    """Values for a gate: point summaries first, valid rows when no summary carries the column."""
    values = [
        outcome.result.summary[gate.column]
        for outcome in outcomes
        if outcome.result is not None and outcome.result.summary.get(gate.column) is not None
    ]
    if not values and not valid.empty and gate.column in valid.columns:
        values = valid[gate.column].dropna().tolist()
    return [float(value) for value in values]


def evaluate_gate(gate: AcceptanceGate, values: list[float]) -> GateVerdict:
    verdict = GateVerdict(column=gate.column, aggregate=gate.aggregate, passed=False, value=None, min=gate.min, max=gate.max)
    if not values:
        verdict.reason = "no valid values"
        return verdict

    array = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(array)):
        verdict.reason = "non-finite value"
        return verdict

    if gate.aggregate == "max":
        checked = np.array([array.max()])
    elif gate.aggregate == "min":
        checked = np.array([array.min()])
    elif gate.aggregate == "last":
        checked = array[-1:]
    else:
        checked = array

    low_ok = gate.min is None or bool(np.all(checked >= gate.min))
    high_ok = gate.max is None or bool(np.all(checked <= gate.max))
    verdict.passed = low_ok and high_ok
    # report the value that decides the verdict
    if gate.aggregate == "all":
        if not high_ok:
            verdict.value = float(checked.max())
        elif not low_ok:
            verdict.value = float(checked.min())
        else:
            verdict.value = float(checked.max() if gate.max is not None else checked.min())
    else:
        verdict.value = float(checked[0])
    if not verdict.passed:
        verdict.reason = "out of bounds"
    return verdict


# -------------------------------------------------------------------------
# Orchestration
# -------------------------------------------------------------------------
def run_experiment(loaded: LoadedConfig, workers: Optional[int] = None) -> RunOutcome:
    """
    Run a validated configuration end to end (no files written).

    Returns:
        RunOutcome with result tables, gate verdicts and exit status
    """
    config = loaded.config
    outcomes = run_sweep(loaded.experiment, config, loaded.points, loaded.validated, workers=workers)
    frame = collect_rows(outcomes)
    valid, flagged = split_flagged(frame)

    if not flagged.empty:
        logger.warning(f"{len(flagged)} of {len(frame)} rows flagged; excluded from acceptance")

    verdicts = [evaluate_gate(gate, gate_values(gate, outcomes, valid)) for gate in config.acceptance]
    for verdict in verdicts:
        if verdict.passed:
            logger.info(f"Gate {verdict.column} ({verdict.aggregate}) passed: {verdict.value}")
        else:
            logger.warning(f"Gate {verdict.column} ({verdict.aggregate}) failed: {verdict.reason}, value {verdict.value}")

    run = RunOutcome(loaded=loaded, outcomes=outcomes, results=frame, flagged=flagged, verdicts=verdicts)
    if run.failed_points:
        run.status = ExitStatus.NUMERICAL_FAILURE
        run.reason = f"{len(run.failed_points)} sweep points failed"
    elif frame.empty:
        run.status = ExitStatus.NUMERICAL_FAILURE
        run.reason = "no result rows"
    elif valid.empty:
        run.status = ExitStatus.NUMERICAL_FAILURE
        run.reason = "every result row is flagged"
    elif not all(verdict.passed for verdict in verdicts):
        run.status = ExitStatus.ACCEPTANCE_FAILURE
        run.reason = "acceptance gates failed: " + ", ".join(v.column for v in verdicts if not v.passed)
    logger.info(f"Run {config.run_name} finished with status {run.status.name}")
    return run
