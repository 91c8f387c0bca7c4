"""
Output Service
--------------
Writes the files of one run directory:
 - results.csv   every row in sweep order (experiment column contract when one is declared)
 - flagged.csv   rows carrying a validity flag, listed apart from the aggregation
 - summary.json  per-point summaries, column aggregates and acceptance verdicts
 - manifest.json config echo, package versions and validity summary (no timestamps)
"""

import json
import logging
import platform
from collections import Counter
from pathlib import Path
from typing import Any, Optional

import joblib
import numpy as np
import pandas as pd
import pydantic
import scipy

from app.core.config import settings
from app.experiments.base_experiment import scalar_items
from app.services.experiment_service import FLAGS_COLUMN, RunOutcome, split_flagged

logger = logging.getLogger(__name__)

RESULTS_FILE = "results.csv"
FLAGGED_FILE = "flagged.csv"
SUMMARY_FILE = "summary.json"
MANIFEST_FILE = "manifest.json"
FLOAT_FORMAT = "%.12e"

# Settings that change numbers; echoed so a manifest re-run can be compared
NUMERIC_SETTINGS = (
    "SUPPORT_TOLERANCE",
    "KERNEL_TOLERANCE",
    "ALIASING_TOLERANCE",
    "SHELL_MARGIN",
    "CFL",
    "DEFAULT_DELTA",
    "STABILITY_FACTOR",
)


def _to_builtin(value: Any):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, tuple)):
        return list(value)
    if hasattr(value, "value"):
        return value.value
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_json(path: Path, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, default=_to_builtin)
    path.write_text(text + "\n", encoding="utf-8")


def run_directory(run: RunOutcome, override: Optional[str] = None) -> Path:
    """--output beats [output].directory beats OUTPUT_DIR/<run name>."""
    config = run.loaded.config
    if override:
        return Path(override)
    if config.output.directory:
        return Path(config.output.directory)
    return Path(settings.OUTPUT_DIR) / config.run_name


def package_versions() -> dict[str, str]:
    return {
        "wavelab": settings.PROJECT_VERSION,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
        "pydantic": pydantic.VERSION,
        "joblib": joblib.__version__,
    }


def table_frames(run: RunOutcome) -> tuple[pd.DataFrame, pd.DataFrame]:
    """(results table, flagged table) honoring the experiment's column contract."""
    frame = run.results
    columns = run.loaded.experiment.columns
    if frame.empty or columns is None:
        return frame, run.flagged
    results = frame.reindex(columns=list(columns))
    flagged = run.flagged.reindex(columns=list(columns) + [FLAGS_COLUMN])
    return results, flagged


def aggregates(run: RunOutcome) -> dict[str, dict[str, float]]:
    """min/max of each numeric column over valid rows."""
    valid, _ = split_flagged(run.results)
    if valid.empty:
        return {}
    numeric = valid.select_dtypes(include="number")
    return {
        column: {"min": float(numeric[column].min()), "max": float(numeric[column].max())}
        for column in numeric.columns
        if numeric[column].notna().any()
    }


def validity_summary(run: RunOutcome) -> dict[str, Any]:
    frame = run.results
    counts: Counter = Counter()
    if not frame.empty:
        for flags in frame[FLAGS_COLUMN]:
            counts.update(flag for flag in flags.split(";") if flag)
    return {
        "rows": int(len(frame)),
        "flagged_rows": int(len(run.flagged)),
        "flag_counts": dict(sorted(counts.items())),
        "failed_points": [{"index": o.index, "error_type": o.error_type, "error": o.error} for o in run.failed_points],
    }


def build_summary(run: RunOutcome) -> dict[str, Any]:
    config = run.loaded.config
    points = []
    for outcome in run.outcomes:
        entry: dict[str, Any] = {"index": outcome.index, "point": scalar_items(outcome.point)}
        if outcome.result is not None:
            entry["summary"] = outcome.result.summary
        else:
            entry["error"] = outcome.error
        points.append(entry)
    return {
        "experiment": run.loaded.experiment.experiment_id,
        "name": config.run_name,
        "status": int(run.status),
        "reason": run.reason,
        "validity": validity_summary(run),
        "aggregates": aggregates(run),
        "acceptance": [verdict.to_dict() for verdict in run.verdicts],
        "points": points,
    }


def build_manifest(run: RunOutcome) -> dict[str, Any]:
    experiment = run.loaded.experiment
    return {
        "project": settings.PROJECT_NAME,
        "experiment": experiment.get_info(),
        "config": run.loaded.config.model_dump(),
        "versions": package_versions(),
        "settings": {name: getattr(settings, name) for name in NUMERIC_SETTINGS},
        "validity": validity_summary(run),
        "status": int(run.status),
    }


def write_outputs(run: RunOutcome, override: Optional[str] = None) -> Path:
    """
    Write the four run files; writing happens here only, after the sweep has joined.

    Returns:
        the run directory
    """
    directory = run_directory(run, override)
    directory.mkdir(parents=True, exist_ok=True)

    results, flagged = table_frames(run)
    results.to_csv(directory / RESULTS_FILE, index=False, float_format=FLOAT_FORMAT)
    flagged.to_csv(directory / FLAGGED_FILE, index=False, float_format=FLOAT_FORMAT)
    write_json(directory / SUMMARY_FILE, build_summary(run))
    write_json(directory / MANIFEST_FILE, build_manifest(run))

    logger.info(f"Wrote {len(results)} rows ({len(flagged)} flagged) to {directory}")
    return directory
