"""
Config Service
--------------
Loads and validates run configurations:
 - TOML files (syntax errors carry line and column)
 - manifest.json files written by a previous run (the `config` echo is re-validated)
 - every sweep point is checked against the experiment's parameter model before dispatch
"""

import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError

from app.experiments import BaseExperiment, get_experiment
from app.schemas.experiment import ExperimentConfig

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class ConfigError(Exception):
    """Raised when a configuration cannot be read or fails validation."""

    def __init__(self, source: str, problems: list[str]):
        self.source = source
        self.problems = problems
        super().__init__(f"{source}: " + "; ".join(problems))


@dataclass
class LoadedConfig:
    """A validated configuration with its experiment and expanded sweep points."""

    source: str
    config: ExperimentConfig
    experiment: BaseExperiment
    points: list[dict[str, Any]]
    validated: list[BaseModel]


# -------------------------------------------------------------------------
# Error formatting
# -------------------------------------------------------------------------
def format_validation_error(error: ValidationError, prefix: str = "") -> list[str]:
    """One line per pydantic error: dotted field path and message."""
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item.get("loc", ()))
        if prefix:
            path = f"{prefix}.{path}" if path else prefix
        lines.append(f"{path or '<root>'}: {item.get('msg', 'invalid value')}")
    return lines


# -------------------------------------------------------------------------
# Loading
# -------------------------------------------------------------------------
def read_raw_config(path: str | Path) -> dict[str, Any]:
    """Parse a TOML config or the config echo of a manifest.json."""
    path = Path(path)
    source = str(path)
    if not path.is_file():
        raise ConfigError(source, ["file not found"])

    if path.suffix == ".json":
        try:
            manifest = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(source, [f"line {e.lineno}, column {e.colno}: {e.msg}"])
        if not isinstance(manifest, dict) or "config" not in manifest:
            raise ConfigError(source, ["manifest has no `config` section"])
        logger.info(f"Re-running from manifest {source}")
        return manifest["config"]

    try:
        with path.open("rb") as fh:
            return tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(source, [f"TOML syntax error: {e}"])


def parse_config(raw: dict[str, Any], source: str = "<config>") -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(source, format_validation_error(e))


def validate_points(experiment: BaseExperiment, config: ExperimentConfig, source: str) -> tuple[list[dict], list[BaseModel]]:
    """
    Validate every sweep point against the experiment's preconditions.

    Raises:
        ConfigError listing every failing point with its field path or the violated hypothesis
    """
    points = config.points()
    validated: list[BaseModel] = []
    problems: list[str] = []
    for index, point in enumerate(points):
        prefix = f"sweep[{index}]" if config.sweep else "params"
        try:
            validated.append(experiment.validate_point(config, point))
        except ValidationError as e:
            problems.extend(format_validation_error(e, prefix))
        except ValueError as e:
            problems.append(f"{prefix}: {e}")
    if problems:
        raise ConfigError(source, problems)
    return points, validated


def load_config(path: str | Path) -> LoadedConfig:
    """
    Read, parse and validate a configuration file.

    Returns:
        LoadedConfig ready for the sweep job

    Raises:
        ConfigError: unreadable file, TOML syntax error, schema error, unknown experiment
            or a sweep point outside the experiment's preconditions
    """
    source = str(path)
    raw = read_raw_config(path)
    config = parse_config(raw, source)

    try:
        experiment = get_experiment(config.experiment)
    except ValueError as e:
        raise ConfigError(source, [f"experiment: {e}"])

    points, validated = validate_points(experiment, config, source)
    logger.info(f"Config {source} valid: {experiment.experiment_id}, {len(points)} sweep points")
    return LoadedConfig(source=source, config=config, experiment=experiment, points=points, validated=validated)
