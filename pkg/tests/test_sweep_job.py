"""
Unit tests for the sweep job: the shared logger and point evaluation.
"""
import threading

import pytest

from app.experiments import get_experiment
from app.jobs.sweep_job import SweepJobLogger, evaluate_point
from app.schemas.experiment import ExperimentConfig

pytestmark = pytest.mark.unit


@pytest.fixture
def fresh_logger_slot():
    previous = SweepJobLogger._instance
    SweepJobLogger._instance = None
    yield
    SweepJobLogger._instance = previous


def test_logger_is_created_once_across_threads(fresh_logger_slot):
    start = threading.Barrier(16)
    created = []

    def create():
        start.wait()
        created.append(SweepJobLogger())

    threads = [threading.Thread(target=create) for _ in range(16)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()

    assert len(created) == 16
    assert len({id(instance) for instance in created}) == 1
    assert created[0].logger.name == "app.jobs.sweep_job"


def test_failing_point_is_recorded_not_raised(monkeypatch):
    experiment = get_experiment("a2-weights")
    config = ExperimentConfig.model_validate({"experiment": "a2-weights", "params": {"alpha": 1.0}})
    params = experiment.validate_point(config, {"alpha": 1.0})

    def broken(*_args, **_kwargs):
        raise ArithmeticError("overflow in cube average")

    monkeypatch.setattr(experiment, "run_point", broken)
    outcome = evaluate_point(experiment, config, 0, {"alpha": 1.0}, params)
    assert outcome.result is None
    assert outcome.error_type == "ArithmeticError"
