"""
Experiment catalog: every id, the result it checks, the statement and the operation it calls.
The order below is the listing order and never depends on the environment.
"""

from app.experiments.estimator_experiments import (
    A2Experiment,
    DispersiveExperiment,
    LocalizedExperiment,
    LogEndpointExperiment,
    ShellTransportExperiment,
    StrichartzExperiment,
    StrichartzInverseExperiment,
    WeightedBernsteinExperiment,
    WeightedL2L2Experiment,
    WeightedRieszExperiment,
    WeightedShellEquivalenceExperiment,
    WeightedStrichartzExperiment,
    WeightedStrichartzSecondExperiment,
)
from app.experiments.kernel_experiments import (
    KernelSlopeExperiment,
    KernelSweepExperiment,
    LowFrequencyKernelExperiment,
    LowFrequencyLogKernelExperiment,
)
from app.experiments.propagator_experiments import HuygensExperiment, KirchhoffExperiment
from app.experiments.system_experiments import (
    LifespanExperiment,
    LinearLimitExperiment,
    LiquidCrystalEvolution,
    MaxwellScalarEvolution,
    NonlinearMembraneEvolution,
    RelativisticMembraneEvolution,
    ScatteringExperiment,
    WaveMapsCubicEvolution,
)

EXPERIMENTS = (
    KernelSweepExperiment,
    KernelSlopeExperiment,
    LowFrequencyKernelExperiment,
    LowFrequencyLogKernelExperiment,
    DispersiveExperiment,
    StrichartzExperiment,
    LogEndpointExperiment,
    StrichartzInverseExperiment,
    WeightedStrichartzExperiment,
    WeightedStrichartzSecondExperiment,
    LocalizedExperiment,
    WeightedL2L2Experiment,
    ShellTransportExperiment,
    WeightedShellEquivalenceExperiment,
    WeightedBernsteinExperiment,
    WeightedRieszExperiment,
    A2Experiment,
    HuygensExperiment,
    KirchhoffExperiment,
    RelativisticMembraneEvolution,
    NonlinearMembraneEvolution,
    MaxwellScalarEvolution,
    LiquidCrystalEvolution,
    WaveMapsCubicEvolution,
    ScatteringExperiment,
    LinearLimitExperiment,
    LifespanExperiment,
)

CATALOG = {experiment.experiment_id: experiment for experiment in EXPERIMENTS}


def list_experiments() -> list[dict]:
    """Catalog entries in listing order."""
    return [experiment().get_info() for experiment in EXPERIMENTS]
