"""
Linear dispersive estimates
 - shell:        ||P_dot_k e^{its|D|} f||_inf (1 + 2^k t) / (2^{3k} ||P_dot_k f||_1)
 - low-frequency: ||P_-1 e^{its|D|} f||_inf (1 + t) / ||P_-1 f||_1
 - low-frequency-inverse: ||P_-1 |D|^-2 e^{its|D|} f||_inf (1 + t) / (ln(e + t) ||P_-1 f||_1)
"""

import logging
from enum import Enum
from typing import Sequence

import numpy as np

from app.dyadic import ProjectionKind, check_resolvable, frequency_symbol
from app.estimator.families import resolve_members
from app.estimator.spacetime import ShellEvolution
from app.fields import ScalarField, WraparoundError, apply_symbol, norm, radial_symbol, singular_origin_value
from app.fields.grid import Grid3, wraparound_check
from app.schemas.family import TestFamily
from app.schemas.report import FLAG_WRAPAROUND, ConstantReport

logger = logging.getLogger(__name__)


class DispersiveVariant(str, Enum):
    SHELL = "shell"
    LOW_FREQUENCY = "low-frequency"
    LOW_FREQUENCY_INVERSE = "low-frequency-inverse"


def window_flags(members: Sequence[ScalarField], horizon: float, speed: float = 1.0) -> list[str]:
    """[wraparound] when a certified member would reach its periodic images before the horizon."""
    for member in members:
        if member.support_radius is None:
            continue
        try:
            wraparound_check(member.grid, member.support_radius, speed, horizon)
        except WraparoundError as e:
            logger.warning(f"Wraparound window exceeded: {e}")
            return [FLAG_WRAPAROUND]
    return []


def _low_frequency_symbol(grid: Grid3, inverse: bool) -> np.ndarray:
    lump = frequency_symbol(grid, ProjectionKind.NONHOMOGENEOUS, -1)
    if not inverse:
        return lump
    weight = radial_symbol(grid, lambda rho: rho ** -2.0, at_zero=singular_origin_value(grid, 2.0))
    return lump * weight


def check_dispersive(
    family: TestFamily | Sequence[ScalarField],
    grid: Grid3,
    k: int,
    t_grid: Sequence[float],
    sign: int = 1,
    variant: DispersiveVariant = DispersiveVariant.SHELL,
) -> ConstantReport:
    """
    Ratio statistics of the dispersive estimate over family members and times.

    Raises:
        ResolutionError: if shell k is not resolved
    """
    variant = DispersiveVariant(variant)
    members = resolve_members(family, grid)
    times = np.asarray(t_grid, dtype=float)

    if variant == DispersiveVariant.SHELL:
        check_resolvable(grid, ProjectionKind.HOMOGENEOUS, k)
        projector = frequency_symbol(grid, ProjectionKind.HOMOGENEOUS, k)
        operator = projector
        envelope = lambda t: 2.0 ** (3 * k) / (1.0 + 2.0 ** k * t)
        parameters = {"k": k, "sign": sign}
    else:
        projector = frequency_symbol(grid, ProjectionKind.NONHOMOGENEOUS, -1)
        inverse = variant == DispersiveVariant.LOW_FREQUENCY_INVERSE
        operator = _low_frequency_symbol(grid, inverse)
        if inverse:
            envelope = lambda t: np.log(np.e + t) / (1.0 + t)
        else:
            envelope = lambda t: 1.0 / (1.0 + t)
        parameters = {"k": -1, "sign": sign}
    parameters["variant"] = variant.value

    lhs, rhs = [], []
    for member in members:
        data_size = norm(apply_symbol(member, projector), p=1)
        evolution = ShellEvolution(member, operator, sign)
        for t in times:
            lhs.append(norm(evolution.at(t), np.inf))
            rhs.append(envelope(t) * data_size)

    flags = window_flags(members, float(times.max()) if times.size else 0.0)
    return ConstantReport.from_samples(f"dispersive-{variant.value}", parameters, lhs, rhs, flags)
