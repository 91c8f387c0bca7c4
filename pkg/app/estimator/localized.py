"""
Localized L^inf - L^2 estimates
 - projected:    ||P_k |D|^-iota e^{it|D|} Q_j f||_inf vs 2^{(5/2+delta-iota)k} (1+2^k t)^-1 2^{(1+delta)j} ||Q_j f||_2
 - sine/cosine:  ||sin(t|D|)/|D| f||_inf, ||cos(t|D|) f||_inf vs min{1, R/(1+t)} ||f||_{H^4} for supp f in B(0, R)
 - compact:      P_dot_k sin(t|D|)/|D| and P_dot_k cos(t|D|) on B(0, R) data vs
                 2^{(3/2+delta)k} resp. 2^{(5/2+delta)k} (1+2^k t)^-1 R^{1+delta} ||f||_2
 - interpolated: ||P_k |D|^-iota e^{it|D|} f||_inf vs 2^{(3/2-iota)k + theta(1+delta)k} (1+t)^-theta ||<x>^{theta(1+2 delta)} P_k f||_2
"""

import logging
from enum import Enum
from typing import Sequence

import numpy as np

from app.core.config import settings
from app.dyadic import ProjectionKind, check_resolvable, frequency_symbol, physical_cutoff
from app.estimator.dispersive import window_flags
from app.estimator.families import resolve_members
from app.estimator.spacetime import ShellEvolution
from app.estimator.strichartz import HypothesisError, inverse_gradient_symbol
from app.fields import ScalarField, apply_symbol, japanese_bracket, norm, sobolev_norm
from app.fields.grid import Grid3
from app.propagators import GeometryError, cosine_symbol, sine_symbol
from app.schemas.family import TestFamily
from app.schemas.report import ConstantReport

logger = logging.getLogger(__name__)


class LocalizedVariant(str, Enum):
    PROJECTED = "projected"
    SINE = "sine"
    COSINE = "cosine"
    COMPACT = "compact"
    INTERPOLATED = "interpolated"


def _operator_symbol(grid: Grid3, k: int, iota: int, homogeneous: bool = False) -> np.ndarray:
    kind = ProjectionKind.HOMOGENEOUS if homogeneous else ProjectionKind.NONHOMOGENEOUS
    check_resolvable(grid, kind, k)
    symbol = frequency_symbol(grid, kind, k)
    return symbol * inverse_gradient_symbol(grid) if iota == 1 else symbol


def _support_of(member: ScalarField) -> float:
    if member.support_radius is None:
        raise GeometryError("compactly supported data with a certified support radius is required")
    return member.support_radius


def check_localized_linfty(
    family: TestFamily | Sequence[ScalarField],
    grid: Grid3,
    k: int,
    t_grid: Sequence[float],
    j: int = -1,
    iota: int = 0,
    variant: LocalizedVariant = LocalizedVariant.PROJECTED,
    delta: float | None = None,
    theta: float = 1.0,
    operator: str = "sine",
    sign: int = 1,
) -> ConstantReport:
    """
    Ratio statistics of one localized L^inf estimate over members and times.

    Raises:
        HypothesisError: for delta outside (0, 1/2], iota outside {0, 1} or theta outside [0, 1]
        GeometryError: if a variant needs certified supports and a member has none
    """
    variant = LocalizedVariant(variant)
    delta = settings.DEFAULT_DELTA if delta is None else delta
    if not 0 < delta <= 0.5:
        raise HypothesisError(f"delta must lie in (0, 1/2], got {delta}")
    if iota not in (0, 1):
        raise HypothesisError(f"iota must be 0 or 1, got {iota}")
    if not 0 <= theta <= 1:
        raise HypothesisError(f"theta must lie in [0, 1], got {theta}")
    if operator not in ("sine", "cosine"):
        raise HypothesisError(f"operator must be 'sine' or 'cosine', got {operator}")

    members = resolve_members(family, grid)
    times = np.asarray(t_grid, dtype=float)
    scale = 2.0 ** k
    lhs, rhs = [], []
    parameters: dict = {"variant": variant.value, "delta": delta}

    if variant == LocalizedVariant.PROJECTED:
        if j < -1:
            raise HypothesisError(f"j must be >= -1, got {j}")
        symbol = _operator_symbol(grid, k, iota)
        parameters.update(k=k, j=j, iota=iota)
        for member in members:
            localized = physical_cutoff(member, "Q", j)
            data = 2.0 ** ((1 + delta) * j) * norm(localized)
            evolution = ShellEvolution(localized, symbol, sign)
            for t in times:
                lhs.append(norm(evolution.at(t), np.inf))
                rhs.append(2.0 ** ((2.5 + delta - iota) * k) / (1.0 + scale * t) * data)

    elif variant in (LocalizedVariant.SINE, LocalizedVariant.COSINE):
        for member in members:
            radius = _support_of(member)
            data = sobolev_norm(member, 4)
            for t in times:
                symbol = sine_symbol(grid, t) if variant == LocalizedVariant.SINE else cosine_symbol(grid, t)
                lhs.append(norm(apply_symbol(member, symbol), np.inf))
                rhs.append(min(1.0, radius / (1.0 + t)) * data)

    elif variant == LocalizedVariant.COMPACT:
        projector = _operator_symbol(grid, k, 0, homogeneous=True)
        power = 1.5 if operator == "sine" else 2.5
        parameters.update(k=k, operator=operator)
        for member in members:
            radius = _support_of(member)
            data = radius ** (1 + delta) * norm(member)
            for t in times:
                symbol = sine_symbol(grid, t) if operator == "sine" else cosine_symbol(grid, t)
                lhs.append(norm(apply_symbol(member, projector * symbol), np.inf))
                rhs.append(2.0 ** ((power + delta) * k) / (1.0 + scale * t) * data)

    else:
        symbol = _operator_symbol(grid, k, iota)
        projector = frequency_symbol(grid, ProjectionKind.NONHOMOGENEOUS, k)
        weight = japanese_bracket(theta * (1 + 2 * delta))
        parameters.update(k=k, iota=iota, theta=theta)
        for member in members:
            data = norm(apply_symbol(member, projector), 2, weight)
            evolution = ShellEvolution(member, symbol, sign)
            for t in times:
                lhs.append(norm(evolution.at(t), np.inf))
                rhs.append(2.0 ** ((1.5 - iota) * k + theta * (1 + delta) * k) * (1.0 + t) ** -theta * data)

    flags = window_flags(members, float(times.max()) if times.size else 0.0)
    return ConstantReport.from_samples(f"localized-linfty-{variant.value}", parameters, lhs, rhs, flags)
