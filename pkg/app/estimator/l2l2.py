"""
Weighted L^2 - L^2 transport of propagated shells:
 - transport form: ||<x>^b1 P_k e^{it|D|} f|| vs (1+t)^b1 ||<x>^b2 f|| + ||<x>^(b1+b2) f||
 - shell form, per physical shell j <= log2 t + 100:
     2^{j a} ||Q_j P_k e^{it|D|} f|| vs (1+t)^a sum_{l<j-3} ||Q_l P_k f|| + sum_{l>=j-3} 2^{l a} ||Q_l P_k f||
"""

import logging
from typing import Sequence

import numpy as np

from app.dyadic import ProjectionKind, check_resolvable, frequency_symbol, physical_pieces
from app.estimator.dispersive import window_flags
from app.estimator.families import resolve_members
from app.estimator.spacetime import ShellEvolution
from app.estimator.strichartz import HypothesisError
from app.fields import ScalarField, apply_symbol, japanese_bracket, norm
from app.fields.grid import Grid3
from app.schemas.family import TestFamily
from app.schemas.report import ConstantReport

logger = logging.getLogger(__name__)

SHELL_INDEX_SLACK = 100


def check_weighted_l2l2(
    family: TestFamily | Sequence[ScalarField],
    grid: Grid3,
    beta1: float,
    beta2: float,
    k: int,
    t_grid: Sequence[float],
    sign: int = 1,
) -> ConstantReport:
    """Ratio statistics of the weighted L^2 transport bound over members and times."""
    if not 0 < beta1 < 1.5:
        raise HypothesisError(f"β₁ = {beta1} violates the hypothesis β₁ ∈ (0, 3/2)")
    if not beta2 > 0:
        raise HypothesisError(f"β₂ = {beta2} violates the hypothesis β₂ > 0")
    if k < -1:
        raise HypothesisError(f"k must be >= -1, got {k}")
    check_resolvable(grid, ProjectionKind.NONHOMOGENEOUS, k)

    projector = frequency_symbol(grid, ProjectionKind.NONHOMOGENEOUS, k)
    left_weight = japanese_bracket(beta1)
    members = resolve_members(family, grid)
    times = np.asarray(t_grid, dtype=float)

    lhs, rhs = [], []
    for member in members:
        near = norm(member, 2, japanese_bracket(beta2))
        far = norm(member, 2, japanese_bracket(beta1 + beta2))
        evolution = ShellEvolution(member, projector, sign)
        for t in times:
            lhs.append(norm(evolution.at(t), 2, left_weight))
            rhs.append((1.0 + t) ** beta1 * near + far)

    parameters = {"beta1": beta1, "beta2": beta2, "k": k}
    flags = window_flags(members, float(times.max()) if times.size else 0.0)
    return ConstantReport.from_samples("weighted-l2l2", parameters, lhs, rhs, flags)


def check_shell_transport(
    family: TestFamily | Sequence[ScalarField],
    grid: Grid3,
    alpha: float,
    k: int,
    t_grid: Sequence[float],
    sign: int = 1,
) -> ConstantReport:
    """Ratio statistics over members, times t > 0 and physical shells j <= log2 t + 100."""
    if not 0 < alpha < 1.5:
        raise HypothesisError(f"α = {alpha} violates the hypothesis α ∈ (0, 3/2)")
    times = np.asarray(t_grid, dtype=float)
    if np.any(times <= 0):
        raise HypothesisError("shell transport is stated for t > 0")
    check_resolvable(grid, ProjectionKind.NONHOMOGENEOUS, k)

    projector = frequency_symbol(grid, ProjectionKind.NONHOMOGENEOUS, k)
    members = resolve_members(family, grid)
    lhs, rhs = [], []
    for member in members:
        shell = apply_symbol(member, projector)
        data_pieces = {l: norm(piece) for l, piece in physical_pieces(shell).items()}
        evolution = ShellEvolution(member, projector, sign)
        for t in times:
            top = np.log2(t) + SHELL_INDEX_SLACK
            for j, piece in physical_pieces(evolution.at(t)).items():
                if j > top:
                    continue
                inner = sum(v for l, v in data_pieces.items() if l < j - 3)
                outer = sum(2.0 ** (l * alpha) * v for l, v in data_pieces.items() if l >= j - 3)
                lhs.append(2.0 ** (j * alpha) * norm(piece))
                rhs.append((1.0 + t) ** alpha * inner + outer)

    parameters = {"alpha": alpha, "k": k}
    return ConstantReport.from_samples(
        "shell-transport", parameters, lhs, rhs, window_flags(members, float(times.max()))
    )
