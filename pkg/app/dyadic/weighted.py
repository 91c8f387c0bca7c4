"""
Weighted dyadic checks: shell-sum equivalence of <x>^beta norms, weighted Bernstein and
weighted Riesz bounds for the A_2 weights <x>^beta.
"""

import logging
from typing import Sequence

import numpy as np

from app.dyadic.cutoff import ProjectionKind
from app.dyadic.projections import littlewood_paley_pieces, physical_pieces, project
from app.fields import ScalarField, gradient, japanese_bracket, norm, riesz_transform
from app.schemas.report import ConstantReport

logger = logging.getLogger(__name__)


class WeightRangeError(ValueError):
    """Raised when a weight exponent lies outside the admissible range."""
    pass


def weighted_shell_equivalence_check(field_: ScalarField, beta: float) -> ConstantReport:
    """
    Compare max_{j,k} 2^(j beta) ||Q_j P_k f||, ||<x>^beta f|| and sum_{j,k} 2^(j beta) ||Q_j P_k f||.

    Ratios reported: left/middle and middle/right, both bounded for beta in (-3/2, 3/2).
    """
    if not -1.5 < beta < 1.5:
        raise WeightRangeError(f"beta must lie in (-3/2, 3/2), got {beta}")

    terms = []
    for piece in littlewood_paley_pieces(field_).values():
        for j, localized in physical_pieces(piece).items():
            terms.append(2.0 ** (j * beta) * norm(localized))
    left = max(terms)
    right = sum(terms)
    middle = norm(field_, 2, japanese_bracket(beta))

    parameters = {"beta": beta}
    if middle == 0:
        return ConstantReport.from_samples("weighted-shell-equivalence", parameters, [left], [0.0])
    return ConstantReport.from_samples(
        "weighted-shell-equivalence",
        parameters,
        lhs=[left, middle],
        rhs=[middle, right],
        extras={"left": left, "middle": middle, "right": right},
    )


def _gradient_magnitude(field_: ScalarField) -> ScalarField:
    parts = gradient(field_)
    return ScalarField(field_.grid, np.sqrt(sum(np.abs(part.samples) ** 2 for part in parts)))


def weighted_bernstein_check(fields: Sequence[ScalarField], k: int, beta: float) -> ConstantReport:
    """||<x>^beta grad P_dot_k f|| / (2^k ||<x>^beta P_dot_k f||) over the fields."""
    if not -1.5 < beta < 1.5:
        raise WeightRangeError(f"<x>^(2 beta) must be an A_2 weight; beta={beta} is outside (-3/2, 3/2)")
    weight = japanese_bracket(beta)
    lhs, rhs = [], []
    for f in fields:
        shell = project(f, ProjectionKind.HOMOGENEOUS, k)
        lhs.append(norm(_gradient_magnitude(shell), 2, weight))
        rhs.append(2.0 ** k * norm(shell, 2, weight))
    return ConstantReport.from_samples("weighted-bernstein", {"k": k, "beta": beta}, lhs, rhs)


def weighted_riesz_check(fields: Sequence[ScalarField], k: int, beta: float) -> ConstantReport:
    """||<x>^beta R_j P_k f|| / ||<x>^beta P_k f|| over the fields and the three directions."""
    if not -1.5 < beta < 1.5:
        raise WeightRangeError(f"<x>^(2 beta) must be an A_2 weight; beta={beta} is outside (-3/2, 3/2)")
    weight = japanese_bracket(beta)
    lhs, rhs = [], []
    for f in fields:
        shell = project(f, ProjectionKind.NONHOMOGENEOUS, k)
        denominator = norm(shell, 2, weight)
        for axis in range(3):
            lhs.append(norm(riesz_transform(shell, axis), 2, weight))
            rhs.append(denominator)
    return ConstantReport.from_samples("weighted-riesz", {"k": k, "beta": beta}, lhs, rhs)
