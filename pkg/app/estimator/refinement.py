"""
Refinement gate: rerun a check with twice the points per axis (and twice the time samples or
half the quadrature tolerance where the check has such a knob) and compare the sup ratios.
"""

import inspect
import logging
from typing import Callable, Sequence

from app.core.config import settings
from app.fields import ScalarField
from app.fields.grid import Grid3
from app.schemas.family import TestFamily
from app.schemas.report import FLAG_UNSTABLE, ConstantReport

logger = logging.getLogger(__name__)

Check = Callable[..., ConstantReport]


def _refined_knobs(check: Check, params: dict) -> dict:
    accepted = inspect.signature(check).parameters
    knobs = {}
    if "refinement" in accepted:
        knobs["refinement"] = 2 * params.get("refinement", 1)
    if "tol" in accepted and params.get("tol") is not None:
        knobs["tol"] = params["tol"] / 2.0
    return knobs


def relative_change(base: float | None, refined: float | None) -> float:
    if base is None or refined is None:
        return float("inf")
    if base == refined:
        return 0.0
    return abs(refined - base) / max(abs(base), abs(refined))


def refinement_gate(
    check: Check,
    family: TestFamily | Sequence[ScalarField],
    grid: Grid3,
    stability_factor: float | None = None,
    **params,
) -> ConstantReport:
    """
    Run check(family, grid, **params) and its refined counterpart.

    Args:
        check: an estimator check taking (family, grid, ...)
        family: a TestFamily (regenerated on the refined grid) or fields on `grid`
        stability_factor: tolerated relative change of the sup ratio (settings.STABILITY_FACTOR)

    Returns:
        the coarse report with refined_sup set and FLAG_UNSTABLE when the sups disagree
    """
    if not isinstance(family, TestFamily):
        raise TypeError("the refinement gate regenerates members, pass a TestFamily")
    factor = settings.STABILITY_FACTOR if stability_factor is None else stability_factor

    report = check(family, grid, **params)
    refined = check(family, grid.refined(), **{**params, **_refined_knobs(check, params)})
    report.refined_sup = refined.sup_ratio

    change = relative_change(report.sup_ratio, refined.sup_ratio)
    report.extras["refinement_change"] = change
    if change > factor:
        report.add_flag(FLAG_UNSTABLE)
        logger.warning(
            f"{report.inequality} {report.parameters}: sup ratio {report.sup_ratio} -> "
            f"{refined.sup_ratio} under refinement (change {change:.2%} > {factor:.0%})"
        )
    for flag in refined.flags:
        report.add_flag(flag)
    return report
