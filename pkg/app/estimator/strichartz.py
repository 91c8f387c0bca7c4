"""
Strichartz Estimates
--------------------
Space-time norms of propagated dyadic shells against their L^2 data:
 - admissible pairs 1/p + 1/r <= 1/2 with RHS 2^{(3/2 - 1/p - 3/r) k} ||P_k f||_2
 - endpoint (2, inf) with the ln^{1/2}(1 + 2^k t) loss, and its |D|^-1 version with ln(e + 2^k t)
 - weighted estimates with the growth factor (1 + s + |x|)^{beta1/p} paid by <x>^{2 beta2/p}
"""

import logging
from enum import Enum
from typing import Sequence

import numpy as np

from app.dyadic import ProjectionKind, check_resolvable, frequency_symbol
from app.estimator.dispersive import window_flags
from app.estimator.families import resolve_members
from app.estimator.spacetime import ShellEvolution, spacetime_norm, time_samples
from app.fields import ScalarField, apply_symbol, japanese_bracket, norm, radial_symbol, singular_origin_value
from app.fields.grid import Grid3
from app.schemas.family import TestFamily
from app.schemas.report import ConstantReport

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class HypothesisError(ValueError):
    """Raised when exponents fall outside the hypothesis set of an estimate."""
    pass


class Endpoint(str, Enum):
    LOG = "log"
    INVERSE = "inverse"


# -------------------------------------------------------------------------
# Hypotheses
# -------------------------------------------------------------------------
def _inverse(value: float) -> float:
    return 0.0 if np.isinf(value) else 1.0 / value


def check_admissible(p: float, r: float) -> None:
    if not (2 <= p <= np.inf and 2 <= r <= np.inf):
        raise HypothesisError(f"Strichartz exponents must lie in [2, inf], got p={p}, r={r}")
    if _inverse(p) + _inverse(r) > 0.5 + 1e-12:
        raise HypothesisError(f"(p, r) = ({p}, {r}) violates 1/p + 1/r <= 1/2")


def dual_exponent(p: float) -> float:
    """r with 1/p + 1/r = 1/2."""
    return np.inf if p == 2 else 2.0 * p / (p - 2.0)


def check_weighted_hypotheses(beta1: float, beta2: float, p: float, item: int) -> float:
    """
    Validate the weighted Strichartz hypothesis set and return the matching r.

    Raises:
        HypothesisError: naming the violated condition
    """
    if not 0 < beta1 < 1:
        raise HypothesisError(f"β₁ = {beta1} violates the hypothesis β₁ ∈ (0, 1)")
    upper = min(1.5 * beta1, 1.0)
    if not beta1 < beta2 < upper:
        raise HypothesisError(
            f"β₂ = {beta2} violates the hypothesis β₁ < β₂ < min{{3β₁/2, 1}} (here {beta1} < β₂ < {upper:g})"
        )
    if item not in (1, 2):
        raise HypothesisError(f"item must be 1 or 2, got {item}")
    if not 2 <= p < np.inf:
        raise HypothesisError(f"p = {p} violates the hypothesis p ∈ [2, ∞)")
    r = dual_exponent(p)
    if item == 2:
        gap = 2 * beta2 - beta1
        if not p < 2 + gap:
            raise HypothesisError(f"p = {p} violates the hypothesis p < 2 + 2β₂ - β₁ = {2 + gap:g}")
        if not r > 2 + 4 / gap:
            raise HypothesisError(f"r = {r} violates the hypothesis r > 2 + 4/(2β₂ - β₁) = {2 + 4 / gap:g}")
    return r


def inverse_gradient_symbol(grid: Grid3) -> np.ndarray:
    return radial_symbol(grid, lambda rho: 1.0 / rho, at_zero=singular_origin_value(grid, 1.0))


# -------------------------------------------------------------------------
# Checks
# -------------------------------------------------------------------------
def check_strichartz(
    family: TestFamily | Sequence[ScalarField],
    grid: Grid3,
    k: int,
    p: float,
    r: float,
    t0: float = 0.0,
    t: float = 10.0,
    endpoint: Endpoint | None = None,
    sign: int = 1,
    homogeneous: bool = False,
    refinement: int = 1,
) -> ConstantReport:
    """
    ||P_k e^{is|D|} f||_{L^p([t0,t]; L^r)} against its envelope times ||P_k f||_2.

    Args:
        endpoint: None for the non-endpoint estimate, "log" for (2, inf) with ln^{1/2}(1 + 2^k t),
            "inverse" for P_k |D|^-1 at (2, inf) with ln(e + 2^k t)
        homogeneous: use P_dot_k instead of P_k
        refinement: multiplies the number of time samples

    Returns:
        ConstantReport; extras hold the sup of the ratio against the envelope without the log factor
    """
    check_admissible(p, r)
    endpoint = Endpoint(endpoint) if endpoint else None
    if endpoint is None and (p, r) == (2, np.inf):
        raise HypothesisError("(p, r) = (2, inf) needs an endpoint variant ('log' or 'inverse')")
    if endpoint is not None and (p, r) != (2, np.inf):
        raise HypothesisError(f"endpoint variants are defined at (2, inf), got ({p}, {r})")

    kind = ProjectionKind.HOMOGENEOUS if homogeneous else ProjectionKind.NONHOMOGENEOUS
    check_resolvable(grid, kind, k)
    projector = frequency_symbol(grid, kind, k)
    operator = projector * inverse_gradient_symbol(grid) if endpoint == Endpoint.INVERSE else projector

    scale = 2.0 ** k
    if endpoint == Endpoint.LOG:
        plain = scale
        loss = np.sqrt(np.log1p(scale * t))
    elif endpoint == Endpoint.INVERSE:
        plain = 1.0
        loss = np.log(np.e + scale * t)
    else:
        plain = 2.0 ** ((1.5 - 1.0 / p - 3.0 * _inverse(r)) * k)
        loss = 1.0

    members = resolve_members(family, grid)
    times = time_samples(k, t0, t, refinement)
    lhs, rhs, plain_ratios = [], [], []
    for member in members:
        data = norm(apply_symbol(member, projector))
        value = spacetime_norm(ShellEvolution(member, operator, sign), times, p, r)
        lhs.append(value)
        rhs.append(plain * loss * data)
        if data > 0:
            plain_ratios.append(value / (plain * data))

    parameters = {"k": k, "p": p, "r": r, "t0": t0, "t": t, "endpoint": endpoint.value if endpoint else "none"}
    extras = {"plain_sup": max(plain_ratios)} if plain_ratios else {}
    return ConstantReport.from_samples(
        "strichartz", parameters, lhs, rhs, window_flags(members, t), extras=extras
    )


def check_weighted_strichartz(
    family: TestFamily | Sequence[ScalarField],
    grid: Grid3,
    k: int,
    p: float,
    beta1: float,
    beta2: float,
    item: int = 1,
    t0: float = 0.0,
    t: float = 10.0,
    sign: int = 1,
    refinement: int = 1,
) -> ConstantReport:
    """
    ||(1+s+|x|)^{beta1/p} P_k |D|^-iota e^{is|D|} f||_{L^p L^r} against
    2^{a k} ||<x>^{2 beta2/p} P_k f||_2 with r = 2p/(p-2), iota = item - 1,
    a = 2(1+beta2)/p (item 1) or (2+2 beta2)/p - 1 (item 2).

    Raises:
        HypothesisError: if (beta1, beta2, p) is outside the hypothesis set
    """
    r = check_weighted_hypotheses(beta1, beta2, p, item)
    if k < -1:
        raise HypothesisError(f"k must be >= -1, got {k}")
    check_resolvable(grid, ProjectionKind.NONHOMOGENEOUS, k)

    projector = frequency_symbol(grid, ProjectionKind.NONHOMOGENEOUS, k)
    if item == 1:
        operator = projector
        exponent = 2.0 * (1.0 + beta2) / p
    else:
        operator = projector * inverse_gradient_symbol(grid)
        exponent = (2.0 + 2.0 * beta2) / p - 1.0

    growth = lambda s, radius: (1.0 + s + radius) ** (beta1 / p)
    data_weight = japanese_bracket(2.0 * beta2 / p)

    members = resolve_members(family, grid)
    times = time_samples(k, t0, t, refinement)
    lhs, rhs = [], []
    for member in members:
        lhs.append(spacetime_norm(ShellEvolution(member, operator, sign), times, p, r, growth))
        rhs.append(2.0 ** (exponent * k) * norm(apply_symbol(member, projector), 2, data_weight))

    parameters = {"k": k, "p": p, "r": r, "beta1": beta1, "beta2": beta2, "item": item, "t0": t0, "t": t}
    return ConstantReport.from_samples(
        f"weighted-strichartz-{item}", parameters, lhs, rhs, window_flags(members, t)
    )
