"""
Panel-adaptive Gauss-Legendre quadrature for oscillatory integrands.

Each panel is integrated with an n-point and a 2n-point rule; the difference is the panel error
estimate. Panels above their share of the tolerance are bisected until the panel budget runs out.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 12
DEFAULT_PANEL_BUDGET = 400_000


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    panels: int
    converged: bool


def _initial_panels(breakpoints: np.ndarray, max_width: float) -> tuple[np.ndarray, np.ndarray]:
    lefts, rights = [], []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        if b <= a:
            continue
        count = max(1, int(np.ceil((b - a) / max_width)))
        edges = np.linspace(a, b, count + 1)
        lefts.append(edges[:-1])
        rights.append(edges[1:])
    return np.concatenate(lefts), np.concatenate(rights)


def panel_quadrature(
    integrand: Callable[[np.ndarray], np.ndarray],
    breakpoints,
    max_width: float,
    tol: float,
    order: int = DEFAULT_ORDER,
    panel_budget: int = DEFAULT_PANEL_BUDGET,
) -> QuadratureResult:
    """
    Integrate a vectorized integrand over [breakpoints[0], breakpoints[-1]].

    Args:
        integrand: callable accepting an array of nodes
        breakpoints: increasing interval ends; panels never straddle a breakpoint
        max_width: initial panel width bound
        tol: absolute tolerance on the summed error estimate
        order: low rule order (the high rule uses 2 * order nodes)
        panel_budget: maximal number of panels ever evaluated

    Returns:
        QuadratureResult
    """
    breakpoints = np.unique(np.asarray(breakpoints, dtype=float))
    if breakpoints.size < 2:
        return QuadratureResult(0.0, 0.0, 0, True)
    total_length = breakpoints[-1] - breakpoints[0]

    nodes_lo, weights_lo = np.polynomial.legendre.leggauss(order)
    nodes_hi, weights_hi = np.polynomial.legendre.leggauss(2 * order)

    lefts, rights = _initial_panels(breakpoints, max_width)
    value = 0.0 + 0.0j
    error = 0.0
    used = 0
    converged = True

    while lefts.size:
        used += lefts.size
        centers = 0.5 * (lefts + rights)
        halves = 0.5 * (rights - lefts)
        low = halves * (integrand(centers[:, None] + halves[:, None] * nodes_lo) @ weights_lo)
        high = halves * (integrand(centers[:, None] + halves[:, None] * nodes_hi) @ weights_hi)
        panel_error = np.abs(high - low)

        share = tol * (rights - lefts) / total_length
        accepted = panel_error <= share
        value += high[accepted].sum()
        error += panel_error[accepted].sum()

        pending = ~accepted
        if not np.any(pending):
            break
        if used + 2 * pending.sum() > panel_budget:
            value += high[pending].sum()
            error += panel_error[pending].sum()
            converged = error <= tol
            break

        mids = centers[pending]
        lefts = np.concatenate([lefts[pending], mids])
        rights = np.concatenate([mids, rights[pending]])

    converged = converged and error <= tol
    if not converged:
        logger.debug(f"Quadrature stopped at error {error:.3e} > tol {tol:.1e} after {used} panels")
    return QuadratureResult(complex(value), float(error), used, converged)
