"""
A_2 characteristic of the power weights <x>^alpha: the sup over cubes of
(average of w) x (average of 1/w), estimated on a fixed set of cubes.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

logger = logging.getLogger(__name__)

GAUSS_NODES = 4
MAX_DEPTH = 60


@dataclass(frozen=True)
class CubeSet:
    """
    Cubes with dyadic sides 2^s and centers at offset * side along an axis and the diagonal.

    The default reaches sides of 2^40 so that origin-centered cubes see the large-scale behavior.
    """

    side_exponents: tuple[int, ...] = tuple(range(-4, 41, 2))
    center_offsets: tuple[float, ...] = (0.0, 0.5, 1.0, 2.0, 8.0)
    directions: tuple[tuple[float, float, float], ...] = field(
        default=((1.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    )
    rel_tol: float = 1e-6

    def cubes(self):
        for s in self.side_exponents:
            side = 2.0 ** s
            for offset in self.center_offsets:
                for direction in (self.directions if offset else self.directions[:1]):
                    unit = np.asarray(direction) / np.linalg.norm(direction)
                    yield tuple(offset * side * unit), side


@lru_cache(maxsize=1)
def _cube_rule() -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_NODES)
    grid = np.stack(np.meshgrid(nodes, nodes, nodes, indexing="ij")).reshape(3, -1)
    w = np.einsum("i,j,k->ijk", weights, weights, weights).ravel()
    return grid, w


_CHILD_SHIFTS = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], dtype=float)


def _gauss(alpha: float, centers: np.ndarray, half: float) -> np.ndarray:
    """Integrals of (<x>^alpha, <x>^-alpha) over cubes (centers has shape (m, 3)), shape (m, 2)."""
    nodes, weights = _cube_rule()
    points = centers[:, :, None] + half * nodes[None, :, :]
    bracket_sq = 1.0 + np.sum(points ** 2, axis=1)
    values = np.stack([bracket_sq ** (alpha / 2.0), bracket_sq ** (-alpha / 2.0)], axis=-1)
    return half ** 3 * np.einsum("mqv,q->mv", values, weights)


def cube_integrals(alpha: float, center, side: float, rel_tol: float = 1e-6) -> np.ndarray:
    """Adaptive octree integration of (<x>^alpha, <x>^-alpha) over one cube."""
    root = np.asarray(center, dtype=float)[None, :]
    stack = [(root[0], side / 2.0, 0, _gauss(alpha, root, side / 2.0)[0])]
    total = np.zeros(2)
    while stack:
        c, half, depth, coarse = stack.pop()
        children = c + (half / 2.0) * _CHILD_SHIFTS
        parts = _gauss(alpha, children, half / 2.0)
        fine = parts.sum(axis=0)
        if depth >= MAX_DEPTH or np.all(np.abs(fine - coarse) <= rel_tol * np.abs(fine)):
            total += fine
            continue
        stack.extend((child, half / 2.0, depth + 1, part) for child, part in zip(children, parts))
    return total


def a2_constant(alpha: float, cube_set: CubeSet | None = None) -> float:
    """
    max over the cubes of (avg <x>^alpha)(avg <x>^-alpha).

    Equals 1 for alpha = 0; finite on a fixed cube set for every alpha, growing without bound over
    larger cube sets exactly when |alpha| >= 3.
    """
    if alpha == 0:
        return 1.0
    cube_set = cube_set or CubeSet()
    best = 0.0
    for center, side in cube_set.cubes():
        weight_integral, inverse_integral = cube_integrals(alpha, center, side, cube_set.rel_tol)
        best = max(best, weight_integral * inverse_integral / side ** 6)
    logger.debug(f"A_2 estimate for alpha={alpha}: {best:.6g}")
    return float(best)
