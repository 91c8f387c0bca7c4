"""
Strong Huygens principle: the shell cutoff around a sphere S(x0, t) and the residual of a
free solution outside the annulus reached by compactly supported data.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from app.core.config import settings
from app.dyadic.cutoff import smooth_step
from app.fields import ScalarField, norm
from app.fields.grid import Grid3
from app.propagators.kirchhoff import GeometryError
from app.propagators.linear import cosine_prop, sine_prop

logger = logging.getLogger(__name__)

DEFAULT_SHELL_WIDTH = 0.01


@dataclass(frozen=True)
class HuygensShell:
    """
    Cutoff equal to 1 on the plateau and 0 beyond one more width.

    For t >= 1 the plateau is t - width <= |y - x0| <= t + width; for t < 1 it is the
    ball |y - x0| <= t + width.
    """

    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    t: float = 1.0
    width: float = DEFAULT_SHELL_WIDTH
    _center: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.t < 0 or self.width <= 0:
            raise GeometryError(f"shell needs t >= 0 and width > 0, got t={self.t}, width={self.width}")
        object.__setattr__(self, "_center", np.asarray(self.center, dtype=float))

    @property
    def is_ball(self) -> bool:
        return self.t < 1

    @property
    def plateau(self) -> tuple[float, float]:
        inner = 0.0 if self.is_ball else self.t - self.width
        return inner, self.t + self.width

    @property
    def outer_radius(self) -> float:
        return self.t + 2.0 * self.width

    def profile(self, distance) -> np.ndarray:
        distance = np.asarray(distance, dtype=float)
        inner, outer = self.plateau
        value = 1.0 - smooth_step((distance - outer) / self.width)
        if not self.is_ball:
            value = value * smooth_step((distance - (inner - self.width)) / self.width)
        return value


def huygens_shell_profile(grid: Grid3, shell: HuygensShell) -> np.ndarray:
    """The shell cutoff sampled on the lattice."""
    if np.max(np.abs(shell._center)) + shell.outer_radius >= grid.half_length:
        raise GeometryError(
            f"shell of outer radius {shell.outer_radius} around {list(shell.center)} leaves the box"
        )
    x, y, z = grid.coordinates
    cx, cy, cz = shell._center
    distance = np.sqrt((x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2)
    return shell.profile(distance)


def huygens_cutoff(field_: ScalarField, shell: HuygensShell) -> ScalarField:
    """Pointwise product of the field with the shell cutoff."""
    return ScalarField(field_.grid, field_.samples * huygens_shell_profile(field_.grid, shell))


def annulus_mask(grid: Grid3, support_radius: float, t: float, c: float, margin: float) -> np.ndarray:
    """Points with |x| <= ct - R - margin or |x| >= ct + R + margin."""
    radius = grid.radius
    return (radius <= c * t - support_radius - margin) | (radius >= c * t + support_radius + margin)


def huygens_residual(
    u0: ScalarField,
    u1: ScalarField,
    t: float,
    c: float = 1.0,
    margin: float | None = None,
) -> float:
    """
    max |u(t, x)| away from the annulus ct - R <= |x| <= ct + R, relative to the data size
    ||u0||_inf + R ||u1||_inf.

    Raises:
        GeometryError: if a support is not certified, ct <= R, or the annulus leaves the box
    """
    margin = settings.SHELL_MARGIN if margin is None else margin
    if u0.support_radius is None or u1.support_radius is None:
        raise GeometryError("Huygens residual needs certified supports on both data fields")
    support = max(u0.support_radius, u1.support_radius)
    if c * t <= support:
        raise GeometryError(f"ct = {c * t} must exceed the support radius {support}")
    if c * t + support + margin >= u0.grid.half_length:
        raise GeometryError(
            f"annulus outer radius {c * t + support + margin} reaches the box half-length {u0.grid.half_length}"
        )

    solution = cosine_prop(u0, t, c) + sine_prop(u1, t, c)
    mask = annulus_mask(u0.grid, support, t, c, margin)
    scale = norm(u0, np.inf) + support * norm(u1, np.inf)
    if scale == 0:
        return 0.0
    inside = c * t - support - margin
    if inside <= 0:
        logger.debug(f"Interior region is empty at t={t}; residual measured outside only")
    return float(np.max(np.abs(solution.samples[mask])) / scale)


def point_agreement(
    field_: ScalarField,
    shell: HuygensShell,
    c: float = 1.0,
    operator: str = "sine",
) -> float:
    """|[P f](x0) - [P (Xi f)](x0)| for P = sin(t|D|)/|D| or cos(t|D|) with x0 the shell center."""
    propagate = {"sine": sine_prop, "cosine": cosine_prop}[operator]
    grid = field_.grid
    index = tuple(int(round(v)) for v in (shell._center + grid.half_length) / grid.spacing)
    if not np.allclose(grid.axis[list(index)], shell._center):
        raise GeometryError(f"shell center {list(shell.center)} is not a lattice point")
    t = shell.t / c
    full = propagate(field_.with_samples(field_.samples), t, c).samples[index]
    cut = propagate(huygens_cutoff(field_, shell), t, c).samples[index]
    return float(abs(full - cut))


def lattice_point(grid: Grid3, x: Sequence[float]) -> tuple[float, float, float]:
    """Nearest lattice point to x."""
    index = np.round((np.asarray(x, dtype=float) + grid.half_length) / grid.spacing).astype(int)
    return tuple(float(v) for v in grid.axis[index % grid.points_per_axis])
