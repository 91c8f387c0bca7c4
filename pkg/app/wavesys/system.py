"""
Cubic Quasilinear Wave Systems
------------------------------
box_{c_i} u^i = G^i(u, du, d^2u), i = 1..m, with G^i the sum over j, k, l of
 - Q1[a,b,g,d,i,j,k,l] d_ab u^j d_g u^k d_d u^l
 - Q2[a,b,g,i,j,k,l]   d_ab u^j d_g u^k u^l
 - Q3[a,b,i,j,k,l]     d_ab u^j u^k u^l
 - S1[a,b,g,i,j,k,l]   d_a u^j d_b u^k d_g u^l
 - S2[a,b,i,j,k,l]     d_a u^j d_b u^k u^l
 - S3[a,i,j,k,l]       d_a u^j u^k u^l
Greek indices run over 0..3 with d_0 = d_t; the quasilinear tensors must be symmetric in
(a <-> b) and (i <-> j).
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from app.fields import ScalarField

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-12
TENSOR_NAMES = ("Q1", "Q2", "Q3", "S1", "S2", "S3")
GREEK_RANK = {"Q1": 4, "Q2": 3, "Q3": 2, "S1": 3, "S2": 2, "S3": 1}
QUASILINEAR = ("Q1", "Q2", "Q3")


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class SymmetryError(ValueError):
    """Raised when coefficient tensors violate the symmetry condition or have wrong shapes."""
    pass


def tensor_shape(name: str, m: int) -> tuple[int, ...]:
    return (4,) * GREEK_RANK[name] + (m,) * 4


def _swap_axes(name: str) -> tuple[tuple[int, int], tuple[int, int]]:
    """(alpha, beta) axes and (i, j) axes of a quasilinear tensor."""
    rank = GREEK_RANK[name]
    return (0, 1), (rank, rank + 1)


# -------------------------------------------------------------------------
# System coefficients
# -------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SystemSpec:
    """
    Speeds and coefficient tensors of one system; validated at construction.

    Raises:
        SymmetryError: on shape mismatches, non-positive speeds or asymmetric tensors
    """

    speeds: tuple[float, ...]
    Q1: np.ndarray | None = None
    Q2: np.ndarray | None = None
    Q3: np.ndarray | None = None
    S1: np.ndarray | None = None
    S2: np.ndarray | None = None
    S3: np.ndarray | None = None
    name: str = "custom"
    note: str = ""

    def __post_init__(self):
        speeds = tuple(float(c) for c in self.speeds)
        if not speeds or any(not c > 0 for c in speeds):
            raise SymmetryError(f"speeds must be positive, got {speeds}")
        object.__setattr__(self, "speeds", speeds)
        m = len(speeds)
        for name in TENSOR_NAMES:
            value = getattr(self, name)
            tensor = np.zeros(tensor_shape(name, m)) if value is None else np.array(value, dtype=float)
            if tensor.shape != tensor_shape(name, m):
                raise SymmetryError(f"{name} has shape {tensor.shape}, expected {tensor_shape(name, m)}")
            if not np.all(np.isfinite(tensor)):
                raise SymmetryError(f"{name} has non-finite entries")
            tensor.setflags(write=False)
            object.__setattr__(self, name, tensor)
        self.check_symmetry()

    @property
    def m(self) -> int:
        return len(self.speeds)

    @property
    def max_speed(self) -> float:
        return max(self.speeds)

    def tensors(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in TENSOR_NAMES}

    def check_symmetry(self) -> None:
        for name in QUASILINEAR:
            tensor = getattr(self, name)
            greek, latin = _swap_axes(name)
            scale = max(1.0, float(np.max(np.abs(tensor))))
            if np.max(np.abs(tensor - np.swapaxes(tensor, *greek))) > SYMMETRY_TOLERANCE * scale:
                raise SymmetryError(f"{name} is not symmetric under alpha <-> beta")
            if np.max(np.abs(tensor - np.swapaxes(tensor, *latin))) > SYMMETRY_TOLERANCE * scale:
                raise SymmetryError(f"{name} is not symmetric under i <-> j")

    @cached_property
    def is_linear(self) -> bool:
        return all(not np.any(getattr(self, name)) for name in TENSOR_NAMES)

    @cached_property
    def has_time_second_derivatives(self) -> bool:
        """True when some Q^{00..} entry is nonzero (the acceleration enters G)."""
        return any(np.any(getattr(self, name)[0, 0]) for name in QUASILINEAR)

    @cached_property
    def is_pure_cubic(self) -> bool:
        """No undifferentiated u factors: Q2 = Q3 = S2 = S3 = 0."""
        return not any(np.any(getattr(self, name)) for name in ("Q2", "Q3", "S2", "S3"))

    def canonicalized(self) -> "SystemSpec":
        """
        Replace d_t^2 u^j inside the Q^{00..} terms by c_j^2 Delta u^j.

        The quintic remainder is dropped, so the result agrees with self up to O(u^5).

        Raises:
            SymmetryError: if a nonzero Q^{00}_{ij..} couples components of different speeds
        """
        speeds_sq = np.asarray(self.speeds) ** 2
        updated = {}
        for name in QUASILINEAR:
            tensor = np.array(getattr(self, name))
            rank = GREEK_RANK[name]
            time_block = tensor[0, 0].copy()
            if np.any(time_block):
                latin_i = rank - 2
                nonzero = np.nonzero(time_block)
                for index in zip(*nonzero):
                    i, j = index[latin_i], index[latin_i + 1]
                    if self.speeds[i] != self.speeds[j]:
                        raise SymmetryError(
                            f"{name}^00 couples components {i} and {j} with different speeds "
                            f"{self.speeds[i]} and {self.speeds[j]}"
                        )
                shape = [1] * time_block.ndim
                shape[latin_i + 1] = self.m
                weighted = time_block * speeds_sq.reshape(shape)
                for p in range(1, 4):
                    tensor[p, p] += weighted
                tensor[0, 0] = 0.0
            updated[name] = tensor
        return SystemSpec(
            speeds=self.speeds,
            Q1=updated["Q1"],
            Q2=updated["Q2"],
            Q3=updated["Q3"],
            S1=self.S1,
            S2=self.S2,
            S3=self.S3,
            name=f"{self.name} (canonical)",
            note=self.note,
        )


def linear_spec(speeds: tuple[float, ...] = (1.0,)) -> SystemSpec:
    return SystemSpec(speeds=speeds, name="linear")


def symmetrized(name: str, tensor: np.ndarray) -> np.ndarray:
    """Average a quasilinear tensor over the alpha <-> beta and i <-> j swaps."""
    greek, latin = _swap_axes(name)
    tensor = 0.5 * (tensor + np.swapaxes(tensor, *greek))
    return 0.5 * (tensor + np.swapaxes(tensor, *latin))


# -------------------------------------------------------------------------
# State
# -------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class State:
    """(u^i, d_t u^i) for every component at time t, all on one grid."""

    t: float
    u: tuple[ScalarField, ...]
    v: tuple[ScalarField, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        u, v = tuple(self.u), tuple(self.v)
        if len(u) != len(v) or not u:
            raise ValueError(f"state needs matching nonempty u and v, got {len(u)} and {len(v)}")
        grid = u[0].grid
        if any(f.grid != grid for f in u + v):
            raise ValueError("state fields live on different grids")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def grid(self):
        return self.u[0].grid

    @property
    def m(self) -> int:
        return len(self.u)

    def u_array(self) -> np.ndarray:
        return np.stack([np.real(f.samples) for f in self.u])

    def v_array(self) -> np.ndarray:
        return np.stack([np.real(f.samples) for f in self.v])

    @classmethod
    def from_arrays(cls, grid, t: float, u: np.ndarray, v: np.ndarray, **metadata) -> "State":
        return cls(
            t=float(t),
            u=tuple(ScalarField(grid, np.asarray(x)) for x in u),
            v=tuple(ScalarField(grid, np.asarray(x)) for x in v),
            metadata=metadata,
        )
