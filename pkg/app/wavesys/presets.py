"""
Model Presets
-------------
Cubic systems from physics, written as coefficient tensors:
 - relativistic-membrane: exact cubic right-hand side of the membrane equation
 - nonlinear-membrane: |grad u|^2 Delta u - d_i u d_j u d_ij u - 1.5 |grad u|^2 d_t^2 u
 - maxwell-scalar: -(d_t u)^2 d_t^2 u
 - liquid-crystal(alpha, beta): cubic truncation of the nematic wave equation
 - wave-maps-cubic(C): sum C^i_jkl (d_t u^j d_t u^k - grad u^j . grad u^k) u^l
"""

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from app.wavesys.system import SystemSpec, symmetrized, tensor_shape

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

SPACE = (1, 2, 3)


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class PresetError(ValueError):
    """Raised for unknown presets or invalid preset parameters."""
    pass


@dataclass(frozen=True)
class ModelPreset:
    name: str
    params: dict
    spec: SystemSpec
    truncation: str = field(default="exact cubic right-hand side")


# -------------------------------------------------------------------------
# Builders
# -------------------------------------------------------------------------
def _scalar_terms(entries: dict[str, list[tuple[tuple[int, ...], float]]]) -> dict[str, np.ndarray]:
    """Scalar (m = 1) tensors from (greek indices, coefficient) lists; quasilinear ones symmetrized."""
    tensors = {}
    for name, items in entries.items():
        tensor = np.zeros(tensor_shape(name, 1))
        for greek, value in items:
            tensor[greek + (0, 0, 0, 0)] += value
        tensors[name] = symmetrized(name, tensor) if name.startswith("Q") else tensor
    return tensors


def _no_params(name: str, params: dict) -> None:
    if params:
        raise PresetError(f"{name} takes no parameters, got {sorted(params)}")


def _relativistic_membrane(params: dict) -> tuple[SystemSpec, str]:
    """
    -v^2 Delta u - |grad u|^2 a + |grad u|^2 Delta u + 2 v grad u . grad v - d_p u d_q u d_pq u,
    the expanded form of (v^2 - |grad u|^2)(a - Delta u) - v^2 a + 2 v grad u . d_t grad u
    - grad u . grad(|grad u|^2) / 2.
    """
    _no_params("relativistic-membrane", params)
    q1 = []
    for p in SPACE:
        q1.append(((p, p, 0, 0), -1.0))
        q1.append(((0, 0, p, p), -1.0))
        q1.append(((0, p, 0, p), 2.0))
        for q in SPACE:
            q1.append(((p, p, q, q), 1.0))
            q1.append(((p, q, p, q), -1.0))
    spec = SystemSpec(speeds=(1.0,), name="relativistic-membrane", **_scalar_terms({"Q1": q1}))
    return spec, "exact cubic right-hand side; higher-order remainder of the square-root Lagrangian dropped"


def _nonlinear_membrane(params: dict) -> tuple[SystemSpec, str]:
    _no_params("nonlinear-membrane", params)
    q1 = []
    for p in SPACE:
        q1.append(((0, 0, p, p), -1.5))
        for q in SPACE:
            q1.append(((p, p, q, q), 1.0))
            q1.append(((p, q, p, q), -1.0))
    spec = SystemSpec(speeds=(1.0,), name="nonlinear-membrane", **_scalar_terms({"Q1": q1}))
    return spec, "exact cubic right-hand side"


def _maxwell_scalar(params: dict) -> tuple[SystemSpec, str]:
    _no_params("maxwell-scalar", params)
    spec = SystemSpec(speeds=(1.0,), name="maxwell-scalar", **_scalar_terms({"Q1": [((0, 0, 0, 0), -1.0)]}))
    return spec, "exact: -(1 + (d_t u)^2) d_t^2 u + Delta u = 0"


def _liquid_crystal(params: dict) -> tuple[SystemSpec, str]:
    unknown = set(params) - {"alpha", "beta"}
    if unknown:
        raise PresetError(f"liquid-crystal got unknown parameters {sorted(unknown)}")
    try:
        alpha, beta = float(params["alpha"]), float(params["beta"])
    except KeyError as e:
        raise PresetError(f"liquid-crystal requires parameter {e.args[0]}") from e
    if not (alpha > 0 and beta > 0):
        raise PresetError(f"liquid-crystal needs alpha, beta > 0, got alpha={alpha}, beta={beta}")
    if alpha == beta:
        raise PresetError(f"liquid-crystal needs alpha != beta, got {alpha}")
    coefficient = 2.0 * alpha * (beta - alpha)
    terms = {
        "Q3": [((p, p), coefficient) for p in SPACE],
        "S2": [((p, p), coefficient) for p in SPACE],
    }
    spec = SystemSpec(speeds=(alpha,), name="liquid-crystal", **_scalar_terms(terms))
    return spec, "cubic Taylor truncation of c(u) div(c(u) grad u); O(u^4) dropped"


def sphere_coefficients(m: int) -> np.ndarray:
    """C^i_jkl = -delta_jk delta_il: box u = -(d_t u . d_t u - grad u . grad u) u."""
    eye = np.eye(m)
    return -np.einsum("jk,il->ijkl", eye, eye)


def _wave_maps_cubic(params: dict) -> tuple[SystemSpec, str]:
    unknown = set(params) - {"m", "C"}
    if unknown:
        raise PresetError(f"wave-maps-cubic got unknown parameters {sorted(unknown)}")
    if "C" in params:
        C = np.asarray(params["C"], dtype=float)
        m = C.shape[0] if C.ndim == 4 else -1
        if C.ndim != 4 or C.shape != (m,) * 4:
            raise PresetError(f"wave-maps-cubic C must have shape (m, m, m, m), got {C.shape}")
        if "m" in params and int(params["m"]) != m:
            raise PresetError(f"wave-maps-cubic m={params['m']} disagrees with C of size {m}")
    else:
        m = int(params.get("m", 2))
        if m < 1:
            raise PresetError(f"wave-maps-cubic needs m >= 1, got {m}")
        C = sphere_coefficients(m)
    S2 = np.zeros(tensor_shape("S2", m))
    S2[0, 0] = C
    for p in SPACE:
        S2[p, p] = -C
    spec = SystemSpec(speeds=(1.0,) * m, S2=S2, name="wave-maps-cubic")
    return spec, "cubic truncation of the wave maps system in normal coordinates"


_BUILDERS: dict[str, Callable[[dict], tuple[SystemSpec, str]]] = {
    "relativistic-membrane": _relativistic_membrane,
    "nonlinear-membrane": _nonlinear_membrane,
    "maxwell-scalar": _maxwell_scalar,
    "liquid-crystal": _liquid_crystal,
    "wave-maps-cubic": _wave_maps_cubic,
}

PRESET_NAMES = tuple(_BUILDERS)


def make_preset(name: str, params: dict | None = None) -> ModelPreset:
    """
    Build a preset system.

    Raises:
        PresetError: unknown name or invalid parameters
    """
    builder = _BUILDERS.get(name)
    if builder is None:
        raise PresetError(f"Unknown preset: {name}")
    params = dict(params or {})
    spec, truncation = builder(params)
    logger.debug(f"Preset {name} built with m={spec.m}, speeds={spec.speeds}")
    return ModelPreset(name=name, params=params, spec=spec, truncation=truncation)
