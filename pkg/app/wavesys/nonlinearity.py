"""
Nonlinearity Evaluation
-----------------------
Pseudo-spectral evaluation of G^i = Q^{ab}_{ij} d_ab u^j + S^i(u, du):
 - first derivatives from (u, v), second derivatives from spectra (d_0p u = d_p v)
 - the acceleration d_t^2 u solved by fixed-point iteration when Q^{00} is nonzero
 - 2/3-rule dealiasing of the product before it re-enters the spectrum
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from app.core.config import settings
from app.fields import ScalarField
from app.wavesys.spectral import SpectralWorkspace, fft, ifft_real
from app.wavesys.system import QUASILINEAR, TENSOR_NAMES, State, SystemSpec

# -------------------------------------------------------------------------
# Configuration and logging
# -------------------------------------------------------------------------
logger = logging.getLogger(__name__)

QUASILINEAR_BOUND = 0.1
FIXED_POINT_TOLERANCE = 1e-10
MAX_FIXED_POINT_ITERATIONS = 12


# -------------------------------------------------------------------------
# Custom exceptions
# -------------------------------------------------------------------------
class AliasingError(ArithmeticError):
    """Raised when a state carries spectral mass outside the dealiasing ball."""
    pass


class FixedPointError(ArithmeticError):
    """Raised when the acceleration iteration does not contract (leaving the small-data regime)."""
    pass


# -------------------------------------------------------------------------
# Sparse coefficient terms
# -------------------------------------------------------------------------
@dataclass(frozen=True)
class Term:
    """One nonzero tensor entry: Greek indices, Latin indices (i, j, k, l) and value."""

    greek: tuple[int, ...]
    latin: tuple[int, int, int, int]
    value: float


@lru_cache(maxsize=64)
def sparse_terms(spec: SystemSpec) -> dict[str, tuple[Term, ...]]:
    terms = {}
    for name in TENSOR_NAMES:
        tensor = getattr(spec, name)
        rank = tensor.ndim - 4
        terms[name] = tuple(
            Term(tuple(int(x) for x in index[:rank]), tuple(int(x) for x in index[rank:]), float(tensor[tuple(index)]))
            for index in np.argwhere(tensor)
        )
    return terms


# -------------------------------------------------------------------------
# Derivative bundle
# -------------------------------------------------------------------------
@dataclass(eq=False)
class Derivatives:
    """
    Physical u, d_a u (a = 0..3) and lazily computed d_ab u for stacked components.

    Arrays have shape (m, n, n, n); d_00 u is the acceleration and is supplied separately.
    """

    workspace: SpectralWorkspace
    u_hat: np.ndarray
    v_hat: np.ndarray
    u: np.ndarray = field(init=False)
    first: list[np.ndarray] = field(init=False)
    _second: dict = field(init=False, default_factory=dict)

    def __post_init__(self):
        self.u = ifft_real(self.u_hat)
        v = ifft_real(self.v_hat)
        symbols = self.workspace.derivative_symbols
        self.first = [v] + [ifft_real(symbols[p] * self.u_hat) for p in range(3)]

    def second(self, alpha: int, beta: int) -> np.ndarray:
        alpha, beta = sorted((alpha, beta))
        if alpha == 0 and beta == 0:
            raise KeyError("d_00 u is the acceleration; pass it explicitly")
        key = (alpha, beta)
        if key not in self._second:
            symbols = self.workspace.derivative_symbols
            if alpha == 0:
                self._second[key] = ifft_real(symbols[beta - 1] * self.v_hat)
            else:
                self._second[key] = ifft_real(symbols[alpha - 1] * symbols[beta - 1] * self.u_hat)
        return self._second[key]


def _factor_product(d: Derivatives, name: str, term: Term) -> np.ndarray:
    """The lower-order factors of one term (everything except d_ab u^j)."""
    _, j, k, l = term.latin
    g = term.greek
    if name == "Q1":
        return d.first[g[2]][k] * d.first[g[3]][l]
    if name == "Q2":
        return d.first[g[2]][k] * d.u[l]
    if name == "Q3":
        return d.u[k] * d.u[l]
    if name == "S1":
        return d.first[g[0]][j] * d.first[g[1]][k] * d.first[g[2]][l]
    if name == "S2":
        return d.first[g[0]][j] * d.first[g[1]][k] * d.u[l]
    return d.first[g[0]][j] * d.u[k] * d.u[l]


def _split_terms(spec: SystemSpec, d: Derivatives) -> tuple[np.ndarray, np.ndarray]:
    """
    G = Q00 . a + rest, with Q00[i, j] the coefficient fields of d_t^2 u^j.

    Returns:
        (Q00 of shape (m, m, n, n, n), rest of shape (m, n, n, n))
    """
    m = spec.m
    shape = d.u.shape[1:]
    q00 = np.zeros((m, m) + shape)
    rest = np.zeros((m,) + shape)
    for name, terms in sparse_terms(spec).items():
        for term in terms:
            i, j = term.latin[:2]
            factors = term.value * _factor_product(d, name, term)
            if name in QUASILINEAR:
                alpha, beta = term.greek[:2]
                if alpha == 0 and beta == 0:
                    q00[i, j] += factors
                else:
                    rest[i] += factors * d.second(alpha, beta)[j]
            else:
                rest[i] += factors
    return q00, rest


def speed_laplacian(spec: SystemSpec, workspace: SpectralWorkspace, u_hat: np.ndarray) -> np.ndarray:
    """c_i^2 Delta u^i in physical space."""
    c_sq = (np.asarray(spec.speeds) ** 2).reshape(-1, 1, 1, 1)
    return ifft_real(-c_sq * workspace.rho ** 2 * u_hat)


def solve_acceleration(
    q00: np.ndarray,
    base: np.ndarray,
    rest: np.ndarray,
) -> np.ndarray:
    """
    Fixed point of a = base + rest + Q00 . a.

    Raises:
        FixedPointError: if ||Q00||_inf exceeds the small-data bound or the iteration stalls
    """
    source = base + rest
    if not np.any(q00):
        return source
    size = float(np.max(np.sum(np.abs(q00), axis=1)))
    if size > QUASILINEAR_BOUND:
        raise FixedPointError(f"||Q00||_inf = {size:.3g} exceeds the small-data bound {QUASILINEAR_BOUND}")
    accel = source
    for iteration in range(1, MAX_FIXED_POINT_ITERATIONS + 1):
        updated = source + np.einsum("ij...,j...->i...", q00, accel)
        change = float(np.max(np.abs(updated - accel)))
        scale = float(np.max(np.abs(updated)))
        accel = updated
        if change <= FIXED_POINT_TOLERANCE * scale:
            logger.debug(f"Acceleration converged after {iteration} iterations")
            return accel
    raise FixedPointError(
        f"acceleration iteration did not converge in {MAX_FIXED_POINT_ITERATIONS} steps "
        f"(last change {change:.3g}, scale {scale:.3g})"
    )


def check_aliasing(workspace: SpectralWorkspace, *spectra: np.ndarray) -> None:
    tolerance = settings.ALIASING_TOLERANCE
    for coefficients in spectra:
        fraction = workspace.outside_fraction(coefficients)
        if fraction > tolerance:
            raise AliasingError(
                f"{fraction:.3g} of the spectral mass lies outside the 2/3 ball (tolerance {tolerance:g})"
            )


def nonlinearity_values(
    spec: SystemSpec,
    workspace: SpectralWorkspace,
    u_hat: np.ndarray,
    v_hat: np.ndarray,
    acceleration: np.ndarray | None = None,
) -> np.ndarray:
    """Physical G for stacked spectra, before dealiasing."""
    if spec.is_linear:
        return np.zeros(u_hat.shape)
    d = Derivatives(workspace, u_hat, v_hat)
    q00, rest = _split_terms(spec, d)
    if acceleration is not None:
        return rest + np.einsum("ij...,j...->i...", q00, acceleration)
    base = speed_laplacian(spec, workspace, u_hat)
    return solve_acceleration(q00, base, rest) - base


def nonlinearity_spectrum(
    spec: SystemSpec,
    workspace: SpectralWorkspace,
    u_hat: np.ndarray,
    v_hat: np.ndarray,
    acceleration: np.ndarray | None = None,
) -> np.ndarray:
    """Dealiased raw spectrum of G; solver entry point."""
    if spec.is_linear:
        return np.zeros_like(u_hat)
    return fft(nonlinearity_values(spec, workspace, u_hat, v_hat, acceleration)) * workspace.mask


def _state_spectra(state: State) -> tuple[SpectralWorkspace, np.ndarray, np.ndarray]:
    workspace = SpectralWorkspace(state.grid)
    return workspace, fft(state.u_array()), fft(state.v_array())


# -------------------------------------------------------------------------
# Public operations
# -------------------------------------------------------------------------
def eval_nonlinearity(
    spec: SystemSpec,
    state: State,
    acceleration: tuple[ScalarField, ...] | None = None,
    dealias: bool = True,
) -> tuple[ScalarField, ...]:
    """
    G^i(u, du, d^2u) for every component.

    Args:
        spec: system coefficients
        state: (u, v) on one grid
        acceleration: d_t^2 u per component; solved from the equation when omitted
        dealias: apply the 2/3 rule to the result

    Raises:
        AliasingError: state spectra extend past the dealiasing ball
        FixedPointError: the acceleration iteration fails
    """
    if state.m != spec.m:
        raise ValueError(f"state has {state.m} components, system has {spec.m}")
    workspace, u_hat, v_hat = _state_spectra(state)
    check_aliasing(workspace, u_hat, v_hat)
    accel = None if acceleration is None else np.stack([np.real(f.samples) for f in acceleration])
    values = nonlinearity_values(spec, workspace, u_hat, v_hat, accel)
    if dealias:
        values = ifft_real(fft(values) * workspace.mask)
    return tuple(ScalarField(state.grid, x) for x in values)


def _all_derivatives(spec: SystemSpec, state: State) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(u, du of shape (4, m, ...), d2u of shape (4, 4, m, ...)) with d_00 u solved."""
    workspace, u_hat, v_hat = _state_spectra(state)
    d = Derivatives(workspace, u_hat, v_hat)
    base = speed_laplacian(spec, workspace, u_hat)
    q00, rest = _split_terms(spec, d)
    accel = solve_acceleration(q00, base, rest)
    second = np.empty((4, 4) + d.u.shape)
    for alpha in range(4):
        for beta in range(4):
            second[alpha, beta] = accel if alpha == beta == 0 else d.second(alpha, beta)
    return d.u, np.stack(d.first), second


def quasilinear_coefficients(spec: SystemSpec, state: State) -> np.ndarray:
    """
    Coefficient fields Q^{ab}_{ij} = sum_kl [Q1 d_g u^k d_d u^l + Q2 d_g u^k u^l + Q3 u^k u^l].

    Returns:
        array of shape (4, 4, m, m, n, n, n)
    """
    u, du, _ = _all_derivatives(spec, state)
    return (
        np.einsum("abgdijkl,gk...,dl...->abij...", spec.Q1, du, du, optimize=True)
        + np.einsum("abgijkl,gk...,l...->abij...", spec.Q2, du, u, optimize=True)
        + np.einsum("abijkl,k...,l...->abij...", spec.Q3, u, u, optimize=True)
    )


def semilinear_terms(spec: SystemSpec, state: State) -> np.ndarray:
    """S^i(u, du) of shape (m, n, n, n)."""
    u, du, _ = _all_derivatives(spec, state)
    return (
        np.einsum("abgijkl,aj...,bk...,gl...->i...", spec.S1, du, du, du, optimize=True)
        + np.einsum("abijkl,aj...,bk...,l...->i...", spec.S2, du, du, u, optimize=True)
        + np.einsum("aijkl,aj...,k...,l...->i...", spec.S3, du, u, u, optimize=True)
    )


def reformulated_nonlinearity(spec: SystemSpec, state: State) -> np.ndarray:
    """G^i = Q^{ab}_{ij} d_ab u^j + S^i assembled from the dense coefficient fields (no dealiasing)."""
    _, _, second = _all_derivatives(spec, state)
    coefficients = quasilinear_coefficients(spec, state)
    return np.einsum("abij...,abj...->i...", coefficients, second, optimize=True) + semilinear_terms(spec, state)
