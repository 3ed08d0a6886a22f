"""Symplectic spectra, PPT separability and negativity of Gaussian states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symplectic import GaussianState, NumericalError, symplectic_form

ROUTE_TOL = 1e-10
DISCRIMINANT_CLAMP = 1e-12
PAIRING_TOL = 1e-8


@dataclass(frozen=True)
class TwoModeInvariants:
    det_A: float
    det_B: float
    det_C: float
    delta_tilde: float
    nu_tilde_minus: float
    det_sigma: float


@dataclass(frozen=True)
class EntanglementResult:
    negativity: float
    log_negativity: float
    separable: bool
    nu_tilde_minus: float


def _check_two_mode(sigma: np.ndarray) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-mode covariance, got {sigma.shape}")
    return sigma


def symplectic_eigenvalues(sigma: np.ndarray) -> np.ndarray:
    """Moduli of the ``+-i nu`` eigenvalue pairs of ``J sigma``, ascending.

    Raises:
        NumericalError: if the spectrum is not made of imaginary pairs.
    """
    sigma = np.asarray(sigma, dtype=float)
    n2 = sigma.shape[0]
    if sigma.ndim != 2 or n2 != sigma.shape[1] or n2 % 2:
        raise ValueError(f"covariance must be square with even size, got {sigma.shape}")
    ev = np.linalg.eigvals(symplectic_form(n2 // 2) @ sigma)
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.max(np.abs(ev.real)) > PAIRING_TOL * scale:
        raise NumericalError("J sigma has eigenvalues off the imaginary axis")
    upper = np.sort(ev.imag[ev.imag > 0])
    lower = np.sort(-ev.imag[ev.imag < 0])
    if len(upper) != n2 // 2 or len(lower) != n2 // 2:
        # exactly degenerate zero eigenvalues cannot occur for sigma + iJ >= 0
        raise NumericalError("J sigma eigenvalues do not form +-i nu pairs")
    if np.max(np.abs(upper - lower)) > PAIRING_TOL * scale:
        raise NumericalError("J sigma eigenvalue pairs do not match")
    return 0.5 * (upper + lower)


def partial_transpose(sigma: np.ndarray, mode: int = 2) -> np.ndarray:
    """Flip the momentum sign of ``mode`` (1 or 2) of a two-mode covariance."""
    sigma = _check_two_mode(sigma)
    if mode not in (1, 2):
        raise ValueError("mode must be 1 or 2")
    flip = np.ones(4)
    flip[2 * mode - 1] = -1.0
    return sigma * np.outer(flip, flip)


def two_mode_invariants(sigma: np.ndarray) -> TwoModeInvariants:
    sigma = _check_two_mode(sigma)
    A, B, C = sigma[:2, :2], sigma[2:, 2:], sigma[:2, 2:]
    det_A, det_B, det_C = (float(np.linalg.det(M)) for M in (A, B, C))
    det_sigma = float(np.linalg.det(sigma))
    if not det_sigma > 0:
        # det sigma >= 1 for any physical state; growth beyond float64
        # resolution in the unstable regime can destroy it
        raise NumericalError(f"two-mode covariance has det {det_sigma:.3e} <= 0")
    delta = det_A + det_B - 2.0 * det_C
    disc = delta * delta - 4.0 * det_sigma
    if disc < 0:
        if disc < -DISCRIMINANT_CLAMP * max(1.0, delta * delta):
            raise NumericalError(f"negative discriminant {disc:.3e} in two-mode invariants")
        disc = 0.0
    root = np.sqrt(disc)
    # the product of the two roots is det_sigma; dividing avoids cancellation
    big = 0.5 * (delta + root)
    if not big > 0:
        raise NumericalError(f"two-mode invariants lost positivity (delta~ = {delta:.3e})")
    return TwoModeInvariants(det_A, det_B, det_C, delta, float(np.sqrt(det_sigma / big)), det_sigma)


def _root_error(inv: TwoModeInvariants) -> float:
    """Rounding bound on the invariant-route ``nu_tilde_minus``.

    Near a degenerate partially transposed spectrum the discriminant is
    close to zero and its square root amplifies rounding from ~eps to
    ~sqrt(eps). The bound is negligible away from degeneracy.
    """
    delta2 = inv.delta_tilde**2
    disc = max(delta2 - 4.0 * inv.det_sigma, 0.0)
    err = 16.0 * np.finfo(float).eps * max(delta2, 4.0 * abs(inv.det_sigma))
    d_root = min(np.sqrt(err), err / (2.0 * np.sqrt(disc))) if disc > 0 else np.sqrt(err)
    big = 0.5 * (inv.delta_tilde + np.sqrt(disc))
    return float(inv.nu_tilde_minus * d_root / (4.0 * big)) if big > 0 else 0.0


def _from_nu(nu: float) -> EntanglementResult:
    if nu < 1.0:
        return EntanglementResult((1.0 - nu) / (2.0 * nu), -np.log(nu), False, nu)
    return EntanglementResult(0.0, 0.0, True, nu)


def negativity(sigma: np.ndarray, tol: float = ROUTE_TOL) -> EntanglementResult:
    """Negativity of a two-mode Gaussian state, cross-checked by two routes.

    The smallest partially transposed symplectic eigenvalue is computed both
    from the subblock determinants and from the spectrum of ``J sigma~``.
    ``tol`` is scaled by the largest covariance entry (at least 1) and
    widened by the rounding bound of the invariant route, which only
    matters when the two partially transposed eigenvalues nearly coincide.
    """
    sigma = _check_two_mode(sigma)
    inv = two_mode_invariants(sigma)
    nu_inv = inv.nu_tilde_minus
    nu_eig = float(symplectic_eigenvalues(partial_transpose(sigma))[0])
    scale = max(1.0, float(np.max(np.abs(sigma))))
    if abs(nu_inv - nu_eig) > tol * scale + _root_error(inv):
        raise NumericalError(
            f"negativity routes disagree: invariant {nu_inv!r} vs eigenvalue {nu_eig!r}"
        )
    return _from_nu(nu_inv)


def mean_excitations(state: GaussianState, mode: int) -> float:
    """``<a^dagger a>`` of one mode: ``(<q^2> + <p^2> - 1) / 2``."""
    if not 0 <= mode < state.n_modes:
        raise IndexError(f"mode {mode} outside 0..{state.n_modes - 1}")
    q, p = 2 * mode, 2 * mode + 1
    second = 0.5 * (state.cov[q, q] + state.cov[p, p]) + state.mean[q] ** 2 + state.mean[p] ** 2
    return float(0.5 * (second - 1.0))
