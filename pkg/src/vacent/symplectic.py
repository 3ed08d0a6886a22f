"""Quadratic detector-field Hamiltonians and their symplectic evolution.

Quadratures are ordered ``(q_1, p_1, ..., q_n, p_n, Q_1, P_1, ..., Q_m, P_m)``:
detectors first, then field modes. Units have hbar = c = 1 and the vacuum
covariance is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

SYMPLECTIC_TOL = 1e-10
PHYSICAL_TOL = 1e-9


class NumericalError(ArithmeticError):
    """Raised when a numerical routine produces an untrustworthy result."""


@dataclass(frozen=True)
class SystemLayout:
    """Detectors and field modes with their couplings.

    Args:
        detector_freqs: oscillator frequency of each detector.
        field_freqs: frequency of each field mode.
        detector_positions: spatial coordinate of each detector (1+1D).
        coupling: ``(n, m)`` array, ``coupling[i, j]`` couples detector i
            to field mode j.
    """

    detector_freqs: tuple[float, ...]
    field_freqs: tuple[float, ...]
    detector_positions: tuple[float, ...]
    coupling: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "detector_freqs", tuple(float(w) for w in self.detector_freqs))
        object.__setattr__(self, "field_freqs", tuple(float(w) for w in self.field_freqs))
        object.__setattr__(
            self, "detector_positions", tuple(float(x) for x in self.detector_positions)
        )
        lam = np.array(self.coupling, dtype=float, copy=True)
        if lam.ndim == 1:
            lam = lam.reshape(self.n_detectors, self.m_fields)
        lam.setflags(write=False)
        object.__setattr__(self, "coupling", lam)

        if self.n_detectors < 1 or self.m_fields < 1:
            raise ValueError("need at least one detector and one field mode")
        if len(self.detector_positions) != self.n_detectors:
            raise ValueError("one position per detector is required")
        if lam.shape != (self.n_detectors, self.m_fields):
            raise ValueError(
                f"coupling must have shape {(self.n_detectors, self.m_fields)}, got {lam.shape}"
            )
        if min(self.detector_freqs + self.field_freqs) <= 0:
            raise ValueError("all frequencies must be positive")

    @property
    def n_detectors(self) -> int:
        return len(self.detector_freqs)

    @property
    def m_fields(self) -> int:
        return len(self.field_freqs)

    @property
    def n_modes(self) -> int:
        return self.n_detectors + self.m_fields

    @property
    def frequencies(self) -> tuple[float, ...]:
        return self.detector_freqs + self.field_freqs

    @classmethod
    def resonant(cls, omega: float, positions: Sequence[float], coupling) -> "SystemLayout":
        """All detectors and field modes share the frequency ``omega``."""
        lam = np.atleast_2d(np.asarray(coupling, dtype=float))
        n, m = lam.shape
        return cls((omega,) * n, (omega,) * m, tuple(positions), lam)


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """``H = X^T W X / 2`` for the quadrature vector of ``layout``."""

    W: np.ndarray = field(repr=False)
    layout: SystemLayout
    active: frozenset = frozenset()

    @property
    def is_stable(self) -> bool:
        """True when W is positive definite (bounded, oscillatory dynamics)."""
        return bool(np.linalg.eigvalsh(self.W)[0] > 0)


@dataclass(frozen=True)
class SymplecticTransform:
    """Linear map ``X -> S X`` of the quadratures over a span of time."""

    S: np.ndarray = field(repr=False)
    duration: float = 0.0
    stable: bool = True

    @property
    def n_modes(self) -> int:
        return self.S.shape[0] // 2

    def defect(self) -> float:
        """Max-norm violation of ``S J S^T = J``."""
        J = symplectic_form(self.n_modes)
        return float(np.max(np.abs(self.S @ J @ self.S.T - J)))

    @classmethod
    def identity(cls, n_modes: int) -> "SymplecticTransform":
        return cls(np.eye(2 * n_modes))


@dataclass(frozen=True)
class GaussianState:
    """Covariance ``sigma_ij = <X_i X_j + X_j X_i> - 2 <X_i><X_j>`` and mean."""

    cov: np.ndarray = field(repr=False)
    mean: np.ndarray = field(repr=False)
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        cov = np.asarray(self.cov, dtype=float)
        mean = np.asarray(self.mean, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValueError(f"covariance must be square with even size, got {cov.shape}")
        if mean.shape != (cov.shape[0],):
            raise ValueError("mean length does not match covariance")
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"mode{k}" for k in range(self.n_modes)))
        elif len(self.labels) != self.n_modes:
            raise ValueError("one label per mode is required")

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2

    def physicality_defect(self) -> float:
        """Most negative eigenvalue of ``sigma + iJ`` (0 when physical)."""
        lo = np.linalg.eigvalsh(self.cov + 1j * symplectic_form(self.n_modes))[0]
        return float(max(0.0, -lo))

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        return np.allclose(self.cov, self.cov.T, atol=tol) and self.physicality_defect() <= tol


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal J with ``[[0, 1], [-1, 0]]`` on every (q, p) pair."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def build_hamiltonian(layout: SystemLayout, active: Iterable[int] = ()) -> QuadraticHamiltonian:
    """Quadratic form W for the detectors in ``active`` (0-based) switched on.

    The interaction ``2 lam q_i (Q_j cos(W_j x_i) - P_j sin(W_j x_i))`` gives
    the symmetric pair of entries in W for every active detector i and mode j.
    """
    active = frozenset(int(i) for i in active)
    n, m = layout.n_detectors, layout.m_fields
    if not active <= set(range(n)):
        raise ValueError(f"active detectors {sorted(active)} outside 0..{n - 1}")

    W = np.diag(np.repeat(np.asarray(layout.frequencies), 2))
    for i in sorted(active):
        qi = 2 * i
        for j in range(m):
            lam = layout.coupling[i, j]
            if lam == 0.0:
                continue
            phase = layout.field_freqs[j] * layout.detector_positions[i]
            Qj, Pj = 2 * (n + j), 2 * (n + j) + 1
            wq = 2.0 * lam * np.cos(phase)
            wp = -2.0 * lam * np.sin(phase)
            W[qi, Qj] = W[Qj, qi] = wq
            W[qi, Pj] = W[Pj, qi] = wp
    W.setflags(write=False)
    return QuadraticHamiltonian(W, layout, active)


def matrix_exp(A: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a Pade approximant."""
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix_exp: non-finite input")
    with np.errstate(over="raise", invalid="raise"):
        try:
            E = scipy.linalg.expm(A)
        except FloatingPointError as exc:
            raise NumericalError(f"matrix_exp: {exc}") from exc
    if not np.all(np.isfinite(E)):
        raise NumericalError("matrix_exp: overflow")
    return E


def evolve_segment(H: QuadraticHamiltonian, duration: float) -> SymplecticTransform:
    """Forward Heisenberg evolution ``S = exp(J W t)`` under a constant H."""
    if duration < 0:
        raise ValueError("duration must be non-negative")
    J = symplectic_form(H.W.shape[0] // 2)
    S = matrix_exp(J @ H.W * duration)
    return SymplecticTransform(S, float(duration), H.is_stable or duration == 0)


def compose(later: SymplecticTransform, earlier: SymplecticTransform) -> SymplecticTransform:
    """The transform that applies ``earlier`` first, then ``later``."""
    if later.S.shape != earlier.S.shape:
        raise ValueError(f"dimension mismatch: {later.S.shape} vs {earlier.S.shape}")
    return SymplecticTransform(
        later.S @ earlier.S,
        later.duration + earlier.duration,
        later.stable and earlier.stable,
    )


def apply(S: SymplecticTransform, state: GaussianState) -> GaussianState:
    if S.S.shape[0] != state.cov.shape[0]:
        raise ValueError("transform and state have different numbers of modes")
    cov = S.S @ state.cov @ S.S.T
    # keep exact symmetry; S sigma S^T is symmetric up to rounding
    cov = 0.5 * (cov + cov.T)
    return GaussianState(cov, S.S @ state.mean, state.labels)


def two_mode_squeeze(r: float, mode_a: int, mode_b: int, n_modes: int) -> SymplecticTransform:
    """Two-mode squeezer on modes ``mode_a``, ``mode_b`` (0-based).

    On vacuum it yields diagonal blocks ``cosh(2r) I`` and the cross block
    ``sinh(2r) diag(1, -1)``.
    """
    if mode_a == mode_b:
        raise ValueError("two_mode_squeeze needs two distinct modes")
    for k in (mode_a, mode_b):
        if not 0 <= k < n_modes:
            raise ValueError(f"mode {k} outside 0..{n_modes - 1}")
    ch, sh = np.cosh(r), np.sinh(r)
    S = np.eye(2 * n_modes)
    qa, pa, qb, pb = 2 * mode_a, 2 * mode_a + 1, 2 * mode_b, 2 * mode_b + 1
    S[qa, qa] = S[pa, pa] = S[qb, qb] = S[pb, pb] = ch
    S[qa, qb] = S[qb, qa] = sh
    S[pa, pb] = S[pb, pa] = -sh
    return SymplecticTransform(S)


def vacuum_state(n_modes: int, labels: Sequence[str] = ()) -> GaussianState:
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    return GaussianState(np.eye(2 * n_modes), np.zeros(2 * n_modes), tuple(labels))


def partial_trace(state: GaussianState, keep: Sequence[int]) -> GaussianState:
    """Reduced state on the modes ``keep``, in the given order."""
    keep = [int(k) for k in keep]
    if not keep:
        raise ValueError("keep must name at least one mode")
    if len(set(keep)) != len(keep):
        raise ValueError("keep contains duplicate modes")
    for k in keep:
        if not 0 <= k < state.n_modes:
            raise IndexError(f"mode {k} outside 0..{state.n_modes - 1}")
    idx = np.array([[2 * k, 2 * k + 1] for k in keep]).ravel()
    return GaussianState(
        state.cov[np.ix_(idx, idx)].copy(),
        state.mean[idx].copy(),
        tuple(state.labels[k] for k in keep),
    )


def direct_sum(*states: GaussianState) -> GaussianState:
    """Product state of independent subsystems."""
    cov = scipy.linalg.block_diag(*(s.cov for s in states))
    mean = np.concatenate([s.mean for s in states])
    labels = tuple(lab for s in states for lab in s.labels)
    return GaussianState(cov, mean, labels)
