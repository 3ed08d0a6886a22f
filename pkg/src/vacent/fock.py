"""Brute-force check of the Gaussian engine in a truncated number basis.

The detector-field Hamiltonian is written directly with ladder operators,

    H = sum_i w_i (d_i^+ d_i + 1/2) + sum_j W_j (f_j^+ f_j + 1/2)
        + sum_ij lam_ij (d_i + d_i^+)(f_j e^{i W_j x_i} + f_j^+ e^{-i W_j x_i}),

and each constant-coupling segment is applied as ``exp(-i H tau)`` on the
state tensor. Nothing here touches covariance-matrix machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .scenarios import SwitchingSchedule
from .symplectic import NumericalError, SystemLayout

MAX_AMPLITUDES = 4_000_000
DENSE_MAX = 2500
LEAKAGE_TOL = 1e-6
NORM_TOL = 1e-9


class CutoffError(NumericalError):
    """Truncation too small (boundary population) or too large (memory guard)."""


@dataclass(frozen=True)
class FockState:
    amplitudes: np.ndarray  # one axis per mode, detectors first

    @property
    def cutoffs(self) -> tuple[int, ...]:
        return self.amplitudes.shape

    @property
    def n_modes(self) -> int:
        return self.amplitudes.ndim

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes.ravel()))

    def boundary_population(self) -> float:
        """Largest probability found on the top level of any mode."""
        prob = np.abs(self.amplitudes) ** 2
        worst = 0.0
        for k in range(self.n_modes):
            worst = max(worst, float(np.take(prob, -1, axis=k).sum()))
        return worst


def _cutoffs(cutoff, n_modes: int) -> tuple[int, ...]:
    cuts = (int(cutoff),) * n_modes if np.isscalar(cutoff) else tuple(int(c) for c in cutoff)
    if len(cuts) != n_modes:
        raise ValueError(f"need {n_modes} cutoffs, got {len(cuts)}")
    if min(cuts) < 2:
        raise ValueError("cutoff must be >= 2")
    if np.prod(cuts, dtype=float) > MAX_AMPLITUDES:
        raise CutoffError(f"{np.prod(cuts, dtype=float):.3g} amplitudes exceed the guard")
    return cuts


def _lower(c: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, c, dtype=float)), 1, format="csr")


def vacuum(cutoff, n_modes: int) -> FockState:
    psi = np.zeros(_cutoffs(cutoff, n_modes), dtype=complex)
    psi[(0,) * n_modes] = 1.0
    return FockState(psi)


def squeezed_pair(cutoff, n_modes: int, r: float, mode_a: int, mode_b: int) -> FockState:
    """Vacuum with ``tanh(r)^n / cosh(r) |n, n>`` on the pair, renormalized."""
    cuts = _cutoffs(cutoff, n_modes)
    psi = np.zeros(cuts, dtype=complex)
    for n in range(min(cuts[mode_a], cuts[mode_b])):
        idx = [0] * n_modes
        idx[mode_a] = idx[mode_b] = n
        psi[tuple(idx)] = np.tanh(r) ** n / np.cosh(r)
    return FockState(psi / np.linalg.norm(psi.ravel()))


def _components(layout: SystemLayout, active: frozenset) -> list[list[int]]:
    """Groups of modes coupled to each other during a segment."""
    n = layout.n_detectors
    parent = list(range(layout.n_modes))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for i in active:
        for j in range(layout.m_fields):
            if layout.coupling[i, j] != 0.0:
                parent[find(i)] = find(n + j)
    groups: dict[int, list[int]] = {}
    for k in range(layout.n_modes):
        groups.setdefault(find(k), []).append(k)
    return sorted(groups.values())


def _component_hamiltonian(
    layout: SystemLayout, active: frozenset, modes: list[int], cuts: tuple[int, ...]
) -> sp.csr_matrix:
    n = layout.n_detectors
    local = {k: pos for pos, k in enumerate(modes)}
    dims = [cuts[k] for k in modes]
    eyes = [sp.identity(c, format="csr") for c in dims]

    def embed(ops: dict[int, sp.spmatrix]) -> sp.csr_matrix:
        out = None
        for pos in range(len(modes)):
            op = ops.get(pos, eyes[pos])
            out = op if out is None else sp.kron(out, op, format="csr")
        return out

    freqs = layout.frequencies
    diag_terms = []
    for k in modes:
        num = sp.diags(np.arange(cuts[k], dtype=float) + 0.5)
        diag_terms.append(freqs[k] * embed({local[k]: num}))
    H = sum(diag_terms[1:], diag_terms[0])
    for i in active:
        if i not in local:
            continue
        d = _lower(cuts[i])
        x_det = d + d.T
        for j in range(layout.m_fields):
            lam = layout.coupling[i, j]
            if lam == 0.0:
                continue
            f = _lower(cuts[n + j]).astype(complex)
            phase = np.exp(1j * layout.field_freqs[j] * layout.detector_positions[i])
            field_op = f * phase + f.T * np.conj(phase)
            H = H + lam * embed({local[i]: x_det, local[n + j]: field_op})
    return sp.csr_matrix(H)


def _apply_on(psi: np.ndarray, modes: list[int], U_or_H, tau: float, dense: bool) -> np.ndarray:
    rest = [k for k in range(psi.ndim) if k not in modes]
    order = list(modes) + rest
    moved = np.transpose(psi, order)
    shape = moved.shape
    dim = int(np.prod(shape[: len(modes)]))
    block = moved.reshape(dim, -1)
    if dense:
        block = U_or_H @ block
    else:
        block = expm_multiply(-1j * tau * U_or_H, block)
    return np.transpose(block.reshape(shape), np.argsort(order))


def evolve_segment(
    psi: FockState, layout: SystemLayout, active: frozenset, duration: float
) -> FockState:
    """``exp(-i H duration)`` for one constant-coupling segment (0-based active)."""
    if duration == 0:
        return psi
    amps = psi.amplitudes
    cuts = psi.cutoffs
    for modes in _components(layout, active):
        if len(modes) == 1:
            k = modes[0]
            levels = np.arange(cuts[k]) + 0.5
            phase = np.exp(-1j * layout.frequencies[k] * levels * duration)
            shape = [1] * amps.ndim
            shape[k] = cuts[k]
            amps = amps * phase.reshape(shape)
            continue
        H = _component_hamiltonian(layout, active, modes, cuts)
        if H.shape[0] <= DENSE_MAX:
            E, V = np.linalg.eigh(H.toarray())
            U = (V * np.exp(-1j * E * duration)) @ V.conj().T
            amps = _apply_on(amps, modes, U, duration, dense=True)
        else:
            amps = _apply_on(amps, modes, H, duration, dense=False)
    return FockState(amps)


def oracle_evolve(
    layout: SystemLayout,
    schedule: SwitchingSchedule,
    cutoff,
    squeeze: tuple[float, int, int] | None = None,
) -> FockState:
    """Evolve the vacuum (or a squeezed field pair) through ``schedule``.

    Args:
        cutoff: number of levels per mode, or one value per mode.
        squeeze: optional ``(r, mode_a, mode_b)`` two-mode squeezed pair
            (0-based modes) in the initial state.

    Raises:
        CutoffError: on the memory guard, or when the top level of some mode
            holds more than 1e-6 probability.
    """
    if squeeze is None:
        psi = vacuum(cutoff, layout.n_modes)
    else:
        psi = squeezed_pair(cutoff, layout.n_modes, *squeeze)
    for active, duration in schedule.segments:
        psi = evolve_segment(psi, layout, frozenset(i - 1 for i in active), duration)
        drift = abs(psi.norm() - 1.0)
        if drift > NORM_TOL:
            raise NumericalError(f"norm drift {drift:.3e} in Fock evolution")
    leak = psi.boundary_population()
    if leak > LEAKAGE_TOL:
        raise CutoffError(f"population {leak:.3e} on the cutoff boundary")
    return psi


def _ladder(psi: np.ndarray, axis: int, raising: bool) -> np.ndarray:
    """Apply a or a^+ along ``axis`` of a tensor whose top level is empty."""
    c = psi.shape[axis]
    shape = [1] * psi.ndim
    shape[axis] = c - 1
    out = np.zeros_like(psi)
    lo = [slice(None)] * psi.ndim
    hi = [slice(None)] * psi.ndim
    lo[axis] = slice(0, c - 1)
    hi[axis] = slice(1, c)
    root = np.sqrt(np.arange(1, c, dtype=float)).reshape(shape)
    if raising:
        out[tuple(hi)] = root * psi[tuple(lo)]
    else:
        out[tuple(lo)] = root * psi[tuple(hi)]
    return out


def oracle_covariance(state: FockState) -> np.ndarray:
    """Symmetrized quadrature covariance (vacuum = identity)."""
    psi = np.pad(state.amplitudes, [(0, 1)] * state.n_modes)
    vecs = []
    for k in range(state.n_modes):
        a = _ladder(psi, k, raising=False)
        ad = _ladder(psi, k, raising=True)
        vecs.append(((a + ad) / np.sqrt(2)).ravel())
        vecs.append(((a - ad) / (1j * np.sqrt(2))).ravel())
    V = np.array(vecs)
    means = (V @ psi.ravel().conj()).real
    gram = (V.conj() @ V.T).real
    return 2.0 * gram - 2.0 * np.outer(means, means)


def reduced_density_matrix(state: FockState, keep: Sequence[int], trim: float = 1e-24) -> np.ndarray:
    """Density matrix of ``keep`` modes as a tensor ``(k1.., k1'..)``.

    Levels of a kept mode whose marginal population is below ``trim`` are
    dropped.
    """
    keep = list(keep)
    amps = state.amplitudes
    prob = np.abs(amps) ** 2
    slices = []
    for k in keep:
        others = tuple(ax for ax in range(amps.ndim) if ax != k)
        marginal = prob.sum(axis=others)
        nz = np.nonzero(marginal > trim)[0]
        top = int(nz[-1]) + 1 if len(nz) else 1
        slices.append(top)
    rest = [k for k in range(amps.ndim) if k not in keep]
    moved = np.transpose(amps, keep + rest)
    moved = moved[tuple(slice(0, s) for s in slices)]
    M = moved.reshape(int(np.prod(slices)), -1)
    rho = M @ M.conj().T
    return rho.reshape(tuple(slices) * 2)


def oracle_negativity(state: FockState, partition: tuple[Sequence[int], Sequence[int]]) -> float:
    """Sum of |negative eigenvalues| of the partial transpose on the second part."""
    part_a, part_b = (list(p) for p in partition)
    if not part_a or not part_b or set(part_a) & set(part_b):
        raise ValueError("partition needs two disjoint, non-empty mode groups")
    rho = reduced_density_matrix(state, part_a + part_b)
    na, nb = len(part_a), len(part_b)
    dims = rho.shape[: na + nb]
    # swap the row and column indices of the B modes
    axes = (
        list(range(na))
        + [2 * na + nb + k for k in range(nb)]
        + [na + nb + k for k in range(na)]
        + [na + k for k in range(nb)]
    )
    pt = np.transpose(rho, axes)
    dim = int(np.prod(dims))
    ev = np.linalg.eigvalsh(pt.reshape(dim, dim))
    return float(-ev[ev < 0].sum())
