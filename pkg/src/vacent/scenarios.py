"""Switching schedules, detector setups and parameter sweeps.

Inertial pair: two detectors and one field mode, all at frequency omega, the
detectors at ``+-separation/2``. Accelerated pair: each detector couples to
its own Rindler wedge mode; the two wedge modes start in a two-mode squeezed
vacuum. Indices of detectors in schedules are 1-based, as in the scenario
labels; everything passed to :mod:`vacent.symplectic` is 0-based.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Sequence, Union

import numpy as np

from . import symplectic as sc
from .entanglement import EntanglementResult, mean_excitations, negativity

INERTIAL_SCENARIOS = ("a", "b", "c", "d")
UNRUH_FIT_TOL = 1e-8
# symplectic defect beyond which float64 no longer resolves nu_tilde_minus;
# only reached deep in the unstable regime at long times
PRECISION_LIMIT = 1e-6


@dataclass(frozen=True)
class SwitchingSchedule:
    """Ordered ``(active detectors, duration)`` segments, earliest first."""

    segments: tuple[tuple[frozenset, float], ...]

    def __post_init__(self):
        segs = tuple((frozenset(a), float(d)) for a, d in self.segments)
        for _, d in segs:
            if not (d >= 0 and math.isfinite(d)):
                raise ValueError(f"segment durations must be finite and >= 0, got {d}")
        object.__setattr__(self, "segments", segs)

    @property
    def total_duration(self) -> float:
        return sum(d for _, d in self.segments)


@dataclass(frozen=True)
class InertialSpec:
    scenario: str
    omega: float
    lam: float
    t: float
    separation: float = 0.0
    T: float = 0.0
    # detectors at +-separation when True, +-separation/2 otherwise
    paper_positions: bool = False

    def __post_init__(self):
        if self.scenario not in INERTIAL_SCENARIOS:
            raise ValueError(f"unknown inertial scenario {self.scenario!r}")
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.lam < 0 or self.t < 0 or self.T < 0:
            raise ValueError("lambda, t and T must be non-negative")

    def positions(self) -> tuple[float, float]:
        half = self.separation if self.paper_positions else 0.5 * self.separation
        return (-half, half)


@dataclass(frozen=True)
class AcceleratedSpec:
    omega: float
    lam: float
    t: float
    r: float | None = None
    delay: float | None = None
    Omega: float | None = None
    a: float | None = None

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.lam < 0 or self.t < 0:
            raise ValueError("lambda and t must be non-negative")
        if self.delay is not None and self.delay < 0:
            raise ValueError("delay must be non-negative")
        by_accel = self.Omega is not None or self.a is not None
        if self.r is not None and by_accel:
            raise ValueError("give either r or (Omega, a), not both")
        if by_accel and (self.Omega is None or self.a is None):
            raise ValueError("Omega and a must be given together")
        if self.r is None and not by_accel:
            raise ValueError("one of r or (Omega, a) is required")
        if self.r is not None and self.r < 0:
            raise ValueError("r must be non-negative")

    @property
    def squeezing(self) -> float:
        if self.r is not None:
            return float(self.r)
        return squeezing_from_acceleration(self.Omega, self.a)


@dataclass(frozen=True)
class ScenarioResult:
    entanglement: EntanglementResult
    cov: np.ndarray = field(repr=False)
    excitations: tuple[float, ...]
    stable: bool

    @property
    def negativity(self) -> float:
        return self.entanglement.negativity

    @property
    def log_negativity(self) -> float:
        return self.entanglement.log_negativity


@dataclass(frozen=True)
class UnruhResponse:
    N: float
    R: float
    r: tuple[float, ...]
    N_of_r: tuple[float, ...]
    max_residual: float

    def predict(self, r: float) -> float:
        return self.N + self.R * math.sinh(r) ** 2


Spec = Union[InertialSpec, AcceleratedSpec]


def schedule_for(spec: InertialSpec) -> SwitchingSchedule:
    t = spec.t
    if spec.scenario == "a":
        segs = [({1, 2}, t)]
    elif spec.scenario == "b":
        segs = [({1}, t / 2), ({1, 2}, t / 2), ({2}, t / 2)]
    elif spec.scenario == "c":
        segs = [({1}, t), ({2}, t)]
    else:
        segs = [({1}, t), (set(), spec.T), ({2}, t)]
    return SwitchingSchedule(tuple(segs))


def accelerated_schedule(spec: AcceleratedSpec) -> SwitchingSchedule:
    if spec.delay is None:
        return SwitchingSchedule((({1, 2}, spec.t),))
    return SwitchingSchedule((({1}, spec.t), (set(), spec.delay), ({2}, spec.t)))


def evolve_schedule(layout: sc.SystemLayout, schedule: SwitchingSchedule) -> sc.SymplecticTransform:
    """Chronological product of the segment transforms."""
    total = sc.SymplecticTransform.identity(layout.n_modes)
    for active, duration in schedule.segments:
        H = sc.build_hamiltonian(layout, [i - 1 for i in active])
        total = sc.compose(sc.evolve_segment(H, duration), total)
    return total


def inertial_layout(spec: InertialSpec) -> sc.SystemLayout:
    return sc.SystemLayout.resonant(spec.omega, spec.positions(), [[spec.lam], [spec.lam]])


def accelerated_layout(spec: AcceleratedSpec) -> sc.SystemLayout:
    # detector i couples only to wedge mode i, with zero phase
    return sc.SystemLayout.resonant(spec.omega, (0.0, 0.0), spec.lam * np.eye(2))


def _detector_pair_result(final: sc.GaussianState, transform: sc.SymplecticTransform) -> ScenarioResult:
    defect = transform.defect()
    if not defect <= PRECISION_LIMIT:
        raise sc.NumericalError(
            f"symplectic defect {defect:.3e} of the evolution exceeds {PRECISION_LIMIT:g}; "
            "unstable growth has exhausted float64 precision"
        )
    pair = sc.partial_trace(final, [0, 1])
    return ScenarioResult(
        negativity(pair.cov),
        pair.cov,
        (mean_excitations(pair, 0), mean_excitations(pair, 1)),
        transform.stable,
    )


def run_inertial(spec: InertialSpec) -> ScenarioResult:
    layout = inertial_layout(spec)
    S = evolve_schedule(layout, schedule_for(spec))
    final = sc.apply(S, sc.vacuum_state(3, ("d1", "d2", "field")))
    return _detector_pair_result(final, S)


def accelerated_initial_state(r: float) -> sc.GaussianState:
    """Detector vacua and a two-mode squeezed pair of wedge modes."""
    state = sc.vacuum_state(4, ("d1", "d2", "rindler_I", "rindler_II"))
    return sc.apply(sc.two_mode_squeeze(r, 2, 3, 4), state)


def run_accelerated(spec: AcceleratedSpec) -> ScenarioResult:
    layout = accelerated_layout(spec)
    S = evolve_schedule(layout, accelerated_schedule(spec))
    final = sc.apply(S, accelerated_initial_state(spec.squeezing))
    return _detector_pair_result(final, S)


def run(spec: Spec) -> ScenarioResult:
    if isinstance(spec, InertialSpec):
        return run_inertial(spec)
    return run_accelerated(spec)


def _sinc2(z2: float, t: float) -> float:
    """``sinc(sqrt(z2) t)**2`` continued to negative ``z2`` as sinh(y)/y."""
    if z2 >= 0:
        z = math.sqrt(z2) * t
        return 1.0 if z == 0 else (math.sin(z) / z) ** 2
    y = math.sqrt(-z2) * t
    return (math.sinh(y) / y) ** 2


def closed_form_excitations(omega: float, lam: float, t: float) -> float:
    """Mean detector excitation for one resonant detector and one field mode."""
    if omega <= 0 or lam < 0 or t < 0:
        raise ValueError("need omega > 0, lambda >= 0, t >= 0")
    return 0.5 * lam**2 * t**2 * (
        _sinc2(omega * (omega - 2 * lam), t) + _sinc2(omega * (omega + 2 * lam), t)
    )


def simulated_excitations(omega: float, lam: float, t: float) -> float:
    """Mean detector excitation from the exact 2-mode symplectic evolution."""
    layout = sc.SystemLayout.resonant(omega, (0.0,), [[lam]])
    S = sc.evolve_segment(sc.build_hamiltonian(layout, [0]), t)
    return mean_excitations(sc.apply(S, sc.vacuum_state(2)), 0)


def accelerated_single_excitations(omega: float, lam: float, t: float, r: float) -> float:
    """Detector excitation with its wedge mode squeezed against a spectator."""
    layout = sc.SystemLayout.resonant(omega, (0.0,), [[lam, 0.0]])
    state = sc.apply(sc.two_mode_squeeze(r, 1, 2, 3), sc.vacuum_state(3))
    S = sc.evolve_segment(sc.build_hamiltonian(layout, [0]), t)
    return mean_excitations(sc.apply(S, state), 0)


def unruh_response(
    omega: float, lam: float, t: float, r_samples: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0, 1.25)
) -> UnruhResponse:
    """Fit ``N(r) = N + R sinh^2 r`` to simulated single-detector excitations.

    Raises:
        NumericalError: when the relative fit residual exceeds 1e-8.
    """
    rs = tuple(float(r) for r in r_samples)
    if len(set(rs)) < 3 or 0.0 not in rs:
        raise ValueError("need at least 3 distinct r samples including r = 0")
    Nr = np.array([accelerated_single_excitations(omega, lam, t, r) for r in rs])
    x = np.sinh(np.array(rs)) ** 2
    A = np.column_stack([np.ones_like(x), x])
    (N0, R), *_ = np.linalg.lstsq(A, Nr, rcond=None)
    resid = np.abs(A @ np.array([N0, R]) - Nr)
    scale = max(float(np.max(np.abs(Nr))), np.finfo(float).tiny)
    max_resid = float(np.max(resid) / scale)
    if max_resid > UNRUH_FIT_TOL:
        raise sc.NumericalError(f"N(r) deviates from N + R sinh^2(r): residual {max_resid:.3e}")
    return UnruhResponse(float(N0), float(R), rs, tuple(float(v) for v in Nr), max_resid)


def squeezing_from_acceleration(Omega: float, a: float) -> float:
    """r with ``cosh r = (1 - exp(-2 pi Omega / a))**-1/2``."""
    if Omega <= 0 or a <= 0:
        raise ValueError("Omega and a must be positive")
    boltz = math.exp(-2 * math.pi * Omega / a)
    # cosh r = 1/sqrt(1-b)  =>  tanh r = sqrt(b)
    return math.atanh(math.sqrt(boltz))


def minkowski_to_rindler_duration(t_minkowski: float, a: float) -> float:
    if a <= 0:
        raise ValueError("a must be positive")
    return math.asinh(a * t_minkowski) / a


# sweep machinery

_SPEC_FIELDS = {
    "omega": "omega",
    "lambda": "lam",
    "t": "t",
    "separation": "separation",
    "T": "T",
    "delay": "delay",
    "r": "r",
    "Omega": "Omega",
    "a": "a",
}


@dataclass(frozen=True)
class SweepAxis:
    param: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError(f"sweep over {self.param!r} needs at least 2 steps")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepTable:
    params: tuple[str, ...]
    grid: np.ndarray  # (rows, n_axes)
    negativity: np.ndarray
    log_negativity: np.ndarray
    nu_tilde_minus: np.ndarray
    excitations: np.ndarray  # (rows, 2)
    stable: np.ndarray

    def __len__(self) -> int:
        return len(self.negativity)


def with_param(spec: Spec, name: str, value: float) -> Spec:
    attr = _SPEC_FIELDS.get(name)
    if attr is None or attr not in {f.name for f in fields(spec)}:
        raise KeyError(f"unknown sweep parameter {name!r} for {type(spec).__name__}")
    return replace(spec, **{attr: float(value)})


def sweep(base: Spec, axes: Sequence[SweepAxis], workers: int = 1) -> SweepTable:
    """Evaluate ``base`` over a 1-D or 2-D grid, outer axis first."""
    if not 1 <= len(axes) <= 2:
        raise ValueError("sweep supports one or two axes")
    for ax in axes:
        with_param(base, ax.param, ax.start)
    grid = np.array(list(itertools.product(*(ax.values() for ax in axes))), dtype=float)

    def point(row):
        spec = base
        for ax, v in zip(axes, row):
            spec = with_param(spec, ax.param, v)
        return run(spec)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(point, grid))
    else:
        results = [point(row) for row in grid]

    return SweepTable(
        tuple(ax.param for ax in axes),
        grid,
        np.array([res.negativity for res in results]),
        np.array([res.log_negativity for res in results]),
        np.array([res.entanglement.nu_tilde_minus for res in results]),
        np.array([res.excitations for res in results]),
        np.array([res.stable for res in results]),
    )
