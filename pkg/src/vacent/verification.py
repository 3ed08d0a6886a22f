"""Self-checks of the Gaussian engine: invariants and Fock-oracle agreement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import fock
from . import symplectic as sc
from .entanglement import negativity
from .scenarios import (
    AcceleratedSpec,
    InertialSpec,
    accelerated_initial_state,
    accelerated_layout,
    accelerated_schedule,
    evolve_schedule,
    inertial_layout,
    schedule_for,
)

COV_TOL = 1e-6
NEG_TOL = 1e-5


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.measured < self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<44s} defect={self.measured:.3e}  tol={self.tol:.1e}"


@dataclass(frozen=True)
class OraclePoint:
    """A parameter set where the Fock oracle is converged at ``cutoff``.

    ``cutoff`` is per mode (detectors first); doubling it must not move the
    result beyond the oracle tolerances.
    """

    label: str
    spec: InertialSpec | AcceleratedSpec
    cutoff: tuple[int, ...]


CERTIFIED_POINTS = (
    OraclePoint("a x=0", InertialSpec("a", 2.0, 0.2, 1.0, 0.0), (30, 30, 30)),
    OraclePoint("a x=0.3", InertialSpec("a", 2.0, 0.2, 1.0, 0.3), (30, 30, 30)),
    OraclePoint("b x=0.3", InertialSpec("b", 2.0, 0.2, 1.0, 0.3), (30, 30, 30)),
    OraclePoint("c x=0.3", InertialSpec("c", 2.0, 0.2, 1.0, 0.3), (30, 30, 30)),
    OraclePoint("c x=0", InertialSpec("c", 2.0, 0.2, 1.0, 0.0), (30, 30, 30)),
    OraclePoint("d x=0 T=0.9", InertialSpec("d", 2.0, 0.2, 1.0, 0.0, T=0.9), (30, 30, 30)),
    OraclePoint("accel r=0.6", AcceleratedSpec(2.0, 0.4, 1.0, r=0.6), (16, 16, 30, 30)),
    OraclePoint(
        "accel r=0.6 delay=2", AcceleratedSpec(2.0, 0.4, 1.0, r=0.6, delay=2.0), (16, 16, 30, 30)
    ),
    OraclePoint("accel r=0.3", AcceleratedSpec(2.0, 0.6, 1.0, r=0.3), (16, 16, 30, 30)),
    OraclePoint(
        "accel r=0.3 delay=pi", AcceleratedSpec(2.0, 0.6, 1.0, r=0.3, delay=math.pi), (16, 16, 30, 30)
    ),
)


def gaussian_final_cov(spec) -> np.ndarray:
    """Full-system covariance after the schedule, by the symplectic route."""
    if isinstance(spec, InertialSpec):
        layout, schedule = inertial_layout(spec), schedule_for(spec)
        initial = sc.vacuum_state(layout.n_modes)
    else:
        layout, schedule = accelerated_layout(spec), accelerated_schedule(spec)
        initial = accelerated_initial_state(spec.squeezing)
    return sc.apply(evolve_schedule(layout, schedule), initial).cov


def oracle_final(spec, cutoff) -> tuple[np.ndarray, float]:
    """Full-system covariance and detector-pair negativity from the Fock oracle."""
    if isinstance(spec, InertialSpec):
        psi = fock.oracle_evolve(inertial_layout(spec), schedule_for(spec), cutoff)
    else:
        psi = fock.oracle_evolve(
            accelerated_layout(spec),
            accelerated_schedule(spec),
            cutoff,
            squeeze=(spec.squeezing, 2, 3),
        )
    return fock.oracle_covariance(psi), fock.oracle_negativity(psi, ([0], [1]))


@dataclass(frozen=True)
class OracleComparison:
    point: OraclePoint
    cov_defect: float
    neg_defect: float
    negativity: float
    cov_drift: float = math.nan  # change when the cutoff is doubled
    neg_drift: float = math.nan


def compare_with_oracle(point: OraclePoint, doubling: bool = False) -> OracleComparison:
    cov_g = gaussian_final_cov(point.spec)
    neg_g = negativity(cov_g[:4, :4]).negativity
    cov_o, neg_o = oracle_final(point.spec, point.cutoff)
    cov_drift = neg_drift = math.nan
    if doubling:
        cov_2, neg_2 = oracle_final(point.spec, tuple(2 * c for c in point.cutoff))
        cov_drift = float(np.max(np.abs(cov_2 - cov_o)))
        neg_drift = abs(neg_2 - neg_o)
    return OracleComparison(
        point,
        float(np.max(np.abs(cov_o - cov_g))),
        abs(neg_o - neg_g),
        neg_g,
        cov_drift,
        neg_drift,
    )


def heisenberg_direction_defect(omega: float = 1.3, t: float = 0.7) -> float:
    """Distance of a free rotation from ``q -> q cos wt + p sin wt``.

    Coherent mean (1, 0) must go to (cos wt, -sin wt).
    """
    layout = sc.SystemLayout((omega,), (omega,), (0.0,), [[0.0]])
    S = sc.evolve_segment(sc.build_hamiltonian(layout), t)
    state = sc.GaussianState(np.eye(4), np.array([1.0, 0.0, 0.0, 0.0]))
    got = sc.apply(S, state).mean[:2]
    want = np.array([math.cos(omega * t), -math.sin(omega * t)])
    return float(np.max(np.abs(got - want)))


def _stable_samples(n: int, seed: int = 7) -> Iterator[InertialSpec]:
    rng = np.random.default_rng(seed)
    for k in range(n):
        omega = rng.uniform(0.5, 6.0)
        yield InertialSpec(
            "abcd"[k % 4],
            omega,
            rng.uniform(0.0, 0.3 * omega),
            rng.uniform(0.0, 3.0),
            rng.uniform(0.0, 3.0),
            T=rng.uniform(0.0, 3.0),
        )


def quick_checks(samples: int = 200) -> list[Check]:
    sym = pur = phys = 0.0
    for spec in _stable_samples(samples):
        S = evolve_schedule(inertial_layout(spec), schedule_for(spec))
        state = sc.apply(S, sc.vacuum_state(3))
        sym = max(sym, S.defect())
        pur = max(pur, abs(np.linalg.det(state.cov) - 1.0))
        phys = max(phys, state.physicality_defect())

    free = sc.SystemLayout.resonant(2.1, (0.4, -0.4), [[0.0], [0.0]])
    S0 = sc.evolve_segment(sc.build_hamiltonian(free), 5.3)
    vac = np.max(np.abs(sc.apply(S0, sc.vacuum_state(3)).cov - np.eye(6)))

    H = sc.build_hamiltonian(inertial_layout(InertialSpec("a", 2.0, 0.7, 1.0, 0.4)), [0, 1])
    split = np.max(
        np.abs(
            sc.evolve_segment(H, 1.3).S
            - sc.compose(sc.evolve_segment(H, 0.8), sc.evolve_segment(H, 0.5)).S
        )
    )
    return [
        Check("symplecticity |SJS^T - J|_max", sym, sc.SYMPLECTIC_TOL),
        Check("purity |det sigma - 1|", pur, 1e-8),
        Check("physicality sigma + iJ >= 0", phys, sc.PHYSICAL_TOL),
        Check("vacuum invariance under free evolution", vac, 1e-12),
        Check("segment splitting", split, 1e-10),
        Check("Heisenberg direction q -> q cos + p sin", heisenberg_direction_defect(), 1e-12),
    ]


def oracle_checks(doubling: bool = False) -> list[Check]:
    out = []
    for point in CERTIFIED_POINTS:
        cmp = compare_with_oracle(point, doubling)
        out.append(Check(f"oracle covariance [{point.label}]", cmp.cov_defect, COV_TOL))
        out.append(Check(f"oracle negativity [{point.label}]", cmp.neg_defect, NEG_TOL))
        if doubling:
            out.append(Check(f"cutoff doubling covariance [{point.label}]", cmp.cov_drift, COV_TOL))
            out.append(Check(f"cutoff doubling negativity [{point.label}]", cmp.neg_drift, NEG_TOL))
    return out


def run_checks(level: str = "quick", echo: Callable[[str], None] | None = None) -> list[Check]:
    """Run the quick invariants and, at level ``full``, the oracle comparisons.

    The oracle stage is skipped when a quick invariant already failed, since
    the first failure is what gets reported.
    """
    if level not in ("quick", "full"):
        raise ValueError(f"unknown verification level {level!r}")
    checks = quick_checks()
    if echo is not None:
        for c in checks:
            echo(c.line())
    if level == "full":
        if all(c.passed for c in checks):
            oracle = oracle_checks()
            if echo is not None:
                for c in oracle:
                    echo(c.line())
            checks += oracle
        elif echo is not None:
            echo("SKIP  oracle comparisons (a quick invariant failed)")
    return checks
