"""Pseudo-pure state preparation with simultaneous line-selective pulses.

A cascade is a chain of single-quantum transitions linking every level except
the target. Pulsing all of them at once (one x-phase angle per transition)
and choosing the angles so that the non-target populations become equal,
followed by a crusher gradient, leaves the target level as the only distinct
population.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy import linalg

from pseudo_pure.conf import get_setting
from pseudo_pure.errors import InputError, NoSolutionError
from pseudo_pure.models import Axis, CrushMode, DeviationMatrix, LevelIndex, SpinSystem
from pseudo_pure.presets import seed_vectors
from pseudo_pure.spin_core import (crush, evolve, expm_unitary, population_spread, thermal_deviation,
                                   transition_op)
from pseudo_pure.utils import bits_of, check_level, flipped_spins, level_of, pairwise, to_degrees, to_radians

logger = logging.getLogger(__name__)

JACOBIAN_STEP = 1e-6
DEDUP_DEGREES = 0.01
# Transition-operator rotations only return to the identity after 720 degrees.
ANGLE_PERIOD = 720.0

# Route through the levels of three spins for target |000>, one pulse per arrow.
THREE_SPIN_ROUTE = ("010", "110", "100", "101", "111", "011", "001")


@dataclass(frozen=True)
class CascadeStep:
    level_from: LevelIndex
    level_to: LevelIndex
    spin: int

    @property
    def levels(self) -> Tuple[LevelIndex, LevelIndex]:
        return self.level_from, self.level_to


@dataclass(frozen=True)
class CascadeSpec:
    target: LevelIndex
    steps: Tuple[CascadeStep, ...]
    n_spins: int

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def describe(self) -> List[str]:
        return [f"|{bits_of(s.level_from, self.n_spins)}> <-> |{bits_of(s.level_to, self.n_spins)}>"
                for s in self.steps]


@dataclass(frozen=True)
class CascadeReport:
    valid: bool
    violation: Optional[str] = None
    message: str = "ok"

    def __bool__(self):
        return self.valid


@dataclass
class SolverResult:
    roots: List[Tuple[float, ...]]
    residual_norms: List[float]
    starts_tried: int
    converged: List[bool]
    best_residual: float
    rejected: List[Tuple[float, ...]] = field(default_factory=list)
    traces: List[List[float]] = field(default_factory=list, repr=False)

    @property
    def best_root(self) -> Tuple[float, ...]:
        """Root with the smallest residual norm, ties broken by angle order."""
        return min(zip(self.residual_norms, self.roots))[1]


class Preparation(NamedTuple):
    rho: DeviationMatrix
    solver_result: Optional[SolverResult]


class StartOutcome(NamedTuple):
    angles: np.ndarray
    residual_norm: float
    converged: bool
    trace: List[float]


def default_cascade(n: int, target: LevelIndex) -> CascadeSpec:
    """Fixed routes for two and three spins, reflected Gray code beyond.

    The route for target |0...0> is relabeled to other targets by XOR with the
    target bits and oriented to start at its higher-indexed end.
    """
    check_level(target, n)
    if n == 3:
        route = [int(bits, 2) for bits in THREE_SPIN_ROUTE]
    else:
        route = [i ^ (i >> 1) for i in range(1, 2 ** n)]
    mask = target - 1
    levels = [(value ^ mask) + 1 for value in route]
    if levels[0] < levels[-1]:
        levels.reverse()
    steps = [CascadeStep(a, b, flipped_spins(a, b, n)[0]) for a, b in pairwise(levels)]
    return CascadeSpec(target=target, steps=tuple(steps), n_spins=n)


def validate_cascade(spec: CascadeSpec) -> CascadeReport:
    n = spec.n_spins
    dim = 2 ** n
    for step in spec.steps:
        if not (1 <= step.level_from <= dim and 1 <= step.level_to <= dim):
            return CascadeReport(False, "range", f"step {step.levels} leaves levels 1..{dim}")

    hypercube = nx.hypercube_graph(n)
    for step, label in zip(spec.steps, spec.describe()):
        a = tuple(int(bit) for bit in bits_of(step.level_from, n))
        b = tuple(int(bit) for bit in bits_of(step.level_to, n))
        if not hypercube.has_edge(a, b):
            reason = "is degenerate" if a == b else "flips more than one bit"
            return CascadeReport(False, "single_quantum", f"step {label} {reason}")
        if [step.spin] != flipped_spins(step.level_from, step.level_to, n):
            return CascadeReport(False, "spin", f"step {step.levels} does not flip spin {step.spin}")

    if any(spec.target in step.levels for step in spec.steps):
        return CascadeReport(False, "target", f"target level {spec.target} appears in a step")

    non_target = set(range(1, dim + 1)) - {spec.target}
    graph = nx.Graph()
    graph.add_edges_from(step.levels for step in spec.steps)
    if len(non_target) == 1 and not spec.steps:
        return CascadeReport(True)
    if set(graph.nodes) != non_target:
        missing = sorted(non_target - set(graph.nodes))
        return CascadeReport(False, "coverage", f"levels {missing} are not reached by the cascade")
    if len(spec.steps) != dim - 2:
        return CascadeReport(False, "length", f"{len(spec.steps)} steps, expected {dim - 2}")
    is_path = (nx.is_connected(graph) and graph.number_of_edges() == graph.number_of_nodes() - 1
               and max(degree for _, degree in graph.degree) <= 2)
    if not is_path:
        return CascadeReport(False, "path", "steps do not form a single path through the levels")
    return CascadeReport(True)


class PopulationResidual:
    """Population differences of the non-target levels after the simultaneous pulses.

    Component l is rho_t(l, l) - rho_t(l0, l0), with l0 the first non-target level.
    """

    def __init__(self, system: SpinSystem, spec: CascadeSpec):
        if spec.n_spins != system.n_spins:
            raise InputError("cascade and spin system sizes differ", cascade=spec.n_spins, system=system.n_spins)
        report = validate_cascade(spec)
        if not report:
            raise InputError(f"invalid cascade: {report.message}", violation=report.violation)
        self.spec = spec
        self.populations_eq = np.real(np.diag(thermal_deviation(system)))
        self.generators = [transition_op(s.level_from, s.level_to, Axis.X, spec.n_spins) for s in spec.steps]
        non_target = [index for index in range(system.dim) if index != spec.target - 1]
        self.reference = non_target[0]
        self.others = non_target[1:]

    def unitary(self, angles: Sequence[float]) -> np.ndarray:
        dim = self.populations_eq.size
        h = np.zeros((dim, dim), dtype=complex)
        for angle, g in zip(angles, self.generators):
            h += angle * g
        return expm_unitary(h)

    def populations(self, angles: Sequence[float]) -> np.ndarray:
        # rho_eq is diagonal, so diag(U rho U^+) = |U|^2 p
        return np.abs(self.unitary(angles)) ** 2 @ self.populations_eq

    def __call__(self, angles: Sequence[float]) -> np.ndarray:
        populations = self.populations(angles)
        return populations[self.others] - populations[self.reference]


def residual(angles: Sequence[float], system: SpinSystem, spec: CascadeSpec) -> np.ndarray:
    """Population-equalization residual at `angles` given in degrees."""
    if len(angles) != len(spec.steps):
        raise InputError(f"{len(angles)} angles for {len(spec.steps)} cascade steps",
                         angles=len(angles), steps=len(spec.steps))
    return PopulationResidual(system, spec)(to_radians(angles))


def _forward_jacobian(fun: Callable, x: np.ndarray, fx: np.ndarray, step: float) -> np.ndarray:
    jac = np.empty((fx.size, x.size))
    for j in range(x.size):
        shifted = x.copy()
        shifted[j] += step
        jac[:, j] = (fun(shifted) - fx) / step
    return jac


def newton(fun: Callable, x0: np.ndarray, tol: float, max_iter: int) -> StartOutcome:
    """Damped Newton iteration with a forward-difference Jacobian and backtracking."""
    x = np.array(x0, dtype=float)
    fx = fun(x)
    norm = float(np.linalg.norm(fx))
    trace = [norm]
    for _ in range(max_iter):
        if norm < tol:
            break
        jac = _forward_jacobian(fun, x, fx, JACOBIAN_STEP)
        delta = linalg.lstsq(jac, -fx)[0]
        t = 1.0
        while True:
            trial = x + t * delta
            f_trial = fun(trial)
            trial_norm = float(np.linalg.norm(f_trial))
            if trial_norm < (1 - 1e-4 * t) * norm or t < 1 / 64:
                break
            t /= 2
        x, fx, norm = trial, f_trial, trial_norm
        trace.append(norm)
    return StartOutcome(x, norm, norm < tol, trace)


def start_points(k: int, grid_per_dim: Optional[int] = None, seed: Optional[int] = None) -> np.ndarray:
    """Published vectors of matching size first, then cell centres of a uniform grid on (0, 360)^k."""
    starts = [list(angles) for angles in seed_vectors(k)]
    if grid_per_dim is None and k > 6:
        rng = np.random.default_rng(get_setting("PPSIM_SEED") if seed is None else seed)
        starts += rng.uniform(0.0, 360.0, size=(get_setting("PPSIM_MAX_RANDOM_STARTS"), k)).tolist()
    else:
        if grid_per_dim is None:
            grid_per_dim = 5 if k <= 2 else 3
        centres = (np.arange(grid_per_dim) + 0.5) * 360.0 / grid_per_dim
        starts += [list(point) for point in itertools.product(centres, repeat=k)]
    return np.array(starts, dtype=float).reshape(len(starts), k)


def solve_angles(system: SpinSystem, spec: CascadeSpec, grid_per_dim: Optional[int] = None,
                 newton_tol: Optional[float] = None, max_iter: Optional[int] = None,
                 workers: Optional[int] = None, seed: Optional[int] = None) -> SolverResult:
    """Multi-start Newton solve of the population-equalization equations.

    Roots are reported in degrees, restricted to the open box (0, 720)^k and
    deduplicated to within 0.01 degrees componentwise.
    """
    newton_tol = get_setting("PPSIM_NEWTON_TOL") if newton_tol is None else newton_tol
    max_iter = get_setting("PPSIM_MAX_ITER") if max_iter is None else max_iter
    workers = get_setting("PPSIM_SOLVER_WORKERS") if workers is None else workers
    fun = PopulationResidual(system, spec)
    k = len(spec.steps)
    if k == 0:
        return SolverResult(roots=[()], residual_norms=[0.0], starts_tried=0, converged=[], best_residual=0.0)

    starts = to_radians(start_points(k, grid_per_dim, seed).ravel()).reshape(-1, k)

    def run(x0):
        return newton(fun, x0, newton_tol, max_iter)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, starts))
    else:
        outcomes = [run(x0) for x0 in starts]

    roots, norms, rejected = [], [], []
    for outcome in outcomes:
        if not outcome.converged:
            continue
        degrees = to_degrees(outcome.angles)
        if not np.all((degrees > 0) & (degrees < ANGLE_PERIOD)):
            logger.warning("root %s outside (0, %g) rejected", np.round(degrees, 3).tolist(), ANGLE_PERIOD)
            rejected.append(tuple(float(a) for a in degrees))
            continue
        if any(np.max(np.abs(degrees - np.array(root))) < DEDUP_DEGREES for root in roots):
            continue
        roots.append(tuple(float(a) for a in degrees))
        norms.append(outcome.residual_norm)

    best = min(outcome.residual_norm for outcome in outcomes)
    logger.info("solved %d-step cascade for target %s: %d starts, %d roots, best residual %.3e",
                k, bits_of(spec.target, spec.n_spins), len(starts), len(roots), best)
    if not roots:
        raise NoSolutionError("no root found from any start", best_residual=best, starts_tried=len(starts),
                              rejected=len(rejected))

    order = sorted(range(len(roots)), key=lambda i: roots[i])
    return SolverResult(
        roots=[roots[i] for i in order],
        residual_norms=[norms[i] for i in order],
        starts_tried=len(starts),
        converged=[outcome.converged for outcome in outcomes],
        best_residual=best,
        rejected=rejected,
        traces=[outcome.trace for outcome in outcomes],
    )


def cascade_unitary(system: SpinSystem, spec: CascadeSpec, angles: Sequence[float]) -> np.ndarray:
    """U of the simultaneous x-pulses, angles in degrees."""
    return PopulationResidual(system, spec).unitary(to_radians(angles))


def prepare_pseudo_pure(system: SpinSystem, target: LevelIndex, angles: Optional[Sequence[float]] = None,
                        cascade: Optional[CascadeSpec] = None, **solver_options) -> Preparation:
    """Thermal state -> simultaneous selective pulses -> crusher gradient."""
    if isinstance(target, str):
        target = level_of(target, system.n_spins)
    check_level(target, system.n_spins)
    spec = cascade or default_cascade(system.n_spins, target)
    if spec.target != target:
        raise InputError("cascade was built for another target", cascade_target=spec.target, target=target)

    result = None
    if angles is None:
        result = solve_angles(system, spec, **solver_options)
        angles = result.best_root
    elif len(angles) != len(spec.steps):
        raise InputError(f"{len(angles)} angles for {len(spec.steps)} cascade steps",
                         angles=len(angles), steps=len(spec.steps))

    rho_t = evolve(thermal_deviation(system), cascade_unitary(system, spec, angles))
    rho = crush(rho_t, CrushMode.ALL_OFF_DIAGONAL)
    spread = population_spread(rho, target)
    if spread > get_setting("PPSIM_POPULATION_TOL"):
        logger.warning("non-target populations differ by %.3e after preparation of |%s>",
                       spread, bits_of(target, system.n_spins))
    return Preparation(rho, result)


def relative_spread(rho: DeviationMatrix, system: SpinSystem, target: LevelIndex) -> float:
    """Non-target population spread as a fraction of the thermal population range."""
    thermal = np.real(np.diag(thermal_deviation(system)))
    return population_spread(rho, target) / float(np.ptp(thermal))
