"""Operator algebra and channel semantics for n spin-1/2 nuclei.

Conventions used throughout the package:

* spin operators are I = sigma/2, so E_+/- = (1 +/- 2 I_z)/2 are projectors and a
  selective pulse of angle beta on transition (m, k) is exp(-i beta I_x^(m,k));
* the thermal deviation is sum_i gamma_i sigma_z^(i) (the common factor
  hbar B / 2kT is dropped), giving diag(2, 0, 0, -2) for two equal spins;
* level = 1 + bitstring value with spin 1 as the most significant bit, so for
  two spins |00>, |01>, |10>, |11> are levels 1, 2, 3, 4.

Deviation matrices and operators are plain complex numpy arrays.
"""
import logging
from functools import reduce
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from pseudo_pure.conf import get_setting
from pseudo_pure.errors import ContractError, InputError, NotPseudoPureError, UndefinedMetricError
from pseudo_pure.models import Axis, CrushMode, DeviationMatrix, LevelIndex, Operator, PurePart, Sign, SpinSystem
from pseudo_pure.utils import check_level, check_spin, hamming_weight, spin_count

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-12

_IDENTITY = np.eye(2, dtype=complex)
_HALF_PAULI = {
    Axis.X: np.array([[0, 0.5], [0.5, 0]], dtype=complex),
    Axis.Y: np.array([[0, -0.5j], [0.5j, 0]], dtype=complex),
    Axis.Z: np.array([[0.5, 0], [0, -0.5]], dtype=complex),
}


class SelectivePulse(NamedTuple):
    """A line-selective pulse: rotation `angle` (radians) about `axis` on levels (m, k)."""

    levels: Tuple[LevelIndex, LevelIndex]
    axis: str
    angle: float


def as_axis(axis: Union[str, Axis]) -> Axis:
    try:
        return Axis(str(axis).lower())
    except ValueError:
        raise InputError(f"unknown axis {axis!r}, expected one of x, y, z", axis=str(axis))


def spin_op(i: int, axis: Union[str, Axis], n: int) -> Operator:
    check_spin(i, n)
    factors = [_IDENTITY] * n
    factors[i - 1] = _HALF_PAULI[as_axis(axis)]
    return reduce(np.kron, factors)


def projector(i: int, sign: Union[str, Sign], n: int) -> Operator:
    """E_+ projects spin i on |0>, E_- on |1>."""
    try:
        sign = Sign(sign)
    except ValueError:
        raise InputError(f"unknown projector sign {sign!r}", sign=str(sign))
    factor = 1.0 if sign == Sign.PLUS else -1.0
    return 0.5 * (np.eye(2 ** n, dtype=complex) + factor * 2 * spin_op(i, Axis.Z, n))


def transition_op(m: LevelIndex, k: LevelIndex, axis: Union[str, Axis], n: int) -> Operator:
    """Single-transition operator: sigma_axis/2 embedded in the (m, k) subspace."""
    check_level(m, n)
    check_level(k, n)
    if m == k:
        raise InputError(f"degenerate transition ({m}, {k})", levels=[m, k])
    block = _HALF_PAULI[as_axis(axis)]
    op = np.zeros((2 ** n, 2 ** n), dtype=complex)
    rows = (m - 1, k - 1)
    for a in range(2):
        for b in range(2):
            op[rows[a], rows[b]] = block[a, b]
    return op


def thermal_deviation(system: SpinSystem) -> DeviationMatrix:
    n = system.n_spins
    return sum(gamma * 2 * spin_op(i, Axis.Z, n) for i, gamma in enumerate(system.gamma, start=1))


def generator(pulses: Iterable[Sequence], n: int) -> Operator:
    """Hermitian exponent sum_k beta_k I_axis^(m_k, k_k) of simultaneous selective pulses."""
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for pulse in pulses:
        levels, axis, angle = SelectivePulse(*pulse)
        h += angle * transition_op(levels[0], levels[1], axis, n)
    return h


def hard_pulse(spins: Optional[Iterable[int]], axis: Union[str, Axis], angle: float, n: int) -> Operator:
    """exp(-i angle sum_i I_axis^i) over the selected spins (all spins when `spins` is None)."""
    selected = range(1, n + 1) if spins is None else list(spins)
    h = sum((spin_op(i, axis, n) for i in selected), np.zeros((2 ** n, 2 ** n), dtype=complex))
    return expm_unitary(angle * h)


def is_hermitian(matrix: np.ndarray, atol: float = UNITARY_TOL) -> bool:
    return np.allclose(matrix, matrix.conj().T, rtol=0, atol=atol)


def is_unitary(matrix: np.ndarray, atol: float = UNITARY_TOL) -> bool:
    return np.allclose(matrix @ matrix.conj().T, np.eye(matrix.shape[0]), rtol=0, atol=atol)


def check_deviation(rho: np.ndarray, name: str = "rho") -> DeviationMatrix:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InputError(f"{name} must be a square matrix", shape=list(rho.shape))
    spin_count(rho.shape[0])
    if not is_hermitian(rho):
        raise InputError(f"{name} is not Hermitian", max_asymmetry=float(np.max(np.abs(rho - rho.conj().T))))
    return rho


def expm_unitary(h: Operator, hermitian_tol: Optional[float] = None) -> Operator:
    """exp(-iH) through the spectral decomposition of Hermitian H."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ContractError("generator must be a square matrix", shape=list(h.shape))
    tol = get_setting("PPSIM_HERMITIAN_TOL") if hermitian_tol is None else hermitian_tol
    asymmetry = float(np.max(np.abs(h - h.conj().T), initial=0.0))
    if asymmetry > tol:
        raise ContractError("generator is not Hermitian", max_asymmetry=asymmetry)
    eigenvalues, vectors = linalg.eigh(0.5 * (h + h.conj().T))
    return (vectors * np.exp(-1j * eigenvalues)) @ vectors.conj().T


def evolve(rho: DeviationMatrix, u: Operator) -> DeviationMatrix:
    rho = np.asarray(rho, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if rho.shape != u.shape:
        raise InputError("state and propagator dimensions differ", rho=list(rho.shape), u=list(u.shape))
    return u @ rho @ u.conj().T


def coherence_order(j: LevelIndex, k: LevelIndex, n: int) -> int:
    check_level(j, n)
    check_level(k, n)
    return hamming_weight(k) - hamming_weight(j)


def coherence_orders(n: int) -> np.ndarray:
    weights = np.array([hamming_weight(level) for level in range(1, 2 ** n + 1)])
    return weights[np.newaxis, :] - weights[:, np.newaxis]


def crush(rho: DeviationMatrix, mode: Union[str, CrushMode] = CrushMode.ALL_OFF_DIAGONAL) -> DeviationMatrix:
    """Idealized z-gradient: zero every coherence, or only those of nonzero order."""
    rho = np.asarray(rho, dtype=complex)
    try:
        mode = CrushMode(mode)
    except ValueError:
        raise InputError(f"unknown crusher mode {mode!r}", mode=str(mode))
    if mode == CrushMode.ALL_OFF_DIAGONAL:
        return np.diag(np.diag(rho))
    crushed = rho.copy()
    crushed[coherence_orders(spin_count(rho.shape[0])) != 0] = 0
    return crushed


def traceless_part(rho: DeviationMatrix) -> DeviationMatrix:
    rho = np.asarray(rho, dtype=complex)
    return rho - np.trace(rho) / rho.shape[0] * np.eye(rho.shape[0])


def population_spread(rho: DeviationMatrix, target: LevelIndex) -> float:
    populations = np.real(np.diag(rho))
    return float(np.ptp(np.delete(populations, target - 1)))


def pure_part(rho: DeviationMatrix, tol: Optional[float] = None) -> PurePart:
    """Split diag(rho) into a uniform background plus a single-level pure part."""
    tol = get_setting("PPSIM_POPULATION_TOL") if tol is None else tol
    rho = np.asarray(rho, dtype=complex)
    off_diagonal = rho - np.diag(np.diag(rho))
    if off_diagonal.size and np.max(np.abs(off_diagonal)) > tol:
        raise NotPseudoPureError("state carries coherences", max_coherence=float(np.max(np.abs(off_diagonal))))

    populations = np.real(np.diag(rho))
    candidates = []
    for index in range(populations.size):
        others = np.delete(populations, index)
        spread = float(np.ptp(others))
        uniform = float(np.mean(others))
        if spread <= tol and abs(populations[index] - uniform) > tol:
            candidates.append(PurePart(uniform, float(populations[index] - uniform), index + 1, spread))
    if not candidates:
        spread = min(float(np.ptp(np.delete(populations, index))) for index in range(populations.size))
        if np.ptp(populations) <= tol:
            raise NotPseudoPureError("no distinct level: populations are uniform", spread=float(np.ptp(populations)))
        raise NotPseudoPureError("more than one distinct population", spread=spread, tolerance=tol)
    # Only a single spin can leave two candidates; the larger population wins.
    return max(candidates, key=lambda part: populations[part.target - 1])


def max_rel_error(a: DeviationMatrix, b: DeviationMatrix) -> float:
    """max |a - b| over entries, relative to the largest entry of the reference b."""
    a, b = _same_shape(a, b)
    scale = float(np.max(np.abs(b)))
    if scale == 0:
        raise UndefinedMetricError("reference matrix is identically zero")
    return float(np.max(np.abs(a - b))) / scale


def symmetric_rel_error(a: DeviationMatrix, b: DeviationMatrix) -> float:
    a, b = _same_shape(a, b)
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    if scale == 0:
        raise UndefinedMetricError("both matrices are identically zero")
    return float(np.max(np.abs(a - b))) / scale


def _same_shape(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise InputError("matrices have different shapes", a=list(a.shape), b=list(b.shape))
    return a, b
