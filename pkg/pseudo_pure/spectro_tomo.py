"""Simulated readout: stick spectra and deviation-matrix tomography.

A readout setting is one ideal hard pulse (none, x90 or y90) per spin applied
at once. Each spin's lines are its single-quantum transitions (m, k), m with
the spin in |0> and k with it in |1>, and a line's complex amplitude is
2 * rho'[k, m] of the rotated state. Line positions follow first-order
coupling: offset_i + sum_j +/- J_ij / 2, plus when partner j is in |0>.
"""
import io
import itertools
import logging
from dataclasses import dataclass
from functools import reduce
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from matplotlib import rc_context
from matplotlib.figure import Figure
from scipy import linalg

from pseudo_pure.conf import get_setting
from pseudo_pure.errors import InputError, ProtocolIncompleteError
from pseudo_pure.models import Axis, DeviationMatrix, LevelIndex, Operator, ReadoutPulse, SpinSystem
from pseudo_pure.spin_core import check_deviation, evolve, hard_pulse, max_rel_error, thermal_deviation
from pseudo_pure.utils import bits_of, check_spin, level_of

logger = logging.getLogger(__name__)

MAX_TOMOGRAPHY_SPINS = 3

_PAULI = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

Setting = Tuple[ReadoutPulse, ...]


class SpectralLine(NamedTuple):
    freq_hz: Optional[float]
    amplitude: complex
    transition: Tuple[LevelIndex, LevelIndex]


@dataclass(frozen=True)
class StickSpectrum:
    spin: int
    lines: Tuple[SpectralLine, ...]
    pulse: ReadoutPulse = ReadoutPulse.X90
    label: str = ""


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    n_spins: int
    settings: Tuple[Setting, ...]
    lines: Tuple[Tuple[int, LevelIndex, LevelIndex], ...]
    amplitudes: np.ndarray
    noise_sigma: float = 0.0
    seed: Optional[int] = None


@dataclass(frozen=True, eq=False)
class TomographyResult:
    reconstructed: DeviationMatrix
    residual_norm: float
    settings_used: int
    max_rel_error: Optional[float] = None


def readout_rotation(spin: int, pulse: ReadoutPulse, n: int) -> Operator:
    pulse = ReadoutPulse(pulse)
    if pulse == ReadoutPulse.NONE:
        return np.eye(2 ** n, dtype=complex)
    axis = Axis.X if pulse == ReadoutPulse.X90 else Axis.Y
    return hard_pulse([spin], axis, np.pi / 2, n)


def setting_unitary(setting: Setting, n: int) -> Operator:
    rotations = [readout_rotation(spin, pulse, n) for spin, pulse in enumerate(setting, start=1)]
    return reduce(np.matmul, rotations, np.eye(2 ** n, dtype=complex))


def spin_transitions(spin: int, n: int) -> List[Tuple[LevelIndex, LevelIndex]]:
    """Single-quantum transitions of one spin, ordered by the partner-spin states."""
    check_spin(spin, n)
    transitions = []
    for level in range(1, 2 ** n + 1):
        bits = bits_of(level, n)
        if bits[spin - 1] == "0":
            transitions.append((level, level_of(bits[:spin - 1] + "1" + bits[spin:])))
    return transitions


def line_frequency(system: SpinSystem, spin: int, m: LevelIndex) -> float:
    bits = bits_of(m, system.n_spins)
    shift = system.offsets()[spin - 1]
    for partner in range(1, system.n_spins + 1):
        if partner != spin:
            sign = 1.0 if bits[partner - 1] == "0" else -1.0
            shift += sign * system.coupling(spin, partner) / 2
    return shift


def _line_amplitudes(rho: np.ndarray, transitions: Sequence[Tuple[LevelIndex, LevelIndex]]) -> np.ndarray:
    return np.array([2 * rho[k - 1, m - 1] for m, k in transitions], dtype=complex)


def readout_spectrum(rho: DeviationMatrix, spin: int, system: SpinSystem,
                     pulse: ReadoutPulse = ReadoutPulse.X90, with_frequencies: bool = True) -> StickSpectrum:
    rho = check_deviation(rho)
    n = system.n_spins
    if rho.shape[0] != system.dim:
        raise InputError("state and spin system sizes differ", state=list(rho.shape), n_spins=n)
    check_spin(spin, n)
    if with_frequencies and n > 1 and system.j_hz is None:
        raise InputError("line frequencies need the J couplings of the spin system", system=system.name)
    rotated = evolve(rho, readout_rotation(spin, pulse, n))
    transitions = spin_transitions(spin, n)
    amplitudes = _line_amplitudes(rotated, transitions)
    lines = tuple(
        SpectralLine(line_frequency(system, spin, m) if with_frequencies else None, complex(amplitude), (m, k))
        for (m, k), amplitude in zip(transitions, amplitudes)
    )
    return StickSpectrum(spin, lines, ReadoutPulse(pulse), system.labels[spin - 1])


def tomography_settings(n: int) -> List[Setting]:
    if not 1 <= n <= MAX_TOMOGRAPHY_SPINS:
        raise InputError(f"tomography is set up for 1..{MAX_TOMOGRAPHY_SPINS} spins", n_spins=n)
    return [tuple(setting) for setting in itertools.product(list(ReadoutPulse), repeat=n)]


def _all_lines(n: int) -> Tuple[Tuple[int, LevelIndex, LevelIndex], ...]:
    return tuple((spin, m, k) for spin in range(1, n + 1) for m, k in spin_transitions(spin, n))


def _observe(rho: np.ndarray, unitaries: Sequence[Operator], lines) -> np.ndarray:
    transitions = [(m, k) for _, m, k in lines]
    return np.array([_line_amplitudes(evolve(rho, u), transitions) for u in unitaries])


def max_thermal_amplitude(system: SpinSystem) -> float:
    rho_eq = thermal_deviation(system)
    return max(
        float(np.max(np.abs([line.amplitude for line in
                             readout_spectrum(rho_eq, spin, system, ReadoutPulse.X90, with_frequencies=False).lines])))
        for spin in range(1, system.n_spins + 1)
    )


def simulate_measurements(rho: DeviationMatrix, system: SpinSystem, settings: Optional[Sequence[Setting]] = None,
                          noise_sigma: float = 0.0, seed: Optional[int] = None) -> MeasurementSet:
    """Line amplitudes of every spin under every setting, with optional Gaussian detection noise.

    The noise standard deviation is noise_sigma times the largest thermal line
    amplitude, drawn independently for real and imaginary parts.
    """
    if noise_sigma < 0:
        raise InputError("noise_sigma must be non-negative", noise_sigma=noise_sigma)
    rho = check_deviation(rho)
    n = system.n_spins
    if rho.shape[0] != system.dim:
        raise InputError("state and spin system sizes differ", state=list(rho.shape), n_spins=n)
    settings = tuple(tomography_settings(n) if settings is None else (tuple(s) for s in settings))
    lines = _all_lines(n)
    amplitudes = _observe(rho, [setting_unitary(s, n) for s in settings], lines)

    if noise_sigma > 0:
        if seed is None:
            seed = get_setting("PPSIM_SEED")
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % 2 ** 32)
        scale = noise_sigma * max_thermal_amplitude(system)
        rng = np.random.default_rng(seed)
        amplitudes = amplitudes + rng.normal(0.0, scale, amplitudes.shape) + 1j * rng.normal(0.0, scale, amplitudes.shape)
    return MeasurementSet(n, settings, lines, amplitudes, float(noise_sigma), seed)


def pauli_basis(n: int) -> List[Operator]:
    """Traceless Hermitian product-operator basis (4^n - 1 Pauli products)."""
    return [reduce(np.kron, [_PAULI[c] for c in labels])
            for labels in itertools.product("ixyz", repeat=n) if set(labels) != {"i"}]


def reconstruct(measurements: MeasurementSet, system: Optional[SpinSystem] = None,
                reference: Optional[DeviationMatrix] = None) -> TomographyResult:
    """Least-squares linear inversion over the traceless Hermitian parameters.

    Only the traceless part of a deviation matrix is observable, so the
    reconstruction is traceless.
    """
    n = measurements.n_spins
    if system is not None and system.n_spins != n:
        raise InputError("measurements and spin system sizes differ", measurements=n, system=system.n_spins)
    unitaries = [setting_unitary(s, n) for s in measurements.settings]
    basis = pauli_basis(n)
    columns = [_observe(op, unitaries, measurements.lines).ravel() for op in basis]
    design = np.vstack([np.real(columns).T, np.imag(columns).T])
    data = np.concatenate([np.real(measurements.amplitudes).ravel(), np.imag(measurements.amplitudes).ravel()])

    rank = int(np.linalg.matrix_rank(design))
    if rank < len(basis):
        raise ProtocolIncompleteError("readout settings do not determine the state",
                                      rank=rank, required=len(basis), settings=len(measurements.settings))
    coefficients = linalg.solve(design.T @ design, design.T @ data, assume_a="pos")
    misfit = float(np.linalg.norm(design @ coefficients - data))
    reconstructed = sum(c * op for c, op in zip(coefficients, basis))
    logger.debug("tomography over %d settings, misfit %.3e", len(measurements.settings), misfit)
    error = max_rel_error(reconstructed, reference) if reference is not None else None
    return TomographyResult(reconstructed, misfit, len(measurements.settings), error)


def absorption(line: SpectralLine, pulse: ReadoutPulse) -> float:
    """Phase-corrected line intensity: the population difference across the line."""
    phase = 1j if ReadoutPulse(pulse) == ReadoutPulse.X90 else 1.0
    return float(np.real(line.amplitude * phase))


def plot_spectra(spectra: Sequence[StickSpectrum]) -> str:
    """SVG stick plot, one panel per spin."""
    figure = Figure(figsize=(4 * len(spectra), 3))
    axes = figure.subplots(1, len(spectra), squeeze=False)[0]
    for ax, spectrum in zip(axes, spectra):
        positions = [line.freq_hz if line.freq_hz is not None else index
                     for index, line in enumerate(spectrum.lines)]
        heights = [absorption(line, spectrum.pulse) for line in spectrum.lines]
        ax.vlines(positions, 0, heights)
        ax.axhline(0, linewidth=0.5)
        ax.set_title(f"{spectrum.label or spectrum.spin} ({spectrum.pulse.value})")
        ax.set_xlabel("offset / Hz")
        ax.invert_xaxis()
    buffer = io.StringIO()
    with rc_context({"svg.hashsalt": "pseudo_pure", "svg.fonttype": "none"}):
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()
