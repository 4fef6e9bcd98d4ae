import itertools
import re
from typing import Iterable, Sequence

import numpy as np

from pseudo_pure.errors import InputError

_BITS = re.compile(r"^[01]+$")


def pairwise(iterable):
    a, b = itertools.tee(iterable)
    next(b, None)
    return zip(a, b)


def level_of(bits: str, n_spins: int = None) -> int:
    """Level index of a basis bitstring; spin 1 is the most significant bit."""
    if not isinstance(bits, str) or not _BITS.match(bits):
        raise InputError(f"not a bitstring: {bits!r}", bits=str(bits))
    if n_spins is not None and len(bits) != n_spins:
        raise InputError(f"bitstring {bits!r} does not have {n_spins} bits", bits=bits, n_spins=n_spins)
    return 1 + int(bits, 2)


def bits_of(level: int, n_spins: int) -> str:
    check_level(level, n_spins)
    return format(level - 1, f"0{n_spins}b")


def check_level(level: int, n_spins: int) -> int:
    if not 1 <= int(level) <= 2 ** n_spins:
        raise InputError(f"level {level} outside 1..{2 ** n_spins}", level=int(level), n_spins=n_spins)
    return int(level)


def check_spin(spin: int, n_spins: int) -> int:
    if not 1 <= int(spin) <= n_spins:
        raise InputError(f"spin {spin} outside 1..{n_spins}", spin=int(spin), n_spins=n_spins)
    return int(spin)


def spin_count(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2 ** n != dim:
        raise InputError(f"dimension {dim} is not a power of two", dim=int(dim))
    return n


def flipped_spins(m: int, k: int, n_spins: int) -> list:
    """Spins (1-based, ascending) whose bits differ between levels m and k."""
    diff = (m - 1) ^ (k - 1)
    return sorted(n_spins - b for b in range(n_spins) if diff >> b & 1)


def hamming_weight(level: int) -> int:
    return bin(level - 1).count("1")


def to_radians(angles_deg: Iterable[float]) -> np.ndarray:
    return np.deg2rad(np.asarray(list(angles_deg), dtype=float))


def to_degrees(angles_rad: Sequence[float]) -> np.ndarray:
    return np.rad2deg(np.asarray(angles_rad, dtype=float))
