from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from django.db import models
from numpy.typing import NDArray

from pseudo_pure.errors import InputError

# Level indices are 1-based: level = 1 + integer value of the bitstring, spin 1
# is the most significant bit. Spin indices are 1-based too.
LevelIndex = int
Operator = NDArray[np.complex128]
DeviationMatrix = NDArray[np.complex128]


class Axis(models.TextChoices):
    X = "x"
    Y = "y"
    Z = "z"


class Sign(models.TextChoices):
    PLUS = "+"
    MINUS = "-"


class CrushMode(models.TextChoices):
    ALL_OFF_DIAGONAL = "all_off_diagonal"
    COHERENCE_ORDER = "coherence_order"


class ReadoutPulse(models.TextChoices):
    NONE = "none"
    X90 = "x90"
    Y90 = "y90"


def _as_tuple(values: Optional[Sequence[float]]) -> Optional[Tuple[float, ...]]:
    if values is None:
        return None
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class SpinSystem:
    """n spin-1/2 nuclei: relative gyromagnetic ratios plus readout parameters.

    `larmor_mhz`, `j_hz` and `offset_hz` only matter for spectra; the
    preparation pipeline needs nothing but `gamma`.
    """

    gamma: Tuple[float, ...]
    labels: Tuple[str, ...] = ()
    larmor_mhz: Optional[Tuple[float, ...]] = None
    j_hz: Optional[Tuple[Tuple[float, ...], ...]] = None
    offset_hz: Optional[Tuple[float, ...]] = None
    name: str = ""

    def __post_init__(self):
        gamma = _as_tuple(self.gamma)
        if not gamma:
            raise InputError("a spin system needs at least one spin")
        if not all(np.isfinite(g) and g != 0 for g in gamma):
            raise InputError("gyromagnetic ratios must be finite and nonzero", gamma=list(gamma))
        n = len(gamma)
        object.__setattr__(self, "gamma", gamma)

        labels = tuple(str(label) for label in self.labels) if self.labels else tuple(f"S{i}" for i in range(1, n + 1))
        if len(labels) != n:
            raise InputError("one label per spin expected", labels=list(labels), n_spins=n)
        object.__setattr__(self, "labels", labels)

        for attr in ("larmor_mhz", "offset_hz"):
            values = _as_tuple(getattr(self, attr))
            if values is not None and len(values) != n:
                raise InputError(f"{attr} needs one value per spin", n_spins=n)
            object.__setattr__(self, attr, values)

        if self.j_hz is not None:
            table = np.asarray(self.j_hz, dtype=float)
            if table.shape != (n, n):
                raise InputError("j_hz must be an n x n table", shape=list(table.shape), n_spins=n)
            if not np.allclose(table, table.T) or np.any(np.diag(table) != 0):
                raise InputError("j_hz must be symmetric with a zero diagonal")
            object.__setattr__(self, "j_hz", tuple(tuple(float(v) for v in row) for row in table))

    @property
    def n_spins(self) -> int:
        return len(self.gamma)

    @property
    def dim(self) -> int:
        return 2 ** self.n_spins

    def coupling(self, i: int, j: int) -> float:
        if self.j_hz is None:
            raise InputError("the spin system has no J couplings", system=self.name)
        return self.j_hz[i - 1][j - 1]

    def offsets(self) -> Tuple[float, ...]:
        return self.offset_hz if self.offset_hz is not None else (0.0,) * self.n_spins


@dataclass(frozen=True)
class PurePart:
    """diag(rho) = uniform_coeff * 1 + pure_coeff * e_target."""

    uniform_coeff: float
    pure_coeff: float
    target: LevelIndex
    spread: float = field(default=0.0, compare=False)
