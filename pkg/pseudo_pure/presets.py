from typing import Dict, List, Tuple

import numpy as np

from pseudo_pure.errors import InputError
from pseudo_pure.models import SpinSystem

GAMMA_13C = 1.4048
GAMMA_1H = 5.5857

# 13CHCl3: 13C observed at 125.77 MHz, 1H at 500.13 MHz, J(C,H) = 214.95 Hz.
CHLOROFORM = SpinSystem(
    name="chloroform",
    labels=("C", "H"),
    gamma=(GAMMA_13C, GAMMA_1H),
    larmor_mhz=(125.77, 500.13),
    j_hz=((0.0, 214.95), (214.95, 0.0)),
)

HOMONUCLEAR_2 = SpinSystem(name="homonuclear-2", labels=("A", "X"), gamma=(1.0, 1.0))

HOMONUCLEAR_3 = SpinSystem(name="homonuclear-3", labels=("A", "B", "C"), gamma=(1.0, 1.0, 1.0))

HETERO_3 = SpinSystem(name="hetero-3", labels=("C1", "C2", "H"), gamma=(GAMMA_13C, GAMMA_13C, GAMMA_1H))

SYSTEM_PRESETS: Dict[str, SpinSystem] = {
    system.name: system for system in (CHLOROFORM, HOMONUCLEAR_2, HOMONUCLEAR_3, HETERO_3)
}

# Published selective-pulse angles (degrees), keyed to the default cascade steps
# for target |0...0>. The 2-spin pair is listed for every target. The fourth
# hetero-3 angle is printed as 346.31 in the literature; only 364.31 equalizes
# the populations.
PUBLISHED_ANGLES: Dict[str, Tuple[float, ...]] = {
    "homonuclear-2": (77.40, 77.40),
    "chloroform": (127.13, 186.01),
    "homonuclear-3": (182.02, 179.04, 229.38, 193.46, 200.28, 105.75),
    "hetero-3": (201.89, 258.83, 313.40, 364.31, 295.37, 234.18),
}

# Tomography of the prepared |00> state of chloroform, normalized to the
# |00><00| element.
MEASURED_PSEUDO_PURE_00 = np.array([
    [1, -0.0096 - 0.0090j, 0.0017 - 0.0026j, -0.0005 + 0.0006j],
    [-0.0096 + 0.0090j, 0.0230, -0.0020 + 0.0014j, 0.0033 + 0j],
    [0.0017 + 0.0026j, -0.0020 - 0.0014j, 0.0161, 0.0095 + 0.0090j],
    [-0.0005 - 0.0006j, 0.0033 - 0j, 0.0095 - 0.0090j, 0],
], dtype=complex)


def presets() -> List[SpinSystem]:
    return list(SYSTEM_PRESETS.values())


def get_preset(name: str) -> SpinSystem:
    try:
        return SYSTEM_PRESETS[name]
    except KeyError:
        raise InputError(f"unknown preset {name!r}", known=sorted(SYSTEM_PRESETS))


def seed_vectors(k: int) -> List[Tuple[float, ...]]:
    """Published angle vectors of dimension k, used as extra solver starts."""
    seen = []
    for angles in PUBLISHED_ANGLES.values():
        if len(angles) == k and angles not in seen:
            seen.append(angles)
    return seen
