"""JSON file formats and the canonical JSON emitter.

Spin systems are {"labels", "gamma", "larmor_mhz", "j_hz", "offset_hz"}
objects; matrices are nested lists of [re, im] pairs. Canonical output sorts
keys and writes every float with 10 significant digits.
"""
import json
import math
from pathlib import Path
from typing import Any, Union

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

from pseudo_pure.errors import InputError
from pseudo_pure.models import DeviationMatrix, SpinSystem
from pseudo_pure.presets import SYSTEM_PRESETS

SIGNIFICANT_DIGITS = 10

SYSTEM_FIELDS = ("labels", "gamma", "larmor_mhz", "j_hz", "offset_hz", "name")


class SimulationJSONEncoder(DjangoJSONEncoder):
    """Also encodes numpy values and complex numbers (as [re, im])."""

    def default(self, o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        if isinstance(o, complex):
            return [o.real, o.imag]
        if isinstance(o, Path):
            return str(o)
        return super().default(o)


def _round(value: float) -> float:
    if not math.isfinite(value):
        raise InputError("cannot serialize a non-finite number", value=repr(value))
    rounded = float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    return 0.0 if rounded == 0 else rounded


def canonical(obj: Any) -> Any:
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist())
    if isinstance(obj, np.generic):
        return canonical(obj.item())
    if isinstance(obj, complex):
        return [_round(obj.real), _round(obj.imag)]
    if isinstance(obj, float):
        return _round(obj)
    if isinstance(obj, dict):
        return {str(key): canonical(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(value) for value in obj]
    return obj


def canonical_dumps(obj: Any) -> str:
    return json.dumps(canonical(obj), sort_keys=True, separators=(",", ":"), cls=SimulationJSONEncoder)


def matrix_to_json(matrix: np.ndarray) -> list:
    matrix = np.asarray(matrix, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def _entry(value, row: int, column: int) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
            isinstance(part, (int, float)) and not isinstance(part, bool) for part in value):
        return complex(value[0], value[1])
    raise InputError(f"matrix entry ({row}, {column}) is not an [re, im] pair", entry=repr(value))


def matrix_from_json(data: Any) -> DeviationMatrix:
    if not isinstance(data, list) or not data or not all(isinstance(row, list) for row in data):
        raise InputError("a matrix is a non-empty list of rows")
    size = len(data)
    if any(len(row) != size for row in data):
        raise InputError("matrix is not square", rows=size, columns=sorted({len(row) for row in data}))
    if size & (size - 1):
        raise InputError("matrix size is not a power of two", size=size)
    return np.array([[_entry(value, i, j) for j, value in enumerate(row, start=1)]
                     for i, row in enumerate(data, start=1)], dtype=complex)


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}", path=str(path))
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e.msg}", path=str(path), line=e.lineno)


def system_from_dict(data: Any, name: str = "") -> SpinSystem:
    if not isinstance(data, dict) or "gamma" not in data:
        raise InputError("a spin system needs a \"gamma\" list")
    unknown = sorted(set(data) - set(SYSTEM_FIELDS))
    if unknown:
        raise InputError("unknown spin system fields", fields=unknown)
    fields = dict(data)
    fields.setdefault("name", name)
    try:
        return SpinSystem(**fields)
    except (TypeError, ValueError) as e:
        raise InputError(f"malformed spin system: {e}")


def system_to_dict(system: SpinSystem) -> dict:
    data = {"name": system.name, "labels": list(system.labels), "gamma": list(system.gamma)}
    for attr in ("larmor_mhz", "j_hz", "offset_hz"):
        value = getattr(system, attr)
        if value is not None:
            data[attr] = [list(row) for row in value] if attr == "j_hz" else list(value)
    return data


def load_system(reference: str) -> SpinSystem:
    """A preset name, or the path of a spin-system JSON file."""
    if reference in SYSTEM_PRESETS and not Path(reference).is_file():
        return SYSTEM_PRESETS[reference]
    path = Path(reference)
    if not path.is_file():
        raise InputError(f"{reference!r} is neither a preset nor a readable file",
                         path=reference, presets=sorted(SYSTEM_PRESETS))
    return system_from_dict(read_json(path), name=path.stem)


def load_state(path: Union[str, Path]) -> DeviationMatrix:
    """A bare matrix, or any object with a "matrix" key (prepare/run output)."""
    data = read_json(path)
    if isinstance(data, dict):
        if "matrix" not in data:
            raise InputError("state file has no \"matrix\" key", path=str(path))
        data = data["matrix"]
    return matrix_from_json(data)
