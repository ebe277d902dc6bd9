"""
Matrix files, generator specs and table output.

Matrix file format (JSON, row-major)::

    {"kind": "state" | "observable", "dim": n, "re": [[...], ...], "im": [[...], ...]}

``im`` may be omitted for real matrices.  Floats are written with ``repr``
precision so that a parse/serialize round trip is exact.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import ValidationError
from .generators import GeneratorFunction, builtin_bridge, builtin_exotic, builtin_power
from .matrix_core import DensityMatrix, HermitianMatrix, check_hermitian

#: Trace window inside which a state file is silently renormalised.
TRACE_RESCALE_WINDOW = 1e-6

GENERATOR_ALIASES = {
    "wy": "power:0.5",
    "sld": "bridge:0",
    "harmonic": "bridge:1",
}


@dataclass
class RunConfig:
    """Options shared by the CLI commands."""

    generator: Optional[str] = None
    method: str = "spectral"
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    format: str = "json"

    def __post_init__(self):
        if self.format not in ("json", "csv"):
            raise ValidationError(f"unknown output format {self.format!r}")
        if self.generator is not None:
            parse_generator(self.generator)


def parse_generator(descriptor: str) -> GeneratorFunction:
    """Parse ``power:<p>``, ``bridge:<alpha>``, ``exotic`` or an alias (``wy``, ``sld``, ``harmonic``)."""
    text = descriptor.strip()
    text = GENERATOR_ALIASES.get(text.lower(), text)
    family, _, arg = text.partition(":")
    family = family.lower()
    if family == "exotic" and not arg:
        return builtin_exotic()
    if family in ("power", "bridge"):
        try:
            value = float(arg)
        except ValueError:
            raise ValidationError(f"generator {descriptor!r}: parameter {arg!r} is not a number") from None
        return builtin_power(value) if family == "power" else builtin_bridge(value)
    raise ValidationError(f"unknown generator {descriptor!r}; expected power:<p>, bridge:<alpha>, exotic, "
                          f"or one of {sorted(GENERATOR_ALIASES)}")


def generator_family(descriptor: str) -> tuple:
    """``(family, parameter)`` of a generator descriptor after alias expansion."""
    text = GENERATOR_ALIASES.get(descriptor.strip().lower(), descriptor.strip())
    family, _, arg = text.partition(":")
    return family.lower(), (float(arg) if arg else None)


def serialize_matrix(M, kind: str) -> dict:
    M = np.asarray(M, dtype=complex)
    return {
        "kind": kind,
        "dim": int(M.shape[0]),
        "re": [[float(v) for v in row] for row in M.real],
        "im": [[float(v) for v in row] for row in M.imag],
    }


def write_matrix_file(path: Union[str, Path], M, kind: str) -> None:
    if kind not in ("state", "observable"):
        raise ValidationError(f"unknown matrix kind {kind!r}")
    Path(path).write_text(json.dumps(serialize_matrix(M, kind), indent=1) + "\n")


def _array(doc: dict, key: str, dim: int) -> np.ndarray:
    try:
        arr = np.asarray(doc[key], dtype=float)
    except KeyError:
        if key == "im":
            return np.zeros((dim, dim))
        raise ValidationError(f"matrix file lacks {key!r}") from None
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"matrix file field {key!r} is not a numeric array: {exc}") from None
    if arr.shape != (dim, dim):
        raise ValidationError(f"matrix file field {key!r} has shape {arr.shape}, expected ({dim}, {dim})")
    return arr


def parse_matrix_document(doc: dict) -> Union[HermitianMatrix, DensityMatrix]:
    if not isinstance(doc, dict):
        raise ValidationError("matrix file must hold a JSON object")
    kind = doc.get("kind")
    if kind not in ("state", "observable"):
        raise ValidationError(f"matrix file kind must be 'state' or 'observable', got {kind!r}")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"matrix file dim must be a positive integer, got {dim!r}")
    M = _array(doc, "re", dim) + 1j * _array(doc, "im", dim)
    M = check_hermitian(M)
    if kind == "observable":
        return HermitianMatrix(M)
    tr = np.trace(M).real
    deficit = 1.0 - tr
    if abs(deficit) > TRACE_RESCALE_WINDOW:
        raise ValidationError(f"state trace is {tr!r}: trace deficit {deficit:.6g} exceeds {TRACE_RESCALE_WINDOW:g}")
    if abs(deficit) > 1e-10:
        M = M / tr
    return DensityMatrix(M)


def parse_matrix_file(path: Union[str, Path]) -> Union[HermitianMatrix, DensityMatrix]:
    """Load and validate a matrix file; raises :class:`ValidationError` on any defect."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read matrix file {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed matrix file {path}: {exc}") from None
    return parse_matrix_document(doc)


def _plain(obj):
    """Make numpy scalars, arrays and non-finite floats JSON friendly."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def dumps_csv(rows: list, columns: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c, "")) for c in columns])
    return buf.getvalue()


def _csv_cell(v):
    v = _plain(v)
    return repr(v) if isinstance(v, float) else v
