"""Matrix files and run reports.

A matrix file is a single UTF-8 JSON object::

    {"dim": 2, "entries": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]}

``dim`` is the matrix dimension and ``entries`` lists the dim^2 complex
entries in row-major order as [real, imaginary] pairs of finite decimal
numbers.  No other keys are allowed.  Serialization is canonical: fixed key
order, shortest round-trip decimals, a single line terminated by a newline,
so identical matrices always produce identical bytes and
``parse(serialize(A))`` reproduces ``A`` exactly.

Run reports are JSON documents with fixed key order, written with a trailing
newline; deterministic inputs yield byte-identical report files.
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

from .errors import DimensionError, ParseError
from .matcore import as_complex_matrix


def parse_matrix(text: bytes | str) -> np.ndarray:
    """Parse a matrix file into a square complex array.

    Raises ParseError with the offending position or entry index, and
    DimensionError when the entry count does not match ``dim``.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"matrix file is not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid matrix file: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    if not isinstance(doc, dict):
        raise ParseError("matrix file must be a JSON object with 'dim' and 'entries'")
    unknown = set(doc) - {"dim", "entries"}
    if unknown:
        raise ParseError(f"unknown keys in matrix file: {sorted(unknown)}")
    if "dim" not in doc or "entries" not in doc:
        raise ParseError("matrix file must contain both 'dim' and 'entries'")
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ParseError(f"'dim' must be a positive integer, got {dim!r}")
    entries = doc["entries"]
    if not isinstance(entries, list):
        raise ParseError("'entries' must be a list of [re, im] pairs")
    if len(entries) != dim * dim:
        raise DimensionError(
            f"expected {dim * dim} entries for dim={dim}, got {len(entries)}"
        )
    values = np.empty(dim * dim, dtype=np.complex128)
    for idx, entry in enumerate(entries):
        if (not isinstance(entry, list) or len(entry) != 2
                or any(isinstance(part, bool) or not isinstance(part, (int, float))
                       for part in entry)):
            raise ParseError(f"entry {idx} is not a [re, im] pair of numbers: {entry!r}")
        re, im = float(entry[0]), float(entry[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ParseError(f"entry {idx} is non-finite: {entry!r}")
        values[idx] = complex(re, im)
    return values.reshape(dim, dim)


def serialize_matrix(a) -> bytes:
    """Canonical matrix-file bytes for a square complex matrix."""
    arr = as_complex_matrix(a)
    n = arr.shape[0]
    entries = [[float(z.real), float(z.imag)] for z in arr.reshape(-1)]
    text = json.dumps({"dim": n, "entries": entries})
    return text.encode("utf-8") + b"\n"


def sha256_hex(data: bytes) -> str:
    """Hex digest used to pin input files inside run reports."""
    return hashlib.sha256(data).hexdigest()


def report_bytes(report: dict) -> bytes:
    """Canonical bytes of a run report (insertion-ordered keys, two-space indent)."""
    return json.dumps(report, indent=2).encode("utf-8") + b"\n"


def write_report(path: str, report: dict) -> None:
    with open(path, "wb") as handle:
        handle.write(report_bytes(report))
