"""Reading and writing curvature tensors as JSON tensor files.

A file is one object ``{"dim": n, "format": "sparse" | "dense", "entries": [...]}``.
Sparse entries are ``[i, j, k, l, value]`` with 1-based canonical indices (``i < j``,
``k < l``, ``(i, j) <= (k, l)``); dense entries are the ``n**4`` components in row-major order.
Floats are written with ``repr``, the shortest decimal that round-trips.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidInput
from .tensor import CurvatureTensor

FORMATS = ("sparse", "dense")


def canonical_indices(n: int):
    """Canonical 0-based index quadruples in the order they are written."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for p, (i, j) in enumerate(pairs):
        for k, l in pairs[p:]:
            yield i, j, k, l


def to_document(R: CurvatureTensor, fmt: str = "sparse") -> dict:
    if fmt not in FORMATS:
        raise InvalidInput(f"unknown tensor format {fmt!r}")
    c = R.components
    if fmt == "dense":
        entries = [float(x) for x in c.reshape(-1)]
    else:
        entries = [[i + 1, j + 1, k + 1, l + 1, float(c[i, j, k, l])]
                   for i, j, k, l in canonical_indices(R.dim) if c[i, j, k, l] != 0.0]
    return {"dim": R.dim, "format": fmt, "entries": entries}


def dumps(R: CurvatureTensor, fmt: str = "sparse") -> str:
    """Serialise with a fixed layout: one sparse entry per line, dense entries on one line."""
    doc = to_document(R, fmt)
    head = f'{{"dim": {doc["dim"]}, "format": "{fmt}", "entries": '
    if fmt == "dense":
        return head + json.dumps(doc["entries"]) + "}\n"
    if not doc["entries"]:
        return head + "[]}\n"
    rows = ",\n".join("  " + json.dumps(e) for e in doc["entries"])
    return head + "[\n" + rows + "\n]}\n"


def _finite_number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InvalidInput(f"{where}: expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInput(f"{where}: non-finite value")
    return x


def from_document(doc) -> CurvatureTensor:
    """Expand a parsed tensor file by the curvature symmetries and validate it.

    The entries are taken as given (no re-projection), so a saved tensor loads back
    bit-identically; data violating the Bianchi identity is rejected with its residual.
    """
    if not isinstance(doc, dict) or set(doc) != {"dim", "format", "entries"}:
        raise InvalidInput("tensor file must be an object with exactly dim, format, entries")
    n, fmt, entries = doc["dim"], doc["format"], doc["entries"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidInput(f"dim must be a positive integer, got {n!r}")
    if fmt not in FORMATS:
        raise InvalidInput(f"format must be one of {FORMATS}, got {fmt!r}")
    if not isinstance(entries, list):
        raise InvalidInput("entries must be a list")
    if fmt == "dense":
        if len(entries) != n**4:
            raise InvalidInput(f"dense entries must have {n**4} values, got {len(entries)}")
        vals = [_finite_number(x, f"entry {m}") for m, x in enumerate(entries)]
        return CurvatureTensor(np.array(vals).reshape(n, n, n, n))

    c = np.zeros((n,) * 4)
    seen = set()
    for m, e in enumerate(entries):
        if not isinstance(e, list) or len(e) != 5:
            raise InvalidInput(f"entry {m}: expected [i, j, k, l, value]")
        idx = e[:4]
        if any(isinstance(x, bool) or not isinstance(x, int) or not 1 <= x <= n for x in idx):
            raise InvalidInput(f"entry {m}: indices must be integers in 1..{n}")
        i, j, k, l = (x - 1 for x in idx)
        if not (i < j and k < l and (i, j) <= (k, l)):
            raise InvalidInput(f"entry {m}: {idx} is not canonical (need i<j, k<l, (i,j) <= (k,l))")
        if (i, j, k, l) in seen:
            raise InvalidInput(f"entry {m}: duplicate index {idx}")
        seen.add((i, j, k, l))
        v = _finite_number(e[4], f"entry {m}")
        for a, b, s in ((i, j, 1.0), (j, i, -1.0)):
            for cc, d, t in ((k, l, 1.0), (l, k, -1.0)):
                c[a, b, cc, d] = s * t * v
                c[cc, d, a, b] = s * t * v
    return CurvatureTensor(c)


def loads(text: str) -> CurvatureTensor:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"not valid JSON: {exc}") from None
    return from_document(doc)


def load(path) -> CurvatureTensor:
    return loads(Path(path).read_text(encoding="utf-8"))


def save(R: CurvatureTensor, path, fmt: str = "sparse") -> None:
    Path(path).write_text(dumps(R, fmt), encoding="utf-8")


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
