"""Orthonormal k-frames in R^n and the frame rotations used for isotropic curvature."""

from __future__ import annotations

import numpy as np

from .errors import InvalidDimension, InvalidFrame

#: Frames farther than this from orthonormal are rejected; closer ones are repaired.
REPAIR_ATOL = 1e-6
#: Orthonormality tolerance for bare vector pairs (see :func:`check_orthonormal`).
ORTHONORMAL_ATOL = 1e-10

_SQRT_HALF = 1.0 / np.sqrt(2.0)


def gram_schmidt(rows: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt on the rows of a ``(k, n)`` array.

    Row order and orientation are preserved: the result equals ``Q.T`` from a QR
    factorisation of ``rows.T`` with a positive diagonal.
    """
    out = np.array(rows, dtype=float)
    for a in range(out.shape[0]):
        for b in range(a):
            out[a] -= (out[a] @ out[b]) * out[b]
        norm = np.linalg.norm(out[a])
        if norm == 0.0:
            raise InvalidFrame("linearly dependent frame vectors")
        out[a] /= norm
    return out


def orthonormality_defect(rows: np.ndarray) -> float:
    rows = np.asarray(rows, dtype=float)
    return float(np.abs(rows @ rows.T - np.eye(rows.shape[0])).max())


def check_orthonormal(*vectors, atol: float = ORTHONORMAL_ATOL) -> np.ndarray:
    """Stack ``vectors`` into rows and raise :class:`InvalidFrame` unless orthonormal."""
    rows = np.array(vectors, dtype=float)
    if rows.ndim != 2:
        raise InvalidFrame("vectors must be one-dimensional and of equal length")
    if not np.all(np.isfinite(rows)):
        raise InvalidFrame("non-finite vector entries")
    defect = orthonormality_defect(rows)
    if defect > atol:
        raise InvalidFrame(f"vectors are not orthonormal (defect {defect:.3e})")
    return rows


class Frame:
    """An ordered orthonormal k-tuple of vectors in R^n, stored as a read-only ``(k, n)`` array.

    Input within :data:`REPAIR_ATOL` of orthonormal is re-orthonormalised by
    Gram-Schmidt, which absorbs optimizer drift; anything worse is rejected.
    """

    __slots__ = ("_rows",)

    def __init__(self, vectors, *, atol: float = REPAIR_ATOL):
        rows = np.array(vectors, dtype=float)
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise InvalidFrame(f"expected a (k, n) array of vectors, got shape {rows.shape}")
        k, n = rows.shape
        if k > n:
            raise InvalidFrame(f"cannot fit {k} orthonormal vectors in R^{n}")
        if not np.all(np.isfinite(rows)):
            raise InvalidFrame("non-finite vector entries")
        defect = orthonormality_defect(rows)
        if defect > atol:
            raise InvalidFrame(f"vectors are not orthonormal (defect {defect:.3e})")
        rows = gram_schmidt(rows)
        rows.setflags(write=False)
        self._rows = rows

    @classmethod
    def standard(cls, n: int, k: int = 4) -> "Frame":
        """The first ``k`` standard basis vectors of R^n."""
        return cls(np.eye(n)[:k])

    @property
    def vectors(self) -> np.ndarray:
        return self._rows

    @property
    def dim(self) -> int:
        return self._rows.shape[1]

    @property
    def size(self) -> int:
        return self._rows.shape[0]

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, a: int) -> np.ndarray:
        return self._rows[a]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return self._rows.shape == other._rows.shape and bool(np.all(self._rows == other._rows))

    def __hash__(self):
        return hash(self._rows.tobytes())

    def __repr__(self) -> str:
        return f"Frame(size={self.size}, dim={self.dim})"

    def permuted(self, order) -> "Frame":
        return Frame(self._rows[list(order)])

    def span_projector(self) -> np.ndarray:
        return self._rows.T @ self._rows


def random_frame_array(rng: np.random.Generator, n: int, k: int, batch=None) -> np.ndarray:
    """Haar-random orthonormal frames: Gram-Schmidt of i.i.d. standard normal k x n rows.

    Returns shape ``(k, n)``, or ``(batch, k, n)`` when ``batch`` is given.
    """
    shape = (k, n) if batch is None else (batch, k, n)
    gauss = rng.standard_normal(shape)
    q, r = np.linalg.qr(np.swapaxes(gauss, -1, -2))
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    signs[signs == 0] = 1.0
    q = q * signs[..., None, :]
    return np.swapaxes(q, -1, -2)


def random_frame(n: int, k: int = 4, seed=None) -> Frame:
    if k > n:
        raise InvalidDimension(f"cannot fit {k} orthonormal vectors in R^{n}")
    return Frame(random_frame_array(np.random.default_rng(seed), n, k))


def _require_four(frame: Frame) -> np.ndarray:
    if frame.size != 4:
        raise InvalidFrame(f"expected a four-frame, got {frame.size} vectors")
    return frame.vectors


def rotate_frame_prime(frame: Frame) -> Frame:
    """``(e1+e4, e2-e3, e1-e4, e2+e3) / sqrt(2)``."""
    e1, e2, e3, e4 = _require_four(frame)
    rows = _SQRT_HALF * np.array([e1 + e4, e2 - e3, e1 - e4, e2 + e3])
    return Frame(rows)


def rotate_frame_double_prime(frame: Frame) -> Frame:
    """:func:`rotate_frame_prime` applied to ``(e1, e2, -e4, e3)``."""
    e1, e2, e3, e4 = _require_four(frame)
    return rotate_frame_prime(Frame(np.array([e1, e2, -e4, e3])))
