"""Algebraic curvature tensors on R^n and their frame functionals.

A tensor is stored densely as an ``(n, n, n, n)`` array ``R[i, j, k, l] = R(e_i, e_j, e_k, e_l)``
with 0-based indices. Sectional curvature is ``K(u, v) = R(u, v, u, v)``, so the round sphere
has ``R = kappa * (d_ik d_jl - d_il d_jk)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidDimension, InvalidFrame, InvalidInput
from .frames import Frame, check_orthonormal

#: Absolute tolerance (per unit of the largest component) for the symmetry invariants.
SYMMETRY_ATOL = 1e-12


def _t(arr: np.ndarray, spec: str) -> np.ndarray:
    """Reindex: ``_t(a, "jikl")[i, j, k, l] == a[j, i, k, l]``."""
    return np.einsum(f"{spec}->ijkl", arr)


def symmetry_residuals(c: np.ndarray) -> dict:
    """Largest violation of each curvature symmetry, keyed by name."""
    c = np.asarray(c, dtype=float)
    return {
        "antisym_first_pair": float(np.abs(c + _t(c, "jikl")).max(initial=0.0)),
        "antisym_second_pair": float(np.abs(c + _t(c, "ijlk")).max(initial=0.0)),
        "pair_symmetry": float(np.abs(c - _t(c, "klij")).max(initial=0.0)),
        "first_bianchi": float(np.abs(c + _t(c, "iklj") + _t(c, "iljk")).max(initial=0.0)),
    }


def _tolerance(c: np.ndarray) -> float:
    return SYMMETRY_ATOL * max(1.0, float(np.abs(c).max(initial=0.0)))


class CurvatureTensor:
    """An immutable algebraic curvature tensor.

    The constructor validates rather than repairs: components must already satisfy the
    pair antisymmetries, pair exchange and first Bianchi identity to ``1e-12`` per unit of
    the largest entry. Use :func:`project_to_curvature_space` for arbitrary arrays.
    """

    __slots__ = ("_c",)

    def __init__(self, components):
        c = np.array(components, dtype=float)
        if c.ndim != 4 or len(set(c.shape)) != 1:
            raise InvalidInput(f"expected an (n, n, n, n) array, got shape {c.shape}")
        if c.shape[0] < 1:
            raise InvalidDimension("dimension must be at least 1")
        if not np.all(np.isfinite(c)):
            raise InvalidInput("tensor has non-finite entries")
        residuals = symmetry_residuals(c)
        name, worst = max(residuals.items(), key=lambda kv: kv[1])
        if worst > _tolerance(c):
            raise InvalidInput(f"not an algebraic curvature tensor: {name} residual {worst:.3e}")
        c.setflags(write=False)
        self._c = c

    @property
    def dim(self) -> int:
        return self._c.shape[0]

    @property
    def components(self) -> np.ndarray:
        return self._c

    def __getitem__(self, idx):
        return self._c[idx]

    def __repr__(self) -> str:
        return f"CurvatureTensor(dim={self.dim}, norm={self.norm():.6g})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CurvatureTensor):
            return NotImplemented
        return self.dim == other.dim and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def norm(self) -> float:
        """Frobenius norm of the full component array."""
        return float(np.linalg.norm(self._c))

    def max_abs(self) -> float:
        return float(np.abs(self._c).max(initial=0.0))

    def __call__(self, x, y, z, w) -> float:
        return float(np.einsum("ijkl,i,j,k,l->", self._c, x, y, z, w))

    def in_basis(self, basis) -> "CurvatureTensor":
        """Components with respect to the orthonormal basis given by the rows of ``basis``."""
        q = np.asarray(basis, dtype=float)
        if q.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"basis must be {self.dim}x{self.dim}")
        check_orthonormal(*q)
        return CurvatureTensor(_restrict(self._c, q))

    def sectional_matrix(self) -> np.ndarray:
        """``K[i, j] = R_{ijij}`` in the standard basis (zero diagonal)."""
        idx = np.arange(self.dim)
        return self._c[idx[:, None], idx[None, :], idx[:, None], idx[None, :]].copy()

    def curvature_operator(self) -> np.ndarray:
        """Matrix of R on two-forms in the basis ``e_i ^ e_j, i < j`` (lexicographic)."""
        i, j = np.triu_indices(self.dim, k=1)
        return self._c[i[:, None], j[:, None], i[None, :], j[None, :]].copy()


def _restrict(c: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """``r[a, b, c, d] = R(v_a, v_b, v_c, v_d)`` for the rows ``v`` of ``rows``."""
    t = np.einsum("ijkl,dl->ijkd", c, rows)
    t = np.einsum("ijkd,ck->ijcd", t, rows)
    t = np.einsum("ijcd,bj->ibcd", t, rows)
    return np.einsum("ibcd,ai->abcd", t, rows)


def restrict(R: CurvatureTensor, frame: Frame) -> np.ndarray:
    """All components of ``R`` on the vectors of ``frame``, as a ``(k, k, k, k)`` array."""
    if frame.dim != R.dim:
        raise DimensionMismatch(f"frame lives in R^{frame.dim}, tensor in R^{R.dim}")
    return _restrict(R.components, frame.vectors)


def project_array(raw: np.ndarray) -> np.ndarray:
    """Orthogonal (Frobenius) projection of an ``(n, n, n, n)`` array onto curvature tensors.

    Antisymmetrise each pair, symmetrise under pair exchange, then remove the totally
    antisymmetric part, which on pair-symmetric tensors is a third of the Bianchi sum.
    The swap symmetries are re-imposed at the end so they hold exactly, not just to round-off.
    """
    t = _pair_symmetrize(raw)
    t = t - (t + _t(t, "iklj") + _t(t, "iljk")) / 3.0
    return _pair_symmetrize(t)


def _pair_symmetrize(t: np.ndarray) -> np.ndarray:
    t = 0.5 * (t - _t(t, "jikl"))
    t = 0.5 * (t - _t(t, "ijlk"))
    return 0.5 * (t + _t(t, "klij"))


def project_to_curvature_space(raw, n: int | None = None) -> CurvatureTensor:
    """Nearest algebraic curvature tensor to ``raw`` (``n**4`` entries, any shape)."""
    arr = np.asarray(raw, dtype=float)
    if n is None:
        n = arr.shape[0] if arr.ndim == 4 else round(arr.size ** 0.25)
    if n < 2:
        raise InvalidDimension(f"dimension must be at least 2, got {n}")
    if arr.size != n**4:
        raise InvalidInput(f"expected {n**4} entries for n={n}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("raw array has non-finite entries")
    return CurvatureTensor(project_array(arr.reshape(n, n, n, n)))


@dataclass(frozen=True, eq=False)
class CurvatureScalars:
    ricci: np.ndarray
    scalar: float
    normalized_scalar: float


def curvature_scalars(R: CurvatureTensor) -> CurvatureScalars:
    ricci = np.einsum("ikjk->ij", R.components)
    ricci = 0.5 * (ricci + ricci.T)
    ricci.setflags(write=False)
    scalar = float(np.trace(ricci))
    n = R.dim
    s0 = scalar / (n * (n - 1)) if n > 1 else 0.0
    return CurvatureScalars(ricci=ricci, scalar=scalar, normalized_scalar=s0)


def normalized_scalar(R: CurvatureTensor) -> float:
    return curvature_scalars(R).normalized_scalar


def sectional(R: CurvatureTensor, u, v) -> float:
    """``K(span(u, v)) = R(u, v, u, v)`` for an orthonormal pair."""
    rows = check_orthonormal(u, v)
    if rows.shape[1] != R.dim:
        raise DimensionMismatch(f"vectors live in R^{rows.shape[1]}, tensor in R^{R.dim}")
    return R(rows[0], rows[1], rows[0], rows[1])


def _four_frame(R: CurvatureTensor, frame: Frame) -> np.ndarray:
    if frame.size != 4:
        raise InvalidFrame(f"expected a four-frame, got {frame.size} vectors")
    return restrict(R, frame)


def _a(r) -> float:
    return float(r[0, 2, 0, 2] + r[0, 3, 0, 3] + r[1, 2, 1, 2] + r[1, 3, 1, 3])


def _b(r) -> float:
    return float(r[0, 1, 0, 1] + r[2, 3, 2, 3])


def a_sum(R: CurvatureTensor, frame: Frame) -> float:
    """``R_1313 + R_1414 + R_2323 + R_2424`` on the frame."""
    return _a(_four_frame(R, frame))


def b_sum(R: CurvatureTensor, frame: Frame) -> float:
    """``R_1212 + R_3434`` on the frame (not halved)."""
    return _b(_four_frame(R, frame))


def condition_quantity(R: CurvatureTensor, frame: Frame, gamma: float = 0.5) -> float:
    """``a_sum - gamma * b_sum``; positive for all frames is the main pinching condition at 1/2."""
    r = _four_frame(R, frame)
    return _a(r) - gamma * _b(r)


def isotropic_quantity(R: CurvatureTensor, frame: Frame) -> float:
    """``R_1313 + R_1414 + R_2323 + R_2424 - 2 R_1234``."""
    r = _four_frame(R, frame)
    return _a(r) - 2.0 * float(r[0, 1, 2, 3])


def direct_sum(R1: CurvatureTensor, R2: CurvatureTensor) -> CurvatureTensor:
    """Curvature of a Riemannian product: block diagonal, all mixed components zero."""
    n1, n2 = R1.dim, R2.dim
    c = np.zeros((n1 + n2,) * 4)
    c[:n1, :n1, :n1, :n1] = R1.components
    c[n1:, n1:, n1:, n1:] = R2.components
    return CurvatureTensor(c)


def scale(R: CurvatureTensor, c: float) -> CurvatureTensor:
    c = float(c)
    if not np.isfinite(c):
        raise InvalidInput("scale factor must be finite")
    return CurvatureTensor(c * R.components)


def random_curvature_tensor(n: int, seed: int, magnitude: float = 1.0) -> CurvatureTensor:
    """Project i.i.d. ``Uniform(-magnitude, magnitude)`` entries; deterministic in ``(n, seed)``."""
    if n < 2:
        raise InvalidDimension(f"dimension must be at least 2, got {n}")
    rng = np.random.default_rng(seed)
    raw = rng.uniform(-magnitude, magnitude, size=(n, n, n, n))
    return project_to_curvature_space(raw, n)
