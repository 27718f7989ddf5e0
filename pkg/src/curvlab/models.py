"""Closed-form curvature tensors of the model spaces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimension
from .tensor import CurvatureTensor, direct_sum


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    """An orthogonal ``J`` with ``J @ J == -I`` on R^{2m}; ``matrix @ x`` is ``Jx``."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float)

    @classmethod
    def standard(cls, m: int) -> "ComplexStructure":
        """``J e_{2k-1} = e_{2k}``, ``J e_{2k} = -e_{2k-1}`` (1-based)."""
        j = np.zeros((2 * m, 2 * m))
        for k in range(m):
            j[2 * k + 1, 2 * k] = 1.0
            j[2 * k, 2 * k + 1] = -1.0
        j.setflags(write=False)
        return cls(j)


def _gg(g: np.ndarray) -> np.ndarray:
    """Kulkarni-Nomizu style ``g(X,Z)g(Y,W) - g(X,W)g(Y,Z)`` for a bilinear form ``g``."""
    return np.einsum("ik,jl->ijkl", g, g) - np.einsum("il,jk->ijkl", g, g)


def flat(n: int) -> CurvatureTensor:
    if n < 1:
        raise InvalidDimension(f"dimension must be at least 1, got {n}")
    return CurvatureTensor(np.zeros((n,) * 4))


def constant_curvature(n: int, kappa: float = 1.0) -> CurvatureTensor:
    """Round sphere (kappa > 0), flat space or hyperbolic space: every sectional curvature is kappa."""
    if n < 2:
        raise InvalidDimension(f"dimension must be at least 2, got {n}")
    return CurvatureTensor(float(kappa) * _gg(np.eye(n)))


def sphere(n: int, kappa: float = 1.0) -> CurvatureTensor:
    return constant_curvature(n, kappa)


def fubini_study(m: int) -> tuple[CurvatureTensor, ComplexStructure]:
    """CP^m with holomorphic sectional curvature 4, on R^{2m} with the standard ``J``.

    ``R(X,Y,Z,W) = g(X,Z)g(Y,W) - g(X,W)g(Y,Z) + g(JX,Z)g(JY,W) - g(JX,W)g(JY,Z)
    + 2 g(JX,Y)g(JZ,W)``.
    """
    if m < 2:
        raise InvalidDimension(f"complex dimension must be at least 2, got {m}")
    J = ComplexStructure.standard(m)
    # omega[a, b] = g(J e_a, e_b)
    omega = J.matrix.T
    c = _gg(np.eye(2 * m)) + _gg(omega) + 2.0 * np.einsum("ij,kl->ijkl", omega, omega)
    return CurvatureTensor(c), J


def sphere_cross_circle(n: int) -> CurvatureTensor:
    """Product of the unit (n-1)-sphere with a circle; the circle is the last coordinate."""
    if n < 4:
        raise InvalidDimension(f"dimension must be at least 4, got {n}")
    return direct_sum(constant_curvature(n - 1, 1.0), flat(1))


def sphere_cross_sphere(p: int = 2, q: int = 2, kappa1: float = 1.0, kappa2: float = 1.0) -> CurvatureTensor:
    return direct_sum(constant_curvature(p, kappa1), constant_curvature(q, kappa2))
