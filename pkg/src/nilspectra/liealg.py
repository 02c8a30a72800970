"""Metric nilpotent Lie algebras given by structure constants.

Structure constants are stored with respect to an orthonormal frame,
c[i, j, k] meaning [e_i, e_j] = sum_k c[i, j, k] e_k.  In an orthonormal
frame the Koszul formula for the Levi-Civita connection collapses to

    Gamma[i, j, k] = (c[i,j,k] - c[j,k,i] + c[k,i,j]) / 2,

with nabla_{e_i} e_j = sum_k Gamma[i, j, k] e_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

JACOBI_TOL = 1e-12


@dataclass(frozen=True)
class MetricLieAlgebra:
    dim: int
    c: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.dim,) * 3:
            raise ValueError(f"structure constants must be {self.dim}^3")
        if np.abs(c + np.einsum("jik->ijk", c)).max() != 0.0:
            raise ValueError("structure constants are not antisymmetric in i, j")
        jac = (
            np.einsum("ijm,mkl->ijkl", c, c)
            + np.einsum("jkm,mil->ijkl", c, c)
            + np.einsum("kim,mjl->ijkl", c, c)
        )
        if np.abs(jac).max() > JACOBI_TOL:
            raise ValueError("Jacobi identity violated")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i+1}" for i in range(self.dim)))

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", u, v, self.c)


@dataclass(frozen=True)
class ChristoffelTensor:
    gamma: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=float)
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)


def christoffel(algebra: MetricLieAlgebra) -> ChristoffelTensor:
    """Levi-Civita connection coefficients in the orthonormal frame."""
    c = algebra.c
    gamma = 0.5 * (c - np.einsum("jki->ijk", c) + np.einsum("kij->ijk", c))
    return ChristoffelTensor(gamma=gamma)


def heisenberg_metric_algebra(d: float, T: float) -> MetricLieAlgebra:
    """3-dim Heisenberg algebra with orthonormal frame (-d X, -d Y, Z/T).

    The only surviving bracket is [e_1, e_2] = d^2 T e_3.
    """
    if not (d > 0 and T > 0):
        raise ValueError("metric parameters d and T must be positive")
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = d * d * T
    c[1, 0, 2] = -d * d * T
    return MetricLieAlgebra(dim=3, c=c, labels=("e1", "e2", "e3"))


def _set_bracket(c: np.ndarray, i: int, j: int, k: int, value: float = 1.0) -> None:
    c[i, j, k] = value
    c[j, i, k] = -value


def deformation_algebra() -> MetricLieAlgebra:
    """The 7-dim, 3-step nilpotent algebra carrying the deformation family.

    Orthonormal basis (X1, X2, X3, X4, Z1, Z2, C); C spans the center.
    Nonzero brackets:

        [X1, X2] = [X3, X4] = Z1 + C
        [X1, X3] = [X4, X2] = Z2
        [X2, X3] = [X1, Z1] = [Z2, X4] = C
    """
    c = np.zeros((7, 7, 7))
    _set_bracket(c, 0, 1, 4)
    _set_bracket(c, 0, 1, 6)
    _set_bracket(c, 2, 3, 4)
    _set_bracket(c, 2, 3, 6)
    _set_bracket(c, 0, 2, 5)
    _set_bracket(c, 3, 1, 5)
    _set_bracket(c, 1, 2, 6)
    _set_bracket(c, 0, 4, 6)
    _set_bracket(c, 5, 3, 6)
    return MetricLieAlgebra(
        dim=7, c=c, labels=("X1", "X2", "X3", "X4", "Z1", "Z2", "C")
    )


def deformation_automorphism(s: float) -> np.ndarray:
    """One-parameter automorphism family of ``deformation_algebra``.

    Acts on column vectors in the basis order (X1..X4, Z1, Z2, C); the
    family is a one-parameter group, phi_s phi_t = phi_{s+t}, with
    determinant 1 for every s.
    """
    cs, sn = np.cos(s), np.sin(s)
    c2, s2 = np.cos(2.0 * s), np.sin(2.0 * s)
    m = np.zeros((7, 7))
    m[0, 0] = cs
    m[0, 3] = sn
    m[1, 1] = c2
    m[1, 2] = -s2
    m[2, 1] = s2
    m[2, 2] = c2
    m[3, 0] = -sn
    m[3, 3] = cs
    m[4, 4] = cs
    m[4, 5] = -sn
    m[5, 4] = sn
    m[5, 5] = cs
    m[6, 4] = -1.0 + cs
    m[6, 5] = -sn
    m[6, 6] = 1.0
    return m


def check_automorphism(algebra: MetricLieAlgebra, phi: np.ndarray) -> float:
    """Max norm of phi[e_i, e_j] - [phi e_i, phi e_j] over all basis pairs."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (algebra.dim, algebra.dim):
        raise ValueError("phi must be square of the algebra dimension")
    if abs(np.linalg.det(phi)) < 1e-12:
        raise ValueError("phi must be invertible")
    worst = 0.0
    for i in range(algebra.dim):
        for j in range(algebra.dim):
            lhs = phi @ algebra.c[i, j, :]
            rhs = algebra.bracket(phi[:, i], phi[:, j])
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst
