"""Complex matrix representations of Euclidean Clifford algebras.

Generators are anti-Hermitian 2^[n/2] x 2^[n/2] matrices satisfying

    gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij * Id.

The generators are built from Pauli tensor chains, so every matrix entry is
one of 0, +-1, +-i and all algebraic identities hold exactly in float64.
For n = 3 the construction reproduces the conventional basis

    gamma_1 = [[0, i], [i, 0]],  gamma_2 = [[0, -1], [1, 0]],
    gamma_3 = [[i, 0], [0, -i]],

and for n = 7 the generator product gamma_1 ... gamma_7 is forced to -Id,
which pins down the representation up to unitary conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: tolerance for the algebraic identities on accumulated matrix products
RELATION_TOL = 1e-14

MIN_DIMENSION = 2
MAX_DIMENSION = 8


def _chain(factors) -> np.ndarray:
    out = np.array([[1.0 + 0.0j]])
    for f in factors:
        out = np.kron(out, f)
    return out


@dataclass(frozen=True)
class CliffordRep:
    """An irreducible representation of the Clifford algebra Cl(n)."""

    n: int
    gammas: tuple[np.ndarray, ...]
    #: scalar c with gamma_1 ... gamma_n = c * Id; None for even n where the
    #: product is not central.  c is +-1 for n = 3, 7 and +-i for n = 5.
    volume_scalar: complex | None

    @property
    def dim(self) -> int:
        return 2 ** (self.n // 2)

    @property
    def volume_sign(self) -> int | None:
        """Sign of the generator product relative to Id (n = 3, 7 only)."""
        if self.volume_scalar is None or self.volume_scalar.imag != 0.0:
            return None
        return 1 if self.volume_scalar.real > 0 else -1


def _generator_product(gammas) -> np.ndarray:
    out = gammas[0]
    for g in gammas[1:]:
        out = out @ g
    return out


def build_clifford_rep(n: int) -> CliffordRep:
    """Construct Cl(n) generators for n in 2..8.

    Even-index generators use sigma_1 chains, odd-index ones use -sigma_2
    chains (the sign fixes the n = 3 convention above); an odd dimension
    appends the sigma_3 chain.  For n = 7 the last generator is negated if
    necessary so that the product of all seven equals -Id.
    """
    if not isinstance(n, int) or not (MIN_DIMENSION <= n <= MAX_DIMENSION):
        raise ValueError(f"unsupported Clifford dimension n={n!r}, need integer in 2..8")
    k = n // 2
    gammas: list[np.ndarray] = []
    for j in range(k):
        pre = [_SIGMA3] * j
        post = [np.eye(2, dtype=complex)] * (k - j - 1)
        gammas.append(1.0j * _chain(pre + [_SIGMA1] + post))
        gammas.append(-1.0j * _chain(pre + [_SIGMA2] + post))
    if n % 2 == 1:
        gammas.append(1.0j * _chain([_SIGMA3] * k))

    volume_scalar = None
    if n % 2 == 1:
        omega = _generator_product(gammas)
        scalar = complex(omega[0, 0])
        if n == 7 and scalar.real > 0:
            gammas[-1] = -gammas[-1]
            scalar = -scalar
        volume_scalar = scalar

    for g in gammas:
        g.setflags(write=False)
    return CliffordRep(n=n, gammas=tuple(gammas), volume_scalar=volume_scalar)


def clifford_defect(rep: CliffordRep) -> float:
    """Largest violation of the anticommutation relations and anti-Hermiticity."""
    worst = 0.0
    eye = np.eye(rep.dim)
    for i, gi in enumerate(rep.gammas):
        worst = max(worst, float(np.abs(gi + gi.conj().T).max()))
        for j, gj in enumerate(rep.gammas):
            ac = gi @ gj + gj @ gi + 2.0 * (i == j) * eye
            worst = max(worst, float(np.abs(ac).max()))
    return worst


def volume_element(rep: CliffordRep, with_phase: bool) -> np.ndarray:
    """Product gamma_1 ... gamma_n, optionally scaled by i^((n+1)/2).

    With the phase the result squares to the identity; that normalization
    only makes sense for odd n and is rejected otherwise.
    """
    if with_phase and rep.n % 2 == 0:
        raise ValueError("phase normalization i^((n+1)/2) requires odd n")
    prod = _generator_product(rep.gammas)
    if with_phase:
        prod = (1.0j ** ((rep.n + 1) // 2)) * prod
    return prod


def gamma_of_two_form(rep: CliffordRep, coeffs: np.ndarray) -> np.ndarray:
    """Contract an antisymmetric coefficient array with gamma_i gamma_j.

    Returns sum_{i<j} coeffs[i, j] * gamma_i gamma_j.  The result is
    anti-Hermitian for real coefficients, like the generators themselves.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (rep.n, rep.n):
        raise ValueError(f"coefficient array must be {rep.n}x{rep.n}")
    if np.abs(coeffs + coeffs.T).max() > RELATION_TOL:
        raise ValueError("coefficient array is not antisymmetric")
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for i in range(rep.n):
        for j in range(i + 1, rep.n):
            if coeffs[i, j] != 0.0:
                out += coeffs[i, j] * (rep.gammas[i] @ rep.gammas[j])
    return out
