"""Independent numerical oracles for the closed-form spectra.

The eigensolver here is deliberately self-contained: complex Hermitian
matrices are embedded as real symmetric ones (each eigenvalue doubled),
reduced to tridiagonal form by Householder reflections, and diagonalized
by the implicit-shift QL iteration.  Large banded problems coming from the
finite-difference discretization stay in tridiagonal form and use Sturm
bisection instead.  numpy supplies array arithmetic only; no external
eigensolver is called anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
_QL_MAX_SWEEPS = 64


# ---------------------------------------------------------------------------
# Householder tridiagonalization (real symmetric)
# ---------------------------------------------------------------------------

def _householder_tridiagonal(a: np.ndarray, vectors: bool):
    """Reduce a real symmetric matrix to tridiagonal form.

    Returns (d, e, q) with d the diagonal, e the subdiagonal (length n-1)
    and q the accumulated orthogonal transform (None unless requested),
    satisfying q.T @ a @ q = tridiag(d, e).
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    reflectors: list[tuple[np.ndarray, float]] = []
    for i in range(n - 1, 0, -1):
        l = i
        if l > 1:
            u = a[i, :l].copy()
            scale = np.abs(u).sum()
            if scale == 0.0:
                e[i] = u[l - 1]
                continue
            u /= scale
            h = float(u @ u)
            f = u[l - 1]
            g = -math.copysign(math.sqrt(h), f)
            e[i] = scale * g
            h -= f * g
            u[l - 1] = f - g
            # rank-2 update of the leading block: A <- A - q u^T - u q^T
            p = a[:l, :l] @ u / h
            k = float(u @ p) / (2.0 * h)
            q = p - k * u
            a[:l, :l] -= np.outer(q, u) + np.outer(u, q)
            if vectors:
                reflectors.append((u, h))
        else:
            e[i] = a[i, 0]
    d[:] = np.diag(a)

    qmat = None
    if vectors:
        qmat = np.eye(n)
        # reflectors were applied from the trailing index downwards; the
        # eigenvector transform is their product in application order
        for u, h in reflectors:
            l = len(u)
            w = qmat[:, :l] @ u
            qmat[:, :l] -= np.outer(w, u) / h
    return d, e[1:], qmat


# ---------------------------------------------------------------------------
# Implicit-shift QL iteration on a tridiagonal matrix
# ---------------------------------------------------------------------------

def _ql_implicit(d: np.ndarray, e: np.ndarray, z: np.ndarray | None):
    """Eigenvalues (in place, in d) of tridiag(d, e); rotations applied to z."""
    n = len(d)
    ee = np.zeros(n)
    ee[: n - 1] = e
    eps = np.finfo(float).eps
    for l in range(n):
        sweeps = 0
        while True:
            m = n - 1
            for mm in range(l, n - 1):
                dd = abs(d[mm]) + abs(d[mm + 1])
                if abs(ee[mm]) <= eps * dd:
                    m = mm
                    break
            if m == l:
                break
            sweeps += 1
            if sweeps > _QL_MAX_SWEEPS:
                raise RuntimeError("QL iteration failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    col = z[:, i + 1].copy()
                    z[:, i + 1] = s * z[:, i] + c * col
                    z[:, i] = c * z[:, i] - s * col
            if underflow:
                continue
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0


def real_symmetric_eig(a: np.ndarray, vectors: bool = False):
    """All eigenvalues (and optionally eigenvectors) of a real symmetric matrix."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n == 1:
        w = np.array([a[0, 0]])
        return (w, np.eye(1)) if vectors else (w, None)
    d, e, q = _householder_tridiagonal(a, vectors)
    z = q if vectors else None
    _ql_implicit(d, e.copy(), z)
    order = np.argsort(d, kind="stable")
    w = d[order]
    if vectors:
        return w, z[:, order]
    return w, None


def _embed_hermitian(h: np.ndarray) -> np.ndarray:
    hr, hi = h.real, h.imag
    return np.block([[hr, -hi], [hi, hr]])


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.abs(h).max()))
    if float(np.abs(h - h.conj().T).max()) > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return h


def hermitian_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Sorted eigenvalues of a complex Hermitian matrix.

    The matrix is embedded as a 2n x 2n real symmetric one whose spectrum is
    the wanted spectrum doubled; every second sorted value is returned.
    """
    h = _check_hermitian(h)
    w, _ = real_symmetric_eig(_embed_hermitian(h))
    return w[::2].copy()


def hermitian_eig(h: np.ndarray):
    """Eigenvalues and eigenvectors of a complex Hermitian matrix."""
    h = _check_hermitian(h)
    n = h.shape[0]
    w, z = real_symmetric_eig(_embed_hermitian(h), vectors=True)
    vals = w[::2].copy()
    cols = z[:, ::2]
    vecs = cols[:n, :] + 1.0j * cols[n:, :]
    vecs /= np.linalg.norm(vecs, axis=0)
    return vals, vecs


# ---------------------------------------------------------------------------
# Sturm bisection on a real symmetric tridiagonal matrix
# ---------------------------------------------------------------------------

def _sturm_counts(d: np.ndarray, e2: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Number of eigenvalues of tridiag(d, e) strictly below each x."""
    pivmin = (1.0 + (e2.max() if len(e2) else 0.0)) * 1e-250
    q = d[0] - xs
    counts = (q < 0.0).astype(np.int64)
    for i in range(1, len(d)):
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        q = d[i] - xs - e2[i - 1] / q
        counts += q < 0.0
    return counts


def _bisect_order_statistics(d, e, ks, tol):
    e2 = e * e
    radius = np.zeros(len(d))
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    lo0 = float((d - radius).min())
    hi0 = float((d + radius).max())
    ks = np.asarray(ks, dtype=np.int64)
    lo = np.full(len(ks), lo0)
    hi = np.full(len(ks), hi0)
    for _ in range(200):
        if float((hi - lo).max()) < tol:
            break
        mid = 0.5 * (lo + hi)
        counts = _sturm_counts(d, e2, mid)
        below = counts <= ks
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def tridiagonal_eigenvalues_near_zero(d: np.ndarray, e: np.ndarray, count: int) -> np.ndarray:
    """The ``count`` eigenvalues of tridiag(d, e) of smallest absolute value."""
    n = len(d)
    count = min(count, n)
    e2 = e * e
    n_below = int(_sturm_counts(d, e2, np.array([0.0]))[0])
    ks = []
    for step in range(count):
        k_lo = n_below - 1 - step
        k_hi = n_below + step
        if k_lo >= 0:
            ks.append(k_lo)
        if k_hi < n:
            ks.append(k_hi)
    ks = sorted(set(ks))
    scale = max(1.0, float(np.abs(d).max()), float(np.abs(e).max()) if len(e) else 0.0)
    vals = _bisect_order_statistics(d, e, ks, tol=1e-12 * scale)
    order = np.argsort(np.abs(vals), kind="stable")
    return vals[order][:count]


# ---------------------------------------------------------------------------
# Fiber operator: exact 2x2 blocks and finite-difference discretization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberBlock:
    """Matrix of the fiber operator on one invariant 2-dim (or 1-dim) block."""

    tau: float
    k: int
    d: float
    T: float
    matrix: np.ndarray
    eigenvalues: tuple[float, ...]


def fiber_block_matrix(tau, k: int, d: float, T: float) -> FiberBlock:
    """Invariant-block matrix of the fiber operator and its eigenvalues.

    For k = 0 the block is the single value -2 pi tau / T - d^2 T / 4; for
    k >= 1 it is the (non-Hermitian, real-spectrum) 2x2 matrix

        [[-2 pi tau / T - d^2 T / 4,   i d sqrt(2 pi tau)],
         [-2 k i d sqrt(2 pi tau),      2 pi tau / T - d^2 T / 4]]

    whose eigenvalues are computed from trace and determinant by the
    quadratic formula.  Negative tau is covered by the tau -> |tau| symmetry
    and therefore rejected here.
    """
    tau = float(tau)
    if tau <= 0:
        raise ValueError("tau must be positive; negative tau is the mirror case")
    if k < 0:
        raise ValueError("k must be a nonnegative integer")
    shift = d * d * T / 4.0
    vert = 2.0 * math.pi * tau / T
    if k == 0:
        m = np.array([[-vert - shift]], dtype=complex)
        eigs = (float(m[0, 0].real),)
    else:
        coupling = 1.0j * d * math.sqrt(2.0 * math.pi * tau)
        m = np.array(
            [[-vert - shift, coupling], [-2.0 * k * coupling, vert - shift]],
            dtype=complex,
        )
        tr = m[0, 0] + m[1, 1]
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        disc = tr * tr - 4.0 * det
        if abs(disc.imag) > 1e-9 * (1.0 + abs(disc)):
            raise ArithmeticError("block discriminant unexpectedly complex")
        root = math.sqrt(disc.real)
        eigs = tuple(sorted(((tr.real - root) / 2.0, (tr.real + root) / 2.0)))
    m.setflags(write=False)
    return FiberBlock(tau=tau, k=int(k), d=float(d), T=float(T), matrix=m, eigenvalues=eigs)


def _fd_grid(tau: float, d: float, T: float, N: int, L: float):
    if not isinstance(N, int) or N < 100:
        raise ValueError("grid size N must be an integer >= 100")
    if not (L > 0):
        raise ValueError("half-width L must be positive")
    tau = float(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    h = 2.0 * L / (N - 1)
    t = -L + h * np.arange(N)
    shift = d * d * T / 4.0
    vert = 2.0 * math.pi * tau / T
    a = -vert - shift
    c = vert - shift
    # first-order forward difference for d/dt in the upper-right operator;
    # the lower-left block is its conjugate transpose (a backward difference)
    beta = -2.0j * math.pi * d * tau * t - 1.0j * d / h   # multiplies v_m in row u_m
    gamma = 1.0j * d / h                                  # multiplies v_{m+1} in row u_m
    return h, t, a, c, beta, gamma


def fiber_operator_fd_matrix(tau, d: float, T: float, N: int, L: float) -> np.ndarray:
    """Dense Hermitian finite-difference matrix of the fiber operator.

    The two spinor components are collocated on N points of [-L, L] with
    Dirichlet truncation; the second component additionally drops its first
    grid value, which removes the boundary-supported null direction that a
    square truncation of a first-order operator otherwise fakes.  The
    resulting matrix has size (2N - 1) and, ordered site by site, is complex
    Hermitian tridiagonal.
    """
    _, _, a, c, beta, gamma = _fd_grid(float(tau), d, T, N, L)
    n = 2 * N - 1
    m = np.zeros((n, n), dtype=complex)
    # ordering: u_0, v_1, u_1, v_2, u_2, ..., v_{N-1}, u_{N-1}
    for p in range(n):
        m[p, p] = a if p % 2 == 0 else c
    for p in range(n - 1):
        if p % 2 == 0:
            off = gamma                      # u_m  <-> v_{m+1}
        else:
            off = np.conj(beta[(p + 1) // 2])  # v_m <-> u_m, adjoint side
        m[p, p + 1] = off
        m[p + 1, p] = np.conj(off)
    return m


def fiber_operator_fd(tau, d: float, T: float, N: int, L: float, count: int = 6) -> np.ndarray:
    """Eigenvalues of smallest modulus of the discretized fiber operator.

    A diagonal phase transform makes the site-ordered matrix real symmetric
    tridiagonal with the same spectrum; the eigenvalues nearest zero are then
    located by Sturm-count bisection.
    """
    h, _, a, c, beta, gamma = _fd_grid(float(tau), d, T, N, L)
    if count < 1:
        raise ValueError("count must be >= 1")
    n = 2 * N - 1
    diag = np.empty(n)
    diag[0::2] = a
    diag[1::2] = c
    off = np.empty(n - 1)
    off[0::2] = abs(gamma)
    off[1::2] = np.abs(beta[1:N])
    return tridiagonal_eigenvalues_near_zero(diag, off, count)


# ---------------------------------------------------------------------------
# Hermite-function recurrences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HermiteResiduals:
    derivative_residual: float
    recurrence_residual: float


def default_grid_halfwidth(tau, k_max: int) -> float:
    """Half-width covering the Gaussian support of the first k_max modes."""
    return (8.0 + 2.0 * math.sqrt(k_max)) / math.sqrt(2.0 * math.pi * abs(float(tau)))


def _scaled_hermite(tau: float, k_top: int, t: np.ndarray) -> list[np.ndarray]:
    """u_k(t) for k = 0..k_top via the stable three-term recurrence.

    u_0 is a Gaussian and u_{k+2} = -2 sqrt(w) t u_{k+1} - 2 (k+1) u_k with
    w = 2 pi |tau|; the recurrence avoids the cancellation the derivative
    formula suffers for k beyond about 10.
    """
    x = math.sqrt(2.0 * math.pi * abs(tau)) * t
    us = [np.exp(-0.5 * x * x)]
    if k_top >= 1:
        us.append(-2.0 * x * us[0])
    for k in range(k_top - 1):
        us.append(-2.0 * x * us[k + 1] - 2.0 * (k + 1) * us[k])
    return us


def hermite_samples(tau, k_max: int, grid: np.ndarray | None = None, step: float = 1e-4) -> HermiteResiduals:
    """Max normalized residuals of the two scaled Hermite recurrences.

    The derivative relation  w t u_k + sqrt(w) u_{k+1} = u_k'  is checked
    with a central-difference derivative of the given step; the three-term
    relation is re-evaluated on the same samples.  Only |tau| enters, so the
    residuals for tau and -tau coincide exactly.
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    tau = float(tau)
    w = 2.0 * math.pi * abs(tau)
    if grid is None:
        half = default_grid_halfwidth(tau, k_max)
        grid = np.linspace(-half, half, 2001)
    grid = np.asarray(grid, dtype=float)
    u0 = _scaled_hermite(tau, k_max + 2, grid)
    up = _scaled_hermite(tau, k_max + 2, grid + step)
    um = _scaled_hermite(tau, k_max + 2, grid - step)

    res_d = 0.0
    res_r = 0.0
    for k in range(k_max + 1):
        du = (up[k] - um[k]) / (2.0 * step)
        r4 = w * grid * u0[k] + math.sqrt(w) * u0[k + 1] - du
        scale4 = max(1.0, float(np.abs(du).max()))
        res_d = max(res_d, float(np.abs(r4).max()) / scale4)

        r5 = u0[k + 2] + 2.0 * math.sqrt(w) * grid * u0[k + 1] + 2.0 * (k + 1) * u0[k]
        scale5 = max(1.0, float(np.abs(u0[k + 2]).max()))
        res_r = max(res_r, float(np.abs(r5).max()) / scale5)
    return HermiteResiduals(derivative_residual=res_d, recurrence_residual=res_r)


# ---------------------------------------------------------------------------
# Completeness audit
# ---------------------------------------------------------------------------

def spectrum_completeness_audit(generator, lambda_max: float, margin: float = 2.0) -> bool:
    """Re-enumerate with index bounds scaled by ``margin`` and compare.

    ``generator(lambda_max=..., bound_margin=...)`` must return a spectrum
    object with an ``entries`` tuple.  Returns True iff widening every
    analytic enumeration bound produces the identical entry list, i.e. the
    original bounds were complete.
    """
    if margin < 2.0:
        raise ValueError("audit margin must be >= 2")
    base = generator(lambda_max=lambda_max, bound_margin=1.0)
    wide = generator(lambda_max=lambda_max, bound_margin=margin)
    return base.entries == wide.entries
