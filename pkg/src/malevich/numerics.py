"""Dense complex-matrix kernel for dimensions 2 to 4.

Every spectral quantity reported by the package goes through
:func:`hermitian_eigen`, a cyclic Jacobi solver that accepts a single matrix
or a stack of matrices of shape ``(..., n, n)``. Stacks are rotated in
lockstep with numpy; a single matrix takes a scalar path with the same
rotations.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .exceptions import NoConvergence, NotDensity, NotHermitian, NotPSD, WrongDim

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
JACOBI_TOL = 1e-13
MAX_SWEEPS = 500


class EigenResult(NamedTuple):
    """Eigenvalues sorted descending with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m, dim: int | None = None) -> np.ndarray:
    """Return ``m`` as a complex array of square matrices, checking the size."""
    a = np.asarray(m, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise WrongDim(f"expected square matrices, got shape {a.shape}")
    if dim is not None and a.shape[-1] != dim:
        raise WrongDim(f"expected {dim}x{dim} matrices, got {a.shape[-2]}x{a.shape[-1]}")
    if not 2 <= a.shape[-1] <= 4:
        raise WrongDim(f"dimension {a.shape[-1]} not supported (2 to 4 only)")
    return a


def hermitian_residual(m) -> float:
    a = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(a - np.swapaxes(a.conj(), -1, -2)), initial=0.0))


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = as_matrix(m)
    res = hermitian_residual(a)
    if res > tol:
        raise NotHermitian(f"symmetry residual {res:.3g} exceeds {tol:g}")
    return a


def _sorted_descending(w: np.ndarray, v: np.ndarray) -> EigenResult:
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[..., None, :], axis=-1)
    return EigenResult(w, v)


def hermitian_eigen(m, *, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> EigenResult:
    """Eigendecomposition of Hermitian matrices by cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like, shape (..., n, n)
        Hermitian matrices, ``n`` between 2 and 4.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm of every matrix is at
        most ``tol * max(1, ||m||_F)``.
    max_sweeps : int
        Iteration cap; exceeding it raises :class:`NoConvergence`.

    Returns
    -------
    EigenResult
        Real eigenvalues sorted descending and eigenvectors as columns, so that
        ``V @ diag(w) @ V^H`` reconstructs ``m``.
    """
    a = check_hermitian(m)
    if a.ndim == 2:
        w, v = _jacobi_single(a.tolist(), tol, max_sweeps)
        return _sorted_descending(np.array(w), np.array(v, dtype=complex))
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape(-1, n, n).copy()
    # exact Hermitian symmetry so the diagonal stays real through the rotations
    a = 0.5 * (a + np.swapaxes(a.conj(), -1, -2))
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy()
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(-1, -2))))
    offmask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for sweep in range(max_sweeps + 1):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=-1))
        if np.all(off <= tol * scale):
            break
        if sweep == max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p, q in pairs:
            apq = a[:, p, q]
            mag = np.abs(apq)
            active = mag > 1e-300
            if not np.any(active):
                continue
            safe = np.where(active, mag, 1.0)
            phase = np.where(active, apq / safe, 1.0)
            tau = (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # V = diag(1, conj(phase)) @ [[c, s], [-s, c]]
            v00, v01 = c, s
            v10, v11 = -s * phase.conj(), c * phase.conj()

            colp, colq = a[:, :, p].copy(), a[:, :, q].copy()
            a[:, :, p] = colp * v00[:, None] + colq * v10[:, None]
            a[:, :, q] = colp * v01[:, None] + colq * v11[:, None]
            rowp, rowq = a[:, p, :].copy(), a[:, q, :].copy()
            a[:, p, :] = np.conj(v00)[:, None] * rowp + np.conj(v10)[:, None] * rowq
            a[:, q, :] = np.conj(v01)[:, None] * rowp + np.conj(v11)[:, None] * rowq
            a[:, p, q] = np.where(active, 0.0, a[:, p, q])
            a[:, q, p] = np.where(active, 0.0, a[:, q, p])
            a[:, p, p] = a[:, p, p].real
            a[:, q, q] = a[:, q, q].real

            vp, vq = v[:, :, p].copy(), v[:, :, q].copy()
            v[:, :, p] = vp * v00[:, None] + vq * v10[:, None]
            v[:, :, q] = vp * v01[:, None] + vq * v11[:, None]

    w = np.diagonal(a, axis1=-2, axis2=-1).real.copy()
    res = _sorted_descending(w, v)
    return EigenResult(
        res.eigenvalues.reshape(batch_shape + (n,)),
        res.eigenvectors.reshape(batch_shape + (n, n)),
    )


def _jacobi_single(rows: list, tol: float, max_sweeps: int) -> tuple[list, list]:
    # same rotations as the batched path on Python complex scalars; numpy
    # dispatch dominates for a lone 4x4
    n = len(rows)
    a = [[complex(x) for x in row] for row in rows]
    for i in range(n):
        a[i][i] = complex(a[i][i].real, 0.0)
        for j in range(i + 1, n):
            z = 0.5 * (a[i][j] + a[j][i].conjugate())
            a[i][j], a[j][i] = z, z.conjugate()
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    scale = max(1.0, math.sqrt(sum(abs(x) ** 2 for row in a for x in row)))
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for sweep in range(max_sweeps + 1):
        off = math.sqrt(sum(abs(a[p][q]) ** 2 for p, q in pairs) * 2)
        if off <= tol * scale:
            break
        if sweep == max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p, q in pairs:
            apq = a[p][q]
            mag = abs(apq)
            if mag <= 1e-300:
                continue
            phc = (apq / mag).conjugate()
            tau = (a[q][q].real - a[p][p].real) / (2.0 * mag)
            t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            v10, v11 = -s * phc, c * phc
            v10c, v11c = v10.conjugate(), v11.conjugate()
            for row in a:
                x, y = row[p], row[q]
                row[p], row[q] = x * c + y * v10, x * s + y * v11
            ap, aq = a[p], a[q]
            for k in range(n):
                x, y = ap[k], aq[k]
                ap[k], aq[k] = c * x + v10c * y, s * x + v11c * y
            ap[q] = aq[p] = 0j
            ap[p] = complex(ap[p].real, 0.0)
            aq[q] = complex(aq[q].real, 0.0)
            for row in v:
                x, y = row[p], row[q]
                row[p], row[q] = x * c + y * v10, x * s + y * v11
    return [a[i][i].real for i in range(n)], v


def eigenvalues(m) -> np.ndarray:
    return hermitian_eigen(m).eigenvalues


def matrix_sqrt_psd(m, *, floor: float = 0.0) -> np.ndarray:
    """Principal square root of positive semidefinite Hermitian matrices.

    Eigenvalues down to ``-1e-10`` are treated as round-off and clamped to
    zero; anything more negative raises :class:`NotPSD`. Eigenvalues at or
    below ``floor * max(1, largest eigenvalue)`` are also zeroed, which keeps
    the square root of rank-deficient input free of ``sqrt(1e-17)`` noise.
    """
    w, v = hermitian_eigen(m)
    lowest = float(np.min(w))
    if lowest < -PSD_TOL:
        raise NotPSD(f"minimum eigenvalue {lowest:.3g} below {-PSD_TOL:g}")
    cut = floor * np.maximum(1.0, w[..., :1])
    w = np.where(w <= cut, 0.0, w)
    root = (v * np.sqrt(w)[..., None, :]) @ np.swapaxes(v.conj(), -1, -2)
    return 0.5 * (root + np.swapaxes(root.conj(), -1, -2))


def partial_transpose(m, subsystem: str = "second") -> np.ndarray:
    """Partial transpose of two-qubit operators in the (m1, m2) product basis.

    ``subsystem="second"`` applies I (x) T, ``"first"`` applies T (x) I. The
    operation only permutes entries, so applying it twice is bit-exact.
    """
    a = np.asarray(m)
    if a.ndim < 2 or a.shape[-2:] != (4, 4):
        raise WrongDim(f"partial transpose needs 4x4 input, got shape {a.shape}")
    lead = a.shape[:-2]
    t = a.reshape(lead + (2, 2, 2, 2))
    k = len(lead)
    axes = list(range(k))
    if subsystem == "second":
        axes += [k, k + 3, k + 2, k + 1]
    elif subsystem == "first":
        axes += [k + 2, k + 1, k, k + 3]
    else:
        raise ValueError(f"subsystem must be 'first' or 'second', not {subsystem!r}")
    return t.transpose(axes).reshape(lead + (4, 4))


def purity(m) -> float | np.ndarray:
    """Tr(rho^2) of Hermitian matrices."""
    a = np.asarray(m, dtype=complex)
    out = np.sum(np.abs(a) ** 2, axis=(-1, -2))
    return float(out) if out.ndim == 0 else out


def min_eigenvalue(m) -> float | np.ndarray:
    out = hermitian_eigen(m).eigenvalues[..., -1]
    return float(out) if np.ndim(out) == 0 else out


def is_density(m, *, psd_tol: float = PSD_TOL) -> bool:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    if hermitian_residual(a) > HERMITIAN_TOL:
        return False
    if abs(np.trace(a) - 1.0) > TRACE_TOL:
        return False
    return min_eigenvalue(a) >= -psd_tol


def check_density(m, dim: int | None = None) -> np.ndarray:
    """Validate a single density matrix and return it as a complex array."""
    try:
        a = as_matrix(m, dim)
    except WrongDim as exc:
        raise NotDensity(str(exc)) from exc
    if a.ndim != 2:
        raise NotDensity("expected a single matrix, not a stack")
    res = hermitian_residual(a)
    if res > HERMITIAN_TOL:
        raise NotDensity(f"not Hermitian (residual {res:.3g})")
    tr = np.trace(a)
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotDensity(f"trace {tr.real:.15g} is not 1")
    lowest = min_eigenvalue(a)
    if lowest < -PSD_TOL:
        raise NotDensity(f"minimum eigenvalue {lowest:.3g} is negative")
    return a


def random_hermitian(dim: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    shape = (dim, dim) if size is None else (size, dim, dim)
    g = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return 0.5 * (g + np.swapaxes(g.conj(), -1, -2))


def random_density(
    dim: int, rng: np.random.Generator, size: int | None = None, rank: int | None = None
) -> np.ndarray:
    """Ginibre-distributed density matrices ``G G^H / Tr(G G^H)``."""
    k = dim if rank is None else rank
    shape = (dim, k) if size is None else (size, dim, k)
    g = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    rho = g @ np.swapaxes(g.conj(), -1, -2)
    tr = np.trace(rho, axis1=-2, axis2=-1).real
    rho = rho / tr[..., None, None]
    return 0.5 * (rho + np.swapaxes(rho.conj(), -1, -2))
