"""Moment matrices and their minimum eigenvalues.

The matrix of normally ordered moments M[i][j] = <:x^(i+j):> (i, j = 0..l-1)
is positive semidefinite for every classical state, so a significantly
negative minimum eigenvalue certifies nonclassicality.

Two independent eigenvalue routes are kept deliberately separate:

* min_eig_dense: cyclic Jacobi rotations.  Self-contained, dtype-preserving
  (float64 or extended precision), and accurate for the block-sparse
  matrices produced here, where rotations never mix the parity blocks.
* min_eig_cg: nonlinear conjugate gradients on the Rayleigh quotient with
  exact 2-d subspace line searches and multiple deterministic restarts.

Each serves as the oracle for the other in the test suite.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernels import hermite_power_sums, jacobi_eigenvalues_f64, rayleigh_cg_min
from .errors import ConvergenceError
from .moments import MAX_MOMENT_ORDER, _samples_of, normally_ordered_moments
from .sampler import bootstrap_counts

__all__ = [
    "MAX_MATRIX_DIM",
    "MomentMatrix",
    "MinEigResult",
    "build_matrix",
    "min_eig_dense",
    "min_eig_cg",
    "bootstrap_min_eig",
    "bootstrap_min_eig_table",
]

MAX_MATRIX_DIM = 64
_CG_RANDOM_STARTS = 10
_CG_START_KEY = 0x9E3779B97F4A7C15  # fixed: restarts are part of the algorithm


@dataclass(frozen=True)
class MomentMatrix:
    """Hankel matrix of normally ordered moments."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.dtype not in (np.float64, np.longdouble):
            entries = entries.astype(np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("entries must be a square matrix")
        if entries.shape[0] < 1:
            raise ValueError("matrix must be at least 1x1")
        if not np.all(np.isfinite(entries)):
            raise ValueError("entries must be finite")
        if not np.array_equal(entries, entries.T):
            raise ValueError("entries must be symmetric")
        entries = entries.copy() if entries is self.entries else entries
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self):
        return self.entries.shape[0]


def build_matrix(moments, dim):
    """Assemble the dim x dim matrix M[i][j] = moments[i + j].

    moments must cover orders 0 through 2 dim - 2 and have moments[0] = 1.
    The moment array's floating dtype is preserved.
    """
    m = np.asarray(moments)
    if m.dtype != np.longdouble:
        m = m.astype(np.float64)
    if m.ndim != 1:
        raise ValueError("moments must be a 1-d sequence")
    if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)):
        raise TypeError("dim must be an integer")
    dim = int(dim)
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if m.size < 2 * dim - 1:
        raise ValueError(
            f"need moment orders 0..{2 * dim - 2}, got only 0..{m.size - 1}"
        )
    i = np.arange(dim)
    return MomentMatrix(entries=m[i[:, None] + i[None, :]])


def _as_array(matrix):
    a = matrix.entries if isinstance(matrix, MomentMatrix) else np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError("matrix must be square")
    if a.shape[0] > MAX_MATRIX_DIM:
        raise ValueError(f"dimension must be at most {MAX_MATRIX_DIM}")
    if not np.all(np.isfinite(np.asarray(a, dtype=np.float64))):
        raise ValueError("matrix must be finite")
    return a


def _jacobi_longdouble(a, max_sweeps):
    """Pure-numpy mirror of the compiled Jacobi kernel for wider dtypes."""
    l = a.shape[0]
    if l == 1:
        return a.diagonal().copy(), True
    eps = float(np.finfo(a.dtype).eps)
    for sweep in range(max_sweeps):
        off = float(np.sum(np.abs(a - np.diag(a.diagonal()))))
        scale = float(np.sum(np.abs(a)))
        if off == 0.0 or off <= eps * scale:
            break
        thresh = 0.2 * off / (l * l) if sweep < 3 else 0.0
        for p in range(l - 1):
            for q in range(p + 1, l):
                apq = a[p, q]
                small = 100.0 * abs(apq)
                if sweep > 3 and small <= eps * abs(a[p, p]) and small <= eps * abs(a[q, q]):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                if abs(apq) <= thresh or apq == 0.0:
                    continue
                h = a[q, q] - a[p, p]
                if small <= eps * abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (abs(theta) + np.sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                cth = 1.0 / np.sqrt(1.0 + t * t)
                sth = t * cth
                tau = sth / (1.0 + cth)
                dh = t * apq
                a[p, p] -= dh
                a[q, q] += dh
                a[p, q] = 0.0
                a[q, p] = 0.0
                rows = np.ones(l, dtype=bool)
                rows[p] = rows[q] = False
                g = a[rows, p].copy()
                hh = a[rows, q].copy()
                a[rows, p] = g - sth * (hh + tau * g)
                a[rows, q] = hh + sth * (g - tau * hh)
                a[p, rows] = a[rows, p]
                a[q, rows] = a[rows, q]
    off = float(np.sum(np.abs(a - np.diag(a.diagonal()))))
    scale = float(np.sum(np.abs(a)))
    return a.diagonal().copy(), off <= 64.0 * eps * max(scale, 1e-300)


def min_eig_dense(matrix, max_sweeps=60):
    """Smallest eigenvalue via cyclic Jacobi sweeps.

    Accepts a MomentMatrix or a symmetric array; float64 input runs the
    compiled kernel, wider floating dtypes (e.g. longdouble) run the same
    algorithm in that precision.  Dimension is capped at 64.
    """
    a = _as_array(matrix)
    if a.dtype == np.longdouble:
        work = np.array(a, dtype=np.longdouble, copy=True)
        if not np.array_equal(work, work.T):
            raise ValueError("matrix must be symmetric")
        diag, ok = _jacobi_longdouble(work, int(max_sweeps))
    else:
        work = np.array(a, dtype=np.float64, copy=True)
        if not np.array_equal(work, work.T):
            raise ValueError("matrix must be symmetric")
        diag, ok = jacobi_eigenvalues_f64(work, int(max_sweeps))
    if not ok:
        raise ConvergenceError("Jacobi sweeps did not reduce off-diagonal mass")
    lam = diag.min()
    return lam if diag.dtype == np.longdouble else float(lam)


def _cg_starts(dim):
    key = np.array([_CG_START_KEY, 0], dtype=np.uint64)
    words = np.random.Philox(key=key).random_raw(_CG_RANDOM_STARTS * dim)
    u = ((words >> np.uint64(12)) + 0.5) * 2.0**-52
    random_part = (2.0 * u - 1.0).reshape(_CG_RANDOM_STARTS, dim)
    return np.vstack([np.eye(dim), random_part])


def min_eig_cg(matrix, tol=1e-12, max_iter=10000):
    """Smallest eigenvalue via Rayleigh-quotient conjugate gradients.

    Deterministic: the restart set (coordinate vectors plus fixed
    pseudo-random directions) depends only on the dimension.  Raises
    ConvergenceError if no restart reaches the residual tolerance.
    """
    a = np.array(_as_array(matrix), dtype=np.float64, copy=True)
    if not np.array_equal(a, a.T):
        raise ValueError("matrix must be symmetric")
    tol = float(tol)
    if not math.isfinite(tol) or tol <= 0.0:
        raise ValueError("tol must be positive")
    max_iter = int(max_iter)
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    if a.shape[0] == 1:
        return float(a[0, 0])
    starts = _cg_starts(a.shape[0])
    best, converged = rayleigh_cg_min(a, starts, tol, max_iter)
    if converged == 0:
        raise ConvergenceError(
            f"no CG restart converged within {max_iter} iterations"
        )
    return float(best)


@dataclass(frozen=True)
class MinEigResult:
    """Minimum eigenvalue of one moment matrix with its bootstrap sigma."""

    dim: int
    lambda_min: float
    sigma: float
    replicates: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if self.sigma < 0.0:
            raise ValueError("sigma must be nonnegative")
        if self.replicates < 2:
            raise ValueError("replicates must be at least 2")

    def to_dict(self):
        return {
            "dim": self.dim,
            "lambda_min": self.lambda_min,
            "sigma": self.sigma,
            "replicates": self.replicates,
        }


def _checked_dims(dims):
    out = []
    for d in dims:
        if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
            raise TypeError("dims must be integers")
        d = int(d)
        if d < 1:
            raise ValueError("dims must be at least 1")
        if 2 * d - 2 > MAX_MOMENT_ORDER:
            raise ValueError(
                f"dim {d} needs moment order {2 * d - 2}, beyond the "
                f"estimator cap of {MAX_MOMENT_ORDER}"
            )
        out.append(d)
    if not out:
        raise ValueError("dims must be nonempty")
    return out


def bootstrap_min_eig_table(data, dims, replicates=100, seed=0, workers=1):
    """Minimum eigenvalues with bootstrap sigmas for several dimensions.

    One pass of moment sums per replicate is shared across all requested
    dimensions, then each dimension solves its own small eigenproblem.
    Returns MinEigResult entries in the order dims was given.
    """
    x = _samples_of(data)
    dims = _checked_dims(dims)
    replicates = int(replicates)
    if replicates < 2:
        raise ValueError("replicates must be at least 2")
    kmax = 2 * max(dims) - 2
    n = x.size
    point_moments = normally_ordered_moments(x, kmax)
    point = {d: min_eig_cg(build_matrix(point_moments, d)) for d in dims}
    scale = 2.0 ** (-0.5 * np.arange(kmax + 1)) / n

    def one(r):
        w = bootstrap_counts(seed, r, n)
        m = hermite_power_sums(x, w, kmax, True) * scale
        m[0] = 1.0
        return [min_eig_cg(build_matrix(m, d)) for d in dims]

    workers = max(1, int(workers))
    if workers == 1:
        rows = [one(r) for r in range(replicates)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(replicates)))
    spread = np.std(np.array(rows, dtype=np.float64), axis=0, ddof=1)
    return [
        MinEigResult(dim=d, lambda_min=point[d], sigma=float(spread[k]),
                     replicates=replicates)
        for k, d in enumerate(dims)
    ]


def bootstrap_min_eig(data, dim, replicates=100, seed=0, workers=1):
    """Minimum eigenvalue with bootstrap sigma for a single dimension."""
    return bootstrap_min_eig_table(data, [dim], replicates=replicates,
                                   seed=seed, workers=workers)[0]
