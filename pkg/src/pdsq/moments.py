"""Quadrature moment estimation and higher-order squeezing degrees.

Normally ordered moments come from Hermite-polynomial averages,

    <:x^k:> = 2^(-k/2) <H_k(x / sqrt(2))>,

which is exact for every k, needs no binning, and keeps the estimator a
plain sample mean.  Central moments use compensated power sums about the
sample mean.  The squeezing degree of order 2n compares the central moment
against the Gaussian vacuum value:

    q_2n = <(dx)^2n> / (2n - 1)!! - 1,

negative q_2n (beyond its uncertainty) certifies nonclassicality.
Uncertainties are empirical-bootstrap standard deviations over weighted
recomputations of the same estimator.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernels import centered_power_sums, hermite_power_sums
from .numerics import cdot, csum, double_factorial
from .sampler import QuadratureDataset, bootstrap_counts

__all__ = [
    "MAX_MOMENT_ORDER",
    "MomentSet",
    "SqueezingDegrees",
    "hermite",
    "central_moments",
    "normally_ordered_moments",
    "estimate_moments",
    "hong_mandel_q",
]

MAX_MOMENT_ORDER = 20
_MAX_HERMITE_ORDER = 64
_UNUSED_WEIGHTS = np.zeros(0)


def hermite(k, x):
    """Physicists' Hermite polynomial H_k(x), k = 0..64, vectorized in x.

    Three-term recurrence H_{k+1} = 2 x H_k - 2 k H_{k-1}; exact for
    integer arguments well past the orders used here.
    """
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise TypeError("order must be an integer")
    if not 0 <= k <= _MAX_HERMITE_ORDER:
        raise ValueError(f"order must be in [0, {_MAX_HERMITE_ORDER}]")
    x = np.asarray(x, dtype=np.float64)
    hprev = np.ones_like(x)
    if k == 0:
        return hprev if hprev.ndim else float(hprev)
    h = 2.0 * x
    for j in range(1, k):
        hprev, h = h, 2.0 * x * h - 2.0 * j * hprev
    return h if h.ndim else float(h)


def _samples_of(data):
    if isinstance(data, QuadratureDataset):
        return data.samples
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("samples must be a nonempty 1-d array")
    return x


def _checked_order(max_order):
    if isinstance(max_order, bool) or not isinstance(max_order, (int, np.integer)):
        raise TypeError("max_order must be an integer")
    max_order = int(max_order)
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    if max_order > MAX_MOMENT_ORDER:
        raise ValueError(f"max_order must be at most {MAX_MOMENT_ORDER}")
    return max_order


def _central_from_sums(x, weights, max_order, weighted, n):
    if weighted:
        mean = cdot(weights, x) / n
    else:
        mean = csum(x) / n
    sums = centered_power_sums(x, weights if weighted else _UNUSED_WEIGHTS,
                               mean, max_order, weighted)
    out = sums / n
    out[0] = 1.0
    if max_order >= 1:
        out[1] = 0.0  # centered first moment is zero by construction
    return out


def _normal_from_sums(x, weights, max_order, weighted, n):
    sums = hermite_power_sums(x, weights if weighted else _UNUSED_WEIGHTS,
                              max_order, weighted)
    scale = 2.0 ** (-0.5 * np.arange(max_order + 1))
    out = sums * scale / n
    out[0] = 1.0
    return out


def central_moments(data, max_order):
    """Sample central moments <(x - mean)^k> for k = 0..max_order.

    Entry 0 is exactly 1 and entry 1 exactly 0.
    """
    x = _samples_of(data)
    max_order = _checked_order(max_order)
    return _central_from_sums(x, _UNUSED_WEIGHTS, max_order, False, x.size)


def normally_ordered_moments(data, max_order):
    """Normally ordered moment estimates <:x^k:> for k = 0..max_order.

    Entry 0 is exactly 1; odd entries are noise around zero for the states
    considered here but are reported as estimated.
    """
    x = _samples_of(data)
    max_order = _checked_order(max_order)
    return _normal_from_sums(x, _UNUSED_WEIGHTS, max_order, False, x.size)


@dataclass(frozen=True)
class MomentSet:
    """Central and normally ordered moments up to one maximum order."""

    central: np.ndarray
    normal: np.ndarray
    n: int

    def __post_init__(self):
        central = np.asarray(self.central, dtype=np.float64)
        normal = np.asarray(self.normal, dtype=np.float64)
        if central.ndim != 1 or normal.shape != central.shape:
            raise ValueError("central and normal must be matching 1-d arrays")
        if central.size == 0:
            raise ValueError("moment arrays must be nonempty")
        if self.n < 1:
            raise ValueError("sample count must be positive")
        for arr in (central, normal):
            arr.flags.writeable = False
        object.__setattr__(self, "central", central)
        object.__setattr__(self, "normal", normal)

    @property
    def max_order(self):
        return self.central.size - 1


def estimate_moments(data, max_order):
    """Estimate central and normally ordered moments in one pass."""
    x = _samples_of(data)
    max_order = _checked_order(max_order)
    return MomentSet(
        central=_central_from_sums(x, _UNUSED_WEIGHTS, max_order, False, x.size),
        normal=_normal_from_sums(x, _UNUSED_WEIGHTS, max_order, False, x.size),
        n=x.size,
    )


@dataclass(frozen=True)
class SqueezingDegrees:
    """Higher-order squeezing degrees q_2n with bootstrap uncertainties."""

    orders: np.ndarray
    q: np.ndarray
    sigma: np.ndarray
    replicates: int

    def __post_init__(self):
        orders = np.asarray(self.orders, dtype=np.int64)
        q = np.asarray(self.q, dtype=np.float64)
        sigma = np.asarray(self.sigma, dtype=np.float64)
        if orders.ndim != 1 or orders.size == 0:
            raise ValueError("orders must be a nonempty 1-d array")
        if q.shape != orders.shape or sigma.shape != orders.shape:
            raise ValueError("q and sigma must match orders")
        if np.any(sigma < 0.0):
            raise ValueError("sigma must be nonnegative")
        for arr in (orders, q, sigma):
            arr.flags.writeable = False
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "sigma", sigma)

    def to_rows(self):
        """(order, q, sigma) tuples, lowest order first."""
        return [
            (int(self.orders[k]), float(self.q[k]), float(self.sigma[k]))
            for k in range(self.orders.size)
        ]


def _q_from_central(central, n_max):
    q = np.empty(n_max)
    for m in range(1, n_max + 1):
        q[m - 1] = central[2 * m] / float(double_factorial(2 * m - 1)) - 1.0
    return q


def hong_mandel_q(data, n_max, replicates=100, seed=0, workers=1):
    """Squeezing degrees q_2, q_4, ..., q_{2 n_max} with bootstrap sigmas.

    Point estimates come from the full dataset; sigma is the standard
    deviation of the estimator over `replicates` bootstrap resamples drawn
    on the reserved substreams of `seed`.  workers parallelizes replicate
    evaluation without changing any value.
    """
    x = _samples_of(data)
    if isinstance(n_max, bool) or not isinstance(n_max, (int, np.integer)):
        raise TypeError("n_max must be an integer")
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    max_order = _checked_order(2 * n_max)
    replicates = int(replicates)
    if replicates < 2:
        raise ValueError("replicates must be at least 2")
    n = x.size
    point = _q_from_central(
        _central_from_sums(x, _UNUSED_WEIGHTS, max_order, False, n), n_max
    )

    def one(r):
        w = bootstrap_counts(seed, r, n)
        return _q_from_central(_central_from_sums(x, w, max_order, True, n), n_max)

    workers = max(1, int(workers))
    if workers == 1:
        rows = [one(r) for r in range(replicates)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(replicates)))
    sigma = np.std(np.vstack(rows), axis=0, ddof=1)
    orders = 2 * np.arange(1, n_max + 1)
    return SqueezingDegrees(orders=orders, q=point, sigma=sigma,
                            replicates=replicates)
