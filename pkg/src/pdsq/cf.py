"""Empirical characteristic-function criterion.

For a classical state the normally ordered characteristic function obeys
|Phi(beta)| <= 1 everywhere.  The estimator here is

    Phi_hat(beta) = exp(beta^2 / 2) * (1/N) sum_j exp(i beta x_j)

whose standard error follows from the phasor variance:

    sigma(beta)^2 = (exp(beta^2) - |Phi_hat(beta)|^2) / N   (clamped at 0).

A point witnesses nonclassicality when s = (|Phi_hat| - 1) / sigma clears
the significance threshold.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernels import phasor_sums
from .sampler import QuadratureDataset

__all__ = ["CfCurve", "SignificanceReport", "empirical_cf", "cf_scan", "significance"]

_DEFAULT_GRID_MAX = 4.0
_DEFAULT_GRID_POINTS = 200


def default_grid():
    """The standard amplitude grid: 200 points spanning [0, 4]."""
    return np.linspace(0.0, _DEFAULT_GRID_MAX, _DEFAULT_GRID_POINTS)


def _samples_of(data):
    if isinstance(data, QuadratureDataset):
        return data.samples
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("samples must be a nonempty 1-d array")
    return x


def empirical_cf(data, beta):
    """Estimate the normally ordered CF at one real amplitude.

    Returns (value, sigma).  At beta = 0 the estimator is exactly 1 with
    zero uncertainty.  |beta| must stay below ~26 so exp(beta^2) is finite.
    """
    x = _samples_of(data)
    beta = float(beta)
    if not math.isfinite(beta):
        raise ValueError("beta must be finite")
    if beta == 0.0:
        return complex(1.0, 0.0), 0.0
    if beta * beta >= 709.0:
        raise ValueError("beta too large: exp(beta^2) overflows")
    n = x.size
    sc, ss = phasor_sums(x, beta)
    scale = math.exp(beta * beta / 2.0)
    value = complex(scale * sc / n, scale * ss / n)
    var = (math.exp(beta * beta) - abs(value) ** 2) / n
    sigma = math.sqrt(var) if var > 0.0 else 0.0
    return value, sigma


@dataclass(frozen=True)
class CfCurve:
    """Empirical CF estimates along an amplitude grid."""

    betas: np.ndarray
    values: np.ndarray
    sigmas: np.ndarray
    n: int

    def __post_init__(self):
        betas = np.asarray(self.betas, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.complex128)
        sigmas = np.asarray(self.sigmas, dtype=np.float64)
        if betas.ndim != 1 or betas.size == 0:
            raise ValueError("betas must be a nonempty 1-d array")
        if values.shape != betas.shape or sigmas.shape != betas.shape:
            raise ValueError("values and sigmas must match the grid shape")
        if np.any(sigmas < 0.0):
            raise ValueError("sigmas must be nonnegative")
        if self.n < 1:
            raise ValueError("sample count must be positive")
        for arr in (betas, values, sigmas):
            arr.flags.writeable = False
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sigmas", sigmas)

    def magnitudes(self):
        return np.abs(self.values)

    def to_rows(self):
        """Plain-float rows (beta, re, im, abs, sigma), one per grid point."""
        mags = self.magnitudes()
        return [
            (
                float(self.betas[k]),
                float(self.values[k].real),
                float(self.values[k].imag),
                float(mags[k]),
                float(self.sigmas[k]),
            )
            for k in range(self.betas.size)
        ]

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("beta,re,im,abs,sigma\n")
            for row in self.to_rows():
                fh.write(",".join(repr(v) for v in row) + "\n")

    def write_json(self, path):
        rows = self.to_rows()
        payload = {
            "n": self.n,
            "points": [
                {"beta": b, "re": re, "im": im, "abs": ab, "sigma": sg}
                for b, re, im, ab, sg in rows
            ],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def cf_scan(data, grid=None, workers=1):
    """Evaluate the empirical CF over an amplitude grid.

    The grid must be finite, nonnegative, and strictly increasing.  workers
    only parallelizes across grid points; values are identical either way.
    """
    x = _samples_of(data)
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty 1-d array")
    if not np.all(np.isfinite(grid)):
        raise ValueError("grid must be finite")
    if grid[0] < 0.0:
        raise ValueError("grid amplitudes must be nonnegative")
    if grid.size > 1 and np.any(np.diff(grid) <= 0.0):
        raise ValueError("grid must be strictly increasing")
    workers = max(1, int(workers))

    def one(beta):
        return empirical_cf(x, beta)

    if workers == 1 or grid.size == 1:
        results = [one(b) for b in grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, grid))
    values = np.array([v for v, _ in results], dtype=np.complex128)
    sigmas = np.array([s for _, s in results], dtype=np.float64)
    return CfCurve(betas=grid, values=values, sigmas=sigmas, n=x.size)


@dataclass(frozen=True)
class SignificanceReport:
    """Most significant classicality violation along a CF curve."""

    beta_star: float
    s_star: float
    threshold: float
    detected: bool

    def to_dict(self):
        return {
            "beta_star": self.beta_star,
            "s_star": self.s_star,
            "threshold": self.threshold,
            "detected": self.detected,
        }


def significance(curve, threshold=10.0):
    """Scan a curve for its largest s = (|Phi| - 1) / sigma.

    Grid points with sigma = 0 (the origin) carry no evidence and are
    skipped; a curve with no usable points reports s_star = -inf.
    """
    if not isinstance(curve, CfCurve):
        raise TypeError("curve must be a CfCurve")
    threshold = float(threshold)
    if not math.isfinite(threshold) or threshold <= 0.0:
        raise ValueError("threshold must be positive")
    mags = curve.magnitudes()
    best_s = -math.inf
    best_beta = float(curve.betas[0])
    for k in range(curve.betas.size):
        if curve.sigmas[k] <= 0.0:
            continue
        s = float((mags[k] - 1.0) / curve.sigmas[k])
        if s > best_s:
            best_s = s
            best_beta = float(curve.betas[k])
    return SignificanceReport(
        beta_star=best_beta,
        s_star=best_s,
        threshold=threshold,
        detected=bool(best_s >= threshold),
    )
