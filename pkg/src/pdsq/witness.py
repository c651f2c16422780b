"""Constructive unboundedness witness for the characteristic function.

For any squeezed state (v_x < 1) mixed over an arbitrary phase
distribution, the characteristic function still grows without bound along
some direction.  The construction is fully checkable:

* cone: V(phi) < 1 strictly inside |phi| < theta_star; pick the smallest n
  whose half-cone pi/(2n) fits strictly inside.
* pigeonhole: among n disjoint intervals of width pi/n covering one period,
  at least one carries probability mass >= 1/n; center the witness there.
* restriction: dropping the rest of the (nonnegative) phase integral and
  bounding the cone integrand from below by its edge value gives

      Phi(|beta| e^{i phi0}) >= exp(eps |beta|^2 / 2) * mass
                             >= exp(eps |beta|^2 / 2) / n

  with eps = 1 - V(pi/(2n)) > 0, which diverges as |beta| grows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import AnalysisError
from .states import (PhaseNoise, SqueezingParams, StateModel, analytic_cf,
                     quadrature_variance)

__all__ = [
    "TabulatedDensity",
    "WitnessCertificate",
    "BoundVerification",
    "interval_mass",
    "cone_order",
    "heavy_interval",
    "certify",
    "verify_bound",
]

_PERIOD = math.pi
_MASS_SLACK = 1e-9
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TabulatedDensity:
    """Piecewise-constant pi-periodic phase density on [-pi/2, pi/2).

    Heights are normalized at construction so the period integrates to 1.
    """

    heights: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=np.float64)
        if h.ndim != 1 or h.size == 0:
            raise ValueError("heights must be a nonempty 1-d array")
        if not np.all(np.isfinite(h)) or np.any(h < 0.0):
            raise ValueError("heights must be finite and nonnegative")
        total = h.sum() * (_PERIOD / h.size)
        if total <= 0.0:
            raise ValueError("density must have positive total mass")
        h = h / total
        h.flags.writeable = False
        object.__setattr__(self, "heights", h)

    def interval_mass(self, center, halfwidth):
        """Exact integral of the density over [center - hw, center + hw]."""
        if halfwidth < 0.0:
            raise ValueError("halfwidth must be nonnegative")
        m = self.heights.size
        width = _PERIOD / m
        edges = -0.5 * _PERIOD + width * np.arange(m + 1)
        cum = np.concatenate([[0.0], np.cumsum(self.heights * width)])

        def cumulative(t):
            # integral from -pi/2 to t, extended periodically
            k, tau = divmod(t + 0.5 * _PERIOD, _PERIOD)
            j = min(int(tau / width), m - 1)
            return k + cum[j] + self.heights[j] * (tau - (edges[j] + 0.5 * _PERIOD))

        return float(cumulative(center + halfwidth) - cumulative(center - halfwidth))


def _wrapped_distance(phi):
    # distance from 0 on the circle of circumference pi
    return abs(math.remainder(phi, _PERIOD))


def interval_mass(noise, center, halfwidth):
    """Probability the (pi-periodized) phase falls within halfwidth of center.

    Closed forms: delta and uniform are exact by inspection; a Gaussian sums
    normal CDF differences over the contributing period images.  Objects
    exposing their own interval_mass (e.g. TabulatedDensity) are deferred to.
    """
    if hasattr(noise, "interval_mass"):
        return noise.interval_mass(center, halfwidth)
    if not isinstance(noise, PhaseNoise):
        raise TypeError("noise must be a PhaseNoise or provide interval_mass")
    halfwidth = float(halfwidth)
    if halfwidth < 0.0:
        raise ValueError("halfwidth must be nonnegative")
    if halfwidth >= 0.5 * _PERIOD:
        return 1.0
    if noise.kind == "uniform":
        return 2.0 * halfwidth / _PERIOD
    if noise.kind == "delta" or noise.sigma == 0.0:
        return 1.0 if _wrapped_distance(center) <= halfwidth else 0.0
    sigma = noise.sigma
    reach = 8.0 * sigma + abs(center) + halfwidth
    kmax = int(reach / _PERIOD) + 1
    total = 0.0
    for k in range(-kmax, kmax + 1):
        lo = (center - halfwidth + k * _PERIOD) / sigma
        hi = (center + halfwidth + k * _PERIOD) / sigma
        total += float(ndtr(hi) - ndtr(lo))
    return min(total, 1.0)


def cone_order(params):
    """Smallest n whose half-cone pi/(2n) sits strictly inside the squeezing cone.

    The cone edge theta_star solves V(theta_star) = 1.  Requires v_x < 1.
    """
    if not isinstance(params, SqueezingParams):
        raise TypeError("params must be SqueezingParams")
    if params.v_x >= 1.0:
        raise AnalysisError("not squeezed, witness inapplicable")
    theta_star = math.asin(math.sqrt((1.0 - params.v_x) / (params.v_p - params.v_x)))
    n = int(_PERIOD / (2.0 * theta_star)) + 1
    while not _PERIOD / (2.0 * n) < theta_star:  # guard the strict inequality
        n += 1
    return n


def heavy_interval(noise, n):
    """Center and mass of a heaviest width-pi/n interval of the phase law.

    Scans 10 n candidate centers per period (these include the centers of
    the n disjoint pigeonhole intervals, so the scan alone already achieves
    mass >= 1/n), breaks ties toward the smallest |center|, then refines
    with a golden-section search between the neighboring grid points.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError("n must be an integer")
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    halfwidth = 0.5 * _PERIOD / n
    count = 10 * n
    step = _PERIOD / count
    # indices run symmetrically so that center 0 is exactly representable
    centers = step * (np.arange(count) - 5 * n)
    masses = np.array([interval_mass(noise, c, halfwidth) for c in centers])
    best = masses.max()
    ties = np.flatnonzero(masses == best)
    pick = ties[np.argmin([_wrapped_distance(centers[i]) for i in ties])]
    phi0 = float(centers[pick])
    mass = float(best)

    # golden-section polish between the flanking grid points
    lo, hi = phi0 - step, phi0 + step
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = interval_mass(noise, c, halfwidth)
    fd = interval_mass(noise, d, halfwidth)
    for _ in range(80):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = interval_mass(noise, c, halfwidth)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = interval_mass(noise, d, halfwidth)
    for cand, val in ((c, fc), (d, fd)):
        if val > mass:
            phi0, mass = float(cand), float(val)
    return phi0, mass


@dataclass(frozen=True)
class WitnessCertificate:
    """The (n, phi0, eps) triple plus the heavy-interval mass it certifies."""

    n: int
    phi0: float
    eps: float
    mass: float

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise TypeError("n must be an integer")
        object.__setattr__(self, "n", int(self.n))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        for name in ("phi0", "eps", "mass"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if self.eps <= 0.0:
            raise ValueError("eps must be positive")
        if self.mass < 1.0 / self.n - _MASS_SLACK:
            raise ValueError("mass must be at least 1/n")
        if self.mass > 1.0 + _MASS_SLACK:
            raise ValueError("mass cannot exceed 1")

    def to_dict(self):
        return {"n": self.n, "phi0": self.phi0, "eps": self.eps, "mass": self.mass}

    @classmethod
    def from_dict(cls, d):
        return cls(n=d["n"], phi0=d["phi0"], eps=d["eps"], mass=d["mass"])


def certify(model, order=None):
    """Assemble the witness certificate for a squeezed phase-diffused state.

    order overrides the cone subdivision (must still fit inside the cone);
    larger orders trade interval mass for a stronger exponent eps.
    """
    if not isinstance(model, StateModel):
        raise TypeError("model must be a StateModel")
    n_min = cone_order(model.params)
    n = n_min if order is None else int(order)
    if n < n_min:
        raise ValueError(f"order must be at least the cone order {n_min}")
    halfwidth = 0.5 * _PERIOD / n
    eps = 1.0 - float(quadrature_variance(model.params, halfwidth))
    if eps <= 0.0:  # unreachable once n >= cone order; guards rounding
        raise AnalysisError("cone edge variance reaches 1; no positive margin")
    phi0, mass = heavy_interval(model.noise, n)
    return WitnessCertificate(n=n, phi0=phi0, eps=eps, mass=mass)


@dataclass(frozen=True)
class BoundVerification:
    """Pointwise comparison of the analytic CF against its certified bound."""

    certificate: WitnessCertificate
    betas: np.ndarray
    values: np.ndarray
    mass_bounds: np.ndarray
    order_bounds: np.ndarray

    def __post_init__(self):
        betas = np.asarray(self.betas, dtype=np.float64)
        arrays = {}
        for name in ("values", "mass_bounds", "order_bounds"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != betas.shape:
                raise ValueError("arrays must match the beta grid")
            arrays[name] = arr
        for arr in (betas, *arrays.values()):
            arr.flags.writeable = False
        object.__setattr__(self, "betas", betas)
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)

    @property
    def margins(self):
        return self.values - self.mass_bounds

    def min_margin(self):
        return float(self.margins.min())

    def to_dict(self):
        return {
            "certificate": self.certificate.to_dict(),
            "points": [
                {
                    "beta": float(self.betas[k]),
                    "value": float(self.values[k]),
                    "mass_bound": float(self.mass_bounds[k]),
                    "order_bound": float(self.order_bounds[k]),
                    "margin": float(self.values[k] - self.mass_bounds[k]),
                }
                for k in range(self.betas.size)
            ],
        }


def verify_bound(model, cert, betas, rel_tol=1e-9):
    """Check the certified lower bounds against the integrated CF.

    For each amplitude b the CF at b e^{i phi0} must reach both
    exp(eps b^2/2) * mass and exp(eps b^2/2) / n, up to a 1e-9 grace.  A
    violation raises AnalysisError: the bound is a theorem, so failure
    means an implementation bug, not a property of the model.
    """
    if not isinstance(cert, WitnessCertificate):
        raise TypeError("cert must be a WitnessCertificate")
    halfwidth = 0.5 * _PERIOD / cert.n
    eps_model = 1.0 - float(quadrature_variance(model.params, halfwidth))
    if not math.isclose(eps_model, cert.eps, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError("certificate eps does not match the model")
    betas = np.asarray(betas, dtype=np.float64)
    if betas.ndim != 1 or betas.size == 0:
        raise ValueError("betas must be a nonempty 1-d array")
    if not np.all(np.isfinite(betas)) or np.any(betas < 0.0):
        raise ValueError("betas must be finite and nonnegative")
    direction = cmath.exp(1j * cert.phi0)
    values = np.empty(betas.size)
    mass_bounds = np.empty(betas.size)
    order_bounds = np.empty(betas.size)
    for k, b in enumerate(betas):
        value = analytic_cf(model, b * direction, rel_tol).real
        grow = math.exp(0.5 * cert.eps * b * b)
        values[k] = value
        mass_bounds[k] = grow * cert.mass
        order_bounds[k] = grow / cert.n
        if value < mass_bounds[k] - _MASS_SLACK or value < order_bounds[k] - _MASS_SLACK:
            raise AnalysisError(
                f"certified bound violated at beta={float(b)!r}: "
                f"Phi={value!r} below {mass_bounds[k]!r}"
            )
    return BoundVerification(
        certificate=cert,
        betas=betas,
        values=values,
        mass_bounds=mass_bounds,
        order_bounds=order_bounds,
    )
