"""State models and closed-form references for phase-diffused squeezed vacuum.

A squeezed vacuum state is described by its two quadrature variances
(v_x, v_p) with v_x * v_p >= 1 (vacuum units: vacuum variance = 1).  Phase
diffusion mixes rotated copies of that state over a random phase phi drawn
from a noise law p(phi).  Everything measurable through a single homodyne
quadrature then follows from the rotated variance

    V(theta) = v_x cos(theta)^2 + v_p sin(theta)^2

averaged over p(phi).  This module holds the model types plus the analytic
quantities (characteristic function of the P distribution, central and
normally ordered moments, Wigner function) used as references for the Monte
Carlo estimators elsewhere in the package.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import QuadratureError
from .numerics import double_factorial

# Slack on the uncertainty product so values entered at double precision
# (e.g. 0.36 * 5.28 computed elsewhere) are not rejected by rounding.
HEISENBERG_SLACK = 1e-12

# A zero-mean Gaussian carries ~1 - 1e-15 of its mass inside +-8 sigma;
# integrals are truncated there.
_GAUSS_RANGE = 8.0

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class SqueezingParams:
    """Quadrature variances of the squeezed state, canonically ordered.

    Construction swaps the two values if needed so that v_x <= v_p, and
    rejects pairs whose uncertainty product falls below 1 (vacuum units).
    """

    v_x: float
    v_p: float

    def __post_init__(self):
        vx, vp = float(self.v_x), float(self.v_p)
        if not (math.isfinite(vx) and math.isfinite(vp)) or vx <= 0.0 or vp <= 0.0:
            raise ValueError(f"variances must be finite and positive, got ({vx}, {vp})")
        if vx > vp:
            vx, vp = vp, vx
        if vx * vp < 1.0 - HEISENBERG_SLACK:
            raise ValueError(
                f"uncertainty product v_x*v_p = {vx * vp:.12g} is below 1")
        object.__setattr__(self, "v_x", vx)
        object.__setattr__(self, "v_p", vp)

    @property
    def squeezed(self) -> bool:
        """True when the minimum variance dips below the vacuum level."""
        return self.v_x < 1.0


@dataclass(frozen=True)
class PhaseNoise:
    """Phase noise law applied to the squeezed state.

    kind is one of "delta" (no diffusion), "gaussian" (zero-mean normal with
    standard deviation sigma, stored in radians), or "uniform" (flat over one
    half-period pi).  Use the classmethods to construct Gaussian noise with
    an explicit angle unit; the raw constructor takes radians.
    """

    kind: str
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in ("delta", "gaussian", "uniform"):
            raise ValueError(f"unknown phase noise kind {self.kind!r}")
        s = float(self.sigma)
        if not math.isfinite(s) or s < 0.0:
            raise ValueError(f"sigma must be finite and nonnegative, got {s}")
        if self.kind != "gaussian" and s != 0.0:
            raise ValueError(f"sigma is only meaningful for gaussian noise, got {s}")
        object.__setattr__(self, "sigma", s)

    @classmethod
    def delta(cls) -> "PhaseNoise":
        return cls("delta")

    @classmethod
    def gaussian(cls, sigma: float, unit: str) -> "PhaseNoise":
        """Gaussian noise; unit must be given explicitly as "rad" or "deg"."""
        if unit == "rad":
            return cls("gaussian", float(sigma))
        if unit == "deg":
            return cls("gaussian", math.radians(float(sigma)))
        raise ValueError(f"unit must be 'rad' or 'deg', got {unit!r}")

    @classmethod
    def uniform(cls) -> "PhaseNoise":
        return cls("uniform")


@dataclass(frozen=True)
class StateModel:
    """A squeezed vacuum state together with its phase noise law."""

    params: SqueezingParams
    noise: PhaseNoise

    def to_dict(self) -> dict:
        return {
            "v_x": self.params.v_x,
            "v_p": self.params.v_p,
            "noise": self.noise.kind,
            "sigma": self.noise.sigma,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StateModel":
        return cls(SqueezingParams(d["v_x"], d["v_p"]),
                   PhaseNoise(d["noise"], d.get("sigma", 0.0)))


def quadrature_variance(params: SqueezingParams, theta):
    """Variance of the quadrature at angle theta (radians) for a fixed state.

    Accepts scalars or arrays; pi-periodic in theta; ranges over
    [v_x, v_p] with the minimum at theta = 0.
    """
    c = np.cos(theta)
    s = np.sin(theta)
    out = params.v_x * c * c + params.v_p * s * s
    return float(out) if np.isscalar(theta) or np.ndim(out) == 0 else out


def effective_variance(model: StateModel) -> float:
    """Minimum quadrature variance left after phase averaging.

    For Gaussian noise of width sigma the variance at the squeezing angle is
        (v_x + v_p)/2 - (v_p - v_x)/2 * exp(-2 sigma^2),
    which reduces to v_x at sigma = 0 and to the arithmetic mean for
    uniformly distributed phase.
    """
    p = model.params
    mean = 0.5 * (p.v_x + p.v_p)
    half_span = 0.5 * (p.v_p - p.v_x)
    if model.noise.kind == "uniform":
        return mean
    s = model.noise.sigma
    if s == 0.0:
        return p.v_x
    return mean - half_span * math.exp(-2.0 * s * s)


def phase_average(noise: PhaseNoise, f, rel_tol: float = 1e-9,
                  center: float = 0.0) -> float:
    """Average f(phi) over the phase noise law by adaptive quadrature.

    f must be pi-periodic for the result to be meaningful for the uniform
    law.  center hints where the integrand is largest (used to place the
    uniform law's integration window and a quadrature breakpoint).  Raises
    QuadratureError if the adaptive rule fails to converge to rel_tol.
    """
    kind = noise.kind
    if kind == "delta" or (kind == "gaussian" and noise.sigma == 0.0):
        return float(f(0.0))
    if kind == "gaussian":
        s = noise.sigma
        norm = 1.0 / (s * _SQRT_TWO_PI)

        def integrand(phi):
            return norm * math.exp(-0.5 * (phi / s) ** 2) * f(phi)

        lo, hi = -_GAUSS_RANGE * s, _GAUSS_RANGE * s
        pts = [p for p in (center, -center) if lo < p < hi] or None
    else:
        def integrand(phi):
            return f(phi) / math.pi

        lo, hi = center - math.pi / 2.0, center + math.pi / 2.0
        pts = [center]
    out = quad(integrand, lo, hi, epsabs=0.0, epsrel=rel_tol, limit=200,
               points=pts, full_output=1)
    if len(out) > 3:
        raise QuadratureError(f"phase average did not converge: {out[3]}")
    return float(out[0])


def analytic_cf(model: StateModel, beta, rel_tol: float = 1e-9) -> complex:
    """Characteristic function of the P distribution at complex argument beta.

    For a fixed squeezing phase phi the single-state value is
        exp{ |beta|^2/2 * (1 - V(arg(beta) - phi)) },
    and the phase-diffused value is its average over the noise law.  The
    result exceeds 1 in modulus somewhere iff no proper P density exists.
    Always real and positive for these states; returned as complex for
    generality.  Exact 1 at beta = 0.
    """
    b = complex(beta)
    r2 = b.real * b.real + b.imag * b.imag
    if r2 == 0.0:
        return complex(1.0, 0.0)
    ang = cmath.phase(b)
    p = model.params

    def f(phi):
        return math.exp(0.5 * r2 * (1.0 - quadrature_variance(p, ang - phi)))

    # Peak of f sits where V is smallest, i.e. phi = ang (mod pi).
    peak = math.remainder(ang, math.pi)
    return complex(phase_average(model.noise, f, rel_tol, center=peak), 0.0)


def analytic_central_moment(model: StateModel, k: int, theta: float = 0.0,
                            rel_tol: float = 1e-9) -> float:
    """Central moment <(x - <x>)^k> of the quadrature at angle theta.

    The state is symmetric, so odd moments vanish exactly and
        <x^{2n}> = (2n-1)!! * <V(theta - phi)^n>_phi.
    Closed form for delta noise; adaptive quadrature otherwise.
    """
    if k < 0:
        raise ValueError(f"moment order must be nonnegative, got {k}")
    if k % 2:
        return 0.0
    if k == 0:
        return 1.0
    n = k // 2
    p = model.params
    val = phase_average(model.noise,
                        lambda phi: quadrature_variance(p, theta - phi) ** n,
                        rel_tol, center=math.remainder(theta, math.pi))
    return double_factorial(k - 1) * val


def analytic_normally_ordered_moment(model: StateModel, k: int,
                                     theta: float = 0.0,
                                     rel_tol: float = 1e-9) -> float:
    """Normally ordered moment <:x^k:> of the quadrature at angle theta.

    Same structure as the central moments with V replaced by V - 1:
        <:x^{2n}:> = (2n-1)!! * <(V(theta - phi) - 1)^n>_phi.
    Negative values witness nonclassicality at order 2.
    """
    if k < 0:
        raise ValueError(f"moment order must be nonnegative, got {k}")
    if k % 2:
        return 0.0
    if k == 0:
        return 1.0
    n = k // 2
    p = model.params
    val = phase_average(
        model.noise,
        lambda phi: (quadrature_variance(p, theta - phi) - 1.0) ** n,
        rel_tol, center=math.remainder(theta, math.pi))
    return double_factorial(k - 1) * val


def wigner(model: StateModel, x: float, p: float,
           rel_tol: float = 1e-9) -> float:
    """Wigner function of the phase-diffused state at phase-space point (x, p).

    Each fixed-phase component is the rotated Gaussian
        exp(-x_phi^2/(2 v_x) - p_phi^2/(2 v_p)) / (2 pi sqrt(v_x v_p)),
    with (x_phi, p_phi) the point rotated by -phi.  Normalized to 1 over the
    plane; positive everywhere (these mixtures stay Gaussian-positive).
    """
    pars = model.params
    norm = 1.0 / (2.0 * math.pi * math.sqrt(pars.v_x * pars.v_p))

    def f(phi):
        c, s = math.cos(phi), math.sin(phi)
        xr = x * c + p * s
        pr = p * c - x * s
        return norm * math.exp(-0.5 * (xr * xr / pars.v_x + pr * pr / pars.v_p))

    peak = math.remainder(math.atan2(p, x), math.pi)
    return phase_average(model.noise, f, rel_tol, center=peak)
