"""Closed-form invariant densities of the damped shell diffusion, their
normalizers, CDFs, and the first-order adjoint-annihilation check.

All formulas are stated for unit mass; for m != 1 the energy and momentum
densities are obtained by the substitution p -> p/m with the corresponding
1/m Jacobian factor (the radial, speed, and velocity-component densities
are mass-free).  The radial law

    phi_S(s) = N^-1 cosh(s)^-gamma sinh(s)^(d-1),     gamma > d - 1,

with N = Beta(d/2, (gamma-d+1)/2) / 2, pushes forward to the energy law
under p0 = cosh(s) and to the speed law under v = tanh(s); the d = 3
component laws additionally require gamma > 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate
from scipy.special import betaln, gammaln

from .errors import (DomainError, NonNormalizableError, QuadratureError,
                     UnsupportedDimensionError)
from .manifold import ModelParams

KINDS = ("radial_s", "energy_p0", "speed_v", "momentum_component", "velocity_component")


def _logsinh(x: float) -> float:
    if x <= 0.0:
        return -math.inf
    if x < 20.0:
        return math.log(math.sinh(x))
    return x - math.log(2.0) + math.log1p(-math.exp(-2.0 * x))


def _logcosh(x: float) -> float:
    if x < 20.0:
        return math.log(math.cosh(x))
    return x - math.log(2.0) + math.log1p(math.exp(-2.0 * x))


def normalizer_radial(params: ModelParams) -> float:
    """N = Beta(d/2, (gamma-d+1)/2) / 2; shared by the radial, energy and
    speed densities.  Requires gamma > d - 1."""
    d, g = params.d, params.gamma
    if g <= d - 1:
        raise NonNormalizableError(
            f"no invariant density for gamma={g} <= d-1={d - 1}")
    return 0.5 * math.exp(betaln(d / 2.0, (g - d + 1) / 2.0))


def normalizer_radial_quadrature(params: ModelParams) -> float:
    """Defining integral of the normalizer, for cross-checking the closed form."""
    d, g = params.d, params.gamma
    if g <= d - 1:
        raise NonNormalizableError(
            f"no invariant density for gamma={g} <= d-1={d - 1}")
    f = lambda s: math.exp((d - 1) * _logsinh(s) - g * _logcosh(s))
    val, _ = integrate.quad(f, 0.0, np.inf, limit=200)
    return val


def normalizer_component(params: ModelParams) -> float:
    """n = sqrt(pi) Gamma((gamma-2)/2) / Gamma((gamma-1)/2) for the d = 3
    momentum-component density; requires d = 3 and gamma > 2."""
    _require_d3_component(params)
    g = params.gamma
    return math.sqrt(math.pi) * math.exp(gammaln((g - 2) / 2.0) - gammaln((g - 1) / 2.0))


def normalizer_component_quadrature(params: ModelParams) -> float:
    _require_d3_component(params)
    g = params.gamma
    val, _ = integrate.quad(lambda p: (1.0 + p * p) ** (-(g - 1) / 2.0),
                            -np.inf, np.inf, limit=200)
    return val


def _require_d3_component(params: ModelParams):
    if params.d != 3:
        raise UnsupportedDimensionError(
            f"component densities exist only for d=3, got d={params.d}")
    if params.gamma <= 2:
        raise NonNormalizableError(
            f"component densities require gamma > 2, got gamma={params.gamma}")


def _velocity_component_constant(gamma: float) -> float:
    """Gamma(g) / (2^(g-1) Gamma(g/2)^2); symmetric Beta normalizer."""
    return math.exp(gammaln(gamma) - (gamma - 1.0) * math.log(2.0)
                    - 2.0 * gammaln(gamma / 2.0))


def density_radial(params: ModelParams, s) -> float | np.ndarray:
    """Stationary law of the radial coordinate on [0, inf)."""
    N = normalizer_radial(params)
    d, g = params.d, params.gamma
    s_arr = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore"):
        log_q = np.where(s_arr > 0,
                         (d - 1) * _np_logsinh(s_arr) - g * _np_logcosh(s_arr),
                         -np.inf)
    out = np.exp(log_q) / N
    out = np.where(s_arr >= 0, out, 0.0)
    return out if out.ndim else float(out)


def density_energy(params: ModelParams, p0) -> float | np.ndarray:
    """Stationary law of the energy p0 = m cosh(S) on [m, inf)."""
    N = normalizer_radial(params)
    d, g, m = params.d, params.gamma, params.m
    x = np.asarray(p0, dtype=float) / m
    with np.errstate(invalid="ignore"):
        val = np.where(x > 1.0,
                       x ** (-g) * np.where(x > 1.0, x * x - 1.0, 1.0) ** ((d - 2) / 2.0),
                       0.0)
    out = val / (N * m)
    return out if out.ndim else float(out)


def density_speed(params: ModelParams, v) -> float | np.ndarray:
    """Stationary law of the speed |V| = tanh(S) on [0, 1]."""
    N = normalizer_radial(params)
    d, g = params.d, params.gamma
    x = np.asarray(v, dtype=float)
    inside = (x >= 0) & (x <= 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = np.where(inside, x ** (d - 1) * (1.0 - x * x) ** ((g - (d + 1)) / 2.0), 0.0)
    out = val / N
    return out if out.ndim else float(out)


def density_momentum_component(params: ModelParams, p) -> float | np.ndarray:
    """Stationary marginal of one momentum component (d = 3, gamma > 2)."""
    n = normalizer_component(params)
    g, m = params.gamma, params.m
    x = np.asarray(p, dtype=float) / m
    out = (1.0 + x * x) ** (-(g - 1) / 2.0) / (n * m)
    return out if out.ndim else float(out)


def density_velocity_component(params: ModelParams, v) -> float | np.ndarray:
    """Stationary marginal of one velocity component: symmetric Beta-type
    law on [-1, 1] (d = 3, gamma > 2)."""
    _require_d3_component(params)
    g = params.gamma
    c = _velocity_component_constant(g)
    x = np.asarray(v, dtype=float)
    inside = (x >= -1.0) & (x <= 1.0)
    with np.errstate(invalid="ignore"):
        out = np.where(inside, (1.0 - x * x) ** (g / 2.0 - 1.0), 0.0) * c
    return out if out.ndim else float(out)


def _np_logsinh(x):
    x = np.asarray(x, dtype=float)
    small = x < 20.0
    with np.errstate(divide="ignore"):
        out = np.where(small, np.log(np.sinh(np.where(small, x, 1.0))),
                       x - math.log(2.0) + np.log1p(-np.exp(-2.0 * x)))
    return out


def _np_logcosh(x):
    x = np.asarray(x, dtype=float)
    small = x < 20.0
    return np.where(small, np.log(np.cosh(np.where(small, x, 1.0))),
                    x - math.log(2.0) + np.log1p(np.exp(-2.0 * x)))


@dataclass(frozen=True)
class DensitySpec:
    """A named invariant density with support and lazily computed normalizer."""

    kind: str
    params: ModelParams

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown density kind {self.kind!r}")
        # parameter-domain validation happens eagerly
        if self.kind in ("momentum_component", "velocity_component"):
            _require_d3_component(self.params)
        else:
            normalizer_radial(self.params)

    @property
    def support(self) -> tuple[float, float]:
        m = self.params.m
        return {
            "radial_s": (0.0, math.inf),
            "energy_p0": (m, math.inf),
            "speed_v": (0.0, 1.0),
            "momentum_component": (-math.inf, math.inf),
            "velocity_component": (-1.0, 1.0),
        }[self.kind]

    @cached_property
    def normalizer(self) -> float:
        if self.kind == "momentum_component":
            return normalizer_component(self.params)
        if self.kind == "velocity_component":
            return 1.0 / _velocity_component_constant(self.params.gamma)
        return normalizer_radial(self.params)

    @property
    def light_speed_attainable(self) -> bool:
        """True when the speed density does not vanish at v = 1, i.e. the
        particle gets arbitrarily close to light speed with positive
        stationary density (requires gamma > d + 1 to rule out)."""
        return self.params.gamma <= self.params.d + 1

    def pdf(self, x):
        fn = {
            "radial_s": density_radial,
            "energy_p0": density_energy,
            "speed_v": density_speed,
            "momentum_component": density_momentum_component,
            "velocity_component": density_velocity_component,
        }[self.kind]
        return fn(self.params, x)

    def contains(self, x) -> np.ndarray:
        lo, hi = self.support
        x = np.asarray(x, dtype=float)
        return (x >= lo) & (x <= hi)


def cdf(spec: DensitySpec, x: float) -> float:
    """CDF by adaptive quadrature of the density from the support's lower
    end.  cdf(spec, sup support) integrates the full mass, so it must come
    out as 1 up to quadrature error; intermediate values are not clamped."""
    lo, hi = spec.support
    if x <= lo:
        return 0.0
    if math.isfinite(hi) and x >= hi:
        x = hi
    start = lo if math.isfinite(lo) else -np.inf
    end = x if math.isfinite(x) else np.inf
    val, err = integrate.quad(lambda u: spec.pdf(u), start, end, limit=200)
    if err > 1e-6:
        raise QuadratureError(f"cdf quadrature error {err:.2e} at x={x}", partial=val)
    return max(0.0, val)


def cdf_values(spec: DensitySpec, xs: np.ndarray) -> np.ndarray:
    """CDF at many sorted points via incremental segment quadrature."""
    xs = np.asarray(xs, dtype=float)
    if np.any(np.diff(xs) < 0):
        raise DomainError("cdf_values expects sorted input")
    out = np.empty(xs.size)
    prev_x = None
    acc = 0.0
    for i, x in enumerate(xs):
        if prev_x is None:
            acc = cdf(spec, float(x))
        elif x > prev_x:
            seg, _ = integrate.quad(lambda u: spec.pdf(u), prev_x, float(x), limit=200)
            acc += seg
        out[i] = min(1.0, max(0.0, acc))
        prev_x = float(x)
    return out


def adjoint_residual(params: ModelParams, s: float, gamma_override: float | None = None) -> float:
    """Residual of the stationarity identity for the unnormalized radial
    density u(s) = sinh(s)^(d-1) cosh(s)^-gamma:

        u'(s) - (d-1) coth(s) u(s) + gamma tanh(s) u(s)  =  0.

    The derivative is taken by central differences (h = 1e-5), so the exact
    identity shows up as a residual at the finite-difference error level.
    gamma_override substitutes a wrong exponent for negative controls.
    """
    if s <= 0:
        raise DomainError(f"adjoint_residual requires s > 0, got {s}")
    d, g = params.d, params.gamma
    ge = g if gamma_override is None else gamma_override
    u = lambda x: math.exp((d - 1) * _logsinh(x) - ge * _logcosh(x))
    h = 1e-5
    du = (u(s + h) - u(s - h)) / (2.0 * h)
    return du - (d - 1) / math.tanh(s) * u(s) + g * math.tanh(s) * u(s)
