"""Mass-shell geometry: Minkowski algebra, hyperbolic coordinates and
coordinate transforms, and pointwise evaluation of the process generators.

Units fix the speed of light to 1, so the shell is
{p in R^(1+d) : p0 > 0, p0^2 - |p|^2 = m^2}.  A point is addressed either
by cartesian momentum (p0, p) or by hyperbolic coordinates (s, theta) with
p0 = m*cosh(s), p = m*sinh(s)*omega(theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OffShellError, UnsupportedDimensionError

SHELL_RTOL = 1e-10          # mass-shell defect allowed on constructed points
OFFSHELL_INPUT_RTOL = 1e-6  # defect accepted on externally supplied points
UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Model parameters (d, m, gamma); gamma = 0 is the pure Wiener process."""

    d: int
    m: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"spatial dimension must be an integer >= 2, got {self.d}")
        if not self.m > 0:
            raise DomainError(f"mass must be positive, got {self.m}")
        if self.gamma < 0:
            raise DomainError(f"damping coefficient must be >= 0, got {self.gamma}")


@dataclass
class HyperbolicPoint:
    """Point on the shell as (s, theta_1..theta_{d-1}).

    Angles theta_1..theta_{d-2} live in [0, pi), the last one in [0, 2*pi).
    At the apex s = 0 the angles carry no information; by convention they
    are stored as zeros.
    """

    s: float
    theta: np.ndarray

    def __post_init__(self):
        self.theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        if self.s < 0:
            raise DomainError(f"radial coordinate must be >= 0, got {self.s}")

    @property
    def d(self) -> int:
        return self.theta.size + 1


@dataclass
class CartesianMomentum:
    """Momentum four-vector (p0, p) constrained to the shell."""

    p0: float
    p: np.ndarray

    def __post_init__(self):
        self.p = np.atleast_1d(np.asarray(self.p, dtype=float))

    @property
    def d(self) -> int:
        return self.p.size

    def four_vector(self) -> np.ndarray:
        return np.concatenate(([self.p0], self.p))

    def shell_defect(self, params: ModelParams) -> float:
        """|<p,p> - m^2| relative to m^2."""
        val = self.p0 * self.p0 - float(self.p @ self.p)
        return abs(val - params.m**2) / params.m**2


@dataclass
class UnitSpherePoint:
    """Unit vector in R^d, |omega| = 1 within UNIT_NORM_TOL."""

    omega: np.ndarray

    def __post_init__(self):
        self.omega = np.atleast_1d(np.asarray(self.omega, dtype=float))
        nrm = float(np.linalg.norm(self.omega))
        if abs(nrm - 1.0) > 1e-6:
            raise DomainError(f"|omega| = {nrm} deviates from 1 beyond 1e-6")


def minkowski_inner(a, b) -> float:
    """Minkowski inner product a0*b0 - sum_i a_i*b_i of two four-vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size < 2:
        raise DomainError(f"expected equal-length four-vectors, got shapes {a.shape} and {b.shape}")
    return float(a[0] * b[0] - a[1:] @ b[1:])


def sphere_embed(theta: np.ndarray) -> np.ndarray:
    """Embed angles into a unit vector omega(theta) in R^d, d = len(theta)+1.

    Conventions: d = 2 uses (cos t, sin t); d = 3 uses the physics convention
    (sin t1 cos t2, sin t1 sin t2, cos t1); d >= 4 uses the standard recursive
    hyperspherical embedding with the polar angles first.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    d = theta.size + 1
    if d == 2:
        return np.array([math.cos(theta[0]), math.sin(theta[0])])
    if d == 3:
        t, phi = theta
        st = math.sin(t)
        return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(t)])
    out = np.empty(d)
    prod = 1.0
    for k in range(d - 2):
        out[k] = prod * math.cos(theta[k])
        prod *= math.sin(theta[k])
    out[d - 2] = prod * math.cos(theta[d - 1 - 1])
    out[d - 1] = prod * math.sin(theta[d - 2])
    return out


def sphere_angles(omega: np.ndarray) -> np.ndarray:
    """Invert sphere_embed; zero vector on degenerate tails by convention."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    d = omega.size
    if d == 2:
        return np.array([math.atan2(omega[1], omega[0]) % (2 * math.pi)])
    if d == 3:
        t = math.acos(min(1.0, max(-1.0, omega[2])))
        phi = math.atan2(omega[1], omega[0]) % (2 * math.pi)
        return np.array([t, phi])
    theta = np.zeros(d - 1)
    prod = 1.0
    for k in range(d - 2):
        if prod <= 0.0:
            return theta
        c = min(1.0, max(-1.0, omega[k] / prod))
        theta[k] = math.acos(c)
        prod *= math.sin(theta[k])
    theta[d - 2] = math.atan2(omega[d - 1], omega[d - 2]) % (2 * math.pi)
    return theta


def hyp_to_cart(h: HyperbolicPoint, params: ModelParams) -> CartesianMomentum:
    """Map (s, theta) to (m*cosh(s), m*sinh(s)*omega(theta))."""
    if h.d != params.d:
        raise DomainError(f"point has d={h.d} but params have d={params.d}")
    omega = sphere_embed(h.theta)
    return CartesianMomentum(params.m * math.cosh(h.s), params.m * math.sinh(h.s) * omega)


def cart_to_hyp(c: CartesianMomentum, params: ModelParams) -> HyperbolicPoint:
    """Invert hyp_to_cart; s = arccosh(p0/m), angles from the direction of p.

    Rejects points off the shell by more than OFFSHELL_INPUT_RTOL.  At the
    apex (|p| = 0) all angles are set to 0.
    """
    if c.d != params.d:
        raise DomainError(f"point has d={c.d} but params have d={params.d}")
    defect = c.shell_defect(params)
    if defect > OFFSHELL_INPUT_RTOL:
        raise OffShellError(f"input off shell: relative defect {defect:.3e} > {OFFSHELL_INPUT_RTOL}")
    norm_p = float(np.linalg.norm(c.p))
    if norm_p == 0.0:
        return HyperbolicPoint(0.0, np.zeros(params.d - 1))
    ratio = max(1.0, c.p0 / params.m)
    s = math.acosh(ratio)
    return HyperbolicPoint(s, sphere_angles(c.p / norm_p))


def velocity_of(c: CartesianMomentum) -> np.ndarray:
    """Relativistic velocity p/p0; its norm is tanh(s), strictly below 1
    (float64 saturates the bound to 1.0 only past s ~ 18.4)."""
    return c.p / c.p0


def _fd_derivatives(f, x: np.ndarray):
    """Central finite differences: gradient, diagonal and cross second
    derivatives, with step h = 1e-4 * max(1, |x|)."""
    n = x.size
    h = 1e-4 * max(1.0, float(np.linalg.norm(x)))
    grad = np.empty(n)
    hess = np.empty((n, n))
    f0 = f(x)
    for k in range(n):
        xp = x.copy(); xp[k] += h
        xm = x.copy(); xm[k] -= h
        fp, fm = f(xp), f(xm)
        grad[k] = (fp - fm) / (2 * h)
        hess[k, k] = (fp - 2 * f0 + fm) / (h * h)
    for k in range(n):
        for l in range(k + 1, n):
            xpp = x.copy(); xpp[[k, l]] += h
            xmm = x.copy(); xmm[[k, l]] -= h
            xpm = x.copy(); xpm[k] += h; xpm[l] -= h
            xmp = x.copy(); xmp[k] -= h; xmp[l] += h
            hess[k, l] = hess[l, k] = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4 * h * h)
    return grad, hess


def apply_generator(f, c: CartesianMomentum, params: ModelParams, order: str = "wiener",
                    grad=None, hess=None) -> float:
    """Evaluate the cartesian generator of the shell diffusion on f at c.

    order="wiener" gives the pure diffusion generator; order="ou" adds the
    damping terms with the gamma from params.  f takes a four-vector; if
    grad/hess callables are not supplied, central finite differences are
    used.  Only d in {2, 3} is supported; this is a validation tool, not a
    simulation path.
    """
    d = params.d
    if d not in (2, 3):
        raise UnsupportedDimensionError(f"cartesian generator only available for d in {{2, 3}}, got d={d}")
    if order not in ("wiener", "ou"):
        raise DomainError(f"order must be 'wiener' or 'ou', got {order!r}")
    x = c.four_vector()
    if grad is not None and hess is not None:
        g = np.asarray(grad(x), dtype=float)
        H = np.asarray(hess(x), dtype=float)
    else:
        g, H = _fd_derivatives(f, x)

    m2 = params.m**2
    p0 = x[0]
    second = (p0 * p0 - m2) * H[0, 0]
    for i in range(1, d + 1):
        second += (x[i] * x[i] + m2) * H[i, i]
    for k in range(d + 1):
        for l in range(k + 1, d + 1):
            second += 2.0 * x[k] * x[l] * H[k, l]
    first = d * float(x @ g)
    val = (second + first) / (2.0 * m2)
    if order == "ou":
        gam = params.gamma
        val += -gam / (2.0 * m2) * float(x @ g) + gam / (2.0 * p0) * g[0]
    return val
