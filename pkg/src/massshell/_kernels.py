"""Hot inner loops for path integration.

Every kernel is written as plain scalar Python over numpy arrays and
compiled with numba when available.  Setting the environment variable
MASSSHELL_NUMBA=0 (or numba being absent) selects the interpreted
fallback, which runs the identical code paths.  Kernels consume
pre-drawn standard normals, so a backend switch never changes the
random stream.

Status codes returned by the path kernels:
    0  success
    1  implicit solve failed (no bracket / no convergence)
    2  positivity violated at an accepted step
    3  coordinate singularity (cartesian schemes, r or R below 1e-10)
"""

import math
import os

EPS_LO = 1e-12
_COTH1 = 1.0 / math.tanh(1.0)


def _numba_requested() -> bool:
    flag = os.environ.get("MASSSHELL_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


NUMBA_ENABLED = False
if _numba_requested():
    try:
        from numba import njit as _njit

        _jit = _njit(cache=True, nogil=True)
        NUMBA_ENABLED = True
    except ImportError:
        _jit = lambda f: f
else:
    _jit = lambda f: f


@_jit
def bem_solve(s_prev, dw, dt, c_coth, c_tanh, newton_tol, newton_max_iter):
    """One backward Euler-Maruyama solve for the radial SDE.

    Finds the root x > 0 of  F(x) = x - (c_coth*coth(x) - c_tanh*tanh(x))*dt
    - s_prev - dw.  F is strictly increasing (the drift is decreasing), so
    the positive root is unique.  Newton from the drift-free guess, with a
    bisection fallback whenever Newton leaves the half-line or stalls.

    Returns (root, status): status 0 = Newton, 1 = bisection, 2 = failure.
    """
    rhs = s_prev + dw
    x = rhs if rhs > EPS_LO else EPS_LO
    for _ in range(newton_max_iter):
        th = math.tanh(x)
        cth = 1.0 / th
        bval = c_coth * cth - c_tanh * th
        fval = x - bval * dt - rhs
        if abs(fval) <= newton_tol and x > 0.0:
            return x, 0
        csch2 = cth * cth - 1.0
        sech2 = 1.0 - th * th
        fprime = 1.0 + (c_coth * csch2 + c_tanh * sech2) * dt
        x_new = x - fval / fprime
        if not (x_new > 0.0 and math.isfinite(x_new)):
            break
        x = x_new

    # bisection on (EPS_LO, hi); hi bounds the root since b is decreasing
    b_bound = c_coth * _COTH1
    if b_bound < 0.0:
        b_bound = 0.0
    lo = EPS_LO
    hi = s_prev + abs(dw) + b_bound * dt + 10.0
    th = math.tanh(lo)
    f_lo = lo - (c_coth / th - c_tanh * th) * dt - rhs
    th = math.tanh(hi)
    f_hi = hi - (c_coth / th - c_tanh * th) * dt - rhs
    expansions = 0
    while f_lo * f_hi > 0.0 and expansions < 2:
        hi *= 4.0
        th = math.tanh(hi)
        f_hi = hi - (c_coth / th - c_tanh * th) * dt - rhs
        expansions += 1
    if f_lo * f_hi > 0.0:
        return -1.0, 2
    x = 0.5 * (lo + hi)
    for _ in range(400):
        x = 0.5 * (lo + hi)
        th = math.tanh(x)
        fval = x - (c_coth / th - c_tanh * th) * dt - rhs
        if abs(fval) <= newton_tol:
            return x, 1
        if fval * f_lo > 0.0:
            lo = x
            f_lo = fval
        else:
            hi = x
        if hi - lo <= 1e-16 * hi:
            break
    # polish with guarded Newton from the bisection midpoint
    for _ in range(8):
        th = math.tanh(x)
        cth = 1.0 / th
        fval = x - (c_coth * cth - c_tanh * th) * dt - rhs
        if abs(fval) <= newton_tol:
            return x, 1
        csch2 = cth * cth - 1.0
        sech2 = 1.0 - th * th
        fprime = 1.0 + (c_coth * csch2 + c_tanh * sech2) * dt
        x_new = x - fval / fprime
        if not (x_new > 0.0 and math.isfinite(x_new)):
            break
        x = x_new
    th = math.tanh(x)
    fval = x - (c_coth / th - c_tanh * th) * dt - rhs
    if abs(fval) <= 1e-10 and x > 0.0:
        return x, 1
    return -1.0, 2


@_jit
def radial_path(s0, dt, n_steps, dw, c_coth, c_tanh, newton_tol, newton_max_iter,
                out, record_full):
    """Integrate one radial path; dw holds pre-scaled noise increments.

    Returns (s_final, s_min, n_bisect, status).  With record_full, out must
    have length n_steps + 1 and receives the whole trajectory.
    """
    s = s0
    s_min = s0
    n_bisect = 0
    if record_full:
        out[0] = s0
    for k in range(n_steps):
        x, st = bem_solve(s, dw[k], dt, c_coth, c_tanh, newton_tol, newton_max_iter)
        if st == 2:
            return s, s_min, n_bisect, 1
        if not x > 0.0:
            return s, s_min, n_bisect, 2
        if st == 1:
            n_bisect += 1
        s = x
        if s < s_min:
            s_min = s
        if record_full:
            out[k + 1] = s
    return s, s_min, n_bisect, 0


@_jit
def _clock_rate(s, m):
    """Sphere-clock integrand (m sinh s)^-2; 0 beyond the overflow range."""
    if s > 300.0:
        return 0.0
    sh = m * math.sinh(s)
    return 1.0 / (sh * sh)


@_jit
def sphere_apply(omega, z, d_tau):
    """In-place projected-increment step on the unit sphere.

    omega <- normalize(omega + (I - omega omega^T) dB - (d-1)/2 omega d_tau)
    with dB = sqrt(d_tau) * z.
    """
    d = omega.shape[0]
    if d_tau <= 0.0:
        return
    sq = math.sqrt(d_tau)
    dot = 0.0
    for i in range(d):
        dot += omega[i] * z[i]
    coef = 1.0 - 0.5 * (d - 1) * d_tau - sq * dot
    nrm2 = 0.0
    for i in range(d):
        omega[i] = omega[i] * coef + sq * z[i]
        nrm2 += omega[i] * omega[i]
    if nrm2 > 0.0:
        inv = 1.0 / math.sqrt(nrm2)
        for i in range(d):
            omega[i] *= inv


@_jit
def sphere_path(omega, d_taus, z):
    """Drive the sphere stepper through a sequence of clock increments."""
    for k in range(d_taus.shape[0]):
        sphere_apply(omega, z[k], d_taus[k])


@_jit
def momentum_path(s0, omega, dt, n_steps, dw, z_sph, c_coth, c_tanh, m,
                  newton_tol, newton_max_iter, s_out, om_out, record_full):
    """Skew-product step: radial BEM, trapezoidal clock, sphere increment.

    omega is advanced in place; with record_full, s_out (n_steps+1,) and
    om_out (n_steps+1, d) receive the trajectory.  Returns
    (s_final, s_min, tau_total, n_bisect, status).
    """
    d = omega.shape[0]
    s = s0
    s_min = s0
    tau = 0.0
    n_bisect = 0
    g_prev = _clock_rate(s, m)
    if record_full:
        s_out[0] = s0
        for i in range(d):
            om_out[0, i] = omega[i]
    for k in range(n_steps):
        x, st = bem_solve(s, dw[k], dt, c_coth, c_tanh, newton_tol, newton_max_iter)
        if st == 2:
            return s, s_min, tau, n_bisect, 1
        if not x > 0.0:
            return s, s_min, tau, n_bisect, 2
        if st == 1:
            n_bisect += 1
        g_new = _clock_rate(x, m)
        d_tau = 0.5 * (g_prev + g_new) * dt
        tau += d_tau
        g_prev = g_new
        s = x
        if s < s_min:
            s_min = s
        sphere_apply(omega, z_sph[k], d_tau)
        if record_full:
            s_out[k + 1] = s
            for i in range(d):
                om_out[k + 1, i] = omega[i]
    return s, s_min, tau, n_bisect, 0


@_jit
def cartesian_path_d2(p, dt, n_steps, z, m, gamma, out, record_full):
    """Explicit Euler-Maruyama for the d = 2 cartesian shell SDE.

    p is the state (p0, p1, p2), advanced in place.  Returns (status,
    failed_step); status 3 marks the removable singularity r < 1e-10.
    """
    sq = math.sqrt(dt)
    a = (2.0 - gamma) / (2.0 * m * m)
    if record_full:
        for i in range(3):
            out[0, i] = p[i]
    for k in range(n_steps):
        r = math.sqrt(p[1] * p[1] + p[2] * p[2])
        if r < 1e-10:
            return 3, k
        dw1 = sq * z[k, 0]
        dw2 = sq * z[k, 1]
        p0 = p[0] + (a * p[0] + gamma / (2.0 * p[0])) * dt + (r / m) * dw1
        p1 = p[1] + a * p[1] * dt + (p[0] * p[1] / (m * r)) * dw1 - (p[2] / r) * dw2
        p2 = p[2] + a * p[2] * dt + (p[0] * p[2] / (m * r)) * dw1 + (p[1] / r) * dw2
        p[0] = p0
        p[1] = p1
        p[2] = p2
        if record_full:
            for i in range(3):
                out[k + 1, i] = p[i]
    return 0, n_steps


@_jit
def cartesian_path_d3(p, dt, n_steps, z, m, gamma, out, record_full):
    """Explicit Euler-Maruyama for the d = 3 cartesian shell SDE."""
    sq = math.sqrt(dt)
    a = (3.0 - gamma) / (2.0 * m * m)
    if record_full:
        for i in range(4):
            out[0, i] = p[i]
    for k in range(n_steps):
        r = math.sqrt(p[1] * p[1] + p[2] * p[2])
        big_r = math.sqrt(p[1] * p[1] + p[2] * p[2] + p[3] * p[3])
        if r < 1e-10 or big_r < 1e-10:
            return 3, k
        dw1 = sq * z[k, 0]
        dw2 = sq * z[k, 1]
        dw3 = sq * z[k, 2]
        p0 = p[0] + (a * p[0] + gamma / (2.0 * p[0])) * dt + (big_r / m) * dw1
        p1 = (p[1] + a * p[1] * dt + (p[0] * p[1] / (m * big_r)) * dw1
              + (p[1] * p[3] / (r * big_r)) * dw2 - (p[2] / r) * dw3)
        p2 = (p[2] + a * p[2] * dt + (p[0] * p[2] / (m * big_r)) * dw1
              + (p[2] * p[3] / (r * big_r)) * dw2 + (p[1] / r) * dw3)
        p3 = (p[3] + a * p[3] * dt + (p[0] * p[3] / (m * big_r)) * dw1
              - (r / big_r) * dw2)
        p[0] = p0
        p[1] = p1
        p[2] = p2
        p[3] = p3
        if record_full:
            for i in range(4):
                out[k + 1, i] = p[i]
    return 0, n_steps


@_jit
def angle_path_d2(s_full, dt, z, m):
    """Cross-check mode for d = 2: exact circle Brownian motion in the angle.

    Integrates d(phi) = (1 / (m sinh S_t)) dW along a recorded radial path
    (midpoint clock per step, matching the trapezoidal time change).
    Returns the final angle.
    """
    phi = 0.0
    for k in range(z.shape[0]):
        d_tau = 0.5 * (_clock_rate(s_full[k], m) + _clock_rate(s_full[k + 1], m)) * dt
        phi += math.sqrt(d_tau) * z[k]
    return phi % (2.0 * math.pi)
