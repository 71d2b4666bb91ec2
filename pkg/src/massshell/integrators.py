"""Time-stepping engines for the shell diffusions.

The production path generator works in hyperbolic coordinates: the radial
coordinate is advanced with a positivity-preserving backward Euler-Maruyama
step (implicit in the singular drift), the sphere factor with projected
Wiener increments run on the trapezoidal stochastic clock
tau(t) = int (m sinh S)^-2 dr.  A direct cartesian Euler-Maruyama scheme for
d in {2, 3} exists as an independent cross-check of the generator algebra.

Reproducibility contract: every path i of an ensemble draws from
numpy's PCG64 seeded with SeedSequence(base_seed, spawn_key=(i,)), and all
normals are drawn up front in a fixed order (radial first, then sphere or
cartesian), so results are bit-identical across runs, record modes, thread
counts and kernel backends.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .dynamics import RadialDriftSpec
from .errors import (CoordinateSingularityError, DomainError,
                     IntegratorFailureError)
from .manifold import (CartesianMomentum, HyperbolicPoint, ModelParams,
                       UnitSpherePoint, sphere_embed)

_STATUS_MSG = {
    1: "implicit solve failed: no sign change on expanded bracket",
    2: "positivity violated at an accepted step",
    3: "coordinate singularity: r or R below 1e-10",
}


@dataclass(frozen=True)
class StepConfig:
    """Time-stepping parameters; defaults follow the production setup."""

    dt: float = 2.0 ** -6
    t_end: float = 100.0
    newton_tol: float = 1e-12
    newton_max_iter: int = 50

    def __post_init__(self):
        if self.dt <= 0 or self.t_end <= 0:
            raise DomainError(f"dt and t_end must be positive, got {self.dt}, {self.t_end}")

    @property
    def n_steps(self) -> int:
        return int(math.ceil(self.t_end / self.dt))


@dataclass
class RadialPathState:
    """Radial state carried between single steps."""

    s: float
    t: float = 0.0

    def __post_init__(self):
        if self.s <= 0:
            raise DomainError(f"radial state requires s > 0, got {self.s}")


@dataclass
class SkewState:
    """Radial state plus accumulated sphere clock and sphere position."""

    radial: RadialPathState
    omega: UnitSpherePoint
    tau: float = 0.0


@dataclass
class PathEnsemble:
    """Ensemble results; arrays are indexed by path id.

    record "final_only" retains terminal states; "full" also keeps the whole
    per-path trajectories (s: (n_paths, n_steps+1), omega likewise).
    """

    kind: str                   # radial | momentum | cartesian
    params: ModelParams
    dt: float
    t_end: float
    n_steps: int
    base_seed: int
    record: str
    s: Optional[np.ndarray] = None         # final (n,) or full (n, N)
    omega: Optional[np.ndarray] = None     # final (n, d) or full (n, N, d)
    P: Optional[np.ndarray] = None         # cartesian: final (n, 1+d) or full
    s_min: Optional[np.ndarray] = None
    tau: Optional[np.ndarray] = None
    n_bisect: Optional[np.ndarray] = None
    failed: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @property
    def n_paths(self) -> int:
        return self.failed.size

    @property
    def n_failures(self) -> int:
        return int(self.failed.sum())

    def final_s(self) -> np.ndarray:
        return self.s[:, -1] if self.record == "full" else self.s

    def final_omega(self) -> np.ndarray:
        return self.omega[:, -1, :] if self.record == "full" else self.omega

    def observable(self, name: str) -> np.ndarray:
        """Extract a terminal observable: s, p0, speed, p<i> or v<i>."""
        m = self.params.m
        if self.kind == "cartesian":
            P = self.P[:, -1, :] if self.record == "full" else self.P
            if name == "p0":
                return P[:, 0].copy()
            if name == "speed":
                return np.linalg.norm(P[:, 1:], axis=1) / P[:, 0]
            comp = _parse_component(name, self.params.d)
            if comp is None:
                raise DomainError(f"observable {name!r} unavailable for cartesian ensembles")
            kind, i = comp
            return P[:, i] / (P[:, 0] if kind == "v" else 1.0)
        s = self.final_s()
        if name == "s":
            return s.copy()
        if name == "p0":
            return m * np.cosh(s)
        if name == "speed":
            return np.tanh(s)
        comp = _parse_component(name, self.params.d)
        if comp is None:
            raise DomainError(f"unknown observable {name!r}")
        kind, i = comp
        if self.omega is None:
            raise DomainError(f"observable {name!r} needs a momentum-process ensemble")
        om_i = self.final_omega()[:, i - 1]
        return (m * np.sinh(s) if kind == "p" else np.tanh(s)) * om_i


def _parse_component(name: str, d: int):
    """Accept p1/v2 style and p_component(1)/v_component(2) style names."""
    name = name.strip().lower().replace(" ", "")
    kind = None
    idx = None
    if len(name) >= 2 and name[0] in "pv" and name[1:].isdigit():
        kind, idx = name[0], int(name[1:])
    elif name.startswith(("p_component(", "v_component(")) and name.endswith(")"):
        kind = name[0]
        try:
            idx = int(name[len("x_component("):-1])
        except ValueError:
            return None
    else:
        return None
    if not 1 <= idx <= d:
        raise DomainError(f"component index {idx} outside 1..{d}")
    return kind, idx


def path_rng(base_seed: int, i: int) -> np.random.Generator:
    """Independent stream for path i of an ensemble seeded with base_seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(base_seed, spawn_key=(i,))))


def _check_status(status: int):
    if status in (1, 2):
        raise IntegratorFailureError(_STATUS_MSG[status])
    if status == 3:
        raise CoordinateSingularityError(_STATUS_MSG[3])


def bem_step(state: RadialPathState, spec: RadialDriftSpec, cfg: StepConfig,
             dw: float) -> RadialPathState:
    """One implicit radial step; dw is the noise increment (already 1/m scaled)."""
    c_coth, c_tanh, _ = spec.coefficients()
    x, status = _kernels.bem_solve(state.s, dw, cfg.dt, c_coth, c_tanh,
                                   cfg.newton_tol, cfg.newton_max_iter)
    if status == 2 or not x > 0:
        raise IntegratorFailureError(_STATUS_MSG[1])
    return RadialPathState(s=x, t=state.t + cfg.dt)


def sphere_step(omega: UnitSpherePoint, d_b: np.ndarray, d_tau: float) -> UnitSpherePoint:
    """Projected-increment sphere step with exact renormalization.

    d_b carries the N(0, d_tau) increments; d_tau = 0 returns omega unchanged.
    """
    if d_tau < 0:
        raise DomainError(f"d_tau must be >= 0, got {d_tau}")
    om = omega.omega.copy()
    if d_tau > 0:
        z = np.asarray(d_b, dtype=float) / math.sqrt(d_tau)
        _kernels.sphere_apply(om, z, d_tau)
    return UnitSpherePoint(om)


def skew_step(state: SkewState, spec: RadialDriftSpec, cfg: StepConfig,
              rng: np.random.Generator) -> SkewState:
    """Advance the skew product by one step, consuming one radial normal and
    d sphere normals from rng, in that order."""
    m = spec.params.m
    d = state.omega.omega.size
    dw = rng.standard_normal() * math.sqrt(cfg.dt) / m
    z = rng.standard_normal(d)
    new_radial = bem_step(state.radial, spec, cfg, dw)
    g_a = 1.0 / (m * math.sinh(state.radial.s)) ** 2
    g_b = 1.0 / (m * math.sinh(new_radial.s)) ** 2
    d_tau = 0.5 * (g_a + g_b) * cfg.dt
    om = state.omega.omega.copy()
    _kernels.sphere_apply(om, z, d_tau)
    return SkewState(radial=new_radial, omega=UnitSpherePoint(om), tau=state.tau + d_tau)


def simulate_momentum_path(init: HyperbolicPoint, spec: RadialDriftSpec,
                           cfg: StepConfig, rng: np.random.Generator):
    """Simulate the momentum process; returns (t, P) with P of shape
    (n_steps+1, 1+d), every sample exactly on the shell by construction."""
    if init.s <= 0:
        raise DomainError(f"initial radial coordinate must be positive, got {init.s}")
    p = spec.params
    n = cfg.n_steps
    c_coth, c_tanh, sigma = spec.coefficients()
    dw = rng.standard_normal(n) * (sigma * math.sqrt(cfg.dt))
    z_sph = rng.standard_normal((n, p.d))
    s_out = np.empty(n + 1)
    om_out = np.empty((n + 1, p.d))
    omega = sphere_embed(init.theta)
    _, _, _, _, status = _kernels.momentum_path(
        init.s, omega, cfg.dt, n, dw, z_sph, c_coth, c_tanh, p.m,
        cfg.newton_tol, cfg.newton_max_iter, s_out, om_out, True)
    _check_status(status)
    t = np.arange(n + 1) * cfg.dt
    P = np.empty((n + 1, 1 + p.d))
    P[:, 0] = p.m * np.cosh(s_out)
    P[:, 1:] = p.m * np.sinh(s_out)[:, None] * om_out
    return t, P


def simulate_cartesian_path(init: CartesianMomentum, spec: RadialDriftSpec,
                            cfg: StepConfig, rng: np.random.Generator,
                            scheme: str = "euler"):
    """Explicit Euler-Maruyama directly on the cartesian SDE (d in {2, 3}).

    Validation tool: the state is not projected back to the shell, so the
    mass-shell defect grows at the scheme's weak order.  Raises on the
    removable r = 0 / R = 0 coordinate singularities (not regularized).
    """
    if scheme != "euler":
        raise DomainError(f"unknown scheme {scheme!r}")
    p = spec.params
    if p.d not in (2, 3):
        raise DomainError(f"cartesian simulation only for d in {{2, 3}}, got d={p.d}")
    n = cfg.n_steps
    z = rng.standard_normal((n, p.d))
    state = init.four_vector()
    out = np.empty((n + 1, 1 + p.d))
    kern = _kernels.cartesian_path_d2 if p.d == 2 else _kernels.cartesian_path_d3
    status, k_fail = kern(state, cfg.dt, n, z, p.m, spec.gamma, out, True)
    if status == 3:
        raise CoordinateSingularityError(f"{_STATUS_MSG[3]} at step {k_fail}")
    t = np.arange(n + 1) * cfg.dt
    return t, out


def integrate_radial_given_noise(s0: float, spec: RadialDriftSpec, dt: float,
                                 dw: np.ndarray, cfg: StepConfig | None = None,
                                 record_full: bool = False):
    """Integrate one radial path driven by externally supplied, pre-scaled
    noise increments (one per step).  Used for refinement studies where the
    same Brownian path must drive several resolutions.

    Returns (s, s_min, n_bisect): s is the full trajectory when record_full,
    else the terminal value.
    """
    if s0 <= 0:
        raise DomainError(f"initial radial coordinate must be positive, got {s0}")
    cfg = cfg or StepConfig(dt=dt, t_end=dt * len(dw))
    dw = np.ascontiguousarray(dw, dtype=float)
    c_coth, c_tanh, _ = spec.coefficients()
    n = dw.size
    out = np.empty(n + 1) if record_full else np.empty(1)
    s_f, s_m, nb, status = _kernels.radial_path(
        s0, dt, n, dw, c_coth, c_tanh, cfg.newton_tol, cfg.newton_max_iter,
        out, record_full)
    _check_status(status)
    return (out if record_full else s_f), s_m, nb


def _worker_threads(n_paths: int) -> int:
    env = os.environ.get("MASSSHELL_THREADS", "")
    if env.strip():
        cap = max(1, int(env))
    else:
        cap = min(4, os.cpu_count() or 1)
    if not _kernels.NUMBA_ENABLED:
        cap = 1  # interpreted kernels hold the GIL; threads only add overhead
    return max(1, min(cap, n_paths))


def run_ensemble(init: HyperbolicPoint | CartesianMomentum, spec: RadialDriftSpec,
                 cfg: StepConfig, n_paths: int, record: str = "final_only",
                 base_seed: int = 0, process: str = "radial") -> PathEnsemble:
    """Integrate n_paths independent paths; deterministic given base_seed.

    process selects the state description: "radial" (S only), "momentum"
    (skew product on the shell), or "cartesian" (direct Euler, d in {2,3}).
    Per-path integrator failures are recorded, never raised; the report is
    in PathEnsemble.failed.
    """
    if n_paths < 1:
        raise DomainError(f"n_paths must be >= 1, got {n_paths}")
    if record not in ("final_only", "full"):
        raise DomainError(f"record must be 'final_only' or 'full', got {record!r}")
    if process not in ("radial", "momentum", "cartesian"):
        raise DomainError(f"unknown process {process!r}")
    p = spec.params
    n = cfg.n_steps
    full = record == "full"
    c_coth, c_tanh, sigma = spec.coefficients()
    dw_scale = sigma * math.sqrt(cfg.dt)

    ens = PathEnsemble(kind=process, params=p, dt=cfg.dt, t_end=cfg.t_end,
                       n_steps=n, base_seed=base_seed, record=record,
                       failed=np.zeros(n_paths, dtype=bool))
    if process in ("radial", "momentum"):
        if not isinstance(init, HyperbolicPoint) or init.s <= 0:
            raise DomainError("radial/momentum ensembles need a HyperbolicPoint init with s > 0")
        s0 = init.s
        omega0 = sphere_embed(init.theta)
        ens.s = np.empty((n_paths, n + 1)) if full else np.empty(n_paths)
        ens.s_min = np.empty(n_paths)
        ens.n_bisect = np.zeros(n_paths, dtype=np.int64)
        if process == "momentum":
            ens.omega = (np.empty((n_paths, n + 1, p.d)) if full
                         else np.empty((n_paths, p.d)))
            ens.tau = np.empty(n_paths)
    else:
        if not isinstance(init, CartesianMomentum):
            raise DomainError("cartesian ensembles need a CartesianMomentum init")
        if p.d not in (2, 3):
            raise DomainError(f"cartesian simulation only for d in {{2, 3}}, got d={p.d}")
        init_vec = init.four_vector()
        ens.P = np.empty((n_paths, n + 1, 1 + p.d)) if full else np.empty((n_paths, 1 + p.d))

    dummy1 = np.empty(1)
    dummy2 = np.empty((1, p.d))

    def run_radial(i):
        rng = path_rng(base_seed, i)
        dw = rng.standard_normal(n) * dw_scale
        out = np.empty(n + 1) if full else dummy1
        s_f, s_m, nb, status = _kernels.radial_path(
            s0, cfg.dt, n, dw, c_coth, c_tanh, cfg.newton_tol,
            cfg.newton_max_iter, out, full)
        ens.s[i] = out if full else s_f
        ens.s_min[i] = s_m
        ens.n_bisect[i] = nb
        ens.failed[i] = status != 0

    def run_momentum(i):
        rng = path_rng(base_seed, i)
        dw = rng.standard_normal(n) * dw_scale
        z_sph = rng.standard_normal((n, p.d))
        om = omega0.copy()
        s_out = np.empty(n + 1) if full else dummy1
        om_out = np.empty((n + 1, p.d)) if full else dummy2
        s_f, s_m, tau, nb, status = _kernels.momentum_path(
            s0, om, cfg.dt, n, dw, z_sph, c_coth, c_tanh, p.m,
            cfg.newton_tol, cfg.newton_max_iter, s_out, om_out, full)
        if full:
            ens.s[i] = s_out
            ens.omega[i] = om_out
        else:
            ens.s[i] = s_f
            ens.omega[i] = om
        ens.s_min[i] = s_m
        ens.tau[i] = tau
        ens.n_bisect[i] = nb
        ens.failed[i] = status != 0

    def run_cartesian(i):
        rng = path_rng(base_seed, i)
        z = rng.standard_normal((n, p.d))
        state = init_vec.copy()
        out = np.empty((n + 1, 1 + p.d)) if full else np.empty((1, 1 + p.d))
        kern = _kernels.cartesian_path_d2 if p.d == 2 else _kernels.cartesian_path_d3
        status, _ = kern(state, cfg.dt, n, z, p.m, spec.gamma, out, full)
        ens.P[i] = out if full else state
        ens.failed[i] = status != 0 or not np.all(np.isfinite(state))

    runner = {"radial": run_radial, "momentum": run_momentum,
              "cartesian": run_cartesian}[process]
    n_threads = _worker_threads(n_paths)
    if n_threads == 1:
        for i in range(n_paths):
            runner(i)
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(runner, range(n_paths)))
    return ens
