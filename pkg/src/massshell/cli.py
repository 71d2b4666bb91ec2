"""Command-line entry point: run ensembles, tabulate densities, and run
goodness-of-fit validation suites.

Subcommands
    simulate   integrate an ensemble and write observable samples as CSV
    densities  tabulate a closed-form invariant density on a grid as CSV
    validate   integrate, test every requested observable against its
               invariant law, write a key=value report; exit 1 on any fail

Configuration can come from flags or from a flat key = value file
(--config); explicit flags win.  Outputs are byte-stable for a fixed
base seed.  MASSSHELL_THREADS caps ensemble parallelism and
MASSSHELL_NUMBA=0 selects the interpreted kernel fallback.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .dynamics import RadialDriftSpec
from .errors import MassShellError
from .integrators import HyperbolicPoint, PathEnsemble, StepConfig, run_ensemble
from .manifold import ModelParams
from .measures import DensitySpec, cdf
from .stats import ks_against

_CONFIG_KEYS = {
    "d": int, "m": float, "gamma": float, "dt": float, "t_end": float,
    "n_paths": int, "base_seed": int, "s0": float, "process": str,
    "observable": str, "out": str, "record": str, "grid_points": int,
}

_RADIAL_OBSERVABLES = ("s", "p0", "speed")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def parse_config_file(path: str) -> dict:
    """Flat `key = value` lines; # starts a comment."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in _CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown config field {key!r}")
            try:
                values[key] = _CONFIG_KEYS[key](val)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value for field {key!r}: {val!r}")
    return values


class UsageError(Exception):
    pass


def _resolve(args, config: dict, key: str, default):
    flag_val = getattr(args, key, None)
    if flag_val is not None:
        return flag_val
    if key in config:
        return config[key]
    return default


def _density_kind(observable: str) -> str:
    if observable == "s":
        return "radial_s"
    if observable == "p0":
        return "energy_p0"
    if observable == "speed":
        return "speed_v"
    if observable[:1] == "p":
        return "momentum_component"
    if observable[:1] == "v":
        return "velocity_component"
    raise UsageError(f"observable {observable!r} has no associated density")


def _normalize_observable(obs: str, d: int) -> str:
    """Canonical short form: s, p0, speed, p<i>, v<i>."""
    obs = obs.strip().lower().replace(" ", "")
    if obs in _RADIAL_OBSERVABLES:
        return obs
    for prefix in ("p_component(", "v_component("):
        if obs.startswith(prefix) and obs.endswith(")"):
            obs = obs[0] + obs[len(prefix):-1]
    if len(obs) >= 2 and obs[0] in "pv" and obs[1:].isdigit():
        i = int(obs[1:])
        if not 1 <= i <= d:
            raise UsageError(f"observable: component index {i} outside 1..{d}")
        return obs
    raise UsageError(f"observable: unknown value {obs!r}")


def _build_common(args, config):
    d = _resolve(args, config, "d", None)
    if d is None:
        raise UsageError("d: required field missing")
    gamma = _resolve(args, config, "gamma", None)
    if gamma is None:
        raise UsageError("gamma: required field missing")
    params = ModelParams(d=int(d), m=_resolve(args, config, "m", 1.0), gamma=float(gamma))
    cfg = StepConfig(dt=_resolve(args, config, "dt", 2.0 ** -6),
                     t_end=_resolve(args, config, "t_end", 100.0))
    return params, cfg


def _run_validation_ensemble(params, cfg, observables, args, config,
                             record="final_only"):
    spec = RadialDriftSpec(params=params, kind="ou")
    s0 = _resolve(args, config, "s0", 1.0)
    init = HyperbolicPoint(s=s0, theta=np.zeros(params.d - 1))
    n_paths = int(_resolve(args, config, "n_paths", 5000))
    base_seed = int(_resolve(args, config, "base_seed", 0))
    process = _resolve(args, config, "process", "auto")
    if process == "momentum_hyperbolic":
        process = "momentum"
    if process == "auto":
        needs_sphere = any(o not in _RADIAL_OBSERVABLES for o in observables)
        process = "momentum" if needs_sphere else "radial"
    ens = run_ensemble(init, spec, cfg, n_paths=n_paths, record=record,
                       base_seed=base_seed, process=process)
    return ens, process, n_paths, base_seed


def cmd_simulate(args) -> int:
    config = parse_config_file(args.config) if args.config else {}
    params, cfg = _build_common(args, config)
    observable = _normalize_observable(_resolve(args, config, "observable", "s"), params.d)
    record = _resolve(args, config, "record", "final_only")
    if record == "final":
        record = "final_only"
    out_path = _resolve(args, config, "out", "samples.csv")
    ens, process, n_paths, base_seed = _run_validation_ensemble(
        args=args, config=config, params=params, cfg=cfg,
        observables=[observable], record=record)
    _write_samples_csv(out_path, ens, observable)
    if ens.n_failures:
        print(f"simulate: {ens.n_failures} path(s) failed; output flagged partial",
              file=sys.stderr)
        return 1
    print(f"simulate: wrote {out_path} ({n_paths} paths, observable {observable})")
    return 0


def _write_samples_csv(path: str, ens: PathEnsemble, observable: str):
    lines = ["path_id,t,value"]
    if ens.record == "full":
        t = np.arange(ens.n_steps + 1) * ens.dt
        m = ens.params.m
        for i in range(ens.n_paths):
            s_path = ens.s[i]
            if observable == "s":
                vals = s_path
            elif observable == "p0":
                vals = m * np.cosh(s_path)
            elif observable == "speed":
                vals = np.tanh(s_path)
            else:
                comp = int(observable[1:]) - 1
                om = ens.omega[i][:, comp]
                vals = (m * np.sinh(s_path) if observable[0] == "p" else np.tanh(s_path)) * om
            for k in range(vals.size):
                lines.append(f"{i},{_fmt(t[k])},{_fmt(vals[k])}")
    else:
        vals = ens.observable(observable)
        t_end = ens.n_steps * ens.dt
        for i in range(ens.n_paths):
            lines.append(f"{i},{_fmt(t_end)},{_fmt(vals[i])}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _quantile(spec: DensitySpec, q: float, lo: float, hi_start: float) -> float:
    """Deterministic quantile by bisection on the quadrature CDF."""
    hi = hi_start
    for _ in range(60):
        if cdf(spec, hi) >= q:
            break
        hi *= 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if cdf(spec, mid) < q:
            lo = mid
        else:
            hi = mid
    return hi


def _density_grid(spec: DensitySpec, n: int) -> np.ndarray:
    lo, hi = spec.support
    if math.isinf(hi):
        hi = _quantile(spec, 1.0 - 1e-4, lo if math.isfinite(lo) else 0.0, 4.0)
    if math.isinf(lo):
        lo = -hi  # symmetric densities only (momentum component)
    return np.linspace(lo, hi, n)


def cmd_densities(args) -> int:
    config = parse_config_file(args.config) if args.config else {}
    params, _ = _build_common(args, config)
    observable = _normalize_observable(_resolve(args, config, "observable", "s"), params.d)
    out_path = _resolve(args, config, "out", "density.csv")
    n = int(_resolve(args, config, "grid_points", 512))
    spec = DensitySpec(kind=_density_kind(observable), params=params)
    xs = _density_grid(spec, n)
    ys = spec.pdf(xs)
    lines = ["x,density"]
    for x, y in zip(xs, ys):
        lines.append(f"{_fmt(x)},{_fmt(y)}")
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"densities: wrote {out_path} ({n} grid points, observable {observable})")
    return 0


def cmd_validate(args) -> int:
    config = parse_config_file(args.config) if args.config else {}
    params, cfg = _build_common(args, config)
    raw_obs = args.observable if args.observable else [config.get("observable", "s")]
    flat = [piece for item in raw_obs for piece in str(item).split(",") if piece.strip()]
    observables = [_normalize_observable(o, params.d) for o in flat]
    out_path = _resolve(args, config, "out", "report.txt")
    ens, process, n_paths, base_seed = _run_validation_ensemble(
        args=args, config=config, params=params, cfg=cfg, observables=observables)

    lines = [
        "mode=validate",
        f"d={params.d}",
        f"m={_fmt(params.m)}",
        f"gamma={_fmt(params.gamma)}",
        f"dt={_fmt(cfg.dt)}",
        f"t_end={_fmt(cfg.t_end)}",
        f"n_paths={n_paths}",
        f"base_seed={base_seed}",
        f"process={process}",
        f"failures={ens.n_failures}",
    ]
    all_pass = ens.n_failures == 0
    for obs in observables:
        spec = DensitySpec(kind=_density_kind(obs), params=params)
        report = ks_against(ens.observable(obs), spec)
        ok = report.passed
        all_pass = all_pass and ok
        lines += [
            f"observable.{obs}.ks_statistic={_fmt(report.ks_statistic)}",
            f"observable.{obs}.ks_threshold={_fmt(report.ks_threshold)}",
            f"observable.{obs}.chi2_statistic={_fmt(report.chi2_statistic)}",
            f"observable.{obs}.chi2_dof={report.chi2_dof}",
            f"observable.{obs}.pass={'true' if ok else 'false'}",
        ]
        print(f"validate: {obs}: D={report.ks_statistic:.4f} "
              f"(threshold {report.ks_threshold:.4f}) -> {'pass' if ok else 'FAIL'}")
    lines.append(f"overall_pass={'true' if all_pass else 'false'}")
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"validate: wrote {out_path}; overall {'pass' if all_pass else 'FAIL'}")
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="massshell",
        description="Simulate shell diffusions and validate their invariant laws.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, with_step=True):
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--d", type=int, help="spatial dimension (>= 2)")
        p.add_argument("--m", type=float, help="particle mass (default 1)")
        p.add_argument("--gamma", type=float, help="damping coefficient (>= 0)")
        p.add_argument("--out", help="output file path")
        if with_step:
            p.add_argument("--dt", type=float, help="time step (default 2^-6)")
            p.add_argument("--t-end", dest="t_end", type=float, help="horizon (default 100)")
            p.add_argument("--n-paths", dest="n_paths", type=int, help="ensemble size (default 5000)")
            p.add_argument("--base-seed", dest="base_seed", type=int, help="ensemble seed (default 0)")
            p.add_argument("--s0", type=float, help="initial radial coordinate (default 1)")
            p.add_argument("--process", choices=["auto", "radial", "momentum",
                                                 "momentum_hyperbolic", "cartesian"],
                           help="state representation (default auto)")

    p_sim = sub.add_parser("simulate", help="run an ensemble, write samples CSV")
    add_common(p_sim)
    p_sim.add_argument("--observable", help="s | p0 | speed | p<i> | v<i>")
    p_sim.add_argument("--record", choices=["final", "final_only", "full"],
                       help="retain terminal states only (default) or full paths")
    p_sim.set_defaults(fn=cmd_simulate)

    p_den = sub.add_parser("densities", help="tabulate a closed-form density as CSV")
    add_common(p_den, with_step=False)
    p_den.add_argument("--observable", help="s | p0 | speed | p<i> | v<i>")
    p_den.add_argument("--grid-points", dest="grid_points", type=int,
                       help="number of grid points (default 512)")
    p_den.set_defaults(fn=cmd_densities)

    p_val = sub.add_parser("validate", help="goodness-of-fit suite, key=value report")
    add_common(p_val)
    p_val.add_argument("--observable", action="append",
                       help="repeatable; each is tested against its invariant law")
    p_val.set_defaults(fn=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MassShellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
