"""Command-line front end.

Subcommands: deriv, mlf, lift, action, el-check, solve, models. Every
command writes a table (CSV by default, JSON with --format json) to
standard output or to --out. Float cells use 17 significant digits and
lines end with a bare newline, so identical invocations produce
byte-identical artifacts.

Exit status: 0 on success, 2 on invalid arguments or inputs, 3 when a
computation fails numerically (series overflow, solver divergence).
A one-line diagnostic goes to the error stream in both failure cases.

--config points at a flat JSON object whose keys are long flag names
(hyphens or underscores); explicit flags override config values.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .fracops import FracOrder, SampledPath, Side, frac_deriv
from .jet import lift
from .specfun import ConvergenceError, MLParams, mittag_leffler
from .varcalc import Variant, action as action_integral, el_residual, make_lagrangian
from .fodesolve import (
    FODE2,
    DivergenceError,
    MultiTermFDE,
    find_model,
    model_catalog,
    solve_fode2,
    solve_multiterm,
)


class CliError(Exception):
    """Invalid arguments or inputs; mapped to exit status 2."""


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _render_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    out = [",".join(columns)]
    for row in rows:
        out.append(",".join(c if isinstance(c, str) else _fmt(c) for c in row))
    return "\n".join(out) + "\n"


def _render_json(columns, rows, meta) -> str:
    payload = {
        "meta": meta,
        "columns": list(columns),
        "rows": [[c if isinstance(c, str) else float(c) for c in row] for row in rows],
    }
    return json.dumps(payload, sort_keys=True) + "\n"


def _emit(args, columns, rows, meta_extra=None) -> None:
    meta = {
        "alpha": getattr(args, "alpha", None),
        "h": getattr(args, "_h", None),
        "scheme": "grunwald-letnikov",
        "version": __version__,
    }
    if meta_extra:
        meta.update(meta_extra)
    fmt = args.format or "csv"
    text = _render_csv(columns, rows) if fmt == "csv" else _render_json(columns, rows, meta)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_grid(text: str) -> tuple[float, float, int]:
    try:
        t0_s, t1_s, n_s = text.split(":")
        t0, t1, n = float(t0_s), float(t1_s), int(n_s)
    except ValueError as exc:
        raise CliError(f"grid must look like t0:T:n, got {text!r}") from exc
    if n < 9:
        raise CliError(f"grid too short: need at least 9 nodes, got {n}")
    if not t1 > t0:
        raise CliError("grid end must exceed its start")
    return t0, t1, n


def _make_fn(args) -> Callable[[float], float]:
    name = args.fn
    if name == "pow":
        g = args.gamma
        return lambda t: t**g
    if name == "const":
        c = args.cval
        return lambda t: c
    if name == "sin":
        return np.sin
    if name == "exp":
        return np.exp
    if name == "bump":
        c, w = args.center, args.width
        return lambda t: np.exp(-(((t - c) / w) ** 2))
    raise CliError(f"unknown function selector {name!r}")


def _sample(args) -> SampledPath:
    t0, t1, n = _parse_grid(args.grid)
    fn = _make_fn(args)
    return SampledPath.from_function(fn, t0, t1, n)


def _path_from_csv(path: str) -> SampledPath:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    if len(lines) < 2:
        raise CliError(f"{path} holds no data rows")
    header = [c.strip() for c in lines[0].split(",")]
    try:
        it, ix = header.index("t"), header.index("x")
    except ValueError:
        if len(header) < 2:
            raise CliError(f"{path} needs columns t and x")
        it, ix = 0, 1
    try:
        data = np.array(
            [[float(ln.split(",")[it]), float(ln.split(",")[ix])] for ln in lines[1:]]
        )
    except (ValueError, IndexError) as exc:
        raise CliError(f"{path} has malformed rows: {exc}") from exc
    t, x = data[:, 0], data[:, 1]
    if len(t) < 9:
        raise CliError("sampled input too short: need at least 9 nodes")
    h = t[1] - t[0]
    if h <= 0 or np.max(np.abs(np.diff(t) - h)) > 1e-9 * max(1.0, abs(h)):
        raise CliError("sampled input must sit on a uniform time grid")
    return SampledPath(float(t[0]), float(h), x)


# Lagrangian construction shared by action and el-check.

_LAGRANGIAN_PARAMS = {
    "bagley-torvik": ("a", "b", "c", "alpha", "coefficients"),
    "order1-potential": ("alpha", "a1", "a2", "coefficients"),
    "order2-potential": ("alpha", "a1", "a2", "coefficients"),
    "order3-potential": ("alpha", "a1", "a2", "coefficients"),
    "power-law-mixed": ("c", "gamma_exp", "a1", "a2", "alpha", "coefficients"),
}


def _build_lagrangian(args):
    name = args.lagrangian
    if name not in _LAGRANGIAN_PARAMS:
        known = ", ".join(sorted(_LAGRANGIAN_PARAMS))
        raise CliError(f"unknown Lagrangian {name!r}; available: {known}")
    # Unset flags stay None so each factory's own defaults apply.
    params = {
        p: getattr(args, p)
        for p in _LAGRANGIAN_PARAMS[name]
        if getattr(args, p) is not None
    }
    if name in ("order1-potential", "order2-potential", "order3-potential"):
        q = args.potential_quadratic
        if q:
            params["potential"] = lambda t, x: 0.5 * q * x * x
            params["potential_x"] = lambda t, x: q * x
    if name == "bagley-torvik":
        params["forcing"] = _forcing_from_args(args)
    if name == "power-law-mixed" and args.forcing_fn == "const":
        params["forcing"] = args.forcing_cval
    try:
        return make_lagrangian(name, **params)
    except (KeyError, ValueError) as exc:
        raise CliError(str(exc)) from exc


def _manufactured_plate_forcing(t: float) -> float:
    return 6.0 * t + 6.0 / math.gamma(2.5) * t**1.5 + t**3


def _forcing_from_args(args):
    kind = args.forcing_fn
    if kind == "default":
        return _manufactured_plate_forcing
    if kind == "zero":
        return None
    if kind == "const":
        return args.forcing_cval
    raise CliError(f"unknown forcing selector {kind!r}")


# Subcommand bodies.


def _cmd_deriv(args) -> int:
    if args.alpha <= 0:
        raise CliError("derivative order must be positive")
    path = _sample(args)
    args._h = path.h
    side = Side.LEFT if args.side == "left" else Side.RIGHT
    out = frac_deriv(path, FracOrder(args.alpha), side)
    rows = list(zip(out.times(), out.values))
    _emit(args, ["t", "value"], rows)
    return 0


def _cmd_mlf(args) -> int:
    params = MLParams(alpha=args.alpha, tol=args.tol, max_terms=args.max_terms)
    value = mittag_leffler(params, args.z)
    _emit(args, ["value"], [[value]])
    return 0


def _cmd_lift(args) -> int:
    if not 0.0 < args.alpha < 1.0:
        raise CliError("alpha must lie in (0, 1) for a lift")
    if args.k < 1:
        raise CliError("jet order k must be at least 1")
    path = _sample(args)
    args._h = path.h
    traj = lift((path,), args.alpha, args.k)
    cols = ["t", "x"] + [f"y{a}" for a in range(1, args.k + 1)]
    times = path.times()
    rows = [
        [times[j], path.values[j]] + [traj.y[a][0].values[j] for a in range(args.k)]
        for j in range(path.n_pts)
    ]
    _emit(args, cols, rows)
    return 0


def _cmd_action(args) -> int:
    lag = _build_lagrangian(args)
    path = _sample(args)
    args._h = path.h
    args.alpha = lag.alpha
    traj = lift((path,), lag.alpha, lag.k)
    value = action_integral(lag, traj)
    _emit(args, ["action"], [[value]], {"k": lag.k})
    return 0


def _cmd_el_check(args) -> int:
    lag = _build_lagrangian(args)
    if args.from_file:
        path = _path_from_csv(args.from_file)
    else:
        path = _sample(args)
    args._h = path.h
    args.alpha = lag.alpha
    traj = lift((path,), lag.alpha, lag.k)
    report = el_residual(lag, traj, Variant(args.variant))
    res = report.residual[0]
    rows = list(zip(res.times(), res.values))
    _emit(
        args,
        ["t", "residual"],
        rows,
        {"norm_inf": report.norm_inf, "excluded": report.excluded, "variant": args.variant},
    )
    return 0


def _cmd_solve(args) -> int:
    try:
        model = find_model(args.model)
    except KeyError as exc:
        raise CliError(str(exc)) from exc
    params = {}
    for key in model.defaults:
        flag = getattr(args, key, None)
        if flag is not None:
            params[key] = flag
    if args.t_end is not None:
        params["t_end"] = args.t_end
    if args.model == "bagley-torvik" and args.forcing_fn != "default":
        params["forcing"] = _forcing_from_args(args)
    try:
        problem = model.make(args.variant, **params)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    t_end = problem.t_end
    h = args.h if args.h is not None else t_end / 1024.0
    args._h = h
    if isinstance(problem, MultiTermFDE):
        report = solve_multiterm(problem, h)
        sol = report.solution
        rows = list(zip(sol.times(), sol.values))
        _emit(args, ["t", "x"], rows, {"max_defect": report.max_defect, "model": args.model})
    else:
        report = solve_fode2(problem, h)
        sol, vel = report.solution, report.aux
        args.alpha = problem.alpha
        rows = list(zip(sol.times(), sol.values, vel.values))
        _emit(args, ["t", "x", "v"], rows, {"max_defect": report.max_defect, "model": args.model})
    return 0


def _cmd_models(args) -> int:
    if args.action != "list":
        raise CliError(f"unknown models action {args.action!r}")
    rows = []
    for model in model_catalog():
        for variant, kind in sorted(model.kinds.items()):
            problem = model.make(variant)
            if isinstance(problem, MultiTermFDE):
                orders = ";".join(f"{mu:g}" for _, mu in problem.terms)
            else:
                orders = f"{problem.alpha:g}"
            rows.append([model.name, variant, kind, orders, model.description])
    _emit(args, ["name", "variant", "kind", "orders", "description"], rows)
    return 0


# Parser construction and config merging.

_FALLBACKS = {
    "deriv": {"alpha": 0.5, "side": "left", "fn": "pow", "gamma": 1.0, "cval": 1.0,
              "center": 0.5, "width": 0.1, "grid": "0:1:1025"},
    "mlf": {"alpha": 1.0, "z": 0.0, "tol": 1e-14, "max_terms": 10_000},
    "lift": {"alpha": 0.5, "k": 1, "fn": "pow", "gamma": 1.0, "cval": 1.0,
             "center": 0.5, "width": 0.1, "grid": "0:1:1025"},
    "action": {"lagrangian": "order1-potential",
               "potential_quadratic": 0.0,
               "forcing_fn": "default", "forcing_cval": 0.0,
               "fn": "pow", "gamma": 1.0, "cval": 1.0, "center": 0.5, "width": 0.1,
               "grid": "0:1:1025"},
    "el-check": {"lagrangian": "order1-potential",
                 "variant": "classical",
                 "potential_quadratic": 0.0,
                 "forcing_fn": "default", "forcing_cval": 0.0,
                 "fn": "pow", "gamma": 1.0, "cval": 1.0, "center": 0.5, "width": 0.1,
                 "grid": "0:1:1025", "from_file": None},
    "solve": {"variant": "fractional", "h": None, "t_end": None,
              "alpha": None, "a1": None, "a2": None, "b1": None, "f": None,
              "a": None, "b": None, "c": None, "x0": None, "v0": None,
              "m": None, "gamma_coef": None,
              "forcing_fn": "default", "forcing_cval": 0.0},
    "models": {},
}


def _add_common(sp) -> None:
    sp.add_argument("--config", default=None, help="JSON file supplying flag values")
    sp.add_argument("--out", default=None, help="write the table to this file")
    sp.add_argument("--format", default=None, choices=["csv", "json"])


def _add_fn_flags(sp) -> None:
    sp.add_argument("--fn", default=None, choices=["pow", "const", "sin", "exp", "bump"])
    sp.add_argument("--gamma", type=float, default=None, help="exponent for fn=pow")
    sp.add_argument("--cval", type=float, default=None, help="value for fn=const")
    sp.add_argument("--center", type=float, default=None, help="center for fn=bump")
    sp.add_argument("--width", type=float, default=None, help="width for fn=bump")
    sp.add_argument("--grid", default=None, help="uniform grid t0:T:n (n >= 9)")


def _add_lagrangian_flags(sp) -> None:
    sp.add_argument("--lagrangian", default=None)
    sp.add_argument(
        "--coefficients", default=None,
        choices=["normalized", "literature", "literature-fractional"],
    )
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--a1", type=float, default=None)
    sp.add_argument("--a2", type=float, default=None)
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--c", type=float, default=None)
    sp.add_argument("--gamma-exp", type=float, default=None, dest="gamma_exp")
    sp.add_argument("--potential-quadratic", type=float, default=None, dest="potential_quadratic")
    sp.add_argument("--forcing-fn", default=None, choices=["default", "zero", "const"],
                    dest="forcing_fn")
    sp.add_argument("--forcing-cval", type=float, default=None, dest="forcing_cval")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracvar",
        description="fractional derivatives, jet lifts, variational checks, model solving",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("deriv", help="fractional derivative of a built-in function")
    sp.add_argument("--alpha", type=float, default=None, help="derivative order (may exceed 1)")
    sp.add_argument("--side", default=None, choices=["left", "right"])
    _add_fn_flags(sp)
    _add_common(sp)
    sp.set_defaults(run=_cmd_deriv)

    sp = sub.add_parser("mlf", help="two-parameter exponential series value")
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--z", type=float, default=None)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--max-terms", type=int, default=None, dest="max_terms")
    _add_common(sp)
    sp.set_defaults(run=_cmd_mlf)

    sp = sub.add_parser("lift", help="jet lift of a built-in function")
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--k", type=int, default=None)
    _add_fn_flags(sp)
    _add_common(sp)
    sp.set_defaults(run=_cmd_lift)

    sp = sub.add_parser("action", help="action integral of a catalog Lagrangian")
    _add_lagrangian_flags(sp)
    _add_fn_flags(sp)
    _add_common(sp)
    sp.set_defaults(run=_cmd_action)

    sp = sub.add_parser("el-check", help="stationarity residual along a path")
    _add_lagrangian_flags(sp)
    sp.add_argument("--variant", default=None, choices=["classical", "fractional"])
    sp.add_argument("--from-file", default=None, dest="from_file",
                    help="CSV with columns t,x instead of --fn")
    _add_fn_flags(sp)
    _add_common(sp)
    sp.set_defaults(run=_cmd_el_check)

    sp = sub.add_parser("solve", help="integrate a catalog model")
    sp.add_argument("--model", required=True)
    sp.add_argument("--variant", default=None, choices=["classical", "fractional"])
    sp.add_argument("--h", type=float, default=None, help="step size (default t_end/1024)")
    sp.add_argument("--t-end", type=float, default=None, dest="t_end")
    sp.add_argument("--alpha", type=float, default=None)
    for flag in ("a1", "a2", "b1", "f", "a", "b", "c", "x0", "v0", "m"):
        sp.add_argument(f"--{flag}", type=float, default=None)
    sp.add_argument("--gamma-coef", type=float, default=None, dest="gamma_coef")
    sp.add_argument("--forcing-fn", default=None, choices=["default", "zero", "const"],
                    dest="forcing_fn")
    sp.add_argument("--forcing-cval", type=float, default=None, dest="forcing_cval")
    _add_common(sp)
    sp.set_defaults(run=_cmd_solve)

    sp = sub.add_parser("models", help="catalog listing")
    sp.add_argument("action", choices=["list"])
    _add_common(sp)
    sp.set_defaults(run=_cmd_models)

    return parser


def _apply_config(args) -> None:
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot load config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise CliError("config must be a JSON object of flag values")
        for key, value in cfg.items():
            norm = key.replace("-", "_")
            if norm in ("config", "run", "command") or norm.startswith("_") or not hasattr(args, norm):
                raise CliError(f"config key {key!r} is not a flag of {args.command}")
            if getattr(args, norm) is None:
                setattr(args, norm, value)
    for key, value in _FALLBACKS.get(args.command, {}).items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    args._h = None
    try:
        _apply_config(args)
        return args.run(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, DivergenceError, OverflowError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
