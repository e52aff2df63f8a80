"""Command-line front end: ``stencil <subcommand> [options]``.

Reporting subcommands (make, analyze, compose, stability, spectrum,
sparsity) print to stdout and only write files when ``--output-dir`` is
given.  Experiment subcommands always write CSV artifacts, by default into
``./stencilkit-out``.

Every option can also come from ``--config FILE`` (JSON, or TOML for a
``.toml`` suffix).  Keys are option names with dashes or underscores; a
table named after the subcommand may hold them instead of the top level.
Command-line flags override the file.

Exit status: 0 on success, 1 when a computation fails, 2 on usage errors.
Set ``STENCILKIT_THREADS`` to cap BLAS/OpenMP threads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import stencil as st
from .errors import StencilError
from .generators import BUILTINS, builtin, make
from .grid import SIMPLY_SUPPORTED, GridSpec, assemble, sparsity_report, write_matrix_market
from .linalg import periodic_spectrum, power_iteration, write_spectrum_csv
from .stability import growth_factor_csv, max_stable_dt
from .taylor import analyze, format_series

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXPERIMENT_OUT = "stencilkit-out"


class UsageError(Exception):
    pass


def _stencil_ref(text: str) -> st.Stencil:
    """A builtin name, a JSON file, or ``p:q[:style]`` for a generated stencil."""
    if text in BUILTINS:
        return builtin(text)
    path = Path(text)
    if path.suffix == ".json" or path.is_file():
        try:
            return st.from_json(path.read_text())
        except OSError as exc:
            raise UsageError(f"cannot read stencil file {text}: {exc}") from None
    parts = text.split(":")
    if len(parts) in (2, 3) and parts[0].isdigit() and parts[1].isdigit():
        style = parts[2] if len(parts) == 3 else "centered"
        return make(p=int(parts[0]), q=int(parts[1]), style=style)
    raise UsageError(
        f"unknown stencil {text!r}: use a builtin ({', '.join(sorted(BUILTINS))}), "
        "a .json file or p:q[:style]"
    )


def _floats(text: str) -> list[float]:
    return [float(Fraction(v)) for v in text.replace(",", " ").split()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def _out_dir(args, default=None) -> Path | None:
    d = args.output_dir or default
    if d is None:
        return None
    d = Path(d)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _print_report(s: st.Stencil):
    rep = analyze(s)
    print(repr(s))
    if s.dim == 1:
        print(format_series(rep.table, rep.accuracy + 1))
    else:
        print(format_series(rep.table))
    print(f"derivative={rep.derivative} accuracy={rep.accuracy}")
    for alpha, c in rep.leading_errors:
        print(f"  leading error {c} * h^{rep.accuracy} * d^{alpha}")


# subcommand handlers -------------------------------------------------------


def cmd_make(args):
    s = make(p=args.p, q=args.q, style=args.style)
    _print_report(s)
    d = _out_dir(args)
    if d:
        (d / "stencil.json").write_text(st.to_json(s) + "\n")


def cmd_analyze(args):
    if args.stencil:
        s = _stencil_ref(args.stencil)
    elif args.p is not None and args.q is not None:
        s = make(p=args.p, q=args.q, style=args.style)
    else:
        raise UsageError("analyze needs --stencil or both --p and --q")
    rep = analyze(s)
    n = rep.accuracy + 1 if s.dim == 1 else None
    print(format_series(rep.table, n))
    print(f"derivative={rep.derivative} accuracy={rep.accuracy}")


def cmd_compose(args):
    s = st.compose(_stencil_ref(args.inner), _stencil_ref(args.outer))
    _print_report(s)
    d = _out_dir(args)
    if d:
        (d / "composed.json").write_text(st.to_json(s) + "\n")


def cmd_stability(args):
    if bool(args.builtin) == bool(args.stencil):
        raise UsageError("stability needs exactly one of --builtin or --stencil")
    s = builtin(args.builtin) if args.builtin else _stencil_ref(args.stencil)
    if args.sign == "auto":
        # the dissipative sign for an even derivative: + for d2, - for d4
        p = analyze(s).derivative[0]
        if p % 2:
            raise UsageError("no dissipative sign for an odd derivative; pass --sign")
        sign = (-1) ** (p // 2 + 1)
    else:
        sign = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}.get(args.sign)
    if sign is None:
        raise UsageError("--sign must be +, - or auto")
    rough = max_stable_dt(s, sign)
    guess = Fraction(rough.alpha).limit_denominator(4096)
    rep = max_stable_dt(s, sign, candidates=[guess])
    print(json.dumps(rep.to_dict(), indent=2))
    d = _out_dir(args)
    if d:
        ratio = args.dt_ratio * rep.alpha
        (d / "growth_factor.csv").write_text(growth_factor_csv(s, sign, ratio))
        (d / "stability.json").write_text(json.dumps(rep.to_dict(), indent=2) + "\n")


def _grid(args, dim):
    if args.bc == SIMPLY_SUPPORTED:
        return GridSpec.unit_square_simply_supported(args.n, dim)
    return GridSpec.periodic(args.n, args.h, dim)


def cmd_assemble(args):
    s = _stencil_ref(args.stencil)
    g = _grid(args, s.dim)
    m = assemble(s, g)
    print(f"shape={m.shape} {sparsity_report(m)}")
    d = _out_dir(args, ".")
    path = d / args.name
    write_matrix_market(path, m, comment=f"{args.stencil} on n={args.n} h={g.h} bc={args.bc}")
    print(f"wrote {path}")


def cmd_spectrum(args):
    s = _stencil_ref(args.stencil)
    g = GridSpec.periodic(args.n, args.h, s.dim)
    rep = periodic_spectrum(s, g)
    out = {"n": args.n, "h": args.h, "spectral_radius": rep.spectral_radius}
    if args.dt is not None:
        sh = rep.shifted(args.dt)
        out.update(dt=args.dt, shifted_spectral_radius=sh.spectral_radius, shifted_condition=sh.condition_estimate)
    if args.power_iteration:
        out["power_iteration"] = power_iteration(assemble(s, g), seed=args.seed)
    print(json.dumps(out, indent=2))
    d = _out_dir(args)
    if d:
        write_spectrum_csv(d / "spectrum.csv", rep)


def cmd_sparsity(args):
    s = _stencil_ref(args.stencil)
    rows = []
    for n in _ints(args.n):
        rep = sparsity_report(assemble(s, GridSpec.periodic(n, 1.0, s.dim)))
        rows.append((n**s.dim, rep.nnz, rep.percentage))
        print(f"N={n**s.dim} nnz={rep.nnz} percentage={float(rep.percentage):.6g} ({rep.percentage})")
    d = _out_dir(args)
    if d:
        with open(d / "sparsity.csv", "w") as fh:
            fh.write("N,nnz,percentage\n")
            for N, nnz, pct in rows:
                fh.write(f"{N},{nnz},{float(pct)!r}\n")


def cmd_converge_1d(args):
    from .apps.convergence import converge_1d

    fit = converge_1d(_floats(args.h) if args.h else None)
    d = _out_dir(args, EXPERIMENT_OUT)
    fit.write_csv(d / "converge_1d.csv")
    print(fit.summary())


def cmd_converge_2d(args):
    from .apps.convergence import converge_2d

    fit = converge_2d(_floats(args.h) if args.h else None)
    d = _out_dir(args, EXPERIMENT_OUT)
    fit.write_csv(d / "converge_2d.csv")
    print(fit.summary())


def cmd_biharmonic(args):
    from .apps.biharmonic import biharmonic_solve

    fit = biharmonic_solve(_ints(args.n), rel_tol=args.rel_tol)
    d = _out_dir(args, EXPERIMENT_OUT)
    fit.write_csv(d / "biharmonic.csv")
    print(fit.summary())


PARAM_KEYS = ("kappa", "mobility", "rho_w", "c_alpha", "c_beta", "c0", "eps_ic")


def _params(args):
    from .apps.cahn_hilliard import CahnHilliardParams

    return CahnHilliardParams(**{k: getattr(args, k) for k in PARAM_KEYS})


def cmd_cahn_hilliard(args):
    from .apps import cahn_hilliard as ch

    g = GridSpec.periodic(args.n, args.h, args.dim)
    state = ch.ch_init(g, _params(args))
    m0 = state.mass()
    state = ch.run(state, args.dt, args.t_end, args.order)
    d = _out_dir(args, EXPERIMENT_OUT)
    ch.write_energy_csv(d / "energy.csv", state)
    ch.write_field_csv(d / "field.csv", state)
    if args.binary:
        ch.write_field_binary(d / "field.bin", state)
    E = state.energy_history
    print(
        f"t={state.t:g} steps={len(E) - 1} F0={E[0][1]:.6g} F={E[-1][1]:.6g} "
        f"mass_drift={abs(state.mass() - m0) / abs(m0):.2e} "
        f"c in [{state.c.min():.4f}, {state.c.max():.4f}]"
    )


def cmd_ch_temporal(args):
    from .apps.cahn_hilliard import ch_temporal_convergence

    orders = _ints(args.orders)
    fits = ch_temporal_convergence(
        args.dim, orders, n=args.n, t_end=args.t_end, dt_ref=args.dt_ref, params=_params(args)
    )
    d = _out_dir(args, EXPERIMENT_OUT)
    for order, fit in fits.items():
        fit.write_csv(d / f"ch_temporal_order{order}.csv", header=("dt", "error"))
        print(f"order {order}: {fit.summary()}")


# parser --------------------------------------------------------------------


def _common(p):
    p.add_argument("--output-dir", default=None, help="directory for artifacts")
    p.add_argument("--config", default=None, help="JSON or TOML file of option values")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised steps (default 0)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="stencil",
        description="Compose, analyse and apply finite-difference stencils.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = ap.add_subparsers(dest="command", metavar="SUBCOMMAND", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    def add(name, fn, help):
        p = sub.add_parser(name, help=help, description=help, formatter_class=fmt)
        p.set_defaults(func=fn)
        _common(p)
        return p

    stencil_help = "builtin name, .json file, or p:q[:style]"

    p = add("make", cmd_make, "generate a stencil and print its Taylor report")
    p.add_argument("--p", type=int, required=True, help="derivative order")
    p.add_argument("--q", type=int, required=True, help="order of accuracy")
    p.add_argument("--style", default="centered", choices=["centered", "forward", "backward"])

    p = add("analyze", cmd_analyze, "print the normalized Taylor series of a stencil")
    p.add_argument("--stencil", default=None, help=stencil_help)
    p.add_argument("--p", type=int, default=None, help="derivative order")
    p.add_argument("--q", type=int, default=None, help="order of accuracy")
    p.add_argument("--style", default="centered", choices=["centered", "forward", "backward"])

    p = add("compose", cmd_compose, "compose two stencils and report the result")
    p.add_argument("--inner", required=True, help=stencil_help)
    p.add_argument("--outer", required=True, help=stencil_help)

    p = add("stability", cmd_stability, "von Neumann time-step limit for df/dt = sign * L f")
    p.add_argument("--builtin", default=None, choices=sorted(BUILTINS))
    p.add_argument("--stencil", default=None, help=stencil_help)
    p.add_argument("--sign", default="auto", help="+, -, or auto (dissipative for the derivative order)")
    p.add_argument("--dt-ratio", type=float, default=1.0, help="dt / (alpha h^m) for the growth CSV")

    p = add("assemble", cmd_assemble, "assemble a stencil on a grid and write Matrix Market")
    p.add_argument("--stencil", required=True, help=stencil_help)
    p.add_argument("--n", type=int, required=True, help="grid points per axis")
    p.add_argument("--h", type=float, default=1.0, help="spacing (periodic grids)")
    p.add_argument("--bc", default="periodic", choices=["periodic", SIMPLY_SUPPORTED])
    p.add_argument("--name", default="matrix.mtx", help="output file name")

    p = add("spectrum", cmd_spectrum, "exact eigenvalues of a stencil on a periodic grid")
    p.add_argument("--stencil", default="bilaplacian-2d", help=stencil_help)
    p.add_argument("--n", type=int, required=True, help="grid points per axis")
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=None, help="also report I + dt*M")
    p.add_argument("--power-iteration", action="store_true", help="cross-check by power iteration")

    p = add("sparsity", cmd_sparsity, "nonzero counts of assembled periodic operators")
    p.add_argument("--stencil", default="laplacian-2d", help=stencil_help)
    p.add_argument("--n", default="25,50,100,200,400", help="points per axis, comma separated")

    p = add("converge-1d", cmd_converge_1d, "composed f''' of sin(x)cos(x) at pi")
    p.add_argument("--h", default=None, help="spacings, comma separated")

    p = add("converge-2d", cmd_converge_2d, "outer-product f^(4,3) at (2pi, pi/3)")
    p.add_argument("--h", default=None, help="spacings, comma separated")

    p = add("biharmonic", cmd_biharmonic, "simply-supported plate on the unit square")
    p.add_argument("--n", default="9,17,33,65", help="points per axis, comma separated")
    p.add_argument("--rel-tol", type=float, default=1e-9, help="CG relative residual")

    def ch_params(p):
        defaults = dict(kappa=2.0, mobility=5.0, rho_w=5.0, c_alpha=0.3, c_beta=0.7, c0=0.5, eps_ic=0.01)
        for k, v in defaults.items():
            p.add_argument("--" + k.replace("_", "-"), type=float, default=v)
        p.add_argument("--dim", type=int, default=2, choices=[2, 3])

    p = add("cahn-hilliard", cmd_cahn_hilliard, "spinodal decomposition with IMEX stepping")
    ch_params(p)
    p.add_argument("--n", type=int, default=100, help="points per axis")
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--t-end", type=float, default=100.0)
    p.add_argument("--order", type=int, default=1, choices=[1, 2])
    p.add_argument("--binary", action="store_true", help="also write raw field + JSON header")

    p = add("ch-temporal", cmd_ch_temporal, "temporal convergence of the IMEX schemes at h=1")
    ch_params(p)
    p.add_argument("--n", type=int, default=None, help="points per axis (64 in 2D, 16 in 3D)")
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--dt-ref", type=float, default=2.0**-10)
    p.add_argument("--orders", default="1,2")
    return ap


def _load_config(path: str, command: str, sub: argparse.ArgumentParser) -> dict:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    try:
        data = tomllib.loads(raw.decode()) if path.endswith(".toml") else json.loads(raw)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot parse config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a mapping")
    if isinstance(data.get(command), dict):
        data = data[command]
    known = {a.dest for a in sub._actions} - {"help", "config"}
    out = {}
    for k, v in data.items():
        dest = k.replace("-", "_")
        if dest not in known:
            raise UsageError(f"unknown config key {k!r} for {command}")
        out[dest] = ",".join(map(str, v)) if isinstance(v, list) else v
    return out


def _subparser(ap, command):
    for a in ap._subparsers._group_actions:
        if command in a.choices:
            return a.choices[command]
    raise KeyError(command)


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if args.config:
            sub = _subparser(ap, args.command)
            sub.set_defaults(**_load_config(args.config, args.command, sub))
            args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"stencil: error: {exc}", file=sys.stderr)
        return 2

    threads = os.environ.get("STENCILKIT_THREADS")
    limit = int(threads) if threads else None
    try:
        with threadpool_limits(limits=limit):
            args.func(args)
    except UsageError as exc:
        print(f"stencil: error: {exc}", file=sys.stderr)
        return 2
    except (StencilError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"stencil: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
