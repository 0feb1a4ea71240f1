"""Command line interface.

Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import shlex
import sys

import numpy as np

from . import __version__
from .acceptance import CHECKS, TOLERANCES, run_check
from .frame import (FlatCorrelationError, GridTooSmallError, ambiguity, analyze, energy,
                    estimate_displacement, read_coeffs_json, sublattice_energies, synthesize,
                    write_coeffs_json)
from .grid import LATTICE_STEP, QuadratureSpec, default_grid
from .render import RenderStyle, render_curve, render_grid
from .signals import parse_signal_spec, sample, write_signal_csv
from .theta import compute_alpha
from .waveform import attenuation_db, build_waveform, default_waveform

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
ALPHA_COUNT = 16


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _config(args, **extra) -> dict:
    cfg = {"version": __version__, "command": args.command_line, "n_terms": args.n_terms,
           "alpha_count": ALPHA_COUNT}
    cfg.update(extra)
    return cfg


def _waveform(args):
    return default_waveform(args.n_terms, ALPHA_COUNT)


def _grid(args, M, N):
    if args.t_min is None and args.t_max is None:
        return default_grid(max(M, N))
    if args.t_min is None or args.t_max is None:
        raise UsageError("--t-min and --t-max go together")
    dt = LATTICE_STEP / args.subdivision
    k0 = math.floor(args.t_min / dt)
    k1 = math.ceil(args.t_max / dt)
    return QuadratureSpec(k0 * dt, k1 * dt, dt)


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- subcommands -----------------------------------------------------------

def cmd_alpha(args):
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    q = args.quad_points or max(4096, 64 * args.count)
    table = compute_alpha(args.count, q)
    if args.json:
        print(json.dumps(list(table.values)))
    else:
        for n, v in enumerate(table.values, 1):
            print(f"alpha_{n:<3d} {v:.9f}")
    return EXIT_OK


def cmd_waveform(args):
    if not args.dt > 0 or not args.t_max > args.t_min:
        raise UsageError("need t_max > t_min and dt > 0")
    w = _waveform(args)
    t = args.t_min + np.arange(int(math.floor((args.t_max - args.t_min) / args.dt + 1e-9)) + 1) * args.dt
    col = "db" if args.attenuation else "value"
    y = attenuation_db(t, w) if args.attenuation else w(t)
    lines = [f"# {args.command_line}", f"t,{col}"]
    lines += [f"{ti!r},{yi!r}" for ti, yi in zip(t.tolist(), np.atleast_1d(y).tolist())]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_analyze(args):
    spec = parse_signal_spec(args.signal)
    w = _waveform(args)
    f = sample(spec, _grid(args, args.M, args.N), w)
    g = analyze(f, args.M, args.N, w)
    meta = _config(args, signal=str(spec), signal_energy=f.energy())
    write_coeffs_json(args.output, g, meta)
    e = energy(g)
    print(f"signal          {spec}")
    print(f"energy          {e:.15f}")
    print(f"signal energy   {f.energy():.15f}")
    print(f"deficit         {f.energy() - e:.3e}")
    print(f"|f_00|          {abs(g[0, 0]):.3e}")
    for (pm, pn), v in sublattice_energies(g).items():
        print(f"sublattice {pm}{pn}   {v:.9f}")
    return EXIT_OK


def cmd_synthesize(args):
    g = read_coeffs_json(args.coeffs)
    f = synthesize(g, _grid(args, g.M, g.N), _waveform(args))
    write_signal_csv(args.output, f, header=[args.command_line, json.dumps(_config(args, M=g.M, N=g.N))])
    return EXIT_OK


def _style(args):
    return RenderStyle(cell_px=args.cell_px, radius_scale=args.radius_scale, magnify=args.magnify)


def cmd_plot(args):
    style = _style(args)
    meta = {"command": args.command_line}
    if args.attenuation:
        w = _waveform(args)
        t = np.linspace(0.0, args.t_max, 2001)
        main = list(zip(t.tolist(), attenuation_db(t, w).tolist()))
        overlays = {}
        for name in filter(None, (args.overlay or "").split(",")):
            if name == "gaussian":
                y = 20 * np.log10(np.e) * (-t * t / 2)
            elif name.startswith("approx") and name[6:].isdigit():
                y = attenuation_db(t, build_waveform(w.alpha, int(name[6:])))
            else:
                raise UsageError(f"unknown overlay {name!r}")
            overlays[name] = list(zip(t.tolist(), np.asarray(y).tolist()))
        svg = render_curve(main, style, overlays, y_min=args.y_min, meta=meta)
    elif args.coeffs:
        g = read_coeffs_json(args.coeffs)
        svg = render_grid(g, style, meta)
    else:
        raise UsageError("plot needs --coeffs or --attenuation")
    _emit(svg, args.output)
    return EXIT_OK


def cmd_ambiguity(args):
    w = _waveform(args)
    if args.estimate:
        if not args.coeffs:
            raise UsageError("--estimate needs --coeffs")
        g = read_coeffs_json(args.coeffs)
        xi, eta, score = estimate_displacement(g, w, resolution=args.resolution)
        print(json.dumps({"xi": xi, "eta": eta, "score": score}))
        return EXIT_OK
    if args.xi is None or args.eta is None:
        raise UsageError("ambiguity needs --xi and --eta (or --estimate)")
    quad = _grid(args, args.M, args.N)
    g, xi_used = ambiguity(args.xi, args.eta, args.M, args.N, w, quad)
    meta = _config(args, xi_requested=args.xi, xi=xi_used, eta=args.eta)
    write_coeffs_json(args.output, g, meta)
    print(f"xi {xi_used!r} (requested {args.xi!r}), eta {args.eta!r}, energy {energy(g):.12f}")
    return EXIT_OK


def cmd_verify(args):
    if args.list:
        for name in CHECKS:
            print(name)
        return EXIT_OK
    overrides = {k: getattr(args, f"tol_{k}") for k in TOLERANCES if getattr(args, f"tol_{k}") is not None}
    failed = 0
    for name in CHECKS:
        r = run_check(name, overrides)
        failed += not r.passed
        print(r.line())
    # informational only: how the unit energy splits over the parity sublattices
    for spec in ("gaussian", "monocycle", "atom"):
        split = sublattice_energies(analyze(sample(spec, default_grid(8)), 8, 8))
        print(f"[INFO] sublattice split {spec:<10} "
              + " ".join(f"{pm}{pn}={v:.6f}" for (pm, pn), v in split.items()))
    print(f"{len(CHECKS) - failed}/{len(CHECKS)} checks passed")
    return EXIT_NUMERIC if failed else EXIT_OK


# -- parser ----------------------------------------------------------------

def _add_grid(p):
    p.add_argument("--t-min", type=float, help="grid start (default: symmetric default grid)")
    p.add_argument("--t-max", type=float, help="grid end")
    p.add_argument("--subdivision", type=int, default=64, help="samples per lattice step sqrt(pi)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="thetaframe", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--n-terms", type=int, default=8, help="bump-series order of a(t)")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("alpha", help="print the structure constants alpha_n")
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--quad-points", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("waveform", help="tabulate a(t) as CSV")
    s.add_argument("--t-min", type=float, required=True)
    s.add_argument("--t-max", type=float, required=True)
    s.add_argument("--dt", type=float, required=True)
    s.add_argument("--attenuation", action="store_true", help="emit dB relative to a(0)")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_waveform)

    s = sub.add_parser("analyze", help="compute lattice coefficients of a signal")
    s.add_argument("--signal", required=True, help="atom, gaussian, monocycle, hermite:L, "
                   "displaced:XI,ETA, diff:A,B or file:PATH")
    s.add_argument("-M", type=int, default=8)
    s.add_argument("-N", type=int, default=8)
    s.add_argument("-o", "--output", required=True)
    _add_grid(s)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("synthesize", help="rebuild a signal from coefficient JSON")
    s.add_argument("--coeffs", required=True)
    s.add_argument("-o", "--output", required=True)
    _add_grid(s)
    s.set_defaults(func=cmd_synthesize)

    s = sub.add_parser("plot", help="render coefficients or the attenuation curve as SVG")
    s.add_argument("--coeffs")
    s.add_argument("--attenuation", action="store_true")
    s.add_argument("--overlay", help="comma list of gaussian, approxK")
    s.add_argument("--t-max", type=float, default=10 * LATTICE_STEP)
    s.add_argument("--y-min", type=float, default=-200.0)
    s.add_argument("--magnify", type=float, default=1.0)
    s.add_argument("--cell-px", type=float, default=40.0)
    s.add_argument("--radius-scale", type=float, default=0.5)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_plot)

    s = sub.add_parser("ambiguity", help="coefficients of the displaced waveform, or estimate a displacement")
    s.add_argument("--xi", type=float)
    s.add_argument("--eta", type=float)
    s.add_argument("-M", type=int, default=8)
    s.add_argument("-N", type=int, default=8)
    s.add_argument("-o", "--output")
    s.add_argument("--estimate", action="store_true")
    s.add_argument("--coeffs")
    s.add_argument("--resolution", type=float, default=1e-4)
    _add_grid(s)
    s.set_defaults(func=cmd_ambiguity)

    s = sub.add_parser("verify", help="run the acceptance checks")
    s.add_argument("--list", action="store_true")
    for k, v in TOLERANCES.items():
        s.add_argument(f"--tol-{k.replace('_', '-')}", dest=f"tol_{k}", type=float,
                       help=f"default {v:g}")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.command_line = shlex.join(["thetaframe", *argv])
    if args.cmd == "ambiguity" and not args.estimate and not args.output:
        print("thetaframe ambiguity: error: -o/--output is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (GridTooSmallError, FlatCorrelationError) as exc:
        print(f"thetaframe {args.cmd}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, OSError) as exc:
        print(f"thetaframe {args.cmd}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
