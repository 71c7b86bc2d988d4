"""Command-line front end: ``ultrawave <command> [options]``.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage or
parameter errors.  JSON output is deterministic (sorted keys, canonical
piece order); timings go to stderr only.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import io as uio
from .cyclotomic import Cyclotomic
from .gfq import FieldParams, ParameterError, field_params
from .localfield import WindowError, character, format_element, lam

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _number(text):
    """Rational from '1/2', '-1', '0.5'; float only if not a finite decimal."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _global_options(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = parser.add_argument_group("global options")
    g.add_argument("--q", type=int, default=d(None), help="residue field size q = p^c")
    g.add_argument("--p", type=int, default=d(None), help="characteristic p")
    g.add_argument("--c", type=int, default=d(None), help="degree c")
    g.add_argument("--s", type=_number, default=d(None), help="Sobolev exponent")
    g.add_argument("--backend", choices=("exact", "float"), default=d(None))
    g.add_argument("--eps", type=float, default=d(None), help="tolerance of the float backend")
    g.add_argument("--format", choices=("json", "csv"), default=d(None))
    g.add_argument("--output", "-o", default=d(None), help="output file (default stdout)")
    g.add_argument("--config", default=d(None), help="JSON file with the same keys")


DEFAULTS = {"q": 2, "p": None, "c": None, "s": Fraction(1), "backend": "exact", "eps": 1e-12, "format": "json",
            "output": None}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ultrawave", description="Exact harmonic analysis on GF(q)((t)).")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ft", parents=[common], help="Fourier transform of a step function file")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--inverse", action="store_true")

    p = sub.add_parser("radial-ft", parents=[common], help="transform of a radial profile")
    p.add_argument("--input", "-i")
    p.add_argument("--example", type=int, choices=(1, 2, 4))
    p.add_argument("--theta", type=_number)
    p.add_argument("--vartheta", type=_number)
    p.add_argument("--shells", default="-3:6", help="range lo:hi of shells to tabulate")

    p = sub.add_parser("norm", parents=[common], help="H^s norm of a frequency-side function file")
    p.add_argument("--input", "-i", required=True)

    p = sub.add_parser("membership", parents=[common], help="H^s membership threshold of an example")
    p.add_argument("--example", type=int, required=True, choices=(1, 2, 3, 4, 7))
    p.add_argument("--theta", type=_number)
    p.add_argument("--vartheta", type=_number)
    p.add_argument("--k", type=int, default=0)

    p = sub.add_parser("tables", parents=[common], help="lambda(n) or character tables")
    p.add_argument("--kind", choices=("lambda", "character"), required=True)
    p.add_argument("--count", type=int, required=True)

    p = sub.add_parser("filters", parents=[common], help="filter bank checks")
    fsub = p.add_subparsers(dest="action", required=True)
    fc = fsub.add_parser("check", parents=[common])
    fc.add_argument("--bank", choices=("haar", "perturbed", "random"), default="haar")
    fc.add_argument("--depth", type=int, default=3)
    fc.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("packets", parents=[common], help="wavelet packets")
    psub = p.add_subparsers(dest="action", required=True)
    pg = psub.add_parser("gen", parents=[common])
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--j", type=int, default=0)
    pg.add_argument("--k", type=int, default=0)
    pm = psub.add_parser("gram", parents=[common])
    pm.add_argument("--j", type=int, default=0)
    pm.add_argument("--N", type=int, required=True)
    pm.add_argument("--K", type=int, required=True)

    p = sub.add_parser("fractal", parents=[common], help="truncated fractal and its transform")
    p.add_argument("--kind", choices=("weierstrass", "cantor"), required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--emit", help="CSV file for the transform pieces")

    p = sub.add_parser("examples", parents=[common], help="run the worked examples")
    p.add_argument("--ids", default="1,2,3,4,5,6,7,8,9,10")
    p.add_argument("--theta", type=_number)
    p.add_argument("--depth", type=int)

    p = sub.add_parser("verify-all", parents=[common], help="run the whole verification suite")
    p.add_argument("--bank", choices=("haar", "perturbed"), default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--checks", help="comma-separated subset of check groups")
    return parser


def resolve(args) -> dict:
    """Defaults < config file < command line."""
    opts = dict(DEFAULTS)
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        try:
            with open(cfg_path) as fh:
                conf = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {cfg_path}: {exc}")
        for key, val in conf.items():
            opts[key] = Fraction(val) if key == "s" and not isinstance(val, float) else val
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    for key in ("bank", "jobs", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    if opts.get("p"):
        opts["params"] = FieldParams(int(opts["p"]), int(opts.get("c") or 1))
    else:
        opts["params"] = field_params(int(opts["q"]))
    opts["q"] = opts["params"].q
    if opts["backend"] == "float" and not 0 < float(opts["eps"]) <= 1e-6:
        raise UsageError("--eps must lie in (0, 1e-6] with the float backend")
    return opts


def _sp(opts, s=None):
    from .sobolev import SobolevParams

    return SobolevParams(opts["s"] if s is None else s, opts["backend"], float(opts["eps"]))


def _emit(opts, payload=None, text=None):
    if text is None:
        text = uio.dumps(payload)
    if opts.get("output"):
        with open(opts["output"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _re_im(v):
    z = complex(v)
    return repr(z.real), repr(z.imag)


# -- commands ------------------------------------------------------------------------

def cmd_ft(args, opts):
    from .stepfn import sf_fourier

    f = uio.read_function_file(args.input)
    if hasattr(f, "weights"):
        f = f.step
    g = sf_fourier(f).reflect() if args.inverse else sf_fourier(f)
    if opts["format"] == "csv":
        rows = [(format_element(b.center), b.level, *_re_im(c)) for b, c in sorted(g.pieces, key=lambda bc: bc[0].sort_key())]
        _emit(opts, text=uio.to_csv(("center", "level", "re", "im"), rows))
    else:
        _emit(opts, uio.step_to_json(g))
    return EXIT_OK


def _example_profile(params, ex, theta, vartheta, k=0):
    from .radial import make_example

    if ex == 1:
        return make_example(1, params, theta=theta if theta is not None else Fraction(0))
    if ex == 2:
        return make_example(2, params)
    if ex == 4:
        return make_example(4, params, theta=theta if theta is not None else Fraction(1, 4),
                            vartheta=vartheta if vartheta is not None else Fraction(1, 4))
    raise UsageError(f"example {ex} has no radial time-domain profile")


def cmd_radial_ft(args, opts):
    from .radial import RadialProfile, radial_fourier
    from .sobolev import membership_threshold

    params = opts["params"]
    if args.input:
        with open(args.input) as fh:
            prof = RadialProfile.from_json(params, json.load(fh))
    elif args.example:
        prof = _example_profile(params, args.example, args.theta, args.vartheta)
    else:
        raise UsageError("radial-ft needs --input or --example")
    ft = radial_fourier(prof)
    lo, hi = (int(x) for x in args.shells.split(":"))
    values = {m: ft.value(m) for m in range(lo, hi + 1)}
    if opts["format"] == "csv":
        _emit(opts, text=uio.to_csv(("m", "re", "im"), [(m, *_re_im(v)) for m, v in values.items()]))
    else:
        _emit(opts, {"params": params.to_json(), "profile": ft.to_json(), "shell_values": values,
                     "threshold": membership_threshold(ft).to_json()})
    return EXIT_OK


def cmd_norm(args, opts):
    from .sobolev import ShellFunction, hs_norm2

    f = uio.read_function_file(args.input)
    if not hasattr(f, "weights"):
        f = ShellFunction(f)
    r = hs_norm2(f, _sp(opts))
    _emit(opts, {"s": opts["s"], "norm2": r.value, "error": r.error, "exact": r.exact})
    return EXIT_OK


def cmd_membership(args, opts):
    from .radial import make_example, radial_fourier, step_to_radial
    from .sobolev import membership_threshold, series_slope

    params = opts["params"]
    ex = args.example
    if ex == 3:
        prof = radial_fourier(step_to_radial(make_example(3, params, k=args.k)))
    elif ex == 7:
        prof = make_example(7, params, theta=args.theta if args.theta is not None else Fraction(0))
    else:
        prof = radial_fourier(_example_profile(params, ex, args.theta, args.vartheta))
    thr = membership_threshold(prof)
    verdicts = []
    if not thr.all_s:
        for s in (thr.s_star - Fraction(1, 4), thr.s_star + Fraction(1, 4)):
            slope = series_slope(prof, s, range(20, 41))
            verdicts.append({"s": s, "converges": bool(s < thr.s_star), "series_slope": round(slope, 9)})
    payload = {"example": ex, "theta": args.theta, **thr.to_json(), "verdicts": verdicts}
    if ex == 7 and args.theta is not None:
        payload["stated_threshold"] = -(1 + 2 * args.theta) / 2
    _emit(opts, payload)
    return EXIT_OK


def cmd_tables(args, opts):
    params = opts["params"]
    q = params.q
    if args.count < 0 or args.count > q**6:
        raise UsageError(f"--count must lie in [0, q^6 = {q**6}]")
    rows = []
    for n in range(args.count):
        x = lam(n, params)
        row = {"n": n, "lambda": format_element(x)}
        if args.kind == "character":
            row["chi"] = uio.value_to_json(character(x), params.p)
        rows.append(row)
    if opts["format"] == "csv":
        if args.kind == "lambda":
            text = uio.to_csv(("n", "lambda"), [(r["n"], r["lambda"]) for r in rows])
        else:
            text = uio.to_csv(("n", "lambda", "chi"), [(r["n"], r["lambda"], " ".join(r["chi"]["cyclotomic"])) for r in rows])
        _emit(opts, text=text)
    else:
        _emit(opts, {"params": params.to_json(), "kind": args.kind, "rows": rows})
    return EXIT_OK


def _make_bank(name, params, seed=0):
    from .mra import make_haar_bank, perturb_bank, random_unitary_bank

    if name == "haar":
        return make_haar_bank(params)
    if name == "perturbed":
        return perturb_bank(make_haar_bank(params))
    return random_unitary_bank(params, random.Random(seed))


def cmd_filters(args, opts):
    from .mra import check_filter_bank

    bank = _make_bank(args.bank, opts["params"], args.seed)
    rep = check_filter_bank(bank, args.depth)
    _emit(opts, {"bank": bank.to_json(), "depth": args.depth, "report": rep.to_json()})
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_packets(args, opts):
    from .mra import ScalingFamily, make_haar_bank, packet_gram, wavelet_packet

    params = opts["params"]
    bank = make_haar_bank(params)
    fam = ScalingFamily(params, opts["s"])
    if args.action == "gen":
        w = wavelet_packet(bank, fam, args.n, args.j, args.k)
        _emit(opts, {"params": params.to_json(), "s": opts["s"], "packet": w.to_json()})
        return EXIT_OK
    G = packet_gram(bank, fam, args.j, args.N, args.K, _sp(opts))
    N = len(G)
    resid = max((abs(complex(G[a][b]) - (a == b)) for a in range(N) for b in range(N)), default=0.0)
    ok = all(G[a][b] == (1 if a == b else 0) for a in range(N) for b in range(N)) if opts["backend"] == "exact" \
        else resid <= float(opts["eps"])
    index = [(n, k) for n in range(args.N) for k in range(args.K)]
    if opts["format"] == "csv":
        header = ["n,k"] + [f"{n},{k}" for n, k in index]
        rows = [[f"{n},{k}"] + [_cell(v) for v in G[a]] for a, (n, k) in enumerate(index)]
        _emit(opts, text=uio.to_csv(header, rows))
    else:
        _emit(opts, {"index": index, "gram": G, "identity": ok, "residual": resid})
    return EXIT_OK if ok else EXIT_FAIL


def _cell(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Cyclotomic):
        return "cyclotomic(" + " ".join(str(c) for c in v.coords) + ")"
    z = complex(v)
    return f"{z.real!r}{z.imag:+}j"


def cmd_fractal(args, opts):
    from .fractals import cantor_truncate, fractal_ft_profile, weierstrass_truncate

    f = weierstrass_truncate(args.depth) if args.kind == "weierstrass" else cantor_truncate(args.depth)
    ft, rep = fractal_ft_profile(f)
    if args.emit:
        rows = []
        for b, c in sorted(ft.pieces, key=lambda bc: bc[0].sort_key()):
            m = -b.center.valuation if b.center.terms else -b.level
            rows.append((m, format_element(b.center), b.level, *_re_im(c)))
        with open(args.emit, "w") as fh:
            fh.write(uio.to_csv(("m", "center", "level", "re", "im"), rows))
    _emit(opts, {"kind": f.kind, "depth": f.depth, "sup_error": f.sup_error, "pieces": len(f.approx.pieces),
                 "report": rep.to_json()})
    return EXIT_OK


def _run_config(opts, **extra):
    from .verify import RunConfig

    kw = dict(q=opts["q"], s=opts["s"], backend=opts["backend"], eps=float(opts["eps"]))
    for key in ("bank", "jobs", "seed"):
        if opts.get(key) is not None:
            kw[key] = opts[key]
    kw.update(extra)
    return RunConfig(**kw)


def _report_payload(reports, extra=None):
    from .verify import summarize

    payload = {"summary": summarize(reports), "reports": [r.to_json() for r in reports]}
    payload.update(extra or {})
    return payload


def cmd_examples(args, opts):
    from .verify import run_examples, summarize

    try:
        ids = [int(x) for x in args.ids.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --ids {args.ids!r}")
    if any(i not in range(1, 11) for i in ids):
        raise UsageError("example ids must lie in 1..10")
    reports = run_examples(ids, _run_config(opts), theta=args.theta, depth=args.depth)
    _emit(opts, _report_payload(reports))
    return EXIT_OK if summarize(reports)["ok"] else EXIT_FAIL


def cmd_verify_all(args, opts):
    import time

    from .verify import CHECKS, run_checks, summarize

    jobs = opts.get("jobs") or max(1, min(len(CHECKS), os.cpu_count() or 1))
    names = args.checks.split(",") if args.checks else None
    if names and any(n not in CHECKS for n in names):
        raise UsageError(f"unknown check group; choose from {', '.join(CHECKS)}")
    t = time.perf_counter()
    reports, timings = run_checks(_run_config(opts, jobs=jobs), names)
    for name, dt in timings.items():
        print(f"{name}: {dt:.2f}s", file=sys.stderr)
    print(f"total: {time.perf_counter() - t:.2f}s", file=sys.stderr)
    _emit(opts, _report_payload(reports, {"config": {"q": opts["q"], "s": opts["s"], "backend": opts["backend"],
                                                     "eps": float(opts["eps"]), "bank": opts.get("bank") or "haar"}}))
    return EXIT_OK if summarize(reports)["ok"] else EXIT_FAIL


COMMANDS = {
    "ft": cmd_ft,
    "radial-ft": cmd_radial_ft,
    "norm": cmd_norm,
    "membership": cmd_membership,
    "tables": cmd_tables,
    "filters": cmd_filters,
    "packets": cmd_packets,
    "fractal": cmd_fractal,
    "examples": cmd_examples,
    "verify-all": cmd_verify_all,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        opts = resolve(args)
        return COMMANDS[args.command](args, opts)
    except (UsageError, ParameterError, WindowError, ValueError, OSError, KeyError) as exc:
        print(f"ultrawave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
