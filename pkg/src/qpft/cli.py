"""Command-line front end.

Subcommands: gen, transform, convolve, filter, solve, boas, verify.  Signals
travel as SignalFile containers (binary by default, CSV with --csv); every
command prints a JSON report to stdout and exits 0 on success, 2 on
validation errors, 3 on numeric failures.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .applications import (
    ConvolutionEquation,
    FilterSpec,
    apply_filter,
    design_filter,
    snr_db,
    solve_convolution_equation,
)
from .boas import boas_growth
from .convolution import (
    ConvKind,
    conv_plain,
    conv_type1,
    conv_type2,
    conv_type3,
    dual_type2,
)
from .core import FREQUENCY, Field, Grid, QpftParams, l2_norm, validate_params
from .errors import (
    EdgeMass,
    NoSpectralGap,
    QpftError,
    QuadratureNonConvergence,
    ResolutionError,
    SingularSymbol,
)
from .inversion import approx_identity_apply
from .signal_io import (
    flatten_report,
    read_signal,
    write_report,
    write_signal,
    write_signal_csv,
)
from .signals import gaussian, noisy_mix, spectral_bump
from .transform import default_frequency_grid, iqpft, parseval_residual, qpft
from .verify import DEFAULT_SEED, SUITE_NAMES, run_suites

NUMERIC_FAILURES = (
    SingularSymbol,
    QuadratureNonConvergence,
    NoSpectralGap,
    EdgeMass,
    ResolutionError,
)


def parse_params(text: str) -> QpftParams:
    """Quintuples as 'a,b,c,d,e' per dimension, joined by semicolons."""
    quints = []
    for part in text.split(";"):
        vals = [float(v) for v in part.split(",")]
        if len(vals) != 5:
            raise ValueError(f"expected 5 comma-separated values per axis, got {part!r}")
        quints.append(tuple(vals))
    return validate_params(quints)


def parse_grid(text: str) -> Grid:
    """Per-axis 'start:stop:count' ranges joined by commas; stop exclusive."""
    ranges = []
    for part in text.split(","):
        pieces = part.split(":")
        if len(pieces) != 3:
            raise ValueError(f"expected start:stop:count, got {part!r}")
        ranges.append((float(pieces[0]), float(pieces[1]), int(pieces[2])))
    return Grid.from_ranges(ranges)


def parse_floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def parse_complex(text: str) -> complex:
    parts = [float(v) for v in text.split(",")]
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise ValueError(f"expected 're' or 're,im', got {text!r}")


def parse_band(text: str) -> tuple[tuple[float, float], ...]:
    band = []
    for part in text.split(","):
        lo, hi = part.split(":")
        band.append((float(lo), float(hi)))
    return tuple(band)


def _write(path: str, field: Field, params: QpftParams | None, csv: bool):
    if csv:
        write_signal_csv(path, field, params)
    else:
        write_signal(path, field, params)


def _emit(report: dict, path: str | None, csv_path: str | None):
    print(json.dumps(report, indent=2, sort_keys=True))
    if path:
        write_report(path, report)
    if csv_path:
        rows = flatten_report(report)
        text = "key,value\n" + "\n".join(f"{k},{v}" for k, v in rows) + "\n"
        with open(csv_path, "w") as fh:
            fh.write(text)


def _cmd_gen(args) -> int:
    grid = parse_grid(args.grid)
    params = parse_params(args.params) if args.params else None
    t0 = time.perf_counter()
    extra = {}
    if args.kind == "gaussian":
        width = parse_floats(args.p)
        center = parse_floats(args.center) if args.center else None
        out = gaussian(grid, width, center, parse_complex(args.amplitude))
    elif args.kind == "spectral-bump":
        if params is None:
            raise ValueError("spectral-bump requires --params")
        out = spectral_bump(params, grid, parse_floats(args.center or "1.5"),
                            parse_floats(args.sigma), two_sided=not args.one_sided,
                            path=args.path)
    else:  # noisy-mix
        if params is None:
            raise ValueError("noisy-mix requires --params")
        received, clean, noise = noisy_mix(
            params, grid,
            signal_center=parse_floats(args.signal_center),
            signal_sigma=parse_floats(args.signal_sigma),
            noise_center=parse_floats(args.noise_center),
            noise_sigma=parse_floats(args.noise_sigma),
            noise_energy_ratio=args.noise_energy_ratio,
            path=args.path,
        )
        out = received
        if args.clean_out:
            _write(args.clean_out, clean, params, args.csv)
            extra["clean_output"] = args.clean_out
        if args.noise_out:
            _write(args.noise_out, noise, params, args.csv)
            extra["noise_output"] = args.noise_out
        extra["input_snr_db"] = snr_db(received, clean)
    _write(args.output, out, params, args.csv)
    report = {
        "command": "gen", "kind": args.kind, "output": args.output,
        "l2_norm": l2_norm(out), "samples": out.grid.size,
        "timing_s": round(time.perf_counter() - t0, 6), **extra,
    }
    _emit(report, args.report, None)
    return 0


def _cmd_transform(args) -> int:
    field, stored = read_signal(args.input)
    params = parse_params(args.params) if args.params else stored
    if params is None:
        raise ValueError("no --params given and none stored in the input file")
    out_grid = parse_grid(args.out_grid) if args.out_grid else None
    t0 = time.perf_counter()
    if args.inverse:
        if out_grid is None:
            raise ValueError("--inverse requires --out-grid (the target space grid)")
        out = iqpft(field, params, out_grid, args.path)
        extras = {}
    else:
        res = parseval_residual(field, params, out_grid, args.path)
        out = qpft(field, params, out_grid, args.path)
        extras = {"parseval_residual": res}
    _write(args.output, out, params, args.csv)
    report = {
        "command": "transform", "inverse": bool(args.inverse), "path": args.path,
        "output": args.output, "l2_in": l2_norm(field), "l2_out": l2_norm(out),
        "timing_s": round(time.perf_counter() - t0, 6), **extras,
    }
    _emit(report, args.report, None)
    return 0


def _cmd_convolve(args) -> int:
    f, stored = read_signal(args.input)
    g, _ = read_signal(args.input2)
    params = parse_params(args.params) if args.params else stored
    t0 = time.perf_counter()
    if args.kind == "plain":
        out = conv_plain(f, g)
    else:
        if params is None:
            raise ValueError(f"kind {args.kind} requires --params")
        if args.kind == "type1":
            out = conv_type1(f, g, params)
        elif args.kind == "type2":
            out = conv_type2(f, g, params)
        elif args.kind == "type2-dual":
            out = dual_type2(f, g, params)
        else:
            if args.lam is None:
                raise ValueError("type3 requires --lambda")
            out = conv_type3(f, g, params, args.lam)
    _write(args.output, out, params, args.csv)
    report = {
        "command": "convolve", "kind": args.kind, "output": args.output,
        "l2_out": l2_norm(out), "timing_s": round(time.perf_counter() - t0, 6),
    }
    if args.lam is not None:
        report["lambda"] = args.lam
    _emit(report, args.report, None)
    return 0


def _cmd_filter(args) -> int:
    field, stored = read_signal(args.input)
    params = parse_params(args.params) if args.params else stored
    if params is None:
        raise ValueError("filter requires --params (or params stored in the input)")
    spec = FilterSpec(parse_band(args.passband), args.rolloff, args.width, args.floor)
    wgrid = default_frequency_grid(params, field.grid)
    t0 = time.perf_counter()
    mask = design_filter(spec, params, wgrid)
    out = apply_filter(field, mask, params, args.path)
    _write(args.output, out, params, args.csv)
    report = {
        "command": "filter", "output": args.output,
        "passband": [list(b) for b in spec.passband],
        "rolloff": spec.rolloff, "floor": spec.floor,
        "l2_in": l2_norm(field), "l2_out": l2_norm(out),
        "timing_s": round(time.perf_counter() - t0, 6),
    }
    if args.mask_out:
        _write(args.mask_out, mask, params, args.csv)
        report["mask_output"] = args.mask_out
    if args.clean:
        clean, _ = read_signal(args.clean)
        report["input_snr_db"] = snr_db(field, clean)
        report["output_snr_db"] = snr_db(out, clean)
        report["snr_gain_db"] = report["output_snr_db"] - report["input_snr_db"]
    _emit(report, args.report, None)
    return 0


def _cmd_solve(args) -> int:
    kernel, stored = read_signal(args.kernel)
    rhs, _ = read_signal(args.rhs)
    params = parse_params(args.params) if args.params else stored
    if params is None:
        raise ValueError("solve requires --params (or params stored in the kernel file)")
    kind = ConvKind(args.kind, args.lam if args.kind == "type3" else None)
    eq = ConvolutionEquation(parse_complex(args.lambda_coeff), kernel, rhs, kind, params)
    t0 = time.perf_counter()
    res = solve_convolution_equation(eq, args.reg, args.path)
    _write(args.output, res.solution, params, args.csv)
    report = {
        "command": "solve", "kind": args.kind, "output": args.output,
        "residual": res.residual, "symbol_min_abs": res.symbol_min,
        "regularization": res.regularization, "l2_solution": l2_norm(res.solution),
        "timing_s": round(time.perf_counter() - t0, 6),
    }
    _emit(report, args.report, None)
    return 0


def _cmd_boas(args) -> int:
    field, stored = read_signal(args.input)
    params = parse_params(args.params) if args.params else stored
    if params is None:
        raise ValueError("boas requires --params (or params stored in the input)")
    t0 = time.perf_counter()
    state = boas_growth(field, params, args.iterations)
    if args.output:
        _write(args.output, state.iterates[1], params, args.csv)
    report = {
        "command": "boas", "iterations": len(state.norms) - 1,
        "norms": list(state.norms),
        "r_estimate": state.r_estimate,
        "gamma_estimate": state.gamma_estimate,
        "gamma_measured": state.gamma_measured,
        "timing_s": round(time.perf_counter() - t0, 6),
    }
    if args.output:
        report["output"] = args.output
    _emit(report, args.report, None)
    return 0


def _cmd_verify(args) -> int:
    t0 = time.perf_counter()
    report = run_suites(tuple(args.suite), args.seed)
    report["command"] = "verify"
    report["timing_s"] = round(time.perf_counter() - t0, 6)
    _emit(report, args.report, args.csv_report)
    return 0 if report["passed"] else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpft",
        description="Quadratic phase Fourier transform toolbox",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, output=True):
        if output:
            sp.add_argument("--output", "-o", required=True, help="output signal file")
            sp.add_argument("--csv", action="store_true",
                            help="write signals as CSV instead of binary")
        sp.add_argument("--report", help="also write the JSON report to this path")

    gen = sub.add_parser("gen", help="generate test signals")
    gen.add_argument("kind", choices=("gaussian", "spectral-bump", "noisy-mix"))
    gen.add_argument("--grid", required=True, help="start:stop:count[,start:stop:count...]")
    gen.add_argument("--params", help="a,b,c,d,e[;a,b,c,d,e...]")
    gen.add_argument("--p", default="0.5", help="gaussian widths per axis")
    gen.add_argument("--center", help="per-axis centers")
    gen.add_argument("--amplitude", default="1", help="re[,im]")
    gen.add_argument("--sigma", default="0.1", help="bump widths per axis")
    gen.add_argument("--one-sided", action="store_true",
                     help="do not mirror the spectral bump")
    gen.add_argument("--signal-center", default="1.0")
    gen.add_argument("--signal-sigma", default="0.12")
    gen.add_argument("--noise-center", default="3.0")
    gen.add_argument("--noise-sigma", default="0.15")
    gen.add_argument("--noise-energy-ratio", type=float, default=10.0)
    gen.add_argument("--clean-out", help="also write the clean component")
    gen.add_argument("--noise-out", help="also write the noise component")
    gen.add_argument("--path", choices=("fast", "direct"), default="fast")
    add_common(gen)
    gen.set_defaults(func=_cmd_gen)

    tr = sub.add_parser("transform", help="forward or inverse transform")
    tr.add_argument("--input", "-i", required=True)
    tr.add_argument("--params", help="override parameters stored in the file")
    tr.add_argument("--inverse", action="store_true")
    tr.add_argument("--path", choices=("fast", "direct"), default="fast")
    tr.add_argument("--out-grid", help="output grid (required for --inverse)")
    add_common(tr)
    tr.set_defaults(func=_cmd_transform)

    cv = sub.add_parser("convolve", help="convolution operators")
    cv.add_argument("--input", "-i", required=True)
    cv.add_argument("--input2", "-j", required=True)
    cv.add_argument("--kind", choices=("plain", "type1", "type2", "type2-dual", "type3"),
                    required=True)
    cv.add_argument("--lambda", dest="lam", type=float, help="type3 scale")
    cv.add_argument("--params")
    add_common(cv)
    cv.set_defaults(func=_cmd_convolve)

    fl = sub.add_parser("filter", help="multiplicative spectral filtering")
    fl.add_argument("--input", "-i", required=True)
    fl.add_argument("--params")
    fl.add_argument("--passband", required=True, help="lo:hi[,lo:hi...]")
    fl.add_argument("--rolloff", choices=("hard", "raised-cosine"), default="hard")
    fl.add_argument("--width", type=float, default=0.0, help="raised-cosine width")
    fl.add_argument("--floor", type=float, default=0.0, help="stopband gain")
    fl.add_argument("--mask-out", help="also write the mask field")
    fl.add_argument("--clean", help="clean reference signal for SNR reporting")
    fl.add_argument("--path", choices=("fast", "direct"), default="fast")
    add_common(fl)
    fl.set_defaults(func=_cmd_filter)

    so = sub.add_parser("solve", help="convolution-equation solver")
    so.add_argument("--kernel", required=True)
    so.add_argument("--rhs", required=True)
    so.add_argument("--params")
    so.add_argument("--kind", choices=("type1", "type3"), default="type1")
    so.add_argument("--lambda", dest="lam", type=float, help="type3 scale")
    so.add_argument("--lambda-coeff", required=True, help="equation coefficient re[,im]")
    so.add_argument("--reg", type=float, default=0.0, help="Tikhonov guard")
    so.add_argument("--path", choices=("fast", "direct"), default="fast")
    add_common(so)
    so.set_defaults(func=_cmd_solve)

    bo = sub.add_parser("boas", help="tail-integral growth analysis")
    bo.add_argument("--input", "-i", required=True)
    bo.add_argument("--params")
    bo.add_argument("--iterations", type=int, default=5)
    bo.add_argument("--output", "-o", help="write the first iterate")
    bo.add_argument("--csv", action="store_true")
    bo.add_argument("--report")
    bo.set_defaults(func=_cmd_boas)

    vf = sub.add_parser("verify", help="run the verification suites")
    vf.add_argument("--suite", nargs="+", default=["all"],
                    choices=list(SUITE_NAMES) + ["all"])
    vf.add_argument("--seed", type=int, default=DEFAULT_SEED)
    vf.add_argument("--report")
    vf.add_argument("--csv-report", help="flattened key,value CSV of the report")
    vf.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NUMERIC_FAILURES as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (QpftError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
