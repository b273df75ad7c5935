"""
Command-line front end.

    hemirobin spectrum --sigma 1 --ell-max 50
    hemirobin gaps --sigma 1 --ell 150
    hemirobin cap --theta0 60 --degrees --bc dirichlet --nu-max 100

Tables go to ``--output``, else to ``$HEMIROBIN_OUTDIR/<command>.<format>``
when that variable is set, else to standard output. Exit status is 2 for
invalid input and 3 for numerical failures.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import tables
from .cap import BoundaryCondition, CapProblem, cap_spacing_report, cap_spectrum
from .errors import DomainError
from .secular import secular_S
from .spectrum import build_spectrum, make_cluster
from .stats import (
    GapSample,
    cluster_gap_mean,
    spacing_distribution,
    szego_ks_distance,
)

OUTDIR_ENV = "HEMIROBIN_OUTDIR"
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(Exception):
    pass


def _nonneg_float(text):
    v = float(text)
    if not v >= 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number >= 0, got {text}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {text}")
    return v


def _pos_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hemirobin", description="Robin spectra of the hemisphere and spherical caps.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True):
        sp.add_argument("--output", "-o", type=Path, help="output file (default: stdout or $%s)" % OUTDIR_ENV)
        if fmt:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--threads", type=_pos_int, default=1, help="worker threads for the solver sweep")
        return sp

    sp = common(sub.add_parser("spectrum", help="sorted desymmetrized spectrum"))
    sp.add_argument("--sigma", type=_nonneg_float, required=True)
    sp.add_argument("--ell-max", type=_nonneg_int, required=True)

    sp = common(sub.add_parser("clusters", help="entries of one or more clusters"))
    sp.add_argument("--sigma", type=_nonneg_float, required=True)
    sp.add_argument("--ell", type=_nonneg_int, nargs="+", required=True)

    sp = common(sub.add_parser("gaps", help="RN gaps of a cluster with their leading-order prediction"))
    sp.add_argument("--sigma", type=_nonneg_float, required=True)
    sp.add_argument("--ell", type=_pos_int, nargs="+", required=True)

    sp = common(sub.add_parser("szego", help="cluster gap means and KS distances to the limit law"), fmt=False)
    sp.add_argument("--sigma", type=_nonneg_float, required=True)
    sp.add_argument("--ell", type=_pos_int, nargs="+", required=True)

    sp = common(sub.add_parser("spacings", help="histogram of normalized nearest-neighbour spacings"))
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--ell-max", type=_nonneg_int)
    src.add_argument("--input", type=Path, help="spectrum table written by 'spectrum'")
    sp.add_argument("--sigma", type=_nonneg_float, default=1.0)
    sp.add_argument("--bins", type=_pos_int, default=100)
    sp.add_argument("--range", type=float, nargs=2, default=(0.0, 5.0), metavar=("LO", "HI"))
    sp.add_argument("--summary", type=Path, help="also write a JSON summary here")

    sp = common(sub.add_parser("cap", help="eigenvalues of a spherical cap"))
    sp.add_argument("--theta0", type=float, required=True, help="opening angle (radians unless --degrees)")
    sp.add_argument("--degrees", action="store_true")
    sp.add_argument("--bc", choices=("dirichlet", "neumann", "robin"), required=True)
    sp.add_argument("--sigma", type=_nonneg_float, default=0.0, help="Robin parameter")
    sp.add_argument("--nu-max", type=float, required=True)
    sp.add_argument("--summary", type=Path, help="also write a JSON summary here")

    sp = common(sub.add_parser("secular-plot", help="samples of S_m(nu) away from its poles"))
    sp.add_argument("--m", type=_nonneg_int, nargs="+", default=[4, 5])
    sp.add_argument("--nu-min", type=float, default=0.05)
    sp.add_argument("--nu-max", type=float, default=10.0)
    sp.add_argument("--step", type=float, default=0.01)
    sp.add_argument("--clip", type=float, default=20.0, help="drop samples with |S| above this")

    sp = sub.add_parser("verify", help="run the acceptance checks")
    sp.add_argument("--only", type=_pos_int, nargs="+", help="criterion numbers to run")
    return p


def _emit(text: str, args, default_name: str):
    path = args.output
    if path is None and os.environ.get(OUTDIR_ENV):
        path = Path(os.environ[OUTDIR_ENV]) / default_name
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def _write_rows(rows, columns, args):
    fmt = getattr(args, "format", "csv")
    _emit(tables.write_table(rows, columns, fmt), args, f"{args.command}.{fmt}")


def _cmd_spectrum(args):
    spec = build_spectrum(args.sigma, args.ell_max, workers=args.threads)
    _write_rows(tables.spectrum_rows(spec), tables.SPECTRUM_COLUMNS, args)


def _cmd_clusters(args):
    rows = []
    for ell in args.ell:
        c = make_cluster(ell, args.sigma)
        rows += [(e.n, e.ell, e.m, e.sigma, e.nu, e.lam, e.delta, e.rn_gap) for e in c.entries]
    _write_rows(rows, tables.SPECTRUM_COLUMNS, args)


def _cmd_gaps(args):
    if args.sigma == 0:
        raise ConfigError("gaps need sigma > 0")
    rows = []
    for ell in args.ell:
        rows += list(tables.gap_rows(make_cluster(ell, args.sigma)))
    _write_rows(rows, tables.GAP_COLUMNS, args)


def _cmd_szego(args):
    if args.sigma == 0:
        raise ConfigError("szego needs sigma > 0")
    out = {"sigma": args.sigma, "lower_edge": 4.0 * args.sigma / math.pi, "clusters": []}
    for ell in args.ell:
        c = make_cluster(ell, args.sigma)
        entry = {"ell": ell, "mean_gap": cluster_gap_mean(c), "size": c.size}
        try:
            entry["ks_distance"] = szego_ks_distance(GapSample.from_cluster(c))
        except DomainError:
            entry["ks_distance"] = None
        out["clusters"].append(entry)
    _emit(tables.dump_json(out), args, "szego.json")


def _spacing_summary(hist, source):
    return {
        "source": source,
        "n_samples": hist.n_samples,
        "mean_raw_spacing": hist.mean_raw_spacing,
        "overflow": hist.overflow,
        "fraction_above_half": hist.tail_fraction(0.5),
    }


def _cmd_spacings(args):
    if args.input is not None:
        lam = tables.read_lambdas(args.input)
        source = str(args.input)
    else:
        lam = build_spectrum(args.sigma, args.ell_max, workers=args.threads).lambdas
        source = f"sigma={args.sigma:g}, ell_max={args.ell_max}"
    lo, hi = args.range
    if not 0 <= lo < hi:
        raise ConfigError("--range needs 0 <= LO < HI")
    hist = spacing_distribution(lam, bins=args.bins, range=(lo, hi))
    _write_rows(tables.histogram_rows(hist), tables.HISTOGRAM_COLUMNS, args)
    if args.summary is not None:
        args.summary.write_text(tables.dump_json(_spacing_summary(hist, source)))


def _cmd_cap(args):
    theta0 = math.radians(args.theta0) if args.degrees else args.theta0
    if args.bc == "robin":
        bc = BoundaryCondition.robin(args.sigma)
    else:
        bc = BoundaryCondition(args.bc)
    spec = cap_spectrum(CapProblem(theta0, bc, args.nu_max), workers=args.threads)
    _write_rows(tables.cap_rows(spec), tables.CAP_COLUMNS, args)
    if args.summary is not None:
        try:
            ks = cap_spacing_report(spec).ks_exponential
        except DomainError:
            ks = None
        summary = {
            "theta0": theta0,
            "bc": str(bc),
            "nu_max": args.nu_max,
            "total": len(spec),
            "counts_per_m": spec.counts_per_m,
            "ks_exponential": ks,
        }
        args.summary.write_text(tables.dump_json(summary))


def _cmd_secular_plot(args):
    if not 0 < args.nu_min < args.nu_max or not args.step > 0:
        raise ConfigError("need 0 < nu-min < nu-max and step > 0")
    nus = args.nu_min + args.step * np.arange(int(math.floor((args.nu_max - args.nu_min) / args.step + 1e-9)) + 1)
    nus = np.round(nus, 12)
    rows = []
    for m in args.m:
        for nu in nus:
            s = secular_S(m, float(nu))
            if math.isfinite(s) and abs(s) <= args.clip:
                rows.append((m, float(nu), s))
    _write_rows(rows, ("m", "nu", "S"), args)


def _cmd_verify(args):
    from .acceptance import run_all

    results = run_all(args.only)
    for r in results:
        print(r.line(), flush=True)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


COMMANDS = {
    "spectrum": _cmd_spectrum,
    "clusters": _cmd_clusters,
    "gaps": _cmd_gaps,
    "szego": _cmd_szego,
    "spacings": _cmd_spacings,
    "cap": _cmd_cap,
    "secular-plot": _cmd_secular_plot,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args) or 0
    except (ConfigError, DomainError, OSError) as exc:
        print(f"hemirobin {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"hemirobin {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
