"""Command-line entry point: ``weylcalc verify|quantize|moyal|report``.

Exit codes: 0 pass, 1 assertion failure, 2 usage or I/O error.

Config files use ``key = value`` lines grouped in ``[section]`` blocks.  The
``[verify]`` section overrides profile settings for every suite, and a
section named after a suite overrides them for that suite only.  Values are
parsed as Python literals (ints, floats, lists).
"""
import argparse
import ast
import configparser
import os
import sys

import numpy as np

from .calculus import mehler_symbol, quantize, seminorm
from .errors import WeylCalcError
from .fileio import read_field, write_field, write_matrix
from .grids import PhaseGrid, StateGrid
from .moyal import moyal_expansion, moyal_fft, moyal_gaussian
from .pairs import (GaussianPairBackend, GridStandardBackend, HermiteBackend,
                    TwistedStandardBackend, skew_transform)
from .report import VerificationReport
from .suites import SUITES, run_suite, settings_for
from .symbols import GaussianSymbolParams, is_closed_form

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# parsing helpers

def _numbers(text, count, what):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count:
        raise UsageError(f"{what}: expected {count} comma-separated values, got {text!r}")
    try:
        return [complex(p.replace("i", "j")) if "j" in p or "i" in p else float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"{what}: cannot parse {text!r}") from exc


def parse_symbol(text):
    """``gaussian:c,lam`` | ``mehler:t,d`` | path to a phase field file.

    Returns ``(symbol, pgrid)``; ``pgrid`` is None for closed forms.
    """
    if text.startswith("gaussian:"):
        c, lam = _numbers(text[len("gaussian:"):], 2, "gaussian symbol")
        try:
            return GaussianSymbolParams(c, lam), None
        except WeylCalcError as exc:
            raise UsageError(f"gaussian symbol: {exc}") from exc
    if text.startswith("mehler:"):
        t, d = _numbers(text[len("mehler:"):], 2, "mehler symbol")
        if np.real(d) != int(np.real(d)) or int(np.real(d)) != 1:
            raise UsageError("mehler symbol: only d=1 is supported")
        try:
            return mehler_symbol(t, 1), None
        except WeylCalcError as exc:
            raise UsageError(f"mehler symbol: {exc}") from exc
    if not os.path.exists(text):
        raise UsageError(f"symbol file not found: {text}")
    try:
        values, d, N = read_field(text)
    except (OSError, ValueError) as exc:
        raise UsageError(f"{text}: {exc}") from exc
    pgrid = PhaseGrid(StateGrid(N, d))
    if values.size != pgrid.size:
        raise UsageError(f"{text}: expected a phase-space field")
    return values.reshape(pgrid.shape), pgrid


def parse_backend(text):
    """``grid:N`` | ``hermite:n_max`` | ``twisted:N`` | ``gaussian:N`` | ``skew:lam:<backend>``."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "skew":
            lam, _, base = rest.partition(":")
            return skew_transform(parse_backend(base), float(lam))
        n = int(rest)
        if kind == "grid":
            return GridStandardBackend(StateGrid(n, 1))
        if kind == "hermite":
            return HermiteBackend(n)
        if kind == "twisted":
            return TwistedStandardBackend(StateGrid(n, 2))
        if kind == "gaussian":
            return GaussianPairBackend(StateGrid(n, 1))
    except (ValueError, WeylCalcError) as exc:
        raise UsageError(f"backend {text!r}: {exc}") from exc
    raise UsageError(f"unknown backend {text!r}")


def load_config(path, suite):
    if path is None:
        return {}
    if not os.path.exists(path):
        raise UsageError(f"config file not found: {path}")
    cp = configparser.ConfigParser()
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise UsageError(f"{path}: {exc}") from exc
    out = {}
    for section in ("verify", suite):
        if cp.has_section(section):
            for key, raw in cp.items(section):
                try:
                    out[key] = ast.literal_eval(raw)
                except (ValueError, SyntaxError) as exc:
                    raise UsageError(f"{path}: [{section}] {key}: cannot parse {raw!r}") from exc
    return out


def _emit(text, out):
    sys.stdout.write(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# commands

def cmd_verify(args):
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    overrides = {}
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for name in suites:
        overrides = load_config(args.config, name)
        if args.N is not None:
            overrides["N"] = args.N
        cfg = settings_for(args.profile, overrides)
        reports.extend(run_suite(name, cfg))
    summary = VerificationReport("summary")
    summary.record("profile", args.profile)
    summary.record("suites", [r.name for r in reports])
    for r in reports:
        summary.check_true(r.name, r.passed)
    text = "\n".join(r.to_text() for r in reports + [summary])
    _emit(text, args.out)
    failed = [f"{r.name}.{c.name}" for r in reports for c in r.failures()]
    if failed:
        sys.stderr.write("failed: " + ", ".join(failed) + "\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_quantize(args):
    bk = parse_backend(args.backend)
    a, pgrid = parse_symbol(args.symbol)
    try:
        M = quantize(bk, a, pgrid)
    except WeylCalcError as exc:
        raise UsageError(str(exc)) from exc
    rep = VerificationReport("quantize")
    rep.record("backend", bk.kind)
    rep.record("rows", M.shape[0])
    rep.record("cols", M.shape[1])
    rep.record("entry_0_0", complex(M[0, 0]))
    if args.out:
        write_matrix(args.out, M)
        rep.record("out", args.out)
    sys.stdout.write(rep.to_text())
    return EXIT_OK


def _grid_for(pa, pb, N):
    grids = [g for g in (pa, pb) if g is not None]
    if len(grids) == 2 and grids[0] != grids[1]:
        raise UsageError("symbols are sampled on different grids")
    return grids[0] if grids else PhaseGrid(StateGrid(N, 1))


def cmd_moyal(args):
    a, pa = parse_symbol(args.a)
    b, pb = parse_symbol(args.b)
    method = args.method
    rep = VerificationReport("moyal")
    rep.record("method", method)
    if method == "exact-gaussian":
        if not (isinstance(a, GaussianSymbolParams) and isinstance(b, GaussianSymbolParams)):
            raise UsageError("exact-gaussian needs two closed-form Gaussian symbols")
        out = moyal_gaussian(a, b)
        rep.record("c", complex(out.c))
        rep.record("lambda", complex(out.lam))
        pgrid = PhaseGrid(StateGrid(args.N, 1))
        field = out.sample(pgrid)
    else:
        pgrid = _grid_for(pa, pb, args.N)
        if method == "fft":
            field = moyal_fft(a, b, pgrid)
        elif method.startswith("expansion:"):
            try:
                M = int(method.split(":", 1)[1])
                field = moyal_expansion(a, b, M, pgrid)
            except (ValueError, WeylCalcError) as exc:
                raise UsageError(f"method {method!r}: {exc}") from exc
        else:
            raise UsageError(f"unknown method {method!r}")
    rep.record("N", pgrid.N)
    rep.record("max_abs", float(np.abs(field).max()))
    if args.out:
        write_field(args.out, field.reshape(-1), pgrid.d, pgrid.N)
        rep.record("out", args.out)
    sys.stdout.write(rep.to_text())
    return EXIT_OK


def cmd_report(args):
    from .diagnostics import domination_check, sector_lambda_check
    if args.kind == "seminorms":
        if not args.symbol:
            raise UsageError("report seminorms needs --symbol")
        a, pgrid = parse_symbol(args.symbol)
        pgrid = pgrid or PhaseGrid(StateGrid(args.grid, 1))
        try:
            rep = seminorm(a, args.N, args.m, pgrid).as_report()
        except WeylCalcError as exc:
            raise UsageError(str(exc)) from exc
    elif args.kind == "spectrum":
        bk = parse_backend(args.backend or "hermite:12")
        if not isinstance(bk, HermiteBackend):
            raise UsageError("report spectrum needs a hermite backend")
        ev = np.linalg.eigvalsh(bk.L)[: bk.n_max - 3]
        rep = VerificationReport("spectrum")
        rep.record("n_max", bk.n_max)
        for n, v in enumerate(ev):
            rep.record(f"eigenvalue.{n}", float(v))
        rep.check_below("integer_spectrum", float(np.max(np.abs(ev - np.arange(ev.size)))), 1e-10)
    elif args.kind == "constants":
        theta = args.theta
        if not 0 < theta < np.pi / 2:
            raise UsageError("--theta must lie in (0, pi/2)")
        if args.suite == "sectorial":
            rep = sector_lambda_check(theta)
        elif args.suite == "domination":
            rep = domination_check(theta)
        else:
            raise UsageError("report constants supports --suite sectorial|domination")
    else:
        raise UsageError(f"unknown report kind {args.kind!r}")
    sys.stdout.write(rep.to_text())
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="weylcalc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help="suite name or 'all'")
    v.add_argument("--profile", choices=("quick", "full"), default="quick")
    v.add_argument("--config", help="key = value config file with [sections]")
    v.add_argument("--out", help="also write the report here")
    v.add_argument("--N", type=int, help="override the 1-D grid size")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("quantize", help="quantize a symbol on a backend")
    q.add_argument("--symbol", required=True)
    q.add_argument("--backend", required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_quantize)

    m = sub.add_parser("moyal", help="Moyal product of two symbols")
    m.add_argument("--a", required=True)
    m.add_argument("--b", required=True)
    m.add_argument("--method", default="fft", help="exact-gaussian | fft | expansion:M")
    m.add_argument("--N", type=int, default=64, help="grid size for closed-form symbols")
    m.add_argument("--out")
    m.set_defaults(func=cmd_moyal)

    r = sub.add_parser("report", help="structured-text reports")
    r.add_argument("kind", choices=("seminorms", "spectrum", "constants"))
    r.add_argument("--symbol")
    r.add_argument("--N", type=int, default=0, help="seminorm weight order")
    r.add_argument("--m", type=int, default=2, help="seminorm derivative order")
    r.add_argument("--grid", type=int, default=64, help="grid size for closed-form symbols")
    r.add_argument("--backend")
    r.add_argument("--suite", default="sectorial")
    r.add_argument("--theta", type=float, default=np.pi / 4)
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"weylcalc: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"weylcalc: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
