"""Command-line entry point: ``sgplab <command> [options]``.

Exit codes: 0 success, 2 usage error (unknown command or malformed flag),
3 invalid input, 4 numerical failure, 5 file I/O failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .arith import is_prime, primes_between
from .chargroup import build_group, gauss_sums_all
from .errors import NumericalError, ValidationError
from .lfun import default_truncation, l1_series_table, l1_table
from .moments import DEFAULT_PRIME_CUTOFF, PARITY_FILTERS, moment_report, rk_ap_indicator
from .serialize import dumps_csv, dumps_json
from .sgpsim import DEFAULT_EXPONENT_BOUND, run_experiment, tail_check, theoretical_bounds
from .unitlat import asymptotic_ratio, build_basis, dual_direct, dual_norm_via_L

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4, 5
OUTPUT_DIR_ENV = "SGPLAB_OUTPUT_DIR"
DIRECT_DUAL_MAX_Q = 2000


def _moduli(args) -> list[int]:
    if args.q_range is not None:
        lo, hi = args.q_range
        qs = primes_between(max(lo, 3), hi)
        if not qs:
            raise ValidationError(f"no odd primes in [{lo}, {hi}]")
        return qs
    return list(args.q)


def _check_prime(q: int, minimum: int = 3) -> None:
    if q < minimum or not is_prime(q) or q % 2 == 0:
        raise ValidationError(f"invalid modulus {q}: need an odd prime >= {minimum}")


def validate(args) -> None:
    positive = {"k": 1, "trials": 1, "threads": 1, "N": 1, "P": 2, "n": 2, "ell": 1, "ap_x": 1}
    for name, lo in positive.items():
        val = getattr(args, name, None)
        if val is not None and val < lo:
            raise ValidationError(f"--{name} must be >= {lo}, got {val}")
    for name in ("r", "t"):
        val = getattr(args, name, None)
        if val is not None and not (val > 0 and math.isfinite(val)):
            raise ValidationError(f"--{name} must be a positive finite number, got {val}")
    if getattr(args, "seed", None) is not None and args.seed < 0:
        raise ValidationError(f"--seed must be non-negative, got {args.seed}")
    if getattr(args, "q_range", None) is not None:
        lo, hi = args.q_range
        if lo > hi:
            raise ValidationError(f"empty range [{lo}, {hi}]")
    minimum = {"dualnorm": 5, "sgp": 5}.get(args.command, 3)
    if getattr(args, "q_range", None) is None and getattr(args, "q", None) is not None:
        for q in ([args.q] if isinstance(args.q, int) else args.q):
            _check_prime(q, minimum)


def cmd_chars(args):
    grp = build_group(args.q)
    taus = gauss_sums_all(grp)
    rows = [{"t": t, "parity": grp.parity(t), "conductor": grp.conductor(t),
             "gauss_re": float(taus[t].real) if t else None,
             "gauss_im": float(taus[t].imag) if t else None,
             "gauss_abs_sq": float(abs(taus[t]) ** 2) if t else None}
            for t in range(grp.q - 1)]
    result = {"q": grp.q, "g": grp.g,
              "dlog": {str(a): int(grp.dlog[a]) for a in range(1, grp.q)},
              "characters": rows}
    return result, rows


def cmd_lvalues(args):
    grp = build_group(args.q)
    if args.method == "series":
        tab = l1_series_table(grp, args.N)
    else:
        tab = l1_table(grp, method=args.method)
    if np.any(~np.isfinite(tab.values)) or np.min(np.abs(tab.values)) == 0.0:
        raise NumericalError(f"L-table for q={args.q} has non-finite or zero entries")
    return tab.to_dict(), tab.rows()


def cmd_moments(args):
    rows = []
    for q in _moduli(args):
        row = moment_report(q, args.k, args.parity, P=args.P).to_dict()
        if args.ap_x is not None:
            row["ap_x"] = args.ap_x
            row["ap_indicator"] = rk_ap_indicator(args.k, args.ap_x, q)
        rows.append(row)
    return (rows[0] if len(rows) == 1 else rows), rows


def cmd_dualnorm(args):
    rows = []
    for q in _moduli(args):
        if q < 5:
            continue
        nu_l = dual_norm_via_L(l1_table(build_group(q)))
        row = {"q": q, "n": (q - 1) // 2}
        if q <= args.direct_max:
            row["nu_direct"] = dual_direct(build_basis(q)).nu
            row["rel_diff"] = abs(row["nu_direct"] - nu_l) / nu_l
        else:
            row["nu_direct"] = None
            row["rel_diff"] = None
        row["nu_via_L"] = nu_l
        row["asymptote_4zeta_ratio"] = asymptotic_ratio(q, nu_l)
        row["nu_old_bound"] = theoretical_bounds(q).nu_old_bound
        rows.append(row)
    if not rows:
        raise ValidationError("dualnorm needs at least one prime q >= 5")
    return (rows[0] if len(rows) == 1 else rows), rows


def cmd_sgp(args):
    rep = run_experiment(args.q, args.r, args.trials, args.seed, bound=args.B,
                         workers=args.threads, keep_records=args.records is not None)
    if args.records is not None:
        _write(args.records, dumps_csv(rep.record_rows(), ["seed", "success", "max_overlap"]))
    d = rep.to_dict()
    row = {k: v for k, v in d.items() if k != "wilson_ci"}
    row["wilson_low"], row["wilson_high"] = d["wilson_ci"]
    return d, [row]


def cmd_tailcheck(args):
    rep = tail_check(args.n, args.ell, args.r, args.t, args.trials, args.seed)
    return rep.to_dict(), [rep.to_dict()]


COMMANDS = {"chars": cmd_chars, "lvalues": cmd_lvalues, "moments": cmd_moments,
            "dualnorm": cmd_dualnorm, "sgp": cmd_sgp, "tailcheck": cmd_tailcheck}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="output format (default: json)")
    common.add_argument("--output", "-o", default=None,
                        help=f"output file; default ${OUTPUT_DIR_ENV}/<command>.<format> "
                             "when that variable is set, else stdout")
    common.add_argument("--threads", type=int, default=1,
                        help="worker cap; never changes results (default: 1)")

    def qarg(p, multi=False):
        if multi:
            g = p.add_mutually_exclusive_group(required=True)
            g.add_argument("--q", type=int, nargs="+", help="one or more prime moduli")
            g.add_argument("--q-range", type=int, nargs=2, metavar=("LO", "HI"),
                           help="every odd prime in [LO, HI] (CSV sweep)")
        else:
            p.add_argument("--q", type=int, required=True, help="odd prime modulus")

    parser = argparse.ArgumentParser(prog="sgplab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("chars", parents=[common], help="character group, parities, Gauss sums")
    qarg(p)
    p = sub.add_parser("lvalues", parents=[common], help="L(1, chi) table")
    qarg(p)
    p.add_argument("--method", choices=("fft", "naive", "series"), default="fft",
                   help="closed form via one DFT, per-character closed form, or truncated series")
    p.add_argument("--N", type=int, default=None,
                   help="series truncation (default max(10^6, 100 q))")
    p = sub.add_parser("moments", parents=[common], help="negative moments vs main term")
    qarg(p, multi=True)
    p.add_argument("--k", type=int, default=1, help="moment order (default: 1)")
    p.add_argument("--parity", choices=PARITY_FILTERS, default="even", help="character family")
    p.add_argument("--P", type=int, default=DEFAULT_PRIME_CUTOFF,
                   help="Euler product prime cutoff (default: 10^6)")
    p.add_argument("--ap-x", type=int, default=None,
                   help="also report max_a |sum_{n<=x, n=a} r_k(n)|/sqrt(x) (indicator only)")
    p = sub.add_parser("dualnorm", parents=[common], help="dual-basis norm by both routes")
    qarg(p, multi=True)
    p.add_argument("--direct-max", type=int, default=DIRECT_DUAL_MAX_Q,
                   help=f"largest q for the O(n^3) direct dual (default: {DIRECT_DUAL_MAX_Q})")
    p = sub.add_parser("sgp", parents=[common], help="short-generator recovery experiment")
    qarg(p)
    p.add_argument("--trials", type=int, default=100, help="number of trials (default: 100)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    p.add_argument("--r", type=float, default=1.0, help="Gaussian standard deviation (default: 1)")
    p.add_argument("--B", type=int, default=DEFAULT_EXPONENT_BOUND,
                   help=f"exponent bound for the hidden unit (default: {DEFAULT_EXPONENT_BOUND})")
    p.add_argument("--records", default=None, help="also write per-trial CSV here")
    p = sub.add_parser("tailcheck", parents=[common], help="Gaussian log-modulus tail bound")
    p.add_argument("--n", type=int, default=500, help="dimension (default: 500)")
    p.add_argument("--ell", type=int, default=1, help="number of directions (default: 1)")
    p.add_argument("--r", type=float, default=1.0, help="Gaussian standard deviation (default: 1)")
    p.add_argument("--t", type=float, default=6.0, help="threshold (default: 6)")
    p.add_argument("--trials", type=int, default=10**5, help="trials (default: 10^5)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    return parser


def _resolved_config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "records")}
    if args.command == "lvalues" and args.method == "series" and args.N is None:
        cfg["N"] = default_truncation(args.q)
    return cfg


def _write(path, text: str) -> None:
    Path(path).write_text(text)


def _destination(args) -> str | None:
    if args.output:
        return args.output
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base:
        return str(Path(base) / f"{args.command}.{args.format}")
    return None


def dispatch(args) -> tuple[int, str]:
    """Run a parsed command; returns (exit status, serialized report)."""
    validate(args)
    result, rows = COMMANDS[args.command](args)
    if args.format == "csv":
        return EXIT_OK, dumps_csv(rows)
    return EXIT_OK, dumps_json({"command": args.command, "config": _resolved_config(args),
                                "result": result})


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, text = dispatch(args)
        dest = _destination(args)
        if dest is None:
            sys.stdout.write(text)
        else:
            _write(dest, text)
    except ValidationError as exc:
        print(f"sgplab: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"sgplab: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"sgplab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


if __name__ == "__main__":
    sys.exit(main())
