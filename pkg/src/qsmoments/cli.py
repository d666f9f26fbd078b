"""Command-line front end: ``qsmoments {dist,moments,verify,simulate}``.

Every flag falls back to an environment variable ``QM_<FLAG>`` (upper case,
dashes as underscores), e.g. ``QM_MAX_N`` for ``--max-n``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
limit, 4 unsupported combination.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from decimal import Context, Decimal
from fractions import Fraction

from . import __version__, brute_oracle, closed_form, montecarlo, pgf_engine
from .errors import ContractViolation, ResourceLimitError, UnsupportedError
from .verify import run_checks

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_UNSUPPORTED = 4

_DEC20 = Context(prec=20)


def exact_str(x) -> str:
    """Decimal string for ints, "p/q" for non-integral rationals."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(int(x))


def approx_str(x: Fraction) -> str:
    """Exactly 20 significant digits, scientific notation."""
    x = Fraction(x)
    if not x:
        return "0.0000000000000000000e+0"
    d = _DEC20.divide(Decimal(x.numerator), Decimal(x.denominator))
    return f"{d:.19e}"


def dump_json(envelope: dict) -> str:
    return json.dumps(envelope, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def dump_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _envelope(command: str, parameters: dict, results, **metadata) -> dict:
    meta = {"tool": "qsmoments", "version": __version__}
    meta.update(metadata)
    return {"command": command, "parameters": parameters, "results": results, "metadata": meta}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env(flag: str, default=None):
    return os.environ.get("QM_" + flag.lstrip("-").upper().replace("-", "_"), default)


def _add(p: argparse.ArgumentParser, flag: str, *, type=str, default=None, choices=None, help=None):
    value = _env(flag, default)
    p.add_argument(flag, type=type, default=value, required=value is None, help=help,
                   metavar=None if choices is None else "{" + ",".join(choices) + "}")
    if choices is not None:
        p.set_defaults(**{"_choices_" + flag.lstrip("-").replace("-", "_"): choices})


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qsmoments", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qsmoments {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dist", help="exact cost distribution for n keys")
    _add(p, "--n", type=int)
    _add(p, "--statistic", default="comparisons", choices=("comparisons", "bst-path"))
    _add(p, "--max-n", type=int, default=str(pgf_engine.DEFAULT_MAX_N))
    _add(p, "--format", default="json", choices=("json", "csv"))

    p = sub.add_parser("moments", help="factorial moments, mean and variance")
    _add(p, "--n", type=int)
    _add(p, "--order", type=int, default="2")
    _add(p, "--source", default="exact", choices=("exact", "closed"))
    _add(p, "--max-n", type=int, default=str(pgf_engine.DEFAULT_MAX_N))
    _add(p, "--format", default="json", choices=("json", "csv"))

    p = sub.add_parser("verify", help="run the identity and oracle checks")
    _add(p, "--max-n-brute", type=int, default="8")
    _add(p, "--max-n-exact", type=int, default="30")
    _add(p, "--series-order", type=int, default="60")
    _add(p, "--brute-cap", type=int, default=str(brute_oracle.DEFAULT_BRUTE_CAP))
    _add(p, "--max-n", type=int, default=str(pgf_engine.DEFAULT_MAX_N))
    _add(p, "--format", default="json", choices=("json", "csv"))

    p = sub.add_parser("simulate", help="Monte Carlo estimate of mean and variance")
    _add(p, "--n", type=int)
    _add(p, "--trials", type=int, default="10000")
    _add(p, "--seed", type=int, default="42")
    _add(p, "--format", default="json", choices=("json", "csv"))
    return parser


def _check_choices(args) -> None:
    for key, choices in vars(args).items():
        if key.startswith("_choices_"):
            name = key[len("_choices_"):]
            if getattr(args, name) not in choices:
                raise UsageError(f"--{name.replace('_', '-')} must be one of {', '.join(choices)}")


def cmd_dist(args) -> str:
    if args.statistic == "comparisons":
        dist = pgf_engine.comparison_counts(args.n, max_n=args.max_n)
    else:
        dist = pgf_engine.bst_path_counts(args.n, max_n=args.max_n)
    if args.format == "csv":
        return dump_csv(["n", "cost", "count"], [[dist.n, c, v] for c, v in dist.items()])
    results = {
        "n": dist.n,
        "statistic": args.statistic,
        "total": exact_str(dist.total),
        "min_cost": dist.min_cost,
        "max_cost": dist.max_cost,
        "counts": [exact_str(c) for c in dist.counts],
    }
    params = {"n": args.n, "statistic": args.statistic, "max_n": args.max_n}
    return dump_json(_envelope("dist", params, results))


def moments_rows(report: pgf_engine.MomentReport) -> list:
    rows = [(f"beta{s}", b) for s, b in enumerate(report.betas, start=1)]
    rows += [("mean", report.mean), ("variance", report.variance)]
    return [(name, exact_str(v), approx_str(v)) for name, v in rows]


def cmd_moments(args) -> str:
    if args.order < 2:
        raise UsageError("--order must be >= 2")
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    if args.source == "closed":
        if args.order > 2:
            raise UnsupportedError("closed forms are available only up to order 2")
        report = closed_form.closed_moments_report(args.n)
    else:
        report = pgf_engine.moments_report(args.n, args.order, max_n=args.max_n)
    rows = moments_rows(report)
    if args.format == "csv":
        return dump_csv(["quantity", "exact", "approx"], rows)
    results = {
        "n": report.n,
        "source": report.source.value,
        "betas": [r[1] for r in rows[:-2]],
        "mean": rows[-2][1],
        "variance": rows[-1][1],
        "approx": {name: a for name, _, a in rows},
    }
    params = {"n": args.n, "order": args.order, "source": args.source}
    return dump_json(_envelope("moments", params, results, approx_digits=20))


def cmd_verify(args) -> tuple:
    if args.max_n_brute > args.brute_cap:
        raise ResourceLimitError(f"--max-n-brute {args.max_n_brute} exceeds the brute-force cap {args.brute_cap}")
    if args.max_n_exact > args.max_n:
        raise ResourceLimitError(f"--max-n-exact {args.max_n_exact} exceeds --max-n {args.max_n}")
    if args.max_n_brute < 0 or args.max_n_exact < 0:
        raise UsageError("ranges must be >= 0")
    if args.series_order < 4:
        raise UsageError("--series-order must be >= 4")
    checks = run_checks(args.max_n_brute, args.max_n_exact, args.series_order,
                        max_n=args.max_n, brute_cap=args.brute_cap)
    ok = all(c["passed"] for c in checks)
    if args.format == "csv":
        rows = [[c["name"], "pass" if c["passed"] else "fail", c["cases"],
                 json.dumps(c["first_counterexample"], sort_keys=True)] for c in checks]
        text = dump_csv(["check", "status", "cases", "first_counterexample"], rows)
    else:
        params = {"max_n_brute": args.max_n_brute, "max_n_exact": args.max_n_exact,
                  "series_order": args.series_order}
        text = dump_json(_envelope("verify", params, {"passed": ok, "checks": checks}))
    return text, EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_simulate(args) -> str:
    if not 0 <= args.seed <= montecarlo.MASK64:
        raise UsageError("--seed must be an unsigned 64-bit integer")
    stats = montecarlo.sample_costs(args.n, args.trials, args.seed)
    mu, var = closed_form.mean_closed(args.n), closed_form.variance_closed(args.n)
    fields = [
        ("sample_mean", repr(stats.sample_mean)),
        ("sample_variance", repr(stats.sample_variance)),
        ("mean_z_score", repr(stats.mean_z_score)),
        ("sum_cost", exact_str(stats.sum_cost)),
        ("sum_cost_sq", exact_str(stats.sum_cost_sq)),
        ("mean_closed", exact_str(mu)),
        ("mean_closed_approx", approx_str(mu)),
        ("variance_closed", exact_str(var)),
        ("variance_closed_approx", approx_str(var)),
    ]
    if args.format == "csv":
        return dump_csv(["n", "trials", "seed", "quantity", "value"],
                        [[stats.n, stats.trials, stats.seed, k, v] for k, v in fields])
    results = {
        "n": stats.n,
        "trials": stats.trials,
        "seed": exact_str(stats.seed),
        "sample_mean": stats.sample_mean,
        "sample_variance": stats.sample_variance,
        "mean_z_score": stats.mean_z_score,
        "sum_cost": exact_str(stats.sum_cost),
        "sum_cost_sq": exact_str(stats.sum_cost_sq),
        "targets": {k: v for k, v in fields[5:]},
    }
    params = {"n": args.n, "trials": args.trials, "seed": exact_str(args.seed)}
    return dump_json(_envelope("simulate", params, results, prng=montecarlo.PRNG_ID,
                               seed_derivation=montecarlo.SEED_DERIVATION_ID))


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _check_choices(args)
        code = EXIT_OK
        if args.command == "dist":
            text = cmd_dist(args)
        elif args.command == "moments":
            text = cmd_moments(args)
        elif args.command == "verify":
            text, code = cmd_verify(args)
        else:
            text = cmd_simulate(args)
    except (UsageError, ContractViolation) as exc:
        print(f"qsmoments: error: {exc}", file=stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"qsmoments: resource limit: {exc}", file=stderr)
        return EXIT_RESOURCE
    except UnsupportedError as exc:
        print(f"qsmoments: unsupported: {exc}", file=stderr)
        return EXIT_UNSUPPORTED
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
