"""Command line front end.

Subcommands: moment (route comparison for one query), mu (census invariant
vs enumeration), verify (deterministic identity suites), fuzz (seeded random
queries), zeta (series vs closed forms), residue (pole extraction), bench
(route timings). Reports are JSON, CSV, or plain text; exact rationals are
rendered as "num/den" strings and complex values as {"re", "im"} pairs.

Exit codes: 0 all checks agree, 2 a verified disagreement, 1 usage or
resource errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import re
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from math import gcd, prod
from typing import Callable, Sequence

from .abgroup import (
    DEFAULT_ENUMERATION_CAP,
    build_group,
    order_reciprocal_sum,
    order_reciprocal_sum_bruteforce,
)
from .igusa import compare_routes, residue_at_pole
from .moments import (
    MomentQuery,
    brute_moment_exact,
    census_moment,
    euler_product_moment,
    gcd_average_via_totient,
    verify_query,
)
from .numtheory import EnumerationCapError, gcd_divisor_sum

__all__ = ["RunConfig", "main", "run_fuzz"]

WORKERS_ENV_VAR = "GCDMOMENTS_WORKERS"
FUZZ_DEFAULT_CAP = 2 * 10**7  # the k<=4, n<=60 fuzz domain peaks at lcm 10,727,970


@dataclass
class RunConfig:
    """Everything a single CLI invocation needs, normalized from argv."""

    command: str
    moduli: tuple[int, ...] = ()
    w: int | complex = 1
    seed: int = 0
    cap: int = DEFAULT_ENUMERATION_CAP
    tolerance: float = 1e-9
    output: str | None = None
    format: str = "json"
    no_timestamp: bool = False
    count: int = 100
    r: int = 0
    s: complex = 3.0 + 0j
    terms: int = 10**6
    sizes: tuple[int, ...] = (100, 10000, 1000000)
    repeat: int = 3
    max_n: int = 500
    grid: int = 120
    samples: int = 40


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage by default; 2 is reserved for disagreement.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


_INT_PATTERN = re.compile(r"[+-]?\d+")
_DECIMAL = r"[+-]?(?:\d+\.?\d*|\.\d+)"
_COMPLEX_PATTERN = re.compile(rf"(?P<re>{_DECIMAL})(?:(?P<im>[+-](?:\d+\.?\d*|\.\d+))i)?")
_EXPONENT_GRAMMAR = "an integer, a decimal, or A+Bi with decimal A and B (like 0.5+0.25i)"


def _parse_exponent(text: str) -> int | complex:
    t = text.strip().replace(" ", "")
    if _INT_PATTERN.fullmatch(t):
        return int(t)
    m = _COMPLEX_PATTERN.fullmatch(t)
    if m:
        return complex(float(m.group("re")), float(m.group("im") or 0.0))
    raise argparse.ArgumentTypeError(f"invalid exponent {text!r}: expected {_EXPONENT_GRAMMAR}")


def _parse_point(text: str) -> complex:
    return complex(_parse_exponent(text))


def _parse_moduli(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid moduli {text!r}: expected comma-separated positive integers, like 6,4"
        ) from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("moduli must be positive integers")
    return values


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid sizes {text!r}: expected comma-separated positive integers"
        ) from None
    if not sizes or any(v < 1 for v in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def _add_report_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sub.add_argument("--output", default=None, help="write the report to this path instead of stdout")
    sub.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for byte-stable reports")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="gcdmoments", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    moment = subs.add_parser("moment", help="compare every moment route on one query")
    moment.add_argument("-n", "--moduli", type=_parse_moduli, required=True)
    moment.add_argument("-w", "--exponent", type=_parse_exponent, default=1, dest="w")
    moment.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    moment.add_argument("--tolerance", type=float, default=1e-9)
    _add_report_options(moment)

    mu = subs.add_parser("mu", help="order-reciprocal sum: closed form vs enumeration")
    mu.add_argument("-n", "--moduli", type=_parse_moduli, required=True)
    mu.add_argument("-w", "--multiplier", type=int, default=1, dest="w")
    mu.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    _add_report_options(mu)

    verify = subs.add_parser("verify", help="deterministic identity suites")
    verify.add_argument("--max-n", type=int, default=500, dest="max_n")
    verify.add_argument("--grid", type=int, default=120)
    verify.add_argument("--samples", type=int, default=40)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--cap", type=int, default=FUZZ_DEFAULT_CAP)
    verify.add_argument("--tolerance", type=float, default=1e-9)
    _add_report_options(verify)

    fuzz = subs.add_parser("fuzz", help="seeded random queries, all routes compared")
    fuzz.add_argument("--count", type=int, default=100)
    fuzz.add_argument("--seed", type=int, default=0)
    fuzz.add_argument("--cap", type=int, default=FUZZ_DEFAULT_CAP)
    fuzz.add_argument("--tolerance", type=float, default=1e-9)
    _add_report_options(fuzz)

    zeta = subs.add_parser("zeta", help="Dirichlet series vs both closed forms")
    zeta.add_argument("-n", "--moduli", type=_parse_moduli, required=True)
    zeta.add_argument("-r", "--rank", type=int, default=0, dest="r")
    zeta.add_argument("-s", "--point", type=_parse_point, required=True, dest="s")
    zeta.add_argument("--terms", type=int, default=10**6)
    zeta.add_argument("--tolerance", type=float, default=1e-9)
    _add_report_options(zeta)

    residue = subs.add_parser("residue", help="extrapolate the residue at the pole")
    residue.add_argument("-n", "--moduli", type=_parse_moduli, required=True)
    residue.add_argument("-r", "--rank", type=int, default=0, dest="r")
    residue.add_argument("--tolerance", type=float, default=1e-5, help="relative error allowed")
    _add_report_options(residue)

    bench = subs.add_parser("bench", help="route timings over a ladder of period sizes")
    bench.add_argument("--sizes", type=_parse_sizes, default=(100, 10000, 1000000))
    bench.add_argument("--repeat", type=int, default=3)
    bench.add_argument("-w", "--exponent", type=int, default=1, dest="w")
    bench.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    _add_report_options(bench)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=args.command)
    for name in vars(config):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(config, name, getattr(args, name))
    return config


def _scalar_json(value: object) -> object:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def _scalar_text(value: object) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+}i"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    return str(value)


def _diagnostics(config: RunConfig, **extra: object) -> dict[str, object]:
    out: dict[str, object] = dict(extra)
    if not config.no_timestamp:
        out["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return out


def _deliver(
    config: RunConfig,
    payload: dict[str, object],
    header: tuple[str, ...],
    rows: Sequence[tuple[object, ...]],
) -> None:
    if config.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif config.format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_scalar_text(cell) for cell in row])
        text = buffer.getvalue()
    else:
        lines = [": ".join(_scalar_text(cell) for cell in row) for row in rows]
        text = "\n".join(lines) + "\n"
    if config.output:
        with open(config.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_moment(config: RunConfig) -> int:
    query = MomentQuery(config.moduli, config.w)
    report = verify_query(query, tolerance=config.tolerance, cap=config.cap)
    results: dict[str, object] = {
        "brute": report.brute,
        "euler_product": report.euler_product,
    }
    if report.census is not None:
        results["census"] = report.census
    if report.totient_route is not None:
        results["totient"] = report.totient_route
    payload = {
        "query": {
            "command": "moment",
            "moduli": list(query.moduli),
            "w": _scalar_json(query.w),
        },
        "value": _scalar_json(report.brute) if report.agree else None,
        "results": {name: _scalar_json(v) for name, v in results.items()},
        "agree": report.agree,
        "diagnostics": _diagnostics(
            config,
            max_abs_diff=report.max_abs_diff,
            tolerance=config.tolerance,
            cap=config.cap,
        ),
    }
    rows = [(name, value) for name, value in results.items()]
    rows.append(("agree", report.agree))
    _deliver(config, payload, ("key", "value"), rows)
    return 0 if report.agree else 2


def cmd_mu(config: RunConfig) -> int:
    if config.w < 1:
        raise ValueError("the multiplier must be a positive integer")
    closed = order_reciprocal_sum(build_group(config.moduli), config.w)
    powered = tuple(config.moduli) * config.w
    enumerated = order_reciprocal_sum_bruteforce(powered, cap=config.cap)
    agree = closed == enumerated
    payload = {
        "query": {"command": "mu", "moduli": list(config.moduli), "w": config.w},
        "value": _scalar_json(closed) if agree else None,
        "results": {"census": _scalar_json(closed), "enumeration": _scalar_json(enumerated)},
        "agree": agree,
        "diagnostics": _diagnostics(config, cap=config.cap),
    }
    rows = [("census", closed), ("enumeration", enumerated), ("agree", agree)]
    _deliver(config, payload, ("key", "value"), rows)
    return 0 if agree else 2


def _verify_checks(config: RunConfig) -> list[tuple[str, int, int]]:
    checks: list[tuple[str, int, int]] = []

    failures = 0
    for n in range(1, config.max_n + 1):
        expected = brute_moment_exact((n,), 1, cap=config.cap)
        if gcd_average_via_totient(n) != expected or euler_product_moment((n,), 1) != expected:
            failures += 1
    checks.append(("totient_euler_brute", config.max_n, failures))

    failures = 0
    for n in range(1, config.grid + 1):
        for m in range(1, config.grid + 1):
            if gcd_divisor_sum(n, m) != gcd(n, m):
                failures += 1
    checks.append(("gcd_totient_identity", config.grid * config.grid, failures))

    rng = random.Random(config.seed)
    failures = 0
    for _ in range(config.samples):
        k = rng.randint(1, 4)
        mods = tuple(rng.randint(1, 60) for _ in range(k))
        w = rng.randint(1, 3)
        if not verify_query(MomentQuery(mods, w), tolerance=config.tolerance, cap=config.cap).agree:
            failures += 1
    checks.append(("triple_agreement", config.samples, failures))

    failures = 0
    for _ in range(config.samples):
        while True:
            k = rng.randint(1, 3)
            mods = tuple(rng.randint(1, 30) for _ in range(k))
            if prod(mods) <= 3000:
                break
        if order_reciprocal_sum(build_group(mods)) != order_reciprocal_sum_bruteforce(mods):
            failures += 1
    checks.append(("census_vs_enumeration", config.samples, failures))

    return checks


def cmd_verify(config: RunConfig) -> int:
    checks = _verify_checks(config)
    agree = all(failures == 0 for _, _, failures in checks)
    payload = {
        "query": {
            "command": "verify",
            "max_n": config.max_n,
            "grid": config.grid,
            "samples": config.samples,
            "seed": config.seed,
        },
        "checks": [
            {"check": name, "cases": cases, "failures": failures}
            for name, cases, failures in checks
        ],
        "agree": agree,
        "diagnostics": _diagnostics(config, cap=config.cap, tolerance=config.tolerance),
    }
    _deliver(config, payload, ("check", "cases", "failures"), checks)
    return 0 if agree else 2


def _fuzz_case(case: tuple[int, tuple[int, ...], int, int, float]):
    index, moduli, w, cap, tolerance = case
    report = verify_query(MomentQuery(moduli, w), tolerance=tolerance, cap=cap)
    results = {
        "brute": report.brute,
        "euler_product": report.euler_product,
        "census": report.census,
    }
    if report.totient_route is not None:
        results["totient"] = report.totient_route
    return index, moduli, w, report.agree, results


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV_VAR} must be an integer") from None
    if value < 1:
        raise ValueError(f"{WORKERS_ENV_VAR} must be >= 1")
    return value


def run_fuzz(
    seed: int,
    count: int,
    *,
    cap: int = FUZZ_DEFAULT_CAP,
    tolerance: float = 1e-9,
    workers: int | None = None,
) -> dict[str, object]:
    """Generate and check `count` random queries; the seed fixes everything.

    Queries draw k in [1,4] moduli from [1,60] and w in [1,3]. Instances are
    generated up front and evaluated in index order (optionally across
    worker processes), so the summary is identical for any worker count.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    rng = random.Random(seed)
    cases = []
    for index in range(count):
        k = rng.randint(1, 4)
        moduli = tuple(rng.randint(1, 60) for _ in range(k))
        w = rng.randint(1, 3)
        cases.append((index, moduli, w, cap, tolerance))
    if workers is None:
        workers = _worker_count()
    if workers > 1 and count > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_fuzz_case, cases, chunksize=max(1, count // (4 * workers))))
    else:
        outcomes = [_fuzz_case(case) for case in cases]
    passed = sum(1 for outcome in outcomes if outcome[3])
    first_bad = next((outcome for outcome in outcomes if not outcome[3]), None)
    counterexample = None
    if first_bad is not None:
        index, moduli, w, _, results = first_bad
        counterexample = {"index": index, "moduli": list(moduli), "w": w, "results": results}
    return {
        "seed": seed,
        "count": count,
        "cap": cap,
        "tolerance": tolerance,
        "workers": workers,
        "passed": passed,
        "failed": count - passed,
        "first_counterexample": counterexample,
    }


def cmd_fuzz(config: RunConfig) -> int:
    summary = run_fuzz(
        config.seed, config.count, cap=config.cap, tolerance=config.tolerance
    )
    counterexample = summary["first_counterexample"]
    rendered = None
    if counterexample is not None:
        rendered = dict(counterexample)
        rendered["results"] = {
            name: _scalar_json(value) for name, value in counterexample["results"].items()
        }
    agree = summary["failed"] == 0
    payload = {
        "query": {
            "command": "fuzz",
            "count": summary["count"],
            "seed": summary["seed"],
            "cap": summary["cap"],
            "tolerance": summary["tolerance"],
        },
        "passed": summary["passed"],
        "failed": summary["failed"],
        "first_counterexample": rendered,
        "agree": agree,
        "diagnostics": _diagnostics(config, workers=summary["workers"]),
    }
    rows: list[tuple[object, ...]] = [
        ("passed", summary["passed"]),
        ("failed", summary["failed"]),
        ("agree", agree),
    ]
    if rendered is not None:
        rows.append(("counterexample_moduli", ",".join(str(n) for n in rendered["moduli"])))
        rows.append(("counterexample_w", rendered["w"]))
    _deliver(config, payload, ("key", "value"), rows)
    return 0 if agree else 2


def cmd_zeta(config: RunConfig) -> int:
    comparison = compare_routes(
        config.r, config.moduli, config.s, terms=config.terms, tolerance=config.tolerance
    )
    payload = {
        "query": {
            "command": "zeta",
            "r": config.r,
            "moduli": list(config.moduli),
            "s": _scalar_json(config.s),
            "terms": config.terms,
        },
        "results": {
            "series": _scalar_json(comparison.series_value),
            "euler_product": _scalar_json(comparison.euler_value),
            "hurwitz_sum": _scalar_json(comparison.hurwitz_value),
        },
        "tail_bound": comparison.tail_bound,
        "agree": comparison.agree,
        "diagnostics": _diagnostics(config, tolerance=config.tolerance),
    }
    rows = [
        ("series", comparison.series_value),
        ("euler_product", comparison.euler_value),
        ("hurwitz_sum", comparison.hurwitz_value),
        ("tail_bound", comparison.tail_bound),
        ("agree", comparison.agree),
    ]
    _deliver(config, payload, ("key", "value"), rows)
    return 0 if comparison.agree else 2


def cmd_residue(config: RunConfig) -> int:
    estimate = residue_at_pole(config.r, config.moduli)
    target = census_moment(config.moduli, 1)
    relative_error = abs(estimate.estimate - float(target)) / float(target)
    agree = relative_error <= config.tolerance
    payload = {
        "query": {"command": "residue", "r": config.r, "moduli": list(config.moduli)},
        "estimate": estimate.estimate,
        "target": _scalar_json(target),
        "relative_error": relative_error,
        "offsets": list(estimate.offsets),
        "scaled_values": list(estimate.scaled_values),
        "refined": list(estimate.refined),
        "agree": agree,
        "diagnostics": _diagnostics(config, tolerance=config.tolerance),
    }
    rows = [
        ("estimate", estimate.estimate),
        ("target", target),
        ("relative_error", relative_error),
        ("agree", agree),
    ]
    _deliver(config, payload, ("key", "value"), rows)
    return 0 if agree else 2


def _best_time(fn: Callable[[], object], repeat: int) -> tuple[int, object]:
    best: int | None = None
    value: object = None
    for _ in range(max(1, repeat)):
        start = time.perf_counter_ns()
        value = fn()
        elapsed = time.perf_counter_ns() - start
        best = elapsed if best is None else min(best, elapsed)
    return best or 0, value


def cmd_bench(config: RunConfig) -> int:
    routes: list[tuple[str, Callable[[int], object]]] = [
        ("brute", lambda n: brute_moment_exact((n,), config.w, cap=max(config.cap, n))),
        ("euler_product", lambda n: euler_product_moment((n,), config.w)),
        ("census", lambda n: census_moment((n,), config.w)),
    ]
    rows: list[tuple[object, ...]] = []
    entries: list[dict[str, object]] = []
    for size in config.sizes:
        for name, fn in routes:
            nanos, value = _best_time(lambda fn=fn: fn(size), config.repeat)
            rows.append((size, name, nanos, value))
            entries.append(
                {"lcm": size, "route": name, "nanos": nanos, "value": _scalar_json(value)}
            )
    payload = {
        "query": {
            "command": "bench",
            "sizes": list(config.sizes),
            "w": config.w,
            "repeat": config.repeat,
        },
        "rows": entries,
        "diagnostics": _diagnostics(config),
    }
    _deliver(config, payload, ("lcm", "route", "nanos", "value"), rows)
    return 0


_DISPATCH: dict[str, Callable[[RunConfig], int]] = {
    "moment": cmd_moment,
    "mu": cmd_mu,
    "verify": cmd_verify,
    "fuzz": cmd_fuzz,
    "zeta": cmd_zeta,
    "residue": cmd_residue,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 1
    config = _config_from_args(args)
    try:
        return _DISPATCH[config.command](config)
    except (EnumerationCapError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
