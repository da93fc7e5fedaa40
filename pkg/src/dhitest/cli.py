"""Command-line client for the DHI test service.

Each subcommand builds one request against the HTTP API and renders
the returned records to CSV or JSON.  By default the service app runs
in-process; point --server at a running instance to use it instead.

Exit codes: 0 success, 1 invalid configuration, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from .entropy import DEFAULT_EXACT_BOUND
from .groups import GroupFamily, PrimeClass, PrimeLabel
from .permutation import DEFAULT_REPLICATES
from .survey import SurveyMode, SurveyRecord, Table1Record, render_report

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    # Bad flags are invalid configuration, not I/O: exit 1, not argparse's 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed {text} outside [0, 2^64)")
    return value


def _schedule(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad schedule {text!r}; expected n1,n2,...")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dhitest", description=__doc__)
    parser.add_argument("--server", metavar="URL", help="use a running service instead of in-process")
    parser.add_argument("--cache-dir", metavar="PATH", help="re-emit cached bytes for repeated runs")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seeds=True):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
        if seeds:
            p.add_argument("--seed", type=_seed, default=0, help="decimal or 0x-hex 64-bit seed")
            p.add_argument("--null-seed", type=_seed, default=None)

    p = sub.add_parser("exact", help="exact uniformity statistic of one group")
    p.add_argument("--p", type=int, required=True, metavar="PRIME")
    p.add_argument("--subgroup", action="store_true", help="test the prime-order subgroup")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--exact-bound", type=int, default=DEFAULT_EXACT_BOUND, metavar="B")
    common(p, seeds=False)

    p = sub.add_parser("dhi-test", help="sampled permutation test of one group")
    p.add_argument("--p", type=int, required=True, metavar="PRIME")
    p.add_argument("--subgroup", action="store_true")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    common(p)

    p = sub.add_parser("survey", help="scan a prime range (exact, or sampled with --n)")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--subgroup", action="store_true", help="also test subgroups of safe primes")
    p.add_argument("--n", type=int, default=None, help="sample size; switches to sampled mode")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--exact-bound", type=int, default=DEFAULT_EXACT_BOUND, metavar="B")
    common(p)

    p = sub.add_parser("table1", help="sample-size schedule run on one full group")
    p.add_argument("--p", type=int, required=True, metavar="PRIME")
    p.add_argument("--schedule", type=_schedule, default=None, metavar="N1,N2,...")
    p.add_argument("--replicates", type=int, default=DEFAULT_REPLICATES)
    common(p)

    p = sub.add_parser("classify", help="tag primes in a range as safe / other")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    common(p, seeds=False)

    return parser


def _request_for(args) -> tuple[str, dict]:
    """Endpoint path and JSON body for the parsed arguments."""
    cmd = args.command
    if cmd == "exact":
        return "/exact", {
            "p": args.p, "subgroup": args.subgroup,
            "exact_bound": args.exact_bound, "threads": args.threads,
        }
    if cmd == "dhi-test":
        return "/dhi-test", {
            "p": args.p, "subgroup": args.subgroup, "n": args.n,
            "replicates": args.replicates, "sample_seed": args.seed,
            "null_seed": args.null_seed if args.null_seed is not None else args.seed,
        }
    if cmd == "survey":
        sampled = args.n is not None
        return "/survey", {
            "lo": args.lo, "hi": args.hi,
            "mode": "Sampled" if sampled else "Exact",
            "include_subgroups": args.subgroup,
            "n": args.n if sampled else 0,
            "replicates": args.replicates, "base_seed": args.seed,
            "threads": args.threads, "exact_bound": args.exact_bound,
        }
    if cmd == "table1":
        body = {"p": args.p, "replicates": args.replicates, "seed": args.seed}
        if args.schedule is not None:
            body["schedule"] = list(args.schedule)
        if args.null_seed is not None:
            body["null_seed"] = args.null_seed
        return "/table1", body
    return "/classify", {"lo": args.lo, "hi": args.hi}


def _records_for(args, payload) -> tuple[list, str]:
    """Materialize records (and the report kind) from a response body."""
    cmd = args.command
    if cmd == "classify":
        records = [
            PrimeClass(r["prime"], PrimeLabel(r["class"])) for r in payload["records"]
        ]
        return records, "classify"
    if cmd == "table1":
        return [Table1Record(**r) for r in payload["records"]], "table1"
    if cmd == "survey":
        records = []
        for r in payload["records"]:
            records.append(
                SurveyRecord(
                    prime=r["prime"], label=PrimeLabel(r["class"]),
                    family=GroupFamily(r["family"]), order=r["order"],
                    mode=SurveyMode(r["mode"]), n=r["n"], replicates=r["replicates"],
                    statistic=r["statistic"], p_value=r["p_value"],
                    proportion_lower=r["proportion_lower"],
                    distance_to_center=r["distance_to_center"],
                    relative_distance=r["relative_distance"],
                    sample_seed=r["sample_seed"], null_seed=r["null_seed"],
                )
            )
        return records, "survey"
    # exact and dhi-test return one group's result, reported as a survey row
    r = payload
    exact_mode = cmd == "exact"
    record = SurveyRecord(
        prime=r["modulus"], label=PrimeLabel(r["label"]),
        family=GroupFamily(r["family"]), order=r["order"],
        mode=SurveyMode.EXACT if exact_mode else SurveyMode.SAMPLED,
        n=0 if exact_mode else r["n"],
        replicates=None if exact_mode else r["replicates"],
        statistic=r["statistic"] if exact_mode else r["raw_entropy"],
        p_value=None if exact_mode else r["p_value"],
        proportion_lower=None if exact_mode else r["proportion_lower"],
        distance_to_center=None if exact_mode else r["distance_to_center"],
        relative_distance=None if exact_mode else r["relative_distance"],
        sample_seed=None if exact_mode else r["sample_seed"],
        null_seed=None if exact_mode else r["null_seed"],
    )
    return [record], "survey"


def _cache_key(args, path: str, body: dict) -> str:
    payload = {"endpoint": path, "body": body, "format": args.format}
    digest = hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()
    return digest


def _cache_lookup(args, key: str) -> str | None:
    if not args.cache_dir:
        return None
    cache_path = os.path.join(args.cache_dir, key + ".out")
    if os.path.exists(cache_path):
        with open(cache_path, "r", newline="") as fh:
            return fh.read()
    return None


def _cache_store(args, key: str, text: str) -> None:
    if not args.cache_dir:
        return
    os.makedirs(args.cache_dir, exist_ok=True)
    cache_path = os.path.join(args.cache_dir, key + ".out")
    with open(cache_path, "w", newline="") as fh:
        fh.write(text)


def _client(args):
    if args.server:
        import httpx

        return httpx.Client(base_url=args.server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        # this starlette build nags about httpx at import; nothing actionable here
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _write_output(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    endpoint, body = _request_for(args)
    key = _cache_key(args, endpoint, body)

    try:
        cached = _cache_lookup(args, key)
    except OSError as exc:
        print(f"dhitest: cache read failed: {exc}", file=sys.stderr)
        return EXIT_IO
    if cached is None:
        with _client(args) as client:
            response = client.post(endpoint, json=body)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            print(f"dhitest: {detail}", file=sys.stderr)
            return EXIT_CONFIG
        records, kind = _records_for(args, response.json())
        text = render_report(records, args.format, kind)
        try:
            _cache_store(args, key, text)
        except OSError as exc:
            print(f"dhitest: cache write failed: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        text = cached

    try:
        _write_output(args, text)
    except OSError as exc:
        print(f"dhitest: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
