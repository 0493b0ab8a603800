from __future__ import annotations

import argparse
import json
import random
import sys
import uuid
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel
from sympy import isprime

from motives.cli.reports import (
    build_describe,
    build_extgroups,
    build_pairing,
    load_document,
    render_text,
    resolve_window,
    verify_document,
)
from motives.shared.config import RuntimeConfig, load_runtime_config
from motives.shared.contracts import MotiveDocument, MotiveSpec, VerifyReport, WindowSpec
from motives.shared.errors import DocumentError, MotiveError, TheoremCheckFailure
from motives.shared.logging_utils import log_event, set_log_level
from motives.shared.sampling import random_motive, random_prime_motive

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2


def parse_primes(raw: str | None) -> tuple[int, ...] | None:
    if raw is None:
        return None
    try:
        primes = tuple(int(item) for item in raw.split(",") if item.strip())
    except ValueError as exc:
        raise DocumentError(f"--primes must be a comma-separated list of integers, got {raw!r}") from exc
    composite = [p for p in primes if not isprime(p)]
    if composite:
        raise DocumentError(f"--primes must list primes only, got {composite}")
    return primes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motives", description="Exact computations on toric 1-motives over Q.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", default=None, help="write the report here instead of stdout")
        p.add_argument("--json", action="store_true", help="machine-readable JSON output")

    for name in ("describe", "pairing", "extgroups"):
        p = sub.add_parser(name)
        p.add_argument("--input", required=True)
        common(p)
        if name == "extgroups":
            p.add_argument("--primes", default=None)
            p.add_argument("--denominator-bound", type=int, default=None)

    verify = sub.add_parser("verify")
    source = verify.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", default=None)
    source.add_argument("--corpus", nargs="?", const="", default=None, help="verify every document in a corpus directory")
    verify.add_argument("--primes", default=None)
    verify.add_argument("--denominator-bound", type=int, default=None)
    common(verify)

    rand = sub.add_parser("random")
    rand.add_argument("--r", type=int, required=True)
    rand.add_argument("--d", type=int, required=True)
    rand.add_argument("--primes", default=None)
    rand.add_argument("--seed", type=int, default=0)
    common(rand)
    return parser


def emit(payload: BaseModel, args: argparse.Namespace, text: str | None = None) -> None:
    if args.json or text is None:
        rendered = json.dumps(payload.model_dump(mode="json"), ensure_ascii=True, sort_keys=True, indent=2)
    else:
        rendered = text
    if args.output:
        Path(args.output).write_text(rendered + "\n", encoding="utf-8")
    else:
        sys.stdout.write(rendered + "\n")


def cmd_describe(args: argparse.Namespace, config: RuntimeConfig) -> int:
    report = build_describe(load_document(Path(args.input), config.factor_bound_bits))
    emit(report, args, render_text(report))
    return EXIT_OK


def cmd_pairing(args: argparse.Namespace, config: RuntimeConfig) -> int:
    report = build_pairing(load_document(Path(args.input), config.factor_bound_bits))
    emit(report, args, render_text(report))
    return EXIT_OK


def cmd_extgroups(args: argparse.Namespace, config: RuntimeConfig) -> int:
    document = load_document(Path(args.input), config.factor_bound_bits)
    window = resolve_window(document, document.motive(), config, parse_primes(args.primes), args.denominator_bound)
    report = build_extgroups(document, window)
    emit(report, args, render_text(report))
    return EXIT_OK


def corpus_paths(directory: Path) -> list[Path]:
    if not directory.is_dir():
        raise DocumentError("corpus directory not found", location=str(directory))
    return sorted(directory.glob("*.yaml"))


def cmd_verify(args: argparse.Namespace, config: RuntimeConfig) -> int:
    if args.input is not None:
        paths = [Path(args.input)]
    else:
        paths = corpus_paths(Path(args.corpus or config.corpus_dir))
    documents = [load_document(path, config.factor_bound_bits) for path in paths]
    primes = parse_primes(args.primes)

    def run(document: MotiveDocument) -> Any:
        window = resolve_window(document, document.motive(), config, primes, args.denominator_bound)
        return verify_document(document, window, config)

    with ThreadPoolExecutor(max_workers=config.max_workers) as executor:
        results = list(executor.map(run, documents))

    report = VerifyReport(motives=results, passed=all(item.passed for item in results))
    emit(report, args, render_text(report))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_random(args: argparse.Namespace, config: RuntimeConfig) -> int:
    if args.r < 0 or args.d < 0:
        raise DocumentError("--r and --d must be non-negative")
    rng = random.Random(args.seed)
    primes = parse_primes(args.primes)
    name = f"random_r{args.r}d{args.d}_s{args.seed}"
    if primes:
        motive = random_prime_motive(rng, args.r, args.d, primes, name)
    else:
        motive = random_motive(rng, args.r, args.d, name=name)
    spec = MotiveSpec.from_motive(motive)
    document = MotiveDocument(
        name=name,
        r=spec.r,
        d=spec.d,
        u=spec.u,
        window=WindowSpec(primes=list(primes)) if primes else None,
    )
    text = yaml.safe_dump(document.model_dump(mode="json", exclude_none=True), sort_keys=False)
    emit(document, args, text.rstrip("\n"))
    return EXIT_OK


COMMANDS = {
    "describe": cmd_describe,
    "pairing": cmd_pairing,
    "extgroups": cmd_extgroups,
    "verify": cmd_verify,
    "random": cmd_random,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = load_runtime_config()
    set_log_level(config.log_level)
    trace_id = uuid.uuid4().hex
    log_event("info", "command_start", trace_id=trace_id, command=args.command)
    try:
        code = COMMANDS[args.command](args, config)
    except DocumentError as exc:
        log_event("error", "document_rejected", trace_id=trace_id, command=args.command, error=str(exc))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except TheoremCheckFailure as exc:
        log_event(
            "error",
            "theorem_check_failed",
            trace_id=trace_id,
            command=args.command,
            error=str(exc),
            solution_dimension=exc.solution_dimension,
        )
        sys.stderr.write(f"check failed: {exc}\n")
        return EXIT_FAILED
    except MotiveError as exc:
        log_event("error", "command_failed", trace_id=trace_id, command=args.command, error=str(exc))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAILED
    log_event("info", "command_done", trace_id=trace_id, command=args.command, exit_code=code)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
