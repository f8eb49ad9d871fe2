"""CLI entry point: subcommands, flag parsing, limits, dispatch. Machine output to stdout only."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from pseudoquandle_app.bootstrap import initialize_application
from pseudoquandle_app.classification import classify_abelian
from pseudoquandle_app.config import Limits, default_gcd_bound
from pseudoquandle_app.corpus import run_corpus
from pseudoquandle_app.documents import dump_json, write_document
from pseudoquandle_app.errors import InputError, NoChain, TheoremViolation
from pseudoquandle_app.group_core import build_group, conjugacy_classes, enumerate_normal_subgroups
from pseudoquandle_app.kernels import class_equation, detect_chain, kernel_table, verify_properties
from pseudoquandle_app.matrix import matrix_of, matrix_report
from pseudoquandle_app import reports
from pseudoquandle_app.pseudoquandle import build_source, check_axioms, find_isomorphism

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2

FORMAT_TEXT = "text"
FORMAT_JSON = "json"


@dataclass(frozen=True)
class CliConfig:
    format: str = FORMAT_TEXT
    bound: int = field(default_factory=default_gcd_bound)
    limits: Limits = field(default_factory=Limits.from_env)
    jobs: int = 1
    output: Path | None = None
    sources: tuple[str, ...] = ()


def _limits_from_args(args: argparse.Namespace) -> Limits:
    base = Limits.from_env()
    return Limits(
        max_order=args.max_order or base.max_order,
        max_subgroups=args.max_subgroups or base.max_subgroups,
        max_magma_size=args.max_magma or base.max_magma_size,
        max_iso_size=args.max_iso or base.max_iso_size,
    )


def _config_from_args(args: argparse.Namespace) -> CliConfig:
    for flag in ("bound", "max_order", "max_subgroups", "max_magma", "max_iso", "jobs"):
        value = getattr(args, flag)
        if value is not None and value <= 0:
            raise InputError(f"--{flag.replace('_', '-')} must be positive, got {value}.")
    sources = tuple(value for value in (getattr(args, "source", None), getattr(args, "other", None)) if value)
    return CliConfig(
        format=args.format,
        bound=args.bound or default_gcd_bound(),
        limits=_limits_from_args(args),
        jobs=args.jobs or 1,
        output=Path(args.output) if args.output else None,
        sources=sources,
    )


def _write_stdout(data: str) -> None:
    sys.stdout.write(data)
    if not data.endswith("\n"):
        sys.stdout.write("\n")


def _emit(cfg: CliConfig, payload: dict[str, Any], text: str) -> None:
    if cfg.output is not None:
        write_document(payload, cfg.output)
    if cfg.format == FORMAT_JSON:
        _write_stdout(dump_json(payload))
    else:
        _write_stdout(text)


def cmd_group(cfg: CliConfig, spec: str) -> int:
    g = build_group(spec, cfg.limits)
    report = reports.group_report(g, conjugacy_classes(g), enumerate_normal_subgroups(g, cfg.limits))
    _emit(cfg, report, reports.render_group_text(report))
    return EXIT_OK


def cmd_axioms(cfg: CliConfig, source: str) -> int:
    m = build_source(source, cfg.limits)
    report = check_axioms(m)
    _emit(cfg, reports.axioms_report(m, report), reports.render_axioms_text(m, report))
    return EXIT_OK


def cmd_matrix(cfg: CliConfig, source: str) -> int:
    m = build_source(source, cfg.limits)
    matrix = matrix_of(m)
    report = matrix_report(matrix, source_is_pg=source.strip().startswith("pg:"))
    _emit(cfg, reports.matrix_payload(m, matrix, report), reports.render_matrix_report(matrix, report))
    return EXIT_OK


def cmd_kernels(cfg: CliConfig, source: str) -> int:
    m = build_source(source, cfg.limits)
    kt = kernel_table(m)
    chain = detect_chain(kt)
    try:
        equation = class_equation(m) if chain.chain_found else None
    except NoChain:
        equation = None
    _emit(cfg, reports.kernels_payload(m, kt, chain, equation), reports.render_kernels_text(m, kt, chain, equation))
    return EXIT_OK


def cmd_verify(cfg: CliConfig, source: str) -> int:
    if source.strip() == "corpus":
        rows = run_corpus(cfg.limits, jobs=cfg.jobs)
        _emit(cfg, reports.corpus_payload(rows), reports.render_corpus_text(rows))
        return EXIT_OK if all(row.ok for row in rows) else EXIT_VERIFICATION_FAILED
    m = build_source(source, cfg.limits)
    report = verify_properties(m)
    _emit(cfg, reports.verify_payload(m, report), reports.render_verify_text(m, report))
    return EXIT_OK if report.ok else EXIT_VERIFICATION_FAILED


def cmd_classify(cfg: CliConfig, spec: str) -> int:
    result = classify_abelian(spec, cfg.bound, cfg.limits)
    _emit(cfg, result.as_dict(), reports.render_classification_text(result))
    return EXIT_OK


def cmd_iso(cfg: CliConfig, left: str, right: str, prune: bool = True) -> int:
    a = build_source(left, cfg.limits)
    b = build_source(right, cfg.limits)
    witness = find_isomorphism(a, b, prune=prune, limits=cfg.limits)
    _emit(cfg, reports.iso_payload(a, b, witness), reports.render_iso_text(a, b, witness))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pq",
        description="Pseudoquandles of finite groups: construction, axioms, kernels and classification.",
    )
    parser.add_argument("--format", choices=[FORMAT_TEXT, FORMAT_JSON], default=FORMAT_TEXT)
    parser.add_argument("--bound", type=int, default=None, help="Truncation N of gcd segments for free factors")
    parser.add_argument("--max-order", type=int, default=None, help="Group order cap (env PQ_MAX_ORDER)")
    parser.add_argument("--max-subgroups", type=int, default=None)
    parser.add_argument("--max-magma", type=int, default=None)
    parser.add_argument("--max-iso", type=int, default=None, help="Largest magma searched for isomorphisms")
    parser.add_argument("--jobs", type=int, default=None, help="Worker threads for the corpus run")
    parser.add_argument("--output", default=None, help="Also write the JSON report to this path")
    parser.add_argument("-v", "--verbose", action="store_true")

    subparsers = parser.add_subparsers(dest="command", required=True)

    p_group = subparsers.add_parser("group", help="Order, conjugacy classes and normal subgroups of a group")
    p_group.add_argument("source", metavar="spec")

    for name, help_text in (
        ("axioms", "Check the quandle, rack and pseudoquandle axioms"),
        ("matrix", "Emit the pseudoquandle matrix"),
        ("kernels", "Kernels, cokernels, ascending chain and class equation"),
        ("verify", "Verify every kernel claim on a source, or the built-in corpus"),
    ):
        p_cmd = subparsers.add_parser(name, help=help_text)
        p_cmd.add_argument("source")

    p_classify = subparsers.add_parser("classify", help="Normal form of P_G for an abelian group")
    p_classify.add_argument("source", metavar="abelian_spec")

    p_iso = subparsers.add_parser("iso", help="Search for an isomorphism between two sources")
    p_iso.add_argument("source")
    p_iso.add_argument("other")
    p_iso.add_argument("--no-prune", action="store_true", help="Plain backtracking without invariant pruning")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    initialize_application(verbose=args.verbose)

    try:
        cfg = _config_from_args(args)
        if args.command == "group":
            return cmd_group(cfg, args.source)
        if args.command == "axioms":
            return cmd_axioms(cfg, args.source)
        if args.command == "matrix":
            return cmd_matrix(cfg, args.source)
        if args.command == "kernels":
            return cmd_kernels(cfg, args.source)
        if args.command == "verify":
            return cmd_verify(cfg, args.source)
        if args.command == "classify":
            return cmd_classify(cfg, args.source)
        if args.command == "iso":
            return cmd_iso(cfg, args.source, args.other, prune=not args.no_prune)
    except InputError as exc:
        logger.error(str(exc))
        return EXIT_INPUT_ERROR
    except OSError as exc:
        logger.error("Cannot write %s: %s", args.output, exc)
        return EXIT_INPUT_ERROR
    except TheoremViolation as exc:
        logger.error(str(exc))
        return EXIT_VERIFICATION_FAILED
    parser.error(f"Unknown command {args.command!r}")
    return EXIT_INPUT_ERROR
