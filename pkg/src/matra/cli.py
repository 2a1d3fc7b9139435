"""Command-line surface: validate, assess, whatif, report, export, serve.

Exit codes: 0 success, 1 validation errors, 2 usage errors (bad arguments,
unreadable files, unknown ids passed as arguments), 3 engine errors
(out-of-scope pairs, missing trees, path explosion, bind failures).
"""

from __future__ import annotations

import argparse
import os
import socket
import sys
from enum import IntEnum
from typing import Sequence

from . import __version__
from .engine import Assessment, assess, whatif_diff
from .errors import (
    BadFieldError,
    DanglingReference,
    DuplicateIdError,
    MatraError,
    MissingFieldError,
    ModelSyntaxError,
    NoTree,
    OutOfScope,
    UnknownFieldError,
)
from .io import (
    Finding,
    Severity,
    ValidationReport,
    assessment_to_json,
    assessments_to_json,
    load_model_path,
    validate_model,
    whatif_to_json,
)
from .model import ThreatModel
from .report import (
    ReportFormat,
    ReportRequest,
    build_report,
    config_label,
    export_dot,
    render_risk_table,
    render_tree,
)

MODEL_ENV = "MATRA_MODEL"


class ExitStatus(IntEnum):
    OK = 0
    VALIDATION = 1
    USAGE = 2
    ENGINE = 3


_LOAD_ERROR_CODES = {
    ModelSyntaxError: "syntax",
    UnknownFieldError: "unknown-field",
    MissingFieldError: "missing-field",
    BadFieldError: "bad-field",
    DuplicateIdError: "duplicate-id",
    DanglingReference: "dangling-reference",
}


def _load_error_report(exc: MatraError) -> ValidationReport:
    code = _LOAD_ERROR_CODES.get(type(exc), "load-error")
    location = getattr(exc, "location", "$")
    return ValidationReport(
        findings=(Finding(Severity.ERROR, code, location, str(exc)),)
    )


def _resolve_model_path(args: argparse.Namespace, parser: argparse.ArgumentParser) -> str:
    path = args.model or os.environ.get(MODEL_ENV)
    if not path:
        parser.error(f"no model given (pass a path or set {MODEL_ENV})")
    if not os.path.isfile(path):
        parser.error(f"model file not readable: {path}")
    return path


def _default_configuration(model: ThreatModel) -> str | None:
    return "default" if "default" in model.configurations_by_id else None


def _assess_with_default(model: ThreatModel, scenario: str, source: str, config: str | None) -> Assessment:
    if config is not None:
        return assess(model, scenario, source, configuration=config)
    default = _default_configuration(model)
    if default is not None:
        return assess(model, scenario, source, configuration=default)
    return assess(model, scenario, source, controls=())


def cmd_validate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    path = _resolve_model_path(args, parser)
    try:
        model = load_model_path(path)
    except MatraError as exc:
        report = _load_error_report(exc)
        print(report.to_json() if args.format == "json" else report.human())
        return ExitStatus.VALIDATION
    report = validate_model(model)
    print(report.to_json() if args.format == "json" else report.human())
    return ExitStatus.OK if report.ok else ExitStatus.VALIDATION


def _load_or_fail(path: str) -> ThreatModel:
    try:
        return load_model_path(path)
    except MatraError as exc:
        print(f"error: model does not load: {exc}", file=sys.stderr)
        raise SystemExit(ExitStatus.VALIDATION)


def _assess_pairs(
    model: ThreatModel, args: argparse.Namespace, parser: argparse.ArgumentParser
) -> list[tuple[str, str]]:
    """Resolve --scenario/--source into concrete (scenario, source) pairs."""
    if args.scenario is not None and args.scenario not in model.scenarios_by_id:
        parser.error(f"unknown scenario {args.scenario!r}")
    if args.source is not None and args.source not in model.sources_by_id:
        parser.error(f"unknown threat source {args.source!r}")
    if args.scenario is not None and args.source is not None:
        return [(args.scenario, args.source)]
    pairs = []
    skipped = []
    for scenario in model.scenarios:
        if args.scenario is not None and scenario.id != args.scenario:
            continue
        if not model.has_tree(scenario.id):
            skipped.append(scenario.id)
            continue
        for source in model.scoped_sources(scenario):
            if args.source is not None and source.id != args.source:
                continue
            pairs.append((scenario.id, source.id))
    if skipped:
        print(f"note: skipping scenarios without trees: {', '.join(skipped)}", file=sys.stderr)
    return pairs


def cmd_assess(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    path = _resolve_model_path(args, parser)
    model = _load_or_fail(path)
    if args.config is not None and args.config not in model.configurations_by_id:
        parser.error(f"unknown configuration {args.config!r}")
    pairs = _assess_pairs(model, args, parser)
    if not pairs:
        print("note: nothing to assess", file=sys.stderr)
        return ExitStatus.OK
    try:
        assessments = [
            _assess_with_default(model, scenario, source, args.config)
            for scenario, source in pairs
        ]
    except (OutOfScope, NoTree, MatraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.ENGINE

    if args.format == "json":
        if len(assessments) == 1:
            print(assessment_to_json(assessments[0]))
        else:
            print(assessments_to_json(assessments))
    elif args.format == "table":
        sys.stdout.write(render_risk_table(model, assessments, "markdown"))
    elif args.format == "tree":
        sections = [render_tree(model, [a]) for a in assessments]
        sys.stdout.write("\n".join(sections))
    return ExitStatus.OK


def cmd_whatif(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    path = _resolve_model_path(args, parser)
    model = _load_or_fail(path)
    for config_id in (args.base, args.alt):
        if config_id not in model.configurations_by_id:
            parser.error(f"unknown configuration {config_id!r}")
    if args.scenario not in model.scenarios_by_id:
        parser.error(f"unknown scenario {args.scenario!r}")
    if args.source not in model.sources_by_id:
        parser.error(f"unknown threat source {args.source!r}")
    try:
        diff = whatif_diff(model, args.scenario, args.source, args.base, args.alt)
    except MatraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.ENGINE

    if args.format == "json":
        print(whatif_to_json(diff))
        return ExitStatus.OK

    base_label = config_label(model, diff.base)
    alt_label = config_label(model, diff.alt)
    print(f"what-if: {diff.scenario} / {diff.source}")
    print(f"  base: {base_label}")
    print(f"  alt:  {alt_label}")
    print(
        f"risk: {diff.base.risk.display} -> {diff.alt.risk.display} "
        f"(delta {diff.risk_delta:+d})"
    )
    if not diff.any_change:
        print("no changes")
        return ExitStatus.OK
    print("objectives:")
    for change in diff.objectives:
        suffix = "" if change.changed else "  (unchanged)"
        print(
            f"  {change.objective}: {change.likelihood[0].short} -> "
            f"{change.likelihood[1].short}{suffix}"
        )
    print("vectors:")
    for change in diff.vectors:
        suffix = "" if change.changed else "  (unchanged)"
        print(
            f"  {change.vector}: res {change.residual[0].short} -> {change.residual[1].short}, "
            f"combined {change.combined[0].short} -> {change.combined[1].short}{suffix}"
        )
    return ExitStatus.OK


def cmd_report(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    path = _resolve_model_path(args, parser)
    model = _load_or_fail(path)
    scenarios = tuple(s for s in args.scenarios.split(",") if s) if args.scenarios else None
    configurations = tuple(c for c in args.configs.split(",") if c)
    try:
        request = ReportRequest(
            format=ReportFormat(args.format),
            configurations=configurations,
            scenarios=scenarios,
            source=args.source,
        )
        sys.stdout.write(build_report(model, request))
    except (KeyError, ValueError) as exc:
        parser.error(str(exc))
    except OutOfScope as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.ENGINE
    except MatraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.ENGINE
    return ExitStatus.OK


def cmd_export(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    path = _resolve_model_path(args, parser)
    model = _load_or_fail(path)
    if args.config is not None and args.config not in model.configurations_by_id:
        parser.error(f"unknown configuration {args.config!r}")
    if args.scenario not in model.scenarios_by_id:
        parser.error(f"unknown scenario {args.scenario!r}")
    if args.source not in model.sources_by_id:
        parser.error(f"unknown threat source {args.source!r}")
    try:
        assessment = _assess_with_default(model, args.scenario, args.source, args.config)
    except MatraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ExitStatus.ENGINE
    if args.format == "dot":
        sys.stdout.write(export_dot(model, assessment))
    else:
        print(assessment_to_json(assessment))
    return ExitStatus.OK


def cmd_serve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    import uvicorn

    from .service import create_app

    path = _resolve_model_path(args, parser)
    try:
        model = load_model_path(path)
    except MatraError as exc:
        print(f"error: model does not load: {exc}", file=sys.stderr)
        return ExitStatus.VALIDATION
    report = validate_model(model)
    if not report.ok:
        print("error: model has validation errors; refusing to serve", file=sys.stderr)
        print(report.human(), file=sys.stderr)
        return ExitStatus.VALIDATION

    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        parser.error(f"--listen must be HOST:PORT, got {args.listen!r}")
    port = int(port_text)

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
        sock.listen(128)
    except OSError as exc:
        print(f"error: cannot bind {args.listen}: {exc}", file=sys.stderr)
        sock.close()
        return ExitStatus.ENGINE

    app = create_app(model)
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    print(f"serving {model.metadata.name!r} on http://{args.listen}", file=sys.stderr)
    server.run(sockets=[sock])
    return ExitStatus.OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matra",
        description="Attack-tree risk assessment over declarative threat models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "model", nargs="?",
            help=f"path to a .matra.json model (defaults to ${MODEL_ENV})",
        )

    p = sub.add_parser("validate", help="check a model document and print all findings")
    add_model(p)
    p.add_argument("--format", choices=["human", "json"], default="human")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("assess", help="compute likelihood and risk for scenario/source pairs")
    add_model(p)
    p.add_argument("--scenario", help="scenario id (default: all with trees)")
    p.add_argument("--source", help="threat source id (default: all in scope)")
    p.add_argument("--config", help="configuration id (default: the model's 'default')")
    p.add_argument("--format", choices=["json", "table", "tree"], default="json")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("whatif", help="compare one scenario under two configurations")
    add_model(p)
    p.add_argument("--scenario", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--base", required=True, help="baseline configuration id")
    p.add_argument("--alt", required=True, help="alternative configuration id")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("report", help="render trees or risk tables for a selection")
    add_model(p)
    p.add_argument("--scenarios", help="comma-separated scenario ids (default: all with trees)")
    p.add_argument("--source", help="threat source id (default: all in scope per scenario)")
    p.add_argument("--configs", required=True, help="comma-separated configuration ids")
    p.add_argument(
        "--format", required=True,
        choices=[f.value for f in ReportFormat],
    )
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export", help="export one assessment as DOT or JSON")
    add_model(p)
    p.add_argument("--scenario", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--config", help="configuration id (default: the model's 'default')")
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="serve the model over read-only HTTP")
    add_model(p)
    p.add_argument("--listen", default="127.0.0.1:8787", help="HOST:PORT (default %(default)s)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure") and (stream.encoding or "").lower() != "utf-8":
            stream.reconfigure(encoding="utf-8")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return int(args.func(args, parser))
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else ExitStatus.USAGE
        return int(code)


if __name__ == "__main__":
    sys.exit(main())
