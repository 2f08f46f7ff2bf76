"""Command line front end: parse, validate, classify, render, catalogue.

Exit codes are part of the interface::

    0  success
    1  findings (validation errors; warnings too when --strict is given)
    2  parse errors in an input file
    3  I/O problem or bad usage (unknown flag, missing file, bad filter)

When several apply, the highest code wins.  With ``--format json`` the
machine-readable document is the only thing on stdout; human-facing
messages go to stderr.  The risk taxonomy is resolved from ``--taxonomy``,
then the ``UCDOC_TAXONOMY`` environment variable, then the built-in file.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from enum import IntEnum
from pathlib import Path
from typing import Optional, TextIO

from .catalog import (
    Catalog,
    CatalogFormatError,
    Query,
    QueryError,
    build_catalog,
    export_json,
    load_catalog_json,
    load_sources,
    query,
    stats,
)
from .docgen import render_html_page, render_table_markdown
from .diagram import build_diagram, layout, render_svg, render_textual
from .lexer import ParseError
from .model import Diagnostic, RiskLevel, Severity, UseCase, validate_use_case
from .parser import parse_document
from .risk import (
    Taxonomy,
    TaxonomyError,
    assessment_to_dict,
    builtin_taxonomy,
    classify,
    explain,
    load_taxonomy,
)

TAXONOMY_ENV_VAR = "UCDOC_TAXONOMY"


class ExitStatus(IntEnum):
    OK = 0
    FINDINGS = 1
    PARSE_ERROR = 2
    USAGE = 3


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that reports problems instead of exiting the process."""

    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# shared plumbing


def _read_source(path: str, stdin: Optional[str]) -> tuple[str, str]:
    if path == "-":
        if stdin is None:
            raise _UsageError("no data on stdin")
        return "<stdin>", stdin
    return path, Path(path).read_text(encoding="utf-8")


def _resolve_taxonomy(ns: argparse.Namespace) -> Taxonomy:
    path = getattr(ns, "taxonomy", None) or os.environ.get(TAXONOMY_ENV_VAR)
    if path:
        return load_taxonomy(Path(path).read_text(encoding="utf-8"))
    return builtin_taxonomy()


def _report_parse_errors(name: str, errors: list[ParseError],
                         err: TextIO) -> None:
    for e in errors:
        suffix = ""
        if e.expected:
            suffix = " (expected " + " or ".join(e.expected) + ")"
        err.write(f"{name}:{e.span.line}:{e.span.column}: error: "
                  f"{e.message}{suffix}\n")


def _report_diagnostic(name: Optional[str], diag: Diagnostic,
                       err: TextIO) -> None:
    # ``name`` of None means the diagnostic location is already a full path.
    if name is None:
        where = diag.location or "<catalog>"
    else:
        where = f"{name}:{diag.location}" if diag.location else name
    err.write(f"{where}: {diag.severity.value}: [{diag.code}] {diag.message}\n")


def _check_use_case(name: str, uc: UseCase, strict: bool,
                    err: TextIO) -> tuple[bool, ExitStatus]:
    """Report validation diagnostics; returns (usable, exit contribution)."""
    diags = validate_use_case(uc)
    for d in diags:
        _report_diagnostic(name, d, err)
    has_errors = any(d.severity is Severity.ERROR for d in diags)
    if has_errors:
        return False, ExitStatus.FINDINGS
    if diags and strict:
        return True, ExitStatus.FINDINGS
    return True, ExitStatus.OK


def _single_use_case(name: str, text: str,
                     err: TextIO) -> tuple[Optional[UseCase], ExitStatus]:
    use_cases, errors = parse_document(text)
    if errors:
        _report_parse_errors(name, errors, err)
        return None, ExitStatus.PARSE_ERROR
    if len(use_cases) != 1:
        raise _UsageError(
            f"expected exactly one use case in {name}, found {len(use_cases)}")
    return use_cases[0], ExitStatus.OK


# ---------------------------------------------------------------------------
# subcommands


def _cmd_validate(ns, stdin, out, err) -> ExitStatus:
    code = ExitStatus.OK
    n_files = n_cases = n_errors = n_warnings = 0
    for path in sorted(ns.paths):
        name, text = _read_source(path, stdin)
        n_files += 1
        use_cases, errors = parse_document(text)
        if errors:
            _report_parse_errors(name, errors, err)
            n_errors += len(errors)
            code = max(code, ExitStatus.PARSE_ERROR)
        for uc in use_cases:
            n_cases += 1
            diags = validate_use_case(uc)
            for d in diags:
                _report_diagnostic(name, d, err)
                if d.severity is Severity.ERROR:
                    n_errors += 1
                else:
                    n_warnings += 1
            if any(d.severity is Severity.ERROR for d in diags):
                code = max(code, ExitStatus.FINDINGS)
            elif diags and ns.strict:
                code = max(code, ExitStatus.FINDINGS)
    out.write(f"{n_files} file(s), {n_cases} use case(s), "
              f"{n_errors} error(s), {n_warnings} warning(s)\n")
    return code


def _cmd_classify(ns, stdin, out, err) -> ExitStatus:
    tax = _resolve_taxonomy(ns)
    name, text = _read_source(ns.path, stdin)
    use_cases, errors = parse_document(text)
    code = ExitStatus.OK
    if errors:
        _report_parse_errors(name, errors, err)
        code = ExitStatus.PARSE_ERROR
    assessed = []
    for uc in use_cases:
        usable, contribution = _check_use_case(name, uc, False, err)
        code = max(code, contribution)
        if not usable:
            continue
        assessment = classify(uc, tax)
        assessed.append((uc, assessment))
        if assessment.misuse_flags and ns.strict:
            code = max(code, ExitStatus.FINDINGS)
    if ns.format == "json":
        payload = [{"id": uc.id, **assessment_to_dict(a)} for uc, a in assessed]
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        for i, (uc, assessment) in enumerate(assessed):
            if i:
                out.write("\n")
            out.write(f"Use case: {uc.id}\n")
            out.write(explain(assessment))
    return code


def _cmd_render(ns, stdin, out, err) -> ExitStatus:
    name, text = _read_source(ns.path, stdin)
    uc, code = _single_use_case(name, text, err)
    if uc is None:
        return code
    usable, contribution = _check_use_case(name, uc, ns.strict, err)
    if not usable:
        return max(code, contribution)
    code = max(code, contribution)
    diagram = build_diagram(uc)
    warnings = list(diagram.warnings)
    if ns.format == "svg":
        positioned = layout(diagram)
        warnings.extend(positioned.warnings)
        payload = render_svg(positioned)
        Path(ns.out).write_bytes(payload)
    else:
        Path(ns.out).write_text(render_textual(diagram), encoding="utf-8")
    for w in warnings:
        _report_diagnostic(name, w, err)
    if warnings and ns.strict:
        code = max(code, ExitStatus.FINDINGS)
    return code


def _cmd_table(ns, stdin, out, err) -> ExitStatus:
    if ns.with_diagram and ns.format != "html":
        raise _UsageError("--with-diagram requires --format html")
    name, text = _read_source(ns.path, stdin)
    uc, code = _single_use_case(name, text, err)
    if uc is None:
        return code
    usable, contribution = _check_use_case(name, uc, False, err)
    if not usable:
        return max(code, contribution)
    code = max(code, contribution)
    assessment = classify(uc, _resolve_taxonomy(ns)) if ns.with_risk else None
    if ns.format == "md":
        out.write(render_table_markdown(uc, assessment))
    else:
        svg = render_svg(layout(build_diagram(uc))) if ns.with_diagram else None
        out.write(render_html_page(uc, assessment, svg))
    return code


def _cmd_catalog_build(ns, stdin, out, err) -> ExitStatus:
    tax = _resolve_taxonomy(ns)
    root = Path(ns.directory)
    if not root.is_dir():
        raise _UsageError(f"not a directory: {ns.directory}")
    cat, diags = build_catalog(load_sources(root), tax)
    code = ExitStatus.OK
    for d in diags:
        _report_diagnostic(None, d, err)
        if d.code.startswith("parse."):
            code = max(code, ExitStatus.PARSE_ERROR)
        elif d.severity is Severity.ERROR:
            code = max(code, ExitStatus.FINDINGS)
        elif ns.strict:
            code = max(code, ExitStatus.FINDINGS)
    Path(ns.out).write_bytes(export_json(cat))
    out.write(f"wrote {len(cat.entries)} use case(s) to {ns.out}\n")
    return code


def _load_catalog(ns) -> Catalog:
    tax = _resolve_taxonomy(ns)
    return load_catalog_json(Path(ns.file).read_bytes(), tax)


def _cmd_catalog_query(ns, stdin, out, err) -> ExitStatus:
    cat = _load_catalog(ns)
    level = RiskLevel[ns.risk.upper()] if ns.risk else None
    q = Query(risk_level=level, area_id=ns.area, capability=ns.capability)
    for entry in query(cat, q):
        out.write(entry.use_case.id + "\n")
    return ExitStatus.OK


def _cmd_catalog_stats(ns, stdin, out, err) -> ExitStatus:
    report = stats(_load_catalog(ns))
    out.write(f"total: {report.total}\n")
    out.write("by risk level:\n")
    for label, count in report.by_level.items():
        out.write(f"  {label}: {count}\n")
    out.write("by area:\n")
    for segment, count in report.by_area.items():
        out.write(f"  {segment}: {count}\n")
    out.write("by capability:\n")
    for tag, count in report.by_capability.items():
        out.write(f"  {tag}: {count}\n")
    return ExitStatus.OK


# ---------------------------------------------------------------------------
# argument wiring


def build_arg_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="ucdoc",
        description="Validate, classify, render and catalogue use-case "
                    "descriptions written in UCDL.")
    sub = parser.add_subparsers(dest="command", metavar="<command>",
                                required=True)

    p = sub.add_parser("validate", help="parse and validate UCDL files")
    p.add_argument("paths", nargs="+", metavar="path",
                   help="UCDL file, or - for stdin")
    p.add_argument("--strict", action="store_true",
                   help="treat warnings as findings (exit 1)")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("classify", help="assess the risk level of use cases")
    p.add_argument("path", help="UCDL file, or - for stdin")
    p.add_argument("--taxonomy", metavar="file",
                   help="alternative risk taxonomy")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--strict", action="store_true",
                   help="misuse flags become findings (exit 1)")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("render", help="draw the use-case diagram")
    p.add_argument("path", help="UCDL file with exactly one use case")
    p.add_argument("--out", required=True, metavar="file")
    p.add_argument("--format", choices=("svg", "puml"), default="svg")
    p.add_argument("--strict", action="store_true",
                   help="diagram warnings become findings (exit 1)")
    p.set_defaults(handler=_cmd_render)

    p = sub.add_parser("table", help="emit the documentation table")
    p.add_argument("path", help="UCDL file with exactly one use case")
    p.add_argument("--format", choices=("md", "html"), default="md")
    p.add_argument("--with-risk", action="store_true", dest="with_risk",
                   help="append risk level and rationale rows")
    p.add_argument("--with-diagram", action="store_true", dest="with_diagram",
                   help="embed the diagram (html only)")
    p.add_argument("--taxonomy", metavar="file")
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("catalog", help="build and inspect use-case catalogues")
    csub = p.add_subparsers(dest="subcommand", metavar="<subcommand>",
                            required=True)

    c = csub.add_parser("build", help="compile a directory of UCDL files")
    c.add_argument("directory")
    c.add_argument("--out", required=True, metavar="file")
    c.add_argument("--taxonomy", metavar="file")
    c.add_argument("--strict", action="store_true")
    c.set_defaults(handler=_cmd_catalog_build)

    c = csub.add_parser("query", help="filter a catalog JSON file")
    c.add_argument("file")
    c.add_argument("--risk", type=str.lower, metavar="level",
                   choices=tuple(level.label.lower() for level in RiskLevel))
    c.add_argument("--area", metavar="area_id")
    c.add_argument("--capability", metavar="tag")
    c.add_argument("--taxonomy", metavar="file")
    c.set_defaults(handler=_cmd_catalog_query)

    c = csub.add_parser("stats", help="summarise a catalog JSON file")
    c.add_argument("file")
    c.add_argument("--taxonomy", metavar="file")
    c.set_defaults(handler=_cmd_catalog_stats)

    return parser


def run(argv: list[str], stdin: Optional[str] = None,
        stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = build_arg_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            ns = parser.parse_args(argv)
    except _UsageError as exc:
        text = str(exc)
        err.write(text if text.endswith("\n") else text + "\n")
        return ExitStatus.USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return int(ns.handler(ns, stdin, out, err))
    except _UsageError as exc:
        err.write(f"ucdoc: error: {exc}\n")
        return ExitStatus.USAGE
    except OSError as exc:
        err.write(f"ucdoc: error: {exc}\n")
        return ExitStatus.USAGE
    except TaxonomyError as exc:
        err.write(f"ucdoc: error: {exc}\n")
        return ExitStatus.USAGE
    except CatalogFormatError as exc:
        err.write(f"ucdoc: error: {exc}\n")
        return ExitStatus.PARSE_ERROR
    except QueryError as exc:
        err.write(f"ucdoc: error: {exc}\n")
        return ExitStatus.USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
