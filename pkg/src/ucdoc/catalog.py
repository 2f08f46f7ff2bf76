"""File-based catalogue of use cases with query, stats, and JSON export.

A catalog is built from ``.ucdl`` sources: every file is parsed and
validated, valid use cases are classified once at build time, and the
resulting entries are kept sorted by id.  Problems never abort the build;
they accumulate as diagnostics (parse errors carry a ``parse.`` code prefix
and a ``path:line:column`` location).

The JSON export (schema ``ucdoc-catalog/1``) is a self-contained snapshot:
it records the taxonomy version and the generated risk fields next to the
authored fields, and serializes deterministically so exports can be golden-
file tested byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .model import (
    ActorKind,
    Diagnostic,
    RiskLevel,
    Severity,
    UseCase,
    use_case_from_dict,
    use_case_to_dict,
    validate_use_case,
)
from .parser import parse_document
from .risk import (
    AreaMatch,
    MisuseFlag,
    RiskAssessment,
    Taxonomy,
    Tier,
    assessment_to_dict,
    classify,
    misuse_diagnostics,
)

SCHEMA = "ucdoc-catalog/1"

_GENERATED_FIELDS = (
    "risk_level", "risk_matched", "risk_misuse_flags", "risk_rationale")


@dataclass(frozen=True)
class CatalogEntry:
    use_case: UseCase
    assessment: RiskAssessment
    source_path: str


@dataclass(frozen=True)
class Catalog:
    entries: tuple[CatalogEntry, ...]
    taxonomy: Taxonomy
    # Version recorded at build time; survives snapshot round-trips even if
    # the catalog is later reopened with a different taxonomy on hand.
    taxonomy_version: str

    def ids(self) -> list[str]:
        return [e.use_case.id for e in self.entries]


@dataclass(frozen=True)
class Query:
    """Conjunctive entry filter; ``None`` fields are ignored."""

    risk_level: Optional[RiskLevel] = None
    area_id: Optional[str] = None
    capability: Optional[str] = None
    actor_kind: Optional[ActorKind] = None
    free_text: Optional[str] = None


@dataclass(frozen=True)
class CatalogStats:
    total: int
    by_level: dict[str, int]
    by_area: dict[str, int]
    by_capability: dict[str, int]


class QueryError(ValueError):
    """Raised for filters that cannot match anything (unknown area id)."""

    def __init__(self, message: str, code: str = "query.unknown_area"):
        self.code = code
        super().__init__(message)


class CatalogFormatError(ValueError):
    """Raised when catalog JSON does not follow the export schema."""


# ---------------------------------------------------------------------------
# building


def load_sources(directory: str | Path) -> list[tuple[str, str]]:
    """All ``.ucdl`` files under ``directory``, as (relative path, text).

    Recursive, in sorted path order so builds are reproducible.
    """
    root = Path(directory)
    sources: list[tuple[str, str]] = []
    for path in sorted(root.rglob("*.ucdl")):
        rel = path.relative_to(root).as_posix()
        sources.append((rel, path.read_text(encoding="utf-8")))
    return sources


def build_catalog(sources: Iterable[tuple[str, str]],
                  tax: Taxonomy) -> tuple[Catalog, list[Diagnostic]]:
    """Parse, validate and classify every source; never aborts.

    Parse errors, validation errors, duplicate-id errors and misuse-flag
    warnings are all returned as diagnostics; only clean use cases become
    entries.  The first occurrence of a duplicated id wins.
    """
    diagnostics: list[Diagnostic] = []
    by_id: dict[str, CatalogEntry] = {}
    for path, text in sources:
        use_cases, errors = parse_document(text)
        for err in errors:
            message = err.message
            if err.expected:
                message += " (expected " + " or ".join(err.expected) + ")"
            diagnostics.append(Diagnostic(
                Severity.ERROR, f"parse.{err.code}", message,
                f"{path}:{err.span.line}:{err.span.column}"))
        for uc in use_cases:
            problems = validate_use_case(uc)
            if problems:
                diagnostics.extend(
                    Diagnostic(d.severity, d.code, d.message,
                               f"{path}:{d.location}" if d.location else path)
                    for d in problems)
                continue
            if uc.id in by_id:
                first = by_id[uc.id].source_path
                diagnostics.append(Diagnostic(
                    Severity.ERROR, "catalog.duplicate_id",
                    f"use case id {uc.id!r} already defined in {first}",
                    path))
                continue
            assessment = classify(uc, tax)
            diagnostics.extend(
                Diagnostic(d.severity, d.code, d.message, path)
                for d in misuse_diagnostics(assessment))
            by_id[uc.id] = CatalogEntry(uc, assessment, path)
    entries = tuple(sorted(by_id.values(), key=lambda e: e.use_case.id))
    return Catalog(entries, tax, tax.version), diagnostics


# ---------------------------------------------------------------------------
# querying


def _known_area(area_id: str, tax: Taxonomy) -> bool:
    if area_id == "other":
        return True
    for entry in tax.entries:
        if entry.area_id == area_id:
            return True
        if entry.area_id.split(".", 1)[0] == area_id:
            return True
    return False


def _matches(entry: CatalogEntry, q: Query) -> bool:
    uc = entry.use_case
    if q.risk_level is not None and entry.assessment.level is not q.risk_level:
        return False
    if q.area_id is not None:
        hit = any(
            ref.area_id == q.area_id
            or ref.area_id.startswith(q.area_id + ".")
            for ref in uc.application_areas)
        if not hit:
            return False
    if q.capability is not None and q.capability not in uc.affective_capabilities:
        return False
    if q.actor_kind is not None:
        if all(a.kind is not q.actor_kind for a in uc.all_actors()):
            return False
    if q.free_text is not None:
        haystack = (uc.title + "\n" + uc.intended_purpose).lower()
        if q.free_text.lower() not in haystack:
            return False
    return True


def query(cat: Catalog, q: Query) -> list[CatalogEntry]:
    """Entries satisfying every filter, in id order.

    Raises :class:`QueryError` when ``q.area_id`` names neither a taxonomy
    entry, a taxonomy area prefix, nor ``other``.
    """
    if q.area_id is not None and not _known_area(q.area_id, cat.taxonomy):
        raise QueryError(
            f"unknown application area {q.area_id!r}; use a taxonomy id, "
            "a taxonomy area prefix, or 'other'")
    return [entry for entry in cat.entries if _matches(entry, q)]


def stats(cat: Catalog) -> CatalogStats:
    """Entry counts per risk level, top-level area, and capability tag."""
    by_level = {level.label: 0
                for level in sorted(RiskLevel, reverse=True)}
    by_area: dict[str, int] = {}
    by_capability: dict[str, int] = {}
    for entry in cat.entries:
        by_level[entry.assessment.level.label] += 1
        segments = {ref.area_id.split(".", 1)[0]
                    for ref in entry.use_case.application_areas}
        for segment in sorted(segments):
            by_area[segment] = by_area.get(segment, 0) + 1
        for tag in entry.use_case.affective_capabilities:
            by_capability[tag] = by_capability.get(tag, 0) + 1
    return CatalogStats(
        total=len(cat.entries),
        by_level=by_level,
        by_area=dict(sorted(by_area.items())),
        by_capability=dict(sorted(by_capability.items())),
    )


# ---------------------------------------------------------------------------
# JSON snapshot


def export_json(cat: Catalog) -> bytes:
    """Deterministic UTF-8 JSON snapshot of the catalog."""
    doc = {
        "schema": SCHEMA,
        "taxonomy_version": cat.taxonomy_version,
        "generated_fields": list(_GENERATED_FIELDS),
        "entries": [
            {
                "source_path": entry.source_path,
                **use_case_to_dict(entry.use_case),
                **assessment_to_dict(entry.assessment),
            }
            for entry in cat.entries
        ],
    }
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _assessment_from_dict(entry: dict) -> RiskAssessment:
    try:
        level = RiskLevel[entry["risk_level"].upper()]
        matched = tuple(
            AreaMatch(m["area_id"], Tier(m["tier"]),
                      m["area_label"], m["sub_use_label"])
            for m in entry.get("risk_matched", ()))
        flags = tuple(
            MisuseFlag(f["description"], f["area_id"], Tier(f["tier"]),
                       f["area_label"], f["sub_use_label"])
            for f in entry.get("risk_misuse_flags", ()))
        rationale = tuple(entry.get("risk_rationale", ()))
    except (KeyError, ValueError) as exc:
        raise CatalogFormatError(f"bad risk fields in entry: {exc}") from exc
    return RiskAssessment(level, matched, flags, rationale)


def load_catalog_json(data: bytes | str, tax: Taxonomy) -> Catalog:
    """Load an exported snapshot; stored assessments are kept verbatim.

    ``tax`` backs area-id validation in later queries; entries are *not*
    reclassified, so the snapshot remains faithful to its build.
    """
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CatalogFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise CatalogFormatError(
            f"unsupported catalog schema {doc.get('schema')!r}"
            if isinstance(doc, dict) else "top-level JSON value must be an object")
    entries = []
    for raw in doc.get("entries", ()):
        try:
            uc = use_case_from_dict(raw)
        except (KeyError, TypeError, ValueError) as exc:
            raise CatalogFormatError(f"bad use-case entry: {exc}") from exc
        entries.append(CatalogEntry(
            uc, _assessment_from_dict(raw), raw.get("source_path", "")))
    entries.sort(key=lambda e: e.use_case.id)
    return Catalog(tuple(entries), tax, doc.get("taxonomy_version", tax.version))
