"""Risk-tier classification against the encoded practice/area taxonomy.

The taxonomy lists prohibited practices and high-risk application areas as
data (see ``data/aiact_taxonomy.ucdl``).  :func:`classify` places a use case
on the four-tier ladder from its *intended* purpose only:

* R1 — an intended application area matches a prohibited practice →
  ``Unacceptable``;
* R2 — the system is declared a safety component → ``High``;
* R3 — an intended area matches a high-risk area → ``High``;
* R4 — any affective capability is declared → ``Transparency``;
* R5 — otherwise → ``Minimal``.

Documented misuses never raise the level; a misuse whose area reference hits
the taxonomy becomes a warning flag instead, so that "we know this would be
prohibited and rule it out" reads as a documented exclusion rather than a
misclassification of the intended purpose.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Optional

from .lexer import ParseError, Token, TokenKind, lex
from .model import (
    ApplicationAreaRef,
    Diagnostic,
    RiskLevel,
    Severity,
    UseCase,
    require_valid,
)

_BUILTIN_RESOURCE = "aiact_taxonomy.ucdl"


class Tier(Enum):
    PROHIBITED = "prohibited"
    HIGH_RISK = "high_risk"

    @property
    def level(self) -> RiskLevel:
        return (RiskLevel.UNACCEPTABLE if self is Tier.PROHIBITED
                else RiskLevel.HIGH)


@dataclass(frozen=True)
class TaxonomyEntry:
    area_id: str
    tier: Tier
    area_label: str
    sub_use_label: str
    keywords: tuple[str, ...] = ()

    def display(self) -> str:
        return f"{self.area_label} > {self.sub_use_label}"


@dataclass(frozen=True)
class Taxonomy:
    version: str
    entries: tuple[TaxonomyEntry, ...]

    def find(self, area_id: str) -> Optional[TaxonomyEntry]:
        for entry in self.entries:
            if entry.area_id == area_id:
                return entry
        return None

    def by_tier(self, tier: Tier) -> tuple[TaxonomyEntry, ...]:
        return tuple(e for e in self.entries if e.tier is tier)


@dataclass(frozen=True)
class AreaMatch:
    """A use-case area that hit a taxonomy entry (labels carried along)."""

    area_id: str
    tier: Tier
    area_label: str
    sub_use_label: str

    def display(self) -> str:
        return f"{self.area_label} > {self.sub_use_label}"


@dataclass(frozen=True)
class MisuseFlag:
    """A documented misuse whose area reference hit the taxonomy."""

    description: str
    area_id: str
    tier: Tier
    area_label: str
    sub_use_label: str

    def display(self) -> str:
        return f"{self.area_label} > {self.sub_use_label}"


@dataclass(frozen=True)
class RiskAssessment:
    level: RiskLevel
    matched: tuple[AreaMatch, ...]
    misuse_flags: tuple[MisuseFlag, ...]
    rationale: tuple[str, ...]


class TaxonomyError(ValueError):
    """Raised when a taxonomy file cannot be loaded."""

    def __init__(self, message: str, errors: tuple[ParseError, ...] = ()):
        self.errors = errors
        if errors:
            message += ": " + "; ".join(e.render() for e in errors)
        super().__init__(message)


# ---------------------------------------------------------------------------
# taxonomy loading


def load_taxonomy(text: str) -> Taxonomy:
    """Parse a taxonomy file (``version`` header plus ``entry`` blocks)."""
    tokens, lex_errors = lex(text)
    if lex_errors:
        raise TaxonomyError("malformed taxonomy file", tuple(lex_errors))
    version, entries = _TaxonomyReader(tokens).run()
    return Taxonomy(version, tuple(entries))


class _TaxonomyReader:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.errors: list[ParseError] = []

    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def fail(self, message: str) -> None:
        self.errors.append(ParseError(self.cur().span, message))
        raise TaxonomyError("malformed taxonomy file", tuple(self.errors))

    def expect(self, kind: TokenKind, what: str) -> Token:
        if self.cur().kind is kind:
            return self.advance()
        self.fail(f"expected {what}")
        raise AssertionError  # unreachable

    def expect_word(self, text: str) -> None:
        tok = self.cur()
        if tok.kind is TokenKind.IDENT and tok.text == text:
            self.advance()
            return
        self.fail(f"expected '{text}'")

    def run(self) -> tuple[str, list[TaxonomyEntry]]:
        self.expect_word("version")
        self.expect(TokenKind.COLON, "':'")
        version = str(self.expect(TokenKind.STRING, "version string").value)
        entries: list[TaxonomyEntry] = []
        seen: set[str] = set()
        while self.cur().kind is not TokenKind.EOF:
            self.expect_word("entry")
            entry = self.read_entry()
            if entry.area_id in seen:
                self.fail(f"duplicate taxonomy entry {entry.area_id!r}")
            seen.add(entry.area_id)
            entries.append(entry)
        if not entries:
            self.fail("taxonomy has no entries")
        return version, entries

    def read_entry(self) -> TaxonomyEntry:
        area_id = self.expect(TokenKind.IDENT, "entry area id").text
        self.expect(TokenKind.LBRACE, "'{'")
        tier: Optional[Tier] = None
        area_label = ""
        sub_use = ""
        keywords: tuple[str, ...] = ()
        seen: set[str] = set()
        while self.cur().kind is not TokenKind.RBRACE:
            key = self.expect(TokenKind.IDENT, "entry field").text
            self.expect(TokenKind.COLON, "':'")
            if key in seen:
                self.fail(f"duplicate field {key!r} in entry {area_id!r}")
            seen.add(key)
            if key == "tier":
                word = self.expect(TokenKind.IDENT, "tier name").text
                try:
                    tier = Tier(word)
                except ValueError:
                    self.fail(f"unknown tier {word!r}")
            elif key == "area":
                area_label = str(self.expect(TokenKind.STRING, "area label").value)
            elif key == "sub_use":
                sub_use = str(self.expect(TokenKind.STRING, "sub-use label").value)
            elif key == "keywords":
                keywords = self.read_keywords(area_id)
            else:
                self.fail(f"unknown entry field {key!r}")
        self.advance()
        if tier is None or not area_label or not sub_use:
            self.fail(f"entry {area_id!r} needs tier, area and sub_use")
        return TaxonomyEntry(area_id, tier, area_label, sub_use, keywords)

    def read_keywords(self, area_id: str) -> tuple[str, ...]:
        self.expect(TokenKind.LBRACKET, "'['")
        words: list[str] = []
        while self.cur().kind is not TokenKind.RBRACKET:
            word = str(self.expect(TokenKind.STRING, "keyword string").value)
            if word != word.lower() or not word.strip():
                self.fail(f"keyword {word!r} in {area_id!r} must be "
                          "non-empty lowercase")
            words.append(word)
            if self.cur().kind is TokenKind.COMMA:
                self.advance()
        self.advance()
        return tuple(words)


@lru_cache(maxsize=1)
def builtin_taxonomy() -> Taxonomy:
    """The packaged taxonomy (4 prohibited and 15 high-risk sub-uses)."""
    text = (resources.files("ucdoc") / "data" / _BUILTIN_RESOURCE).read_text(
        encoding="utf-8")
    return load_taxonomy(text)


# ---------------------------------------------------------------------------
# matching


def _keyword_hits(entry: TaxonomyEntry, label: str) -> int:
    text = label.lower()
    return sum(
        1 for kw in entry.keywords
        if re.search(r"\b" + re.escape(kw) + r"\b", text))


def match_area(ref: ApplicationAreaRef, tax: Taxonomy) -> Optional[TaxonomyEntry]:
    """Best taxonomy entry for an area reference, if any.

    Taxonomy ids match exactly; free-text ``other(...)`` labels match by
    case-insensitive whole-word keyword search.  Ties on hit count resolve
    to the earliest entry in the taxonomy.
    """
    if not ref.is_other:
        return tax.find(ref.area_id)
    best: Optional[TaxonomyEntry] = None
    best_hits = 0
    for entry in tax.entries:
        hits = _keyword_hits(entry, ref.free_label or "")
        if hits > best_hits:
            best, best_hits = entry, hits
    return best


def _all_matches(ref: ApplicationAreaRef, tax: Taxonomy) -> list[TaxonomyEntry]:
    """Every entry an area reference hits (taxonomy order)."""
    if not ref.is_other:
        entry = tax.find(ref.area_id)
        return [entry] if entry else []
    label = ref.free_label or ""
    return [e for e in tax.entries if _keyword_hits(e, label) > 0]


# ---------------------------------------------------------------------------
# classification


def classify(uc: UseCase, tax: Taxonomy) -> RiskAssessment:
    """Place a valid use case on the risk ladder (rules R1–R5 above).

    ``matched`` lists every taxonomy entry hit by an intended area, in area
    order then taxonomy order, without duplicates.  ``misuse_flags`` lists
    taxonomy hits of the documented misuses; they never affect ``level``.
    """
    require_valid(uc)

    matched: list[AreaMatch] = []
    seen: set[str] = set()
    for ref in uc.application_areas:
        for entry in _all_matches(ref, tax):
            if entry.area_id in seen:
                continue
            seen.add(entry.area_id)
            matched.append(AreaMatch(entry.area_id, entry.tier,
                                     entry.area_label, entry.sub_use_label))

    misuse_flags: list[MisuseFlag] = []
    for misuse in uc.misuses:
        if misuse.area_ref is None:
            continue
        entry = match_area(misuse.area_ref, tax)
        if entry is not None:
            misuse_flags.append(MisuseFlag(
                misuse.description, entry.area_id, entry.tier,
                entry.area_label, entry.sub_use_label))

    prohibited = [m for m in matched if m.tier is Tier.PROHIBITED]
    high_risk = [m for m in matched if m.tier is Tier.HIGH_RISK]
    rationale: list[str] = []

    if prohibited:
        level = RiskLevel.UNACCEPTABLE
        for m in prohibited:
            rationale.append(
                f"intended application area '{m.area_id}' matches the "
                f"prohibited practice '{m.display()}'")
    elif uc.safety_component:
        level = RiskLevel.HIGH
        rationale.append(
            "declared as a safety component of a product, which places the "
            "system in the high-risk tier")
    elif high_risk:
        level = RiskLevel.HIGH
        for m in high_risk:
            rationale.append(
                f"intended application area '{m.area_id}' matches the "
                f"high-risk area '{m.display()}'")
    elif uc.affective_capabilities:
        level = RiskLevel.TRANSPARENCY
        tags = ", ".join(uc.affective_capabilities)
        rationale.append(
            f"affective capabilities declared ({tags}); transparency "
            "obligations apply")
    else:
        level = RiskLevel.MINIMAL
        rationale.append(
            "no prohibited or high-risk area matched, not a safety "
            "component, and no affective capabilities declared; minimal risk")

    return RiskAssessment(level, tuple(matched), tuple(misuse_flags),
                          tuple(rationale))


def explain(assessment: RiskAssessment) -> str:
    """Deterministic multi-line report of one assessment."""
    lines = [f"Risk level: {assessment.level.label}"]
    for reason in assessment.rationale:
        lines.append(f"Rule: {reason}")
    for flag in assessment.misuse_flags:
        lines.append(
            f"WARNING: documented misuse matches the {flag.tier.value} "
            f"entry '{flag.display()}': {flag.description}")
    return "\n".join(lines) + "\n"


def misuse_diagnostics(assessment: RiskAssessment) -> list[Diagnostic]:
    """Misuse flags as warning diagnostics (for CLI and catalog reports)."""
    return [
        Diagnostic(
            Severity.WARNING,
            "risk.misuse_flag",
            f"documented misuse matches the {flag.tier.value} entry "
            f"'{flag.display()}': {flag.description}")
        for flag in assessment.misuse_flags
    ]


def assessment_to_dict(assessment: RiskAssessment) -> dict:
    """Plain-data mirror with fixed key order, for JSON outputs."""
    return {
        "risk_level": assessment.level.label,
        "risk_matched": [
            {"area_id": m.area_id, "tier": m.tier.value,
             "area_label": m.area_label, "sub_use_label": m.sub_use_label}
            for m in assessment.matched],
        "risk_misuse_flags": [
            {"description": f.description, "area_id": f.area_id,
             "tier": f.tier.value, "area_label": f.area_label,
             "sub_use_label": f.sub_use_label}
            for f in assessment.misuse_flags],
        "risk_rationale": list(assessment.rationale),
    }
