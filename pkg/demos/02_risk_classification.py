"""
Risk classification under the four-tier ladder
==============================================

The classifier maps a use case to Unacceptable / High / Transparency /
Minimal by matching its application areas against a taxonomy of
prohibited practices and high-risk areas, with two overrides: safety
components are always at least High, and affective capabilities alone
imply at least Transparency.  Documented misuses are flagged but never
change the level — they describe what the system must NOT do.
"""

from dataclasses import replace
from pathlib import Path

from ucdoc import (
    ApplicationAreaRef,
    builtin_taxonomy,
    canonicalize,
    classify,
    explain,
    parse_document,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
TAX = builtin_taxonomy()

print("taxonomy:", TAX.version, "with", len(TAX.entries), "entries")
print()

# ---------------------------------------------------------------------------
# The three worked examples that ship with the library.

for path in sorted(FIXTURES.glob("*.ucdl")):
    uc = parse_document(path.read_text(encoding="utf-8"))[0][0]
    assessment = classify(uc, TAX)
    print(f"=== {uc.id} ===")
    print(explain(assessment), end="")
    print()

# ---------------------------------------------------------------------------
# The level is determined by *where* a capability is deployed, not by
# the capability itself.  Take the smart camera (Transparency in a
# leisure context) and move the very same functionality elsewhere.

camera = parse_document(
    (FIXTURES / "smart_camera.ucdl").read_text(encoding="utf-8"))[0][0]


def moved_to(uc, area_id, label=None):
    return canonicalize(replace(
        uc, application_areas=(ApplicationAreaRef(area_id, label),)))


for area, label in [
    ("other", "entertainment and leisure"),
    ("education.assess_students", None),
    ("law_enforcement.detect_emotional_state", None),
    ("social_scoring.predicted_personality", None),
]:
    level = classify(moved_to(camera, area, label), TAX).level
    shown = f"{label} (other)" if label else area
    print(f"{shown:45} -> {level.label}")

# ---------------------------------------------------------------------------
# Keyword matching: free-text "other" areas are still screened against
# the taxonomy, so a label like "visa application emotion screening"
# lands in the border-control area without an explicit id.

screened = moved_to(camera, "other", "visa application emotion screening")
assessment = classify(screened, TAX)
print()
print("free-text match:", assessment.matched[0].area_id,
      "->", assessment.level.label)
