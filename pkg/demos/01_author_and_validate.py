"""
Authoring and validating a use case
===================================

A use case is written in UCDL, a small block-structured text format.
This walk-through parses one from a string, pokes at the resulting
value, breaks it on purpose to see the diagnostics, and prints the
canonical serialization.
"""

from ucdoc import (
    parse_document,
    serialize_canonical,
    use_case_to_dict,
    validate_use_case,
)

# ---------------------------------------------------------------------------
# A small but complete description: a meeting assistant that estimates
# how engaged participants are from their webcam stream.

SOURCE = '''\
# Engagement overlay for video calls.
usecase "Meeting engagement overlay" {
  id: meeting-engagement
  intended_purpose: """
    Show the meeting host an aggregate engagement score for the
    audience, so long monologues can be cut short.
  """
  affective_capabilities: [engagement_estimation]
  user {
    name: "Host"
    kind: human
  }
  target_persons {
    person {
      name: "Participants"
      kind: human
    }
  }
  application_areas: [other("video conferencing")]
  inputs: ["webcam stream"]
  outputs: ["engagement score"]
  functions {
    estimate_engagement: "Estimate engagement"
  }
  scenario {
    1 host: "starts the meeting"
    2 system: "estimates audience engagement" -> estimate_engagement
    3 host: "adapts the agenda"
  }
  misuse {
    description: "Grading students by their engagement score"
    area: education.assess_students
  }
}
'''

use_cases, errors = parse_document(SOURCE)
print("parse errors:", errors)
uc = use_cases[0]
print("id:", uc.id)
print("user:", uc.user.name, "/", uc.user.kind.value)
print("capabilities:", ", ".join(uc.affective_capabilities))

# Validation is separate from parsing: the parser accepts anything
# grammatical, the validator checks cross-references and formats.
print("validation diagnostics:", validate_use_case(uc))

# ---------------------------------------------------------------------------
# Break it: point a scenario step at an actor that doesn't exist and
# drop the outputs.  Each problem comes back as one diagnostic with a
# stable code, so tooling can filter or suppress them.

broken = SOURCE.replace("1 host:", "1 intern:").replace(
    '  outputs: ["engagement score"]\n', "")
bad_uc = parse_document(broken)[0][0]
for diag in validate_use_case(bad_uc):
    print(f"  {diag.severity.value}: [{diag.code}] {diag.message}")

# ---------------------------------------------------------------------------
# The canonical form: fields in a fixed order, lists sorted, prose
# re-wrapped into triple-quoted blocks.  parse(serialize(uc)) == uc,
# which is what makes diffs and golden files trustworthy.

print()
print(serialize_canonical(uc))

# The same data as a plain dict, ready for json.dumps:
print(sorted(use_case_to_dict(uc)))
