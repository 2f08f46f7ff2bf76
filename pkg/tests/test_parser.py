from __future__ import annotations

import random

from support import make_use_case
from ucdoc import (
    ActorKind,
    GoalLevel,
    canonicalize,
    parse_document,
    serialize_canonical,
)

MINIMAL = (
    'usecase "T" { id: t intended_purpose: "p" user { name: "U" kind: human }'
    ' application_areas: [other("x")] inputs: ["i"] outputs: ["o"]'
    ' functions { f: "F" } scenario { 1 U: "does" } }'
)


def parse_one(source):
    use_cases, errors = parse_document(source)
    assert errors == [], [e.render() for e in errors]
    assert len(use_cases) == 1
    return use_cases[0]


def test_minimal_document():
    use_cases, errors = parse_document(MINIMAL)
    assert errors == []
    assert len(use_cases) == 1
    uc = use_cases[0]
    assert uc.id == "t"
    assert uc.title == "T"
    assert uc.user.name == "U" and uc.user.kind is ActorKind.HUMAN
    assert [(r.area_id, r.free_label) for r in uc.application_areas] == [("other", "x")]
    assert uc.inputs == ("i",) and uc.outputs == ("o",)
    assert [(f.id, f.label) for f in uc.system_functions] == [("f", "F")]
    assert [(s.index, s.actor, s.action) for s in uc.main_scenario] == [(1, "u", "does")]


def test_empty_document():
    assert parse_document("") == ([], [])
    assert parse_document("# only a comment\n") == ([], [])


def test_unclosed_brace_single_error():
    use_cases, errors = parse_document('usecase "T" {\n  id: t\n')
    assert use_cases == []
    assert len(errors) == 1
    assert "}" in errors[0].expected
    assert errors[0].span.line == 3


def test_duplicate_field_first_wins():
    src = MINIMAL.replace('id: t ', 'id: t id: later ')
    use_cases, errors = parse_document(src)
    assert [e.code for e in errors] == ["field.duplicate"]
    # The block still parses; the first value is kept.
    assert use_cases == []  # blocks with errors are dropped from results


def test_unknown_field_is_reported_but_parsing_continues():
    src = MINIMAL.replace('inputs:', 'bogus: "x" inputs:')
    _, errors = parse_document(src)
    assert [e.code for e in errors] == ["field.unknown"]


def test_panic_recovery_reaches_second_usecase():
    src = 'usecase "A" { id: ??? }\n' + MINIMAL.replace('"T"', '"B"')
    use_cases, errors = parse_document(src)
    assert len(errors) >= 1
    assert [uc.title for uc in use_cases] == ["B"]


def test_multiple_errors_reported_in_one_run():
    src = ('usecase "A" { id: ??? }\n'
           'usecase "B" { level: nonsense '
           + MINIMAL.split("{", 1)[1].replace('id: t', 'id: b'))
    _, errors = parse_document(src)
    assert len(errors) >= 2
    positions = [(e.span.line, e.span.column) for e in errors]
    assert positions == sorted(positions)


def test_stray_toplevel_tokens():
    _, errors = parse_document('frobnicate\n' + MINIMAL)
    assert len(errors) == 1
    ucs, _ = parse_document('frobnicate\n' + MINIMAL)
    assert len(ucs) == 1  # recovery skipped to the next usecase


def test_area_item_forms():
    src = MINIMAL.replace(
        '[other("x")]',
        '[media.analytics, other("leisure"), "plain_string"]')
    uc = parse_one(src)
    assert [(r.area_id, r.free_label) for r in uc.application_areas] == [
        ("media.analytics", None), ("other", "leisure"), ("plain_string", None)]


def test_trailing_comma_is_tolerated():
    uc = parse_one(MINIMAL.replace('["i"]', '["i", "j",]'))
    assert uc.inputs == ("i", "j")


def test_misuse_with_and_without_area():
    src = MINIMAL[:-1] + (
        ' misuse { description: "bad" area: employment.monitor_performance }'
        ' misuse { description: "worse" } }')
    uc = parse_one(src)
    assert [(m.description, m.area_ref.area_id if m.area_ref else None)
            for m in uc.misuses] == [
        ("bad", "employment.monitor_performance"), ("worse", None)]


def test_bad_enum_values():
    _, errors = parse_document(MINIMAL.replace("kind: human", "kind: robot"))
    assert "field.value" in [e.code for e in errors]
    _, errors = parse_document(
        MINIMAL.replace('id: t', 'id: t level: gigantic'))
    assert "field.value" in [e.code for e in errors]
    _, errors = parse_document(
        MINIMAL.replace('id: t', 'id: t safety_component: maybe'))
    assert "field.value" in [e.code for e in errors]


def test_level_and_safety_component():
    uc = parse_one(MINIMAL.replace(
        'id: t', 'id: t level: summary safety_component: true'))
    assert uc.level is GoalLevel.SUMMARY
    assert uc.safety_component is True


def test_target_and_secondary_actor_blocks():
    src = MINIMAL[:-1] + (
        ' target_persons { person { name: "P" kind: human } }'
        ' secondary_actors { person { name: "Org" kind: organization } } }')
    uc = parse_one(src)
    assert [a.name for a in uc.target_persons] == ["P"]
    assert [(a.name, a.kind) for a in uc.secondary_actors] == [
        ("Org", ActorKind.ORGANIZATION)]


def test_includes_extends_annotations():
    src = MINIMAL.replace(
        'functions { f: "F" }',
        'functions { f: "F" includes: [g] g: "G" extends: [f] }')
    uc = parse_one(src)
    by_id = {f.id: f for f in uc.system_functions}
    assert by_id["f"].includes == ("g",)
    assert by_id["g"].extends == ("f",)


def test_annotation_without_function_is_an_error():
    src = MINIMAL.replace('functions { f: "F" }',
                          'functions { includes: [g] f: "F" }')
    _, errors = parse_document(src)
    assert errors, "annotation before any function must be rejected"


def test_step_function_annotation():
    uc = parse_one(MINIMAL.replace('1 U: "does"', '1 U: "does" -> f'))
    assert uc.main_scenario[0].function == "f"


def test_extension_block():
    src = MINIMAL[:-1] + (
        ' extension 1a "it fails" { 1 system: "recovers" -> f } }')
    uc = parse_one(src)
    ext, = uc.extensions
    assert ext.branch_id == "1a"
    assert ext.condition == "it fails"
    assert [(s.index, s.actor, s.function) for s in ext.steps] == [
        (1, "system", "f")]


def test_associations_list():
    src = MINIMAL[:-1] + ' associations: [u -> f] }'
    uc = parse_one(src)
    assert [(a.actor, a.function) for a in uc.associations] == [("u", "f")]


def test_schema_version_is_accepted_and_ignored():
    uc = parse_one(MINIMAL.replace('id: t', 'schema_version: "1" id: t'))
    assert uc.id == "t"


def test_lexer_errors_poison_the_enclosing_block():
    src = MINIMAL.replace('"does"', '"does')  # unterminated string
    use_cases, errors = parse_document(src)
    assert use_cases == []
    assert any(e.code == "lex.unterminated_string" for e in errors)


def test_triple_quoted_prose_field():
    src = MINIMAL.replace(
        'intended_purpose: "p"',
        'intended_purpose: """\n    line one\n    line two\n  """')
    uc = parse_one(src)
    assert uc.intended_purpose == "line one\nline two"


def test_round_trip_property():
    rng = random.Random(20240818)
    for _ in range(150):
        uc = make_use_case(rng)
        text = serialize_canonical(uc)
        parsed, errors = parse_document(text)
        assert errors == [], [e.render() for e in errors] + [text]
        assert len(parsed) == 1
        assert canonicalize(parsed[0]) == uc, text
