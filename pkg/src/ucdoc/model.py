"""Core domain model for AI use-case documentation records.

A :class:`UseCase` captures every information element needed to document the
intended purpose of an AI system and to place it on the EU AI Act risk
ladder: who uses it, on whom it is used, where it runs, which application
areas it targets, which misuses are foreseen, and the classic use-case
machinery (goal level, trigger, guarantees, main scenario, extensions).

All types are immutable values; the validator returns diagnostics instead of
raising, so callers can collect every problem in one pass.

Diagnostic codes emitted by :func:`validate_use_case`:

==========================  =================================================
code                        meaning
==========================  =================================================
id.missing / id.format      id empty / not matching ``[a-z0-9_-]+``
title.empty                 title blank
purpose.empty               intended_purpose blank
user.missing                user actor absent or unnamed
actor.role                  actor stored under the wrong role
actor.name_empty            target/secondary actor with a blank name
actor.ident_empty           actor name yields no referenceable identifier
actor.reserved_name         actor identifier collides with the ``system`` literal
actors.duplicate_name       two actors in one role list share an identifier
actors.kind_conflict        same actor name declared with two kinds
areas.empty                 no application area given
areas.format                area id is not a dotted identifier
areas.other_label_missing   ``other`` area without a free-text label
areas.unexpected_label      free-text label on a non-``other`` area
misuse.description_empty    misuse with a blank description
inputs.empty / outputs.empty  no inputs / outputs listed
functions.empty             no system function declared
functions.id_format         function id not a slug
functions.reserved_id       function id is the keyword ``includes``/``extends``
functions.duplicate_id      two functions share an id
functions.unknown_ref       includes/extends names an unknown function
functions.self_ref          function includes/extends itself
scenario.empty              main scenario has no steps
scenario.noncontiguous      step indices are not 1..N
scenario.unknown_actor      step actor resolves to no declared actor
scenario.action_empty       step with a blank action
scenario.unknown_function   step annotation names an unknown function
extension.branch_format     branch id not of the form ``<step><letter>``
extension.unknown_step      branch prefix references no main-scenario step
extension.duplicate_branch  two extensions share a branch id
extension.condition_empty   extension with a blank condition
assoc.unknown_actor         association names an unknown actor
assoc.unknown_function      association names an unknown function
==========================  =================================================
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields, replace
from enum import Enum, IntEnum
from typing import Optional

SYSTEM_ACTOR = "system"
OTHER_AREA = "other"

_SLUG_RE = re.compile(r"^[a-z0-9_-]+$")
_AREA_ID_RE = re.compile(r"^[a-z][a-z0-9_]*(\.[a-z][a-z0-9_]*)*$")
_BRANCH_RE = re.compile(r"^[1-9][0-9]*[a-z]$")


class RiskLevel(IntEnum):
    """AI Act risk tier, ordered so that higher value means higher risk."""

    MINIMAL = 0
    TRANSPARENCY = 1
    HIGH = 2
    UNACCEPTABLE = 3

    @property
    def label(self) -> str:
        return self.name.capitalize()


def risk_order(a: RiskLevel, b: RiskLevel) -> int:
    """Total order over risk levels: -1 if a < b, 0 if equal, 1 if a > b."""
    return (a > b) - (a < b)


class ActorKind(Enum):
    HUMAN = "human"
    ORGANIZATION = "organization"
    SYSTEM = "system"


class ActorRole(Enum):
    USER = "user"
    TARGET_PERSON = "target_person"
    SECONDARY = "secondary"


class GoalLevel(Enum):
    """Cockburn goal level of a use case."""

    SUMMARY = "summary"
    USER_GOAL = "user_goal"
    SUBFUNCTION = "subfunction"


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    location: Optional[str] = None

    def sort_key(self) -> tuple[str, str]:
        return (self.location or "", self.code)


class ValidationFailedError(ValueError):
    """Raised by operations that require a valid use case."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        summary = "; ".join(d.code for d in self.diagnostics) or "invalid use case"
        super().__init__(f"use case failed validation: {summary}")


@dataclass(frozen=True)
class Actor:
    name: str
    kind: ActorKind
    role: ActorRole


@dataclass(frozen=True)
class ScenarioStep:
    """One numbered interaction; ``actor`` is an actor identifier or ``system``.

    ``function`` optionally names the system function the step exercises and
    drives association edges in the diagram builder.
    """

    index: int
    actor: str
    action: str
    function: Optional[str] = None


@dataclass(frozen=True)
class Extension:
    """Alternative or failure branch hanging off a main-scenario step."""

    branch_id: str
    condition: str
    steps: tuple[ScenarioStep, ...] = ()


@dataclass(frozen=True)
class ApplicationAreaRef:
    """Reference to a deployment area: a taxonomy id, or ``other`` + label."""

    area_id: str
    free_label: Optional[str] = None

    @property
    def is_other(self) -> bool:
        return self.area_id == OTHER_AREA

    def display(self) -> str:
        if self.is_other:
            return f"{self.free_label} ({OTHER_AREA})"
        return self.area_id


@dataclass(frozen=True)
class Misuse:
    description: str
    area_ref: Optional[ApplicationAreaRef] = None


@dataclass(frozen=True)
class SystemFunction:
    """A use-case ellipse: a named function the system offers."""

    id: str
    label: str
    includes: tuple[str, ...] = ()
    extends: tuple[str, ...] = ()


@dataclass(frozen=True)
class Association:
    """Explicit actor-to-function association overriding step inference."""

    actor: str
    function: str


@dataclass(frozen=True)
class UseCase:
    id: str
    title: str
    intended_purpose: str
    user: Actor
    application_areas: tuple[ApplicationAreaRef, ...]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    system_functions: tuple[SystemFunction, ...]
    main_scenario: tuple[ScenarioStep, ...]
    safety_component: bool = False
    affective_capabilities: tuple[str, ...] = ()
    target_persons: tuple[Actor, ...] = ()
    secondary_actors: tuple[Actor, ...] = ()
    context_of_use: str = ""
    misuses: tuple[Misuse, ...] = ()
    level: GoalLevel = GoalLevel.USER_GOAL
    preconditions: tuple[str, ...] = ()
    trigger: str = ""
    success_guarantee: str = ""
    minimal_guarantee: str = ""
    extensions: tuple[Extension, ...] = ()
    associations: tuple[Association, ...] = ()

    def all_actors(self) -> tuple[Actor, ...]:
        head = (self.user,) if self.user is not None else ()
        return head + self.target_persons + self.secondary_actors

    def actor_idents(self) -> set[str]:
        return {actor_ident(a.name) for a in self.all_actors()} - {""}

    def function_ids(self) -> set[str]:
        return {f.id for f in self.system_functions}


def actor_ident(name: str) -> str:
    """Identifier an actor is referenced by in scenario steps.

    Lowercased, with every run of characters outside [a-z0-9] collapsed to a
    single underscore; stays within the ASCII identifier alphabet so it can
    always be written as a bare token.
    """
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_")


def _error(code: str, message: str, location: str) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, location)


def _check_actor(actor: Actor, expected_role: ActorRole, location: str,
                 diags: list[Diagnostic]) -> None:
    if actor.role is not expected_role:
        diags.append(_error(
            "actor.role",
            f"actor {actor.name!r} has role {actor.role.value!r}, "
            f"expected {expected_role.value!r}",
            location))
    if not actor.name.strip():
        code = "user.missing" if expected_role is ActorRole.USER else "actor.name_empty"
        diags.append(_error(code, "actor has no name", location))
    elif not actor_ident(actor.name):
        diags.append(_error(
            "actor.ident_empty",
            f"actor name {actor.name!r} contains no [a-z0-9] characters and "
            "cannot be referenced from scenario steps",
            location))
    elif actor_ident(actor.name) == SYSTEM_ACTOR:
        diags.append(_error(
            "actor.reserved_name",
            f"actor name {actor.name!r} collides with the reserved "
            f"{SYSTEM_ACTOR!r} step actor",
            location))


def _check_area_ref(ref: ApplicationAreaRef, location: str,
                    diags: list[Diagnostic]) -> None:
    if ref.is_other:
        if ref.free_label is None or not ref.free_label.strip():
            diags.append(_error(
                "areas.other_label_missing",
                "area 'other' requires a free-text label",
                location))
    else:
        if not _AREA_ID_RE.match(ref.area_id):
            diags.append(_error(
                "areas.format",
                f"area id {ref.area_id!r} is not a dotted identifier",
                location))
        if ref.free_label is not None:
            diags.append(_error(
                "areas.unexpected_label",
                f"area {ref.area_id!r} carries a free-text label, which is "
                "reserved for 'other'",
                location))


def _check_steps(steps: tuple[ScenarioStep, ...], location: str,
                 known_actors: set[str], known_functions: set[str],
                 diags: list[Diagnostic]) -> None:
    indices = [s.index for s in steps]
    if indices != list(range(1, len(indices) + 1)):
        diags.append(_error(
            "scenario.noncontiguous",
            f"step indices {indices} are not contiguous from 1",
            location))
    for i, step in enumerate(steps):
        here = f"{location}[{i}]"
        if not step.action.strip():
            diags.append(_error("scenario.action_empty", "step has no action", here))
        if step.actor != SYSTEM_ACTOR and step.actor not in known_actors:
            diags.append(_error(
                "scenario.unknown_actor",
                f"step actor {step.actor!r} matches no declared actor "
                f"(and is not {SYSTEM_ACTOR!r})",
                f"{here}.actor"))
        if step.function is not None and step.function not in known_functions:
            diags.append(_error(
                "scenario.unknown_function",
                f"step references unknown function {step.function!r}",
                f"{here}.function"))


def validate_use_case(uc: UseCase) -> list[Diagnostic]:
    """Check every semantic invariant; empty result means the record is valid.

    Never raises: all violations come back as error diagnostics, sorted by
    field path then code so output is stable.
    """
    diags: list[Diagnostic] = []

    if not uc.id:
        diags.append(_error("id.missing", "use case has no id", "id"))
    elif not _SLUG_RE.match(uc.id):
        diags.append(_error(
            "id.format", f"id {uc.id!r} must match [a-z0-9_-]+", "id"))
    if not uc.title.strip():
        diags.append(_error("title.empty", "use case has no title", "title"))
    if not uc.intended_purpose.strip():
        diags.append(_error(
            "purpose.empty", "intended purpose is empty", "intended_purpose"))

    if uc.user is None:
        diags.append(_error("user.missing", "use case has no user actor", "user"))
    else:
        _check_actor(uc.user, ActorRole.USER, "user", diags)
    for i, actor in enumerate(uc.target_persons):
        _check_actor(actor, ActorRole.TARGET_PERSON, f"target_persons[{i}]", diags)
    for i, actor in enumerate(uc.secondary_actors):
        _check_actor(actor, ActorRole.SECONDARY, f"secondary_actors[{i}]", diags)

    # An actor may appear under several roles (e.g. the driver is both user
    # and target person) but must keep one kind, and identifiers must be
    # unique within each role list.
    kind_by_ident: dict[str, ActorKind] = {}
    for group, location in ((
            (uc.user,) if uc.user is not None else (), "user"),
            (uc.target_persons, "target_persons"),
            (uc.secondary_actors, "secondary_actors")):
        seen: set[str] = set()
        for i, actor in enumerate(group):
            ident = actor_ident(actor.name)
            if not ident:
                continue
            here = location if location == "user" else f"{location}[{i}]"
            if ident in seen:
                diags.append(_error(
                    "actors.duplicate_name",
                    f"actor identifier {ident!r} appears twice in {location}",
                    here))
            seen.add(ident)
            if ident in kind_by_ident and kind_by_ident[ident] is not actor.kind:
                diags.append(_error(
                    "actors.kind_conflict",
                    f"actor {actor.name!r} declared both as "
                    f"{kind_by_ident[ident].value} and {actor.kind.value}",
                    here))
            kind_by_ident.setdefault(ident, actor.kind)

    if not uc.application_areas:
        diags.append(_error(
            "areas.empty", "at least one application area is required",
            "application_areas"))
    for i, ref in enumerate(uc.application_areas):
        _check_area_ref(ref, f"application_areas[{i}]", diags)

    for i, misuse in enumerate(uc.misuses):
        if not misuse.description.strip():
            diags.append(_error(
                "misuse.description_empty", "misuse has no description",
                f"misuses[{i}]"))
        if misuse.area_ref is not None:
            _check_area_ref(misuse.area_ref, f"misuses[{i}].area", diags)

    if not uc.inputs:
        diags.append(_error("inputs.empty", "at least one input is required", "inputs"))
    if not uc.outputs:
        diags.append(_error(
            "outputs.empty", "at least one output is required", "outputs"))

    function_ids = uc.function_ids()
    if not uc.system_functions:
        diags.append(_error(
            "functions.empty", "at least one system function is required",
            "system_functions"))
    seen_fn: set[str] = set()
    for i, fn in enumerate(uc.system_functions):
        here = f"system_functions[{i}]"
        if not _SLUG_RE.match(fn.id or ""):
            diags.append(_error(
                "functions.id_format",
                f"function id {fn.id!r} must match [a-z0-9_-]+", here))
        elif fn.id in ("includes", "extends"):
            diags.append(_error(
                "functions.reserved_id",
                f"function id {fn.id!r} is reserved for relationship "
                "annotations", here))
        if fn.id in seen_fn:
            diags.append(_error(
                "functions.duplicate_id", f"duplicate function id {fn.id!r}", here))
        seen_fn.add(fn.id)
        for rel_name, refs in (("includes", fn.includes), ("extends", fn.extends)):
            for ref in refs:
                if ref == fn.id:
                    diags.append(_error(
                        "functions.self_ref",
                        f"function {fn.id!r} cannot {rel_name.rstrip('s')} itself",
                        f"{here}.{rel_name}"))
                elif ref not in function_ids:
                    diags.append(_error(
                        "functions.unknown_ref",
                        f"{rel_name} references unknown function {ref!r}",
                        f"{here}.{rel_name}"))

    known_actors = uc.actor_idents()
    if not uc.main_scenario:
        diags.append(_error(
            "scenario.empty", "main scenario has no steps", "main_scenario"))
    _check_steps(uc.main_scenario, "main_scenario", known_actors, function_ids, diags)

    main_indices = {s.index for s in uc.main_scenario}
    seen_branches: set[str] = set()
    for i, ext in enumerate(uc.extensions):
        here = f"extensions[{i}]"
        if not _BRANCH_RE.match(ext.branch_id):
            diags.append(_error(
                "extension.branch_format",
                f"branch id {ext.branch_id!r} must be a step index followed "
                "by one letter (e.g. '3a')",
                here))
        else:
            prefix = int(ext.branch_id[:-1])
            if prefix not in main_indices:
                diags.append(_error(
                    "extension.unknown_step",
                    f"branch {ext.branch_id!r} references main-scenario step "
                    f"{prefix}, which does not exist",
                    here))
        if ext.branch_id in seen_branches:
            diags.append(_error(
                "extension.duplicate_branch",
                f"duplicate branch id {ext.branch_id!r}", here))
        seen_branches.add(ext.branch_id)
        if not ext.condition.strip():
            diags.append(_error(
                "extension.condition_empty", "extension has no condition", here))
        _check_steps(ext.steps, f"{here}.steps", known_actors, function_ids, diags)

    for i, assoc in enumerate(uc.associations):
        here = f"associations[{i}]"
        if assoc.actor not in known_actors:
            diags.append(_error(
                "assoc.unknown_actor",
                f"association actor {assoc.actor!r} matches no declared actor",
                here))
        if assoc.function not in function_ids:
            diags.append(_error(
                "assoc.unknown_function",
                f"association references unknown function {assoc.function!r}",
                here))

    diags.sort(key=Diagnostic.sort_key)
    return diags


def require_valid(uc: UseCase) -> None:
    """Raise :class:`ValidationFailedError` unless ``uc`` is valid."""
    diags = validate_use_case(uc)
    if diags:
        raise ValidationFailedError(diags)


def _strip_actor(actor: Actor) -> Actor:
    return replace(actor, name=actor.name.strip())


def _strip_area(ref: ApplicationAreaRef) -> ApplicationAreaRef:
    label = ref.free_label.strip() if ref.free_label is not None else None
    return ApplicationAreaRef(ref.area_id.strip(), label)


def _strip_step(step: ScenarioStep) -> ScenarioStep:
    return replace(step, action=step.action.strip())


def canonicalize(uc: UseCase) -> UseCase:
    """Return the canonical form of a valid use case.

    Surrounding whitespace is trimmed from every text field, and the
    application areas and affective capabilities are sorted; scenario order
    is left untouched.  Idempotent, and rejects invalid input.
    """
    require_valid(uc)
    areas = tuple(sorted(
        (_strip_area(r) for r in uc.application_areas),
        key=lambda r: (r.area_id, r.free_label or "")))
    return replace(
        uc,
        title=uc.title.strip(),
        intended_purpose=uc.intended_purpose.strip(),
        context_of_use=uc.context_of_use.strip(),
        trigger=uc.trigger.strip(),
        success_guarantee=uc.success_guarantee.strip(),
        minimal_guarantee=uc.minimal_guarantee.strip(),
        affective_capabilities=tuple(sorted(t.strip() for t in uc.affective_capabilities)),
        user=_strip_actor(uc.user),
        target_persons=tuple(_strip_actor(a) for a in uc.target_persons),
        secondary_actors=tuple(_strip_actor(a) for a in uc.secondary_actors),
        application_areas=areas,
        misuses=tuple(
            Misuse(m.description.strip(),
                   _strip_area(m.area_ref) if m.area_ref else None)
            for m in uc.misuses),
        inputs=tuple(s.strip() for s in uc.inputs),
        outputs=tuple(s.strip() for s in uc.outputs),
        preconditions=tuple(s.strip() for s in uc.preconditions),
        system_functions=tuple(
            replace(f, label=f.label.strip()) for f in uc.system_functions),
        main_scenario=tuple(_strip_step(s) for s in uc.main_scenario),
        extensions=tuple(
            Extension(e.branch_id, e.condition.strip(),
                      tuple(_strip_step(s) for s in e.steps))
            for e in uc.extensions),
    )


def _actor_to_dict(actor: Actor) -> dict:
    return {"name": actor.name, "kind": actor.kind.value, "role": actor.role.value}


def _actor_from_dict(d: dict, role: ActorRole) -> Actor:
    return Actor(d["name"], ActorKind(d["kind"]), role)


def _area_to_dict(ref: ApplicationAreaRef) -> dict:
    d: dict = {"area_id": ref.area_id}
    if ref.free_label is not None:
        d["free_label"] = ref.free_label
    return d


def _area_from_dict(d: dict) -> ApplicationAreaRef:
    return ApplicationAreaRef(d["area_id"], d.get("free_label"))


def _step_to_dict(step: ScenarioStep) -> dict:
    d: dict = {"index": step.index, "actor": step.actor, "action": step.action}
    if step.function is not None:
        d["function"] = step.function
    return d


def _step_from_dict(d: dict) -> ScenarioStep:
    return ScenarioStep(d["index"], d["actor"], d["action"], d.get("function"))


def use_case_to_dict(uc: UseCase) -> dict:
    """Plain-data mirror of a use case, with fixed key order for exports."""
    return {
        "id": uc.id,
        "title": uc.title,
        "intended_purpose": uc.intended_purpose,
        "level": uc.level.value,
        "safety_component": uc.safety_component,
        "affective_capabilities": list(uc.affective_capabilities),
        "user": _actor_to_dict(uc.user),
        "target_persons": [_actor_to_dict(a) for a in uc.target_persons],
        "secondary_actors": [_actor_to_dict(a) for a in uc.secondary_actors],
        "context_of_use": uc.context_of_use,
        "application_areas": [_area_to_dict(r) for r in uc.application_areas],
        "misuses": [
            {"description": m.description,
             **({"area": _area_to_dict(m.area_ref)} if m.area_ref else {})}
            for m in uc.misuses],
        "inputs": list(uc.inputs),
        "outputs": list(uc.outputs),
        "preconditions": list(uc.preconditions),
        "trigger": uc.trigger,
        "success_guarantee": uc.success_guarantee,
        "minimal_guarantee": uc.minimal_guarantee,
        "system_functions": [
            {"id": f.id, "label": f.label,
             "includes": list(f.includes), "extends": list(f.extends)}
            for f in uc.system_functions],
        "associations": [
            {"actor": a.actor, "function": a.function} for a in uc.associations],
        "main_scenario": [_step_to_dict(s) for s in uc.main_scenario],
        "extensions": [
            {"branch_id": e.branch_id, "condition": e.condition,
             "steps": [_step_to_dict(s) for s in e.steps]}
            for e in uc.extensions],
    }


def use_case_from_dict(d: dict) -> UseCase:
    """Inverse of :func:`use_case_to_dict`."""
    return UseCase(
        id=d["id"],
        title=d["title"],
        intended_purpose=d["intended_purpose"],
        user=_actor_from_dict(d["user"], ActorRole.USER),
        application_areas=tuple(_area_from_dict(r) for r in d["application_areas"]),
        inputs=tuple(d["inputs"]),
        outputs=tuple(d["outputs"]),
        system_functions=tuple(
            SystemFunction(f["id"], f["label"],
                           tuple(f.get("includes", ())), tuple(f.get("extends", ())))
            for f in d["system_functions"]),
        main_scenario=tuple(_step_from_dict(s) for s in d["main_scenario"]),
        safety_component=d.get("safety_component", False),
        affective_capabilities=tuple(d.get("affective_capabilities", ())),
        target_persons=tuple(
            _actor_from_dict(a, ActorRole.TARGET_PERSON)
            for a in d.get("target_persons", ())),
        secondary_actors=tuple(
            _actor_from_dict(a, ActorRole.SECONDARY)
            for a in d.get("secondary_actors", ())),
        context_of_use=d.get("context_of_use", ""),
        misuses=tuple(
            Misuse(m["description"],
                   _area_from_dict(m["area"]) if "area" in m else None)
            for m in d.get("misuses", ())),
        level=GoalLevel(d.get("level", GoalLevel.USER_GOAL.value)),
        preconditions=tuple(d.get("preconditions", ())),
        trigger=d.get("trigger", ""),
        success_guarantee=d.get("success_guarantee", ""),
        minimal_guarantee=d.get("minimal_guarantee", ""),
        extensions=tuple(
            Extension(e["branch_id"], e["condition"],
                      tuple(_step_from_dict(s) for s in e.get("steps", ())))
            for e in d.get("extensions", ())),
        associations=tuple(
            Association(a["actor"], a["function"])
            for a in d.get("associations", ())),
    )
