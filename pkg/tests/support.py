"""Seeded random generation of valid, canonical use cases.

Every helper takes an explicit ``random.Random`` so failures reproduce from
the seed printed by the calling test.  ``make_use_case`` always returns a
use case that is already in canonical form (``canonicalize(uc) == uc``),
which lets property tests compare round-tripped values by plain equality.
"""

from __future__ import annotations

import random

from ucdoc import (
    Actor,
    ActorKind,
    ActorRole,
    ApplicationAreaRef,
    Association,
    Extension,
    GoalLevel,
    Misuse,
    ScenarioStep,
    SystemFunction,
    UseCase,
    canonicalize,
)
from ucdoc.model import actor_ident

_WORDS = (
    "affect", "analysis", "camera", "dashboard", "driver", "emotion",
    "face", "feedback", "mood", "music", "operator", "profile", "sensor",
    "signal", "smile", "stream", "voice", "workload",
)

_NAME_WORDS = (
    "Analyst", "Caretaker", "Driver", "Listener", "Moderator", "Operator",
    "Photographer", "Platform", "Reviewer", "Supervisor", "Teacher",
)

_NAME_SUFFIXES = ("", "", "", " 2", " Jr", "-X", " O'Neil", " & Co")

# Strings that historically break naive serializers: quotes, escapes,
# pipes and angle brackets (table cells), newlines, unicode, comment and
# bracket characters, raw-string markers, carriage returns, arrow tokens.
_NASTY = (
    'quote " inside',
    "back\\slash\\path",
    "pipe | and <angle> brackets",
    "multi\nline\nvalue",
    "indented\n  second line\nthird",
    "tab\tseparated",
    "émotion reconnaissance 情感分析",
    "hash # not a comment",
    "braces { } and [ brackets ]",
    'triple """ marker inside',
    "carriage\rreturn",
    "arrow -> token and usecase keyword",
    "blank\n\nline in the middle",
)

_FAKE_AREAS = (
    "media.analytics",
    "gaming.companion",
    "retail.kiosk_assistant",
    "health.wellbeing_app",
    "education_support.tutoring",
)

_OTHER_LABELS = (
    "entertainment and leisure",
    "smart home comfort",
    "leisure photography",
    "interactive art installation",
)

_CAPABILITIES = (
    "emotion_recognition", "smile_detection", "mood_inference",
    "personality_prediction", "voice_stress", "drowsiness_detection",
    "deepfake", "conversational_agent",
)


def text(rng: random.Random, nasty: bool = True) -> str:
    """A random non-empty, pre-stripped single chunk of prose."""
    if nasty and rng.random() < 0.25:
        return rng.choice(_NASTY)
    value = " ".join(rng.choice(_WORDS) for _ in range(rng.randint(1, 6)))
    if rng.random() < 0.15:
        value += "\n" + " ".join(rng.choice(_WORDS) for _ in range(3))
    return value


def slug(rng: random.Random, taken: set[str]) -> str:
    while True:
        parts = [rng.choice(_WORDS) for _ in range(rng.randint(1, 2))]
        candidate = rng.choice(("_", "-")).join(parts)
        if rng.random() < 0.3:
            candidate += str(rng.randint(0, 99))
        if candidate not in taken:
            taken.add(candidate)
            return candidate


def _actor(rng: random.Random, role: ActorRole, taken_idents: set[str],
           kinds: dict[str, ActorKind]) -> Actor:
    while True:
        name = rng.choice(_NAME_WORDS) + rng.choice(_NAME_SUFFIXES)
        ident = actor_ident(name)
        if ident and ident != "system" and ident not in taken_idents:
            break
    taken_idents.add(ident)
    kind = kinds.setdefault(ident, rng.choice(list(ActorKind)))
    return Actor(name, kind, role)


def _areas(rng: random.Random, pool) -> tuple[ApplicationAreaRef, ...]:
    refs = []
    seen = set()
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.5:
            ref = ApplicationAreaRef("other", rng.choice(_OTHER_LABELS))
        else:
            ref = ApplicationAreaRef(rng.choice(pool))
        key = (ref.area_id, ref.free_label or "")
        if key not in seen:
            seen.add(key)
            refs.append(ref)
    return tuple(sorted(refs, key=lambda r: (r.area_id, r.free_label or "")))


def _steps(rng: random.Random, actor_idents: list[str],
           fn_ids: list[str], count: int) -> tuple[ScenarioStep, ...]:
    steps = []
    for index in range(1, count + 1):
        actor = rng.choice(actor_idents + ["system"])
        function = rng.choice(fn_ids) if rng.random() < 0.4 else None
        steps.append(ScenarioStep(index, actor, text(rng), function))
    return tuple(steps)


def make_use_case(rng: random.Random, *, area_pool=None,
                  uc_id: str | None = None) -> UseCase:
    """A random use case that is valid and canonical by construction."""
    pool = tuple(area_pool) if area_pool else _FAKE_AREAS

    taken_idents: set[str] = set()
    kinds: dict[str, ActorKind] = {}
    user = _actor(rng, ActorRole.USER, taken_idents, kinds)
    targets = []
    user_merged = False
    for _ in range(rng.randint(0, 2)):
        if not user_merged and rng.random() < 0.2:
            # Same person as the user: exercises the actor-merge path.
            targets.append(Actor(user.name, user.kind, ActorRole.TARGET_PERSON))
            user_merged = True
        else:
            targets.append(_actor(rng, ActorRole.TARGET_PERSON,
                                  taken_idents, kinds))
    secondaries = [
        _actor(rng, ActorRole.SECONDARY, taken_idents, kinds)
        for _ in range(rng.randint(0, 2))
    ]

    fn_taken: set[str] = set()
    fn_ids = [slug(rng, fn_taken) for _ in range(rng.randint(1, 4))]
    functions = []
    for fid in fn_ids:
        others = [f for f in fn_ids if f != fid]
        includes = tuple(rng.sample(others, k=min(len(others), rng.randint(0, 2)))) \
            if rng.random() < 0.3 else ()
        extend_pool = [f for f in others if f not in includes]
        extends = (rng.choice(extend_pool),) \
            if extend_pool and rng.random() < 0.2 else ()
        functions.append(SystemFunction(fid, text(rng), includes, extends))

    actor_idents = sorted(taken_idents)
    steps = _steps(rng, actor_idents, fn_ids, rng.randint(1, 6))

    extensions = []
    used_branches = set()
    for _ in range(rng.randint(0, 2)):
        branch = f"{rng.randint(1, len(steps))}{rng.choice('abcd')}"
        if branch in used_branches:
            continue
        used_branches.add(branch)
        extensions.append(Extension(
            branch, text(rng),
            _steps(rng, actor_idents, fn_ids, rng.randint(1, 2))))

    associations = ()
    if rng.random() < 0.5:
        pairs = sorted({(rng.choice(actor_idents), rng.choice(fn_ids))
                        for _ in range(rng.randint(1, 4))})
        associations = tuple(Association(a, f) for a, f in pairs)

    misuses = tuple(
        Misuse(text(rng),
               ApplicationAreaRef("other", rng.choice(_OTHER_LABELS))
               if rng.random() < 0.3 else
               ApplicationAreaRef(rng.choice(pool))
               if rng.random() < 0.6 else None)
        for _ in range(rng.randint(0, 2)))

    taken_ids: set[str] = set()
    uc = UseCase(
        id=uc_id if uc_id is not None else slug(rng, taken_ids),
        title=text(rng),
        intended_purpose=text(rng),
        user=user,
        application_areas=_areas(rng, pool),
        inputs=tuple(text(rng) for _ in range(rng.randint(1, 3))),
        outputs=tuple(text(rng) for _ in range(rng.randint(1, 2))),
        system_functions=tuple(functions),
        main_scenario=steps,
        safety_component=rng.random() < 0.15,
        affective_capabilities=tuple(sorted(
            rng.sample(_CAPABILITIES, k=rng.randint(0, 3)))),
        target_persons=tuple(targets),
        secondary_actors=tuple(secondaries),
        context_of_use=text(rng) if rng.random() < 0.5 else "",
        misuses=misuses,
        level=rng.choice(list(GoalLevel)),
        preconditions=tuple(text(rng) for _ in range(rng.randint(0, 2))),
        trigger=text(rng) if rng.random() < 0.5 else "",
        success_guarantee=text(rng) if rng.random() < 0.5 else "",
        minimal_guarantee=text(rng) if rng.random() < 0.5 else "",
        extensions=tuple(extensions),
        associations=associations,
    )
    canonical = canonicalize(uc)
    assert canonical == uc, "generator must produce canonical use cases"
    return uc
