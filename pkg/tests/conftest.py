from __future__ import annotations

import os
from pathlib import Path

import pytest

from ucdoc import parse_document, validate_use_case

TESTS_DIR = Path(__file__).parent
GOLDEN_DIR = TESTS_DIR / "golden"
FIXTURES_DIR = TESTS_DIR.parent / "fixtures"

FIXTURE_NAMES = (
    "affective_music_recommender",
    "driver_attention_monitoring",
    "smart_camera",
)


def fixture_text(name: str) -> str:
    return (FIXTURES_DIR / f"{name}.ucdl").read_text(encoding="utf-8")


def assert_golden(data: bytes, name: str) -> None:
    """Compare ``data`` against the frozen golden file ``name``.

    Set UPDATE_GOLDEN=1 to (re)generate the files after an intended change.
    """
    path = GOLDEN_DIR / name
    if os.environ.get("UPDATE_GOLDEN"):
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    assert path.exists(), f"golden file {name} missing; rerun with UPDATE_GOLDEN=1"
    assert data == path.read_bytes(), (
        f"output differs from golden {name}; rerun with UPDATE_GOLDEN=1 "
        "if the change is intended")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def fixture_use_cases() -> dict:
    """The three example files, parsed and validated once per session."""
    cases = {}
    for name in FIXTURE_NAMES:
        use_cases, errors = parse_document(fixture_text(name))
        assert not errors, [e.render() for e in errors]
        assert len(use_cases) == 1
        assert validate_use_case(use_cases[0]) == []
        cases[name] = use_cases[0]
    return cases
