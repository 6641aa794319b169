"""Shared fixtures: parsed definition files and cached term enumerations."""

from __future__ import annotations

import functools
import pathlib

import pytest

from canonform import (
    CompiledFamily,
    Signature,
    TheorySpec,
    compile_family,
    enumerate_ground,
    parse_definition,
)

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@functools.lru_cache(maxsize=None)
def load(name: str) -> tuple[Signature, TheorySpec, CompiledFamily]:
    """Parse tests/fixtures/<name>.rdt and compile its family."""
    text = (FIXTURES / f"{name}.rdt").read_text()
    sig, spec = parse_definition(text)
    return sig, spec, compile_family(sig, spec)


@functools.lru_cache(maxsize=None)
def terms(name: str, max_size: int):
    """All ground terms of the fixture's data type up to max_size, cached."""
    sig, _, _ = load(name)
    return tuple(enumerate_ground(sig, sig.rdt_sort, max_size))


@pytest.fixture
def fixtures_dir() -> pathlib.Path:
    return FIXTURES
