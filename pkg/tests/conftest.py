from __future__ import annotations

import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from catcube import fixtures  # noqa: E402
from catcube.racg import RacgPresentation, davis_ball  # noqa: E402


@functools.lru_cache(maxsize=None)
def davis(link: str, radius: int):
    return davis_ball(RacgPresentation(fixtures.LINKS[link]()), radius)


@pytest.fixture
def z3():
    return davis("octahedron", 6)


def pytest_terminal_summary(terminalreporter):
    lines = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
