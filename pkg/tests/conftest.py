from __future__ import annotations

from importlib.resources import files
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hclosure.relations import Relation

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SAMPLES = Path(str(files("hclosure") / "samples"))


@st.composite
def relations(draw, min_size: int = 0, max_size: int = 4, size: int | None = None) -> Relation:
    n = draw(st.integers(min_size, max_size)) if size is None else size
    if n == 0:
        return Relation(0, frozenset())
    cells = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    return Relation(n, frozenset(draw(st.sets(cells, max_size=n * n))))


@st.composite
def relation_pairs(draw, min_size: int = 1, max_size: int = 4) -> tuple[Relation, Relation]:
    n = draw(st.integers(min_size, max_size))
    return draw(relations(size=n)), draw(relations(size=n))


@pytest.fixture
def samples() -> Path:
    return SAMPLES


def pytest_terminal_summary(terminalreporter) -> None:
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
