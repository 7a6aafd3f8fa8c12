import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from khtorsion.builtins import builtin  # noqa: E402
from khtorsion.diagram import braid_closure, load_diagram, pretzel_diagram  # noqa: E402

DATA = os.path.join(os.path.dirname(__file__), "data")

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def braid_words(draw, max_len=6, max_strands=4):
    strands = draw(st.integers(2, max_strands))
    gens = st.integers(1, strands - 1).flatmap(lambda g: st.sampled_from([g, -g]))
    word = draw(st.lists(gens, min_size=1, max_size=max_len))
    return word, strands


def braid_diagram(word_strands):
    word, strands = word_strands
    return braid_closure(word, strands, name=f"braid{word}")


@pytest.fixture(scope="session")
def trefoil():
    return builtin("trefoil_D22")


@pytest.fixture(scope="session")
def mirror61():
    return builtin("mirror6_1_D25")


@pytest.fixture(scope="session")
def three_external():
    return load_diagram(os.path.join(DATA, "borromean_three_external.pd"))


@pytest.fixture(scope="session")
def small_corpus():
    return [pretzel_diagram(2, 2), pretzel_diagram(1, 3), pretzel_diagram(2, 3),
            builtin("whitehead"), braid_closure([1, 2], 3), braid_closure([1, -2, 1, -2], 3),
            braid_closure([1, 1, 2, -1, 2], 3)]


@pytest.fixture
def acceptance_report(request):
    """Collects one line per acceptance criterion for the terminal summary."""
    return request.config.__dict__.setdefault("acceptance_lines", [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.__dict__.get("acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
