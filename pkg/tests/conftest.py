from __future__ import annotations

from pathlib import Path

import pytest
from scipy import optimize

from crnstab.data_model.network import NetworkModel
from crnstab.parser import parse_network

NETWORKS_DIR = Path(__file__).resolve().parent.parent / "networks"

TRIANGLE_TEXT = """\
A -> 2B : k=1, tau=1
2B -> 2A + 2B : k=1, tau=1/2
2A + 2B -> A : k=1, tau=1/4
"""

TRIANGLE_Q21_TEXT = """\
A -> B : k=1, tau=1
2B -> 2A + B : k=2, tau=1/2
2A + 2B -> A : k=1/2, tau=1/4
2B -> 4B : k=1
2A + 2B -> 2A + 4B : k=1/4
"""

TRIANGLE_Q21_ALT_TEXT = """\
A -> B : k=1, tau=1
2B -> 4A + 2B : k=1, tau=1/2
2A + 2B -> 2A : k=1/4, tau=1/4
2A + 2B -> A + 2B : k=1/2
"""

SHRUNK_CANDIDATE_TEXT = """\
3A -> A + 2B : k=1, tau=1/10
A + 2B -> 2A + B : k=2, tau=1
"""

SHRUNK_REFERENCE_TEXT = """\
3A -> A + 2B : k=1, tau=1/10
A + 2B -> 3A : k=1, tau=1
"""


def class_root(constant: float = 73.5) -> float:
    """Positive root e of 6.3 e^3 + 2 e = constant."""
    return optimize.brentq(lambda e: 6.3 * e**3 + 2 * e - constant, 0.0, 10.0, xtol=1e-15)


@pytest.fixture
def triangle() -> NetworkModel:
    return parse_network(TRIANGLE_TEXT)


@pytest.fixture
def triangle_q21() -> NetworkModel:
    return parse_network(TRIANGLE_Q21_TEXT)


@pytest.fixture
def triangle_q21_alt() -> NetworkModel:
    return parse_network(TRIANGLE_Q21_ALT_TEXT)


@pytest.fixture
def shrunk_candidate() -> NetworkModel:
    return parse_network(SHRUNK_CANDIDATE_TEXT)


@pytest.fixture
def shrunk_reference() -> NetworkModel:
    return parse_network(SHRUNK_REFERENCE_TEXT)


@pytest.fixture
def networks_dir() -> Path:
    return NETWORKS_DIR
