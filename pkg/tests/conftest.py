from pathlib import Path

import pytest

from consortex.consortium import consortium_from_domain, parse_domain
from consortex.context import all_intents, parse_burmeister
from consortex.sets import Universe

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture
def toy_context():
    return parse_burmeister(fixture_text("toy.cxt"))


@pytest.fixture
def toy_universe(toy_context):
    return toy_context.universe


@pytest.fixture
def toy_system(toy_context):
    return all_intents(toy_context)


@pytest.fixture
def toy_domain(toy_universe):
    domain, pre = parse_domain(fixture_text("toy.dom"), toy_universe)
    assert not pre
    return domain


@pytest.fixture
def toy_consortium(toy_domain, toy_context):
    return consortium_from_domain(toy_domain, None, toy_context)


@pytest.fixture
def u3():
    return Universe(("ro", "fl", "ed"))
