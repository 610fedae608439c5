import os

import pytest
from hypothesis import settings

from graph_model import Instance, parse_graph

# no per-example deadline
settings.register_profile("dycklab", deadline=None)
settings.load_profile("dycklab")

DATA = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(
    __file__))), "data")


def data_path(name: str) -> str:
    return os.path.join(DATA, name)


def load(name: str) -> Instance:
    with open(data_path(name), "rb") as f:
        return parse_graph(f.read())


@pytest.fixture
def fig1() -> Instance:
    return load("fig1.graph")


@pytest.fixture
def fig2() -> Instance:
    return load("fig2.graph")


@pytest.fixture
def chain4() -> Instance:
    return load("chain4.graph")


@pytest.fixture
def bullets() -> Instance:
    return load("bullets.graph")
