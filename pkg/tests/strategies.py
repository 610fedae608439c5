import random

from hypothesis import strategies as st

from graph_model import Alphabet, Edge, Gate, Instance, LabeledGraph, \
    opening
from regular import LETTERS
from util import candidate_edges, random_script


@st.composite
def instances(draw, alphabet: Alphabet, max_vertices: int = 5,
              directed: bool = True, max_edges: int = 12) -> Instance:
    n = draw(st.integers(1, max_vertices))
    candidates = candidate_edges(n, alphabet, directed)
    edges = draw(st.lists(st.sampled_from(candidates), unique=True,
                          max_size=max_edges))
    s = draw(st.integers(0, n - 1))
    t = draw(st.integers(0, n - 1))
    return Instance(LabeledGraph(directed, n, alphabet, edges), s, t)


@st.composite
def dyck_instances(draw, max_vertices: int = 5, directed: bool = True,
                   max_letters: int = 3, max_edges: int = 12) -> Instance:
    n = draw(st.integers(1, max_letters))
    return draw(instances(Alphabet.dyck(n), max_vertices, directed,
                          max_edges))


@st.composite
def near_dyck_instances(draw, max_vertices: int = 5, max_letters: int = 3,
                        max_edges: int = 12) -> Instance:
    m = draw(st.integers(1, max_letters))
    return draw(instances(Alphabet.near_dyck(m), max_vertices, True,
                          max_edges))


@st.composite
def alternating_instances(draw, max_vertices: int = 5) -> Instance:
    n = draw(st.integers(1, max_vertices))
    pairs = [Edge(u, opening(1), v) for u in range(n) for v in range(n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True))
    partition = tuple(draw(st.lists(st.sampled_from([Gate.AND, Gate.OR]),
                                    min_size=n, max_size=n)))
    s = draw(st.integers(0, n - 1))
    t = draw(st.integers(0, n - 1))
    return Instance(LabeledGraph(True, n, Alphabet.dyck(1), edges), s, t,
                    partition)


def four_letter_words(max_size: int = 10):
    return st.lists(st.sampled_from(LETTERS), max_size=max_size).map(tuple)


@st.composite
def scripts(draw, inst: Instance, length: int = 20):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_script(random.Random(seed), inst, length)
