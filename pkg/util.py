import random
from typing import List, Optional, Sequence

from constants import FUZZ_EDGE_DENSITY, FUZZ_QUERY_RATE
from graph_model import Alphabet, Edge, Gate, Instance, LabeledGraph, \
    OpKind, UpdateOp, apply_update, opening


def candidate_edges(vertex_count: int, alphabet: Alphabet, directed: bool) \
        -> List[Edge]:
    """
    List every edge a graph over the given vertices and alphabet could hold
    :param vertex_count: The number of vertices
    :param alphabet: The alphabet labels are drawn from
    :param directed: When False only one orientation (u <= v) is listed, since
                the other one denotes the same undirected edge
    :return: The candidate edges in sorted order
    """
    out = []
    for u in range(vertex_count):
        for v in range(vertex_count):
            if not directed and v < u:
                continue
            for label in alphabet.labels():
                out.append(Edge(u, label, v))
    return out


def random_instance(rng: random.Random, vertex_count: int, alphabet: Alphabet,
                    directed: bool = True,
                    density: float = FUZZ_EDGE_DENSITY) -> Instance:
    """
    Draw a random marked instance
    :param rng: The random source; results depend only on its state
    :param vertex_count: The number of vertices, at least 1
    :param alphabet: The alphabet of the instance
    :param directed: Whether the graph is directed
    :param density: Probability with which each candidate edge is present
    :return: A random instance with random source and sink
    """
    edges = [e for e in candidate_edges(vertex_count, alphabet, directed)
             if rng.random() < density]
    graph = LabeledGraph(directed, vertex_count, alphabet, edges)
    return Instance(graph, rng.randrange(vertex_count),
                    rng.randrange(vertex_count))


def random_dyck_instance(rng: random.Random, vertex_count: int, n: int,
                         directed: bool = True,
                         density: float = FUZZ_EDGE_DENSITY) -> Instance:
    return random_instance(rng, vertex_count, Alphabet.dyck(n), directed,
                           density)


def random_near_dyck_instance(rng: random.Random, vertex_count: int, m: int,
                              density: float = FUZZ_EDGE_DENSITY) -> Instance:
    return random_instance(rng, vertex_count, Alphabet.near_dyck(m), True,
                           density)


def random_alternating_instance(rng: random.Random, vertex_count: int,
                                density: float = FUZZ_EDGE_DENSITY) \
        -> Instance:
    """
    Draw a random alternating-reachability instance: a directed graph whose
    edges all carry l1, together with a random AND/OR partition
    :param rng: The random source
    :param vertex_count: The number of vertices, at least 1
    :param density: Probability with which each ordered pair is an edge
    :return: The random instance
    """
    alphabet = Alphabet.dyck(1)
    label = opening(1)
    edges = [Edge(u, label, v) for u in range(vertex_count)
             for v in range(vertex_count) if rng.random() < density]
    partition = tuple(rng.choice((Gate.AND, Gate.OR))
                      for _ in range(vertex_count))
    graph = LabeledGraph(True, vertex_count, alphabet, edges)
    return Instance(graph, rng.randrange(vertex_count),
                    rng.randrange(vertex_count), partition)


def random_script(rng: random.Random, inst: Instance, length: int,
                  query_rate: float = FUZZ_QUERY_RATE,
                  candidates: Optional[Sequence[Edge]] = None) \
        -> List[UpdateOp]:
    """
    Draw a random update script that is valid on the evolving instance: each
    update toggles a random candidate edge, so an Ins never hits a present
    edge and a Del never hits a missing one
    :param rng: The random source
    :param inst: The instance the script starts from
    :param length: The number of operations
    :param query_rate: Probability that an operation is a query
    :param candidates: The edges that may be toggled; defaults to every edge
                the instance's alphabet allows (only l1 for alternating
                instances)
    :return: The script
    """
    graph = inst.graph
    if candidates is None:
        if inst.partition is not None:
            label = opening(1)
            candidates = [Edge(u, label, v)
                          for u in range(graph.vertex_count)
                          for v in range(graph.vertex_count)]
        else:
            candidates = candidate_edges(graph.vertex_count, graph.alphabet,
                                         graph.directed)
    ops = []
    current = inst
    for _ in range(length):
        if not candidates or rng.random() < query_rate:
            ops.append(UpdateOp.query())
            continue
        edge = rng.choice(candidates)
        kind = OpKind.DEL if current.graph.has_edge(edge) else OpKind.INS
        op = UpdateOp(kind, edge)
        current = apply_update(current, op)
        ops.append(op)
    return ops


def format_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) \
        -> str:
    """
    Lay out rows as fixed-width text columns
    :param headers: The column titles
    :param rows: The rows, each with one cell per header
    :return: The table, one line per row, ending in a newline
    """
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in cells]
    return "\n".join(lines) + "\n"
