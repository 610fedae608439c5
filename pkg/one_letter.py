"""
Solvers for the one-letter Dyck problems.

On undirected graphs a Dyck path from s to t exists iff s = t, or s has an
l1 edge, t has an l1bar edge and some walk s -> t has even length. The walk
condition is kept up to date by a union-find over the parity double cover.

`DistanceGadget` goes the other way and answers directed distances with
one-letter Dyck reachability.
"""
import logging
from collections import Counter
from typing import List, Optional, Tuple

import numpy as np

from cfl_reach import ReachIndex, solve_dyck
from errors import AlphabetMismatchError, InstanceKindError, \
    MissingEdgeError
from graph_model import Alphabet, Edge, Instance, LabeledGraph, OpKind, \
    UpdateOp, apply_update, closing, opening

logger = logging.getLogger(__name__)

L1 = opening(1)
L1_BAR = closing(1)


class ParityIndex(object):
    """
    Union-find over the nodes (v, p) of the parity double cover, where
    (v, p) stands for "reached v after a walk of parity p". An edge {u, v}
    joins (u, 0) with (v, 1) and (u, 1) with (v, 0). Deletions only mark the
    structure dirty; the next query rebuilds it from the surviving edges.
    """

    def __init__(self, vertex_count: int):
        self._vertex_count = vertex_count
        self._parent = np.arange(2 * vertex_count, dtype=np.int64)
        self._size = np.ones(2 * vertex_count, dtype=np.int64)
        self._edges = Counter()
        self._dirty = False
        self.rebuilds = 0

    @classmethod
    def from_instance(cls, inst: Instance) -> "ParityIndex":
        """
        :param inst: an undirected instance; labels are ignored
        :return: the index of the instance's underlying unlabeled graph
        """
        if inst.graph.directed:
            raise InstanceKindError("parity index needs an undirected graph")
        index = cls(inst.graph.vertex_count)
        for u, _, v in inst.graph.stored_edges():
            index.insert(u, v)
        return index

    @property
    def vertex_count(self) -> int:
        return self._vertex_count

    @property
    def dirty(self) -> bool:
        return self._dirty

    def _find(self, x: int) -> int:
        parent = self._parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = int(parent[x])
        return x

    def _union(self, x: int, y: int) -> None:
        rx = self._find(x)
        ry = self._find(y)
        if rx == ry:
            return
        if self._size[rx] < self._size[ry]:
            rx, ry = ry, rx
        self._parent[ry] = rx
        self._size[rx] += self._size[ry]

    def _link(self, u: int, v: int) -> None:
        self._union(2 * u, 2 * v + 1)
        self._union(2 * u + 1, 2 * v)

    @staticmethod
    def _key(u: int, v: int) -> Tuple[int, int]:
        return (u, v) if u <= v else (v, u)

    def insert(self, u: int, v: int) -> None:
        self._edges[self._key(u, v)] += 1
        if not self._dirty:
            self._link(u, v)

    def delete(self, u: int, v: int) -> None:
        key = self._key(u, v)
        if key not in self._edges:
            raise MissingEdgeError("no edge {{{}, {}}} to delete".format(u, v))
        self._edges[key] -= 1
        if self._edges[key] == 0:
            del self._edges[key]
        self._dirty = True

    def _rebuild(self) -> None:
        self._parent = np.arange(2 * self._vertex_count, dtype=np.int64)
        self._size = np.ones(2 * self._vertex_count, dtype=np.int64)
        for u, v in self._edges:
            self._link(u, v)
        self._dirty = False
        self.rebuilds += 1
        logger.debug("parity index rebuilt from %d edges", len(self._edges))

    def even_walk(self, s: int, t: int) -> bool:
        """
        :return: whether some walk from s to t has even length
        """
        if self._dirty:
            self._rebuild()
        return self._find(2 * s) == self._find(2 * t)

    def odd_walk(self, s: int, t: int) -> bool:
        if self._dirty:
            self._rebuild()
        return self._find(2 * s) == self._find(2 * t + 1)


def parity_insert(idx: ParityIndex, u: int, v: int) -> ParityIndex:
    idx.insert(u, v)
    return idx


def parity_delete(idx: ParityIndex, u: int, v: int) -> ParityIndex:
    idx.delete(u, v)
    return idx


def _check_one_letter_undirected(inst: Instance) -> None:
    if inst.graph.directed:
        raise InstanceKindError("the one-letter criterion needs an "
                                "undirected graph")
    if inst.graph.alphabet != Alphabet.dyck(1):
        raise AlphabetMismatchError("the one-letter criterion needs alphabet "
                                    "dyck 1, got {}".format(
                                        inst.graph.alphabet.header()))


def has_label_at(graph: LabeledGraph, vertex: int, label) -> bool:
    return any(lab == label for lab, _ in graph.out_edges(vertex))


def prop1_check(inst: Instance, parity: Optional[ParityIndex] = None) \
        -> bool:
    """
    Decide undirected one-letter Dyck reachability from the marked source to
    the marked sink without saturation.
    :param inst: an undirected dyck(1) instance
    :param parity: a parity index kept in step with `inst`; built from
                scratch when omitted
    :return: True iff s = t, or there is an l1 edge at s, an l1bar edge at t
            and an even walk from s to t
    """
    _check_one_letter_undirected(inst)
    s, t = inst.source, inst.sink
    if s == t:
        return True
    graph = inst.graph
    if not has_label_at(graph, s, L1) or not has_label_at(graph, t, L1_BAR):
        return False
    if parity is None:
        parity = ParityIndex.from_instance(inst)
    return parity.even_walk(s, t)


class DistanceGadget(object):
    """
    The one-letter Dyck graph that encodes distances of a directed graph G
    with n vertices: G's edges labeled l1, an l1 self-loop on every vertex,
    and for every v an l1bar chain v -> (v, 1) -> ... -> (v, n). The distance
    from s to t >= 1 is the least k such that (t, k) is Dyck-reachable
    from s.
    """

    def __init__(self, source: LabeledGraph):
        """
        Initialise this DistanceGadget
        :param source: a directed graph; its labels are ignored
        """
        if not source.directed:
            raise InstanceKindError("distance gadget needs a directed graph")
        if source.vertex_count < 1:
            raise InstanceKindError("distance gadget needs a vertex")
        n = source.vertex_count
        self._n = n
        edges = {Edge(u, L1, v) for u, _, v in source.edges()}
        edges.update(Edge(v, L1, v) for v in range(n))
        for v in range(n):
            previous = v
            for k in range(1, n + 1):
                vertex = self.chain_vertex(v, k)
                edges.add(Edge(previous, L1_BAR, vertex))
                previous = vertex
        graph = LabeledGraph(True, n + n * n, Alphabet.dyck(1), edges)
        self._instance = Instance(graph, 0, 0)
        self._index = None

    @property
    def source_vertex_count(self) -> int:
        return self._n

    @property
    def instance(self) -> Instance:
        return self._instance

    def chain_vertex(self, v: int, k: int) -> int:
        """
        :param v: an original vertex
        :param k: chain position, 1..n
        :return: the id of (v, k)
        """
        if not 1 <= k <= self._n:
            raise ValueError("chain position {} outside 1..{}".format(
                k, self._n))
        return self._n + v * self._n + (k - 1)

    def reach_index(self) -> ReachIndex:
        if self._index is None:
            self._index = solve_dyck(self._instance)
        return self._index

    def reachable_levels(self, s: int, t: int) -> List[int]:
        index = self.reach_index()
        return [k for k in range(1, self._n + 1)
                if index.query(s, self.chain_vertex(t, k))]

    def distance(self, s: int, t: int) -> Optional[int]:
        """
        :return: the length of a shortest s -> t path in the source graph,
                None if t is unreachable
        """
        if s == t:
            return 0
        levels = self.reachable_levels(s, t)
        return levels[0] if levels else None


def build_distance_gadget(g: LabeledGraph) -> DistanceGadget:
    return DistanceGadget(g)


def gadget_distance(gadget: DistanceGadget, s: int, t: int) -> Optional[int]:
    return gadget.distance(s, t)


class Prop1Tracker(object):
    """
    Follows an undirected dyck(1) instance through updates, keeping its
    parity index in step, and answers the marked pair by the one-letter
    criterion.
    """

    def __init__(self, inst: Instance):
        _check_one_letter_undirected(inst)
        self._inst = inst
        self._parity = ParityIndex.from_instance(inst)

    @property
    def instance(self) -> Instance:
        return self._inst

    def apply(self, op: UpdateOp) -> None:
        if op.kind == OpKind.QUERY:
            return
        self._inst = apply_update(self._inst, op)
        u, _, v = op.edge
        if op.kind == OpKind.INS:
            self._parity.insert(u, v)
        else:
            self._parity.delete(u, v)

    def answer(self) -> bool:
        return prop1_check(self._inst, self._parity)
