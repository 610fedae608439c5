"""
Alternating reachability: s is accepted when it lies in the least set X that
contains t, every OR vertex with a successor in X, and every AND vertex
whose successors all lie in X.
"""
import logging
from collections import deque
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from constants import KAPPA_MAX_VERTICES
from errors import InstanceTooLargeError, MissingPartitionError
from graph_model import Gate, Instance
from util import format_table

logger = logging.getLogger(__name__)


def _require_partition(inst: Instance) -> None:
    if inst.partition is None:
        raise MissingPartitionError("alternating reachability needs an "
                                    "and/or partition")


def adjacency(inst: Instance) -> np.ndarray:
    """
    :return: the boolean successor matrix of the instance, labels ignored
    """
    n = inst.graph.vertex_count
    matrix = np.zeros((n, n), dtype=bool)
    for u, _, v in inst.graph.edges():
        matrix[u, v] = True
    return matrix


class FixpointTrace(object):
    """
    The layers X_0 = {t} <= X_1 <= ... of the round-based evaluation, and
    for every member of X the first round it appeared in.
    """

    def __init__(self, inst: Instance, layers: Sequence[FrozenSet[int]]):
        self._inst = inst
        self._layers = tuple(layers)
        self._first = {}
        for i, layer in enumerate(self._layers):
            for x in layer:
                self._first.setdefault(x, i)

    @property
    def layers(self) -> Tuple[FrozenSet[int], ...]:
        return self._layers

    @property
    def members(self) -> FrozenSet[int]:
        return self._layers[-1]

    def first_layer(self, x: int) -> Optional[int]:
        return self._first.get(x)

    def ordered(self) -> List[int]:
        """
        :return: X sorted by first layer, ties by vertex id; this order is
                well-ordered
        """
        return sorted(self._first, key=lambda x: (self._first[x], x))

    def format_table(self, kappas: Optional[Dict[int, Optional[int]]] = None)\
            -> str:
        headers = ["vertex", "gate", "layer"]
        if kappas is not None:
            headers.append("kappa")
        rows = []
        for x in range(self._inst.graph.vertex_count):
            layer = self._first.get(x)
            row = [x, self._inst.gate(x).value,
                   "-" if layer is None else layer]
            if kappas is not None:
                k = kappas.get(x)
                row.append("-" if k is None else k)
            rows.append(row)
        return format_table(headers, rows)


def solve_alternating(inst: Instance) -> Tuple[bool, FixpointTrace]:
    """
    Evaluate the least fixed point round by round.
    :param inst: an instance with a total and/or partition
    :return: whether the source belongs to X, and the layer trace
    """
    _require_partition(inst)
    n = inst.graph.vertex_count
    succ = adjacency(inst)
    is_and = np.array([g == Gate.AND for g in inst.partition], dtype=bool)

    current = np.zeros(n, dtype=bool)
    current[inst.sink] = True
    layers = [frozenset([inst.sink])]
    while True:
        some = (succ & current).any(axis=1)
        every = ~(succ & ~current).any(axis=1)
        step = current | np.where(is_and, every, some)
        if (step == current).all():
            break
        current = step
        layers.append(frozenset(np.flatnonzero(current).tolist()))
    logger.debug("alternating fixpoint: %d members after %d rounds",
                 len(layers[-1]), len(layers) - 1)
    trace = FixpointTrace(inst, layers)
    return bool(current[inst.source]), trace


def _successor_masks(inst: Instance) -> List[int]:
    masks = [0] * inst.graph.vertex_count
    for u, _, v in inst.graph.edges():
        masks[u] |= 1 << v
    return masks


def _eligible(gate: Gate, successors: int, prefix: int) -> bool:
    if gate == Gate.OR:
        return successors & prefix != 0
    return successors & ~prefix == 0


def is_well_ordered(seq: Sequence[int], inst: Instance) -> bool:
    """
    Check that a sequence starts at t and that every later vertex is
    justified by the vertices before it: an OR vertex needs a successor
    among them, an AND vertex needs all its successors among them.
    :param seq: a non-empty vertex sequence
    :param inst: an instance with a total partition
    :return: whether the sequence is well-ordered
    """
    _require_partition(inst)
    if not seq or seq[0] != inst.sink:
        return False
    masks = _successor_masks(inst)
    prefix = 1 << seq[0]
    for w in seq[1:]:
        if not _eligible(inst.gate(w), masks[w], prefix):
            return False
        prefix |= 1 << w
    return True


def kappa_table(inst: Instance) -> Dict[int, Optional[int]]:
    """
    For every vertex x, the least k such that x ends a well-ordered sequence
    w_0, ..., w_k, found by breadth-first search over prefix sets.
    :param inst: an instance with a total partition and at most
                KAPPA_MAX_VERTICES vertices
    :return: the index of every vertex, None for vertices outside X
    """
    _require_partition(inst)
    n = inst.graph.vertex_count
    if n > KAPPA_MAX_VERTICES:
        raise InstanceTooLargeError(
            "kappa is limited to {} vertices, instance has {}".format(
                KAPPA_MAX_VERTICES, n))
    masks = _successor_masks(inst)
    best = {inst.sink: 0}
    start = 1 << inst.sink
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        prefix, depth = queue.popleft()
        for y in range(n):
            if prefix >> y & 1:
                continue
            if not _eligible(inst.gate(y), masks[y], prefix):
                continue
            best.setdefault(y, depth + 1)
            extended = prefix | 1 << y
            if extended not in seen:
                seen.add(extended)
                queue.append((extended, depth + 1))
    logger.debug("kappa search visited %d prefix sets", len(seen))
    return {x: best.get(x) for x in range(n)}


def kappa(x: int, inst: Instance) -> Optional[int]:
    return kappa_table(inst)[x]
