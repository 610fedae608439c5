"""
Gadget compilers that turn an instance of one reachability problem into an
instance of another, together with exact translation of edge updates.

  alt_to_neardyck      alternating reachability -> near-Dyck reachability
                       (source and sink swap roles in the target)
  neardyck_to_dyck2    near-Dyck reachability -> directed dyck(2)
  dyck2_to_undirected  directed dyck(2) -> undirected dyck(2)

Every source edge e has two fixed target edge lists, the edges present while
e is absent and the edges present while e is present. An update of e swaps
one list for the other, so the translated update count is a per-kind
constant and translating Ins e and Del e gives inverse sequences.
"""
import logging
import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from alternating import solve_alternating
from cfl_reach import ENGINE_DYCK, ENGINE_NEAR_DYCK, ReachIndex, \
    resolve_after_update, solve_for
from constants import ALT_MAX_VERTICES, DYCK2_MAX_VERTICES, FUZZ_RUNS, \
    FUZZ_SCRIPT_LENGTH, GADGET_INTERIOR, NEAR_DYCK_MAX_VERTICES, \
    TRANSLATION_BOUNDS
from errors import AlphabetMismatchError, InstanceKindError, \
    MissingPartitionError
from graph_model import Alphabet, BULLET, Edge, Gate, Instance, Label, \
    LabeledGraph, OpKind, UpdateOp, apply_update, closing, opening
from util import random_alternating_instance, random_dyck_instance, \
    random_near_dyck_instance, random_script
from word_lab import PHI_UNDIRECTED, phi_neardyck_letter

logger = logging.getLogger(__name__)


class ReductionKind(str, Enum):
    ALT_TO_NEAR_DYCK = "alt_to_neardyck"
    NEAR_DYCK_TO_DYCK2 = "neardyck_to_dyck2"
    DYCK2_TO_UNDIRECTED = "dyck2_to_undirected"


VertexName = Union[int, tuple]


class VertexLayout(Mapping):
    """
    The deterministic, formula-based numbering of a gadget graph's vertices.
    Original vertices keep their ids and are named by them; gadget vertices
    are named by tuples. Nothing is stored per vertex.
    """

    def __init__(self, original_count: int, vertex_count: int):
        self._original_count = original_count
        self._vertex_count = vertex_count

    @property
    def original_count(self) -> int:
        return self._original_count

    def is_original(self, vertex: int) -> bool:
        return 0 <= vertex < self._original_count

    def __getitem__(self, name: VertexName) -> int:
        if isinstance(name, int):
            if not self.is_original(name):
                raise KeyError(name)
            return name
        return self._encode(name)

    def decode(self, vertex: int) -> VertexName:
        if not 0 <= vertex < self._vertex_count:
            raise KeyError(vertex)
        if self.is_original(vertex):
            return vertex
        return self._decode(vertex)

    def __iter__(self) -> Iterator[VertexName]:
        for vertex in range(self._vertex_count):
            yield self.decode(vertex)

    def __len__(self) -> int:
        return self._vertex_count

    def _encode(self, name: tuple) -> int:
        raise NotImplementedError

    def _decode(self, vertex: int) -> tuple:
        raise NotImplementedError

    def format_name(self, name: VertexName) -> str:
        if isinstance(name, int):
            return str(name)
        return "(" + ",".join(self._format_part(p) for p in name) + ")"

    def _format_part(self, part) -> str:
        return str(part)


class AltLayout(VertexLayout):
    """
    Originals 0..n-1, then (x, i) for each AND vertex x (in id order) and
    i in 0..n at n + rank(x) * (n + 1) + i.
    """

    def __init__(self, n: int, and_vertices: Sequence[int]):
        self._n = n
        self._ands = list(and_vertices)
        self._rank = {x: r for r, x in enumerate(self._ands)}
        super().__init__(n, n + len(self._ands) * (n + 1))

    def _encode(self, name: tuple) -> int:
        x, i = name
        if x not in self._rank or not 0 <= i <= self._n:
            raise KeyError(name)
        return self._n + self._rank[x] * (self._n + 1) + i

    def _decode(self, vertex: int) -> tuple:
        r, i = divmod(vertex - self._n, self._n + 1)
        return self._ands[r], i


class NearDyckLayout(VertexLayout):
    """
    Originals 0..N-1, (x, dot) at N + x, and (x, sigma, i) for i in 0..m at
    2N + (x * 2m + sigma_index) * (m + 1) + i, where letter j has index j
    and its bar m + j.
    """

    def __init__(self, n: int, m: int):
        self._n = n
        self._m = m
        super().__init__(n, 2 * n + n * 2 * m * (m + 1))

    def _sigma_index(self, label: Label) -> int:
        if label.is_bullet or not 0 <= label.letter < self._m:
            raise KeyError(label)
        return label.letter + (self._m if label.is_close else 0)

    def _encode(self, name: tuple) -> int:
        if len(name) == 2:
            x, label = name
            if label != BULLET or not 0 <= x < self._n:
                raise KeyError(name)
            return self._n + x
        x, label, i = name
        if not 0 <= x < self._n or not 0 <= i <= self._m:
            raise KeyError(name)
        sigma = self._sigma_index(label)
        return 2 * self._n + (x * 2 * self._m + sigma) * (self._m + 1) + i

    def _decode(self, vertex: int) -> tuple:
        if vertex < 2 * self._n:
            return vertex - self._n, BULLET
        rest, i = divmod(vertex - 2 * self._n, self._m + 1)
        x, sigma = divmod(rest, 2 * self._m)
        if sigma < self._m:
            return x, opening(sigma), i
        return x, closing(sigma - self._m), i

    def _format_part(self, part) -> str:
        if isinstance(part, Label):
            return Alphabet.near_dyck(self._m).format_label(part)
        return str(part)


_DYCK2 = Alphabet.dyck(2)


class UndirectedLayout(VertexLayout):
    """
    Originals 0..n-1, then (x, lambda, y, i) for i in 1..11 at
    n + ((x * 4 + lambda_index) * n + y) * 11 + (i - 1), where l1, l2, l1bar,
    l2bar have indexes 0, 1, 2, 3.
    """

    def __init__(self, n: int):
        self._n = n
        super().__init__(n, n + 4 * GADGET_INTERIOR * n * n)

    @staticmethod
    def _label_index(label: Label) -> int:
        if label not in _DYCK2 or label.is_bullet:
            raise KeyError(label)
        return label.letter - 1 + (2 if label.is_close else 0)

    @staticmethod
    def _index_label(index: int) -> Label:
        if index < 2:
            return opening(index + 1)
        return closing(index - 1)

    def _encode(self, name: tuple) -> int:
        x, label, y, i = name
        n = self._n
        if not (0 <= x < n and 0 <= y < n and 1 <= i <= GADGET_INTERIOR):
            raise KeyError(name)
        index = self._label_index(label)
        return n + ((x * 4 + index) * n + y) * GADGET_INTERIOR + (i - 1)

    def _decode(self, vertex: int) -> tuple:
        n = self._n
        rest, i = divmod(vertex - n, GADGET_INTERIOR)
        rest, y = divmod(rest, n)
        x, index = divmod(rest, 4)
        return x, self._index_label(index), y, i + 1

    def _format_part(self, part) -> str:
        if isinstance(part, Label):
            return _DYCK2.format_label(part)
        return str(part)


class CompiledReduction(object):
    """
    A compiled gadget graph. Subclasses define the layout, the static edges
    and the two edge lists of every source edge.
    """
    kind = None

    def __init__(self, source: Instance):
        """
        Initialise this CompiledReduction
        :param source: the instance to compile
        """
        self._check_source(source)
        self._source = source
        self._layout = self._make_layout()
        edges = list(self.static_edges())
        for edge in self._initial_sources():
            absent, present = self.edge_forms(edge)
            edges.extend(present if source.graph.has_edge(edge) else absent)
        graph = LabeledGraph(self._target_directed(), len(self._layout),
                             self._target_alphabet(), edges)
        source_mark, sink_mark = self._target_marks()
        self._target = Instance(graph, source_mark, sink_mark)
        logger.info("%s: %d source vertices -> %d target vertices, %d edges",
                    self.kind.value, source.graph.vertex_count,
                    graph.vertex_count, graph.edge_count())

    @property
    def source(self) -> Instance:
        return self._source

    @property
    def target(self) -> Instance:
        return self._target

    @property
    def vertex_map(self) -> VertexLayout:
        return self._layout

    def _check_source(self, source: Instance) -> None:
        if not source.graph.directed:
            raise InstanceKindError("{} needs a directed source".format(
                self.kind.value))

    def _make_layout(self) -> VertexLayout:
        raise NotImplementedError

    def _target_directed(self) -> bool:
        return True

    def _target_alphabet(self) -> Alphabet:
        raise NotImplementedError

    def _target_marks(self) -> Tuple[int, int]:
        return self._source.source, self._source.sink

    def _initial_sources(self) -> List[Edge]:
        return self._source.graph.stored_edges()

    def static_edges(self) -> List[Edge]:
        return []

    def check_source_edge(self, edge: Edge) -> Edge:
        return self._source.graph.normalize(edge)

    def edge_forms(self, edge: Edge) -> Tuple[List[Edge], List[Edge]]:
        """
        :param edge: a source edge
        :return: the target edges present while the source edge is absent,
                and those present while it is present
        """
        raise NotImplementedError

    def translate(self, op: UpdateOp) -> List[UpdateOp]:
        """
        :param op: an update of the source instance
        :return: the target updates that keep the target the image of the
                updated source; a query stays a single query
        """
        if op.kind == OpKind.QUERY:
            return [op]
        absent, present = self.edge_forms(self.check_source_edge(op.edge))
        if op.kind == OpKind.INS:
            removed, added = absent, present
        else:
            removed, added = present, absent
        return ([UpdateOp(OpKind.DEL, e) for e in removed]
                + [UpdateOp(OpKind.INS, e) for e in added])

    def psi_path(self, edge: Edge) -> List[Edge]:
        raise InstanceKindError("{} has no path image of an edge".format(
            self.kind.value))


class AltToNearDyck(CompiledReduction):
    """
    Target letters are the source vertices. Static edges: x -x-> t for every
    x, and for every AND vertex x the entry t -dot-> (x, 0) and exit
    (x, n) -dot-> x. An edge (y, x) with y an OR vertex adds x -dot-> y; with
    y an AND vertex it relabels (y, x) -> (y, x + 1) from dot to x bar.
    """
    kind = ReductionKind.ALT_TO_NEAR_DYCK

    def _check_source(self, source: Instance) -> None:
        super()._check_source(source)
        if source.partition is None:
            raise MissingPartitionError("alt_to_neardyck needs an and/or "
                                        "partition")
        if source.graph.alphabet != Alphabet.dyck(1):
            raise AlphabetMismatchError("alternating sources use alphabet "
                                        "dyck 1")
        for edge in source.graph.stored_edges():
            self._check_label(edge)

    @staticmethod
    def _check_label(edge: Edge) -> None:
        if edge.label != opening(1):
            raise AlphabetMismatchError("alternating edges are labeled l1, "
                                        "got {}".format(edge.label))

    def _make_layout(self) -> VertexLayout:
        partition = self._source.partition
        ands = [x for x, gate in enumerate(partition) if gate == Gate.AND]
        return AltLayout(self._source.graph.vertex_count, ands)

    def _target_alphabet(self) -> Alphabet:
        return Alphabet.near_dyck(self._source.graph.vertex_count)

    def _target_marks(self) -> Tuple[int, int]:
        return self._source.sink, self._source.source

    def _ands(self) -> List[int]:
        return [x for x, gate in enumerate(self._source.partition)
                if gate == Gate.AND]

    def _initial_sources(self) -> List[Edge]:
        n = self._source.graph.vertex_count
        edges = set(self._source.graph.stored_edges())
        for y in self._ands():
            edges.update(Edge(y, opening(1), x) for x in range(n))
        return sorted(edges)

    def static_edges(self) -> List[Edge]:
        n = self._source.graph.vertex_count
        t = self._source.sink
        layout = self._layout
        edges = [Edge(x, opening(x), t) for x in range(n)]
        for x in self._ands():
            edges.append(Edge(t, BULLET, layout[(x, 0)]))
            edges.append(Edge(layout[(x, n)], BULLET, x))
        return edges

    def check_source_edge(self, edge: Edge) -> Edge:
        edge = super().check_source_edge(edge)
        self._check_label(edge)
        return edge

    def edge_forms(self, edge: Edge) -> Tuple[List[Edge], List[Edge]]:
        y, _, x = edge
        if self._source.gate(y) == Gate.OR:
            return [], [Edge(x, BULLET, y)]
        start = self._layout[(y, x)]
        end = self._layout[(y, x + 1)]
        return [Edge(start, BULLET, end)], [Edge(start, closing(x), end)]

    def inn_path(self, x: int, graph: Optional[LabeledGraph] = None) \
            -> List[Edge]:
        """
        The path t -> (x, 0) -> ... -> (x, n) -> x that every path into the
        AND vertex x ends with.
        :param x: an AND vertex
        :param graph: the source graph to read the labels from; defaults to
                    the compiled source
        :return: the path's edges
        """
        if graph is None:
            graph = self._source.graph
        n = graph.vertex_count
        layout = self._layout
        path = [Edge(self._source.sink, BULLET, layout[(x, 0)])]
        for i in range(n):
            absent, present = self.edge_forms(Edge(x, opening(1), i))
            if graph.has_edge(Edge(x, opening(1), i)):
                path.extend(present)
            else:
                path.extend(absent)
        path.append(Edge(layout[(x, n)], BULLET, x))
        return path


class NearDyckToDyck2(CompiledReduction):
    """
    Letter j is spelled a^(j+1) b a^(m-j) along x -> (x, v_j, 0) -> ... ->
    (x, v_j, m) and its bar backwards along the (x, v_j bar, i) chain; the
    bullet is spelled a abar through (x, dot). Only the last edge of each
    spelling depends on the source edges.
    """
    kind = ReductionKind.NEAR_DYCK_TO_DYCK2

    def _check_source(self, source: Instance) -> None:
        super()._check_source(source)
        if source.graph.alphabet.is_dyck:
            raise AlphabetMismatchError("neardyck_to_dyck2 needs a neardyck "
                                        "alphabet")

    @property
    def letter_count(self) -> int:
        return self._source.graph.alphabet.size

    def _make_layout(self) -> VertexLayout:
        return NearDyckLayout(self._source.graph.vertex_count,
                              self.letter_count)

    def _target_alphabet(self) -> Alphabet:
        return _DYCK2

    def static_edges(self) -> List[Edge]:
        a, a_bar = opening(1), closing(1)
        b, b_bar = opening(2), closing(2)
        m = self.letter_count
        layout = self._layout
        edges = []
        for x in range(self._source.graph.vertex_count):
            edges.append(Edge(x, a, layout[(x, BULLET)]))
            for j in range(m):
                up, down = opening(j), closing(j)
                edges.append(Edge(x, a, layout[(x, up, 0)]))
                edges.append(Edge(x, a_bar, layout[(x, down, m)]))
                for i in range(m):
                    edges.append(Edge(layout[(x, up, i)], b if i == j else a,
                                      layout[(x, up, i + 1)]))
                    edges.append(Edge(layout[(x, down, i + 1)],
                                      b_bar if i == j else a_bar,
                                      layout[(x, down, i)]))
        return edges

    def edge_forms(self, edge: Edge) -> Tuple[List[Edge], List[Edge]]:
        x, label, y = edge
        layout = self._layout
        if label.is_bullet:
            return [], [Edge(layout[(x, BULLET)], closing(1), y)]
        if label.is_open:
            return [], [Edge(layout[(x, label, self.letter_count)],
                             opening(1), y)]
        return [], [Edge(layout[(x, label, 0)], closing(1), y)]

    def psi_path(self, edge: Edge) -> List[Edge]:
        """
        :return: the target path spelling the encoding of a source edge
        """
        x, label, y = self.check_source_edge(edge)
        layout = self._layout
        m = self.letter_count
        if label.is_bullet:
            hops = [x, layout[(x, BULLET)], y]
        elif label.is_open:
            hops = [x] + [layout[(x, label, i)] for i in range(m + 1)] + [y]
        else:
            hops = ([x] + [layout[(x, label, i)] for i in range(m, -1, -1)]
                    + [y])
        return _spell(hops, phi_neardyck_letter(label, m))


class Dyck2ToUndirected(CompiledReduction):
    """
    Every source edge (x, lambda, y) becomes the undirected path
    x - (x, lambda, y, 1) - ... - (x, lambda, y, 11) - y spelling the twelve
    letters of lambda's encoding. There are no static edges.
    """
    kind = ReductionKind.DYCK2_TO_UNDIRECTED

    def _check_source(self, source: Instance) -> None:
        super()._check_source(source)
        if source.graph.alphabet != _DYCK2:
            raise AlphabetMismatchError("dyck2_to_undirected needs alphabet "
                                        "dyck 2")

    def _make_layout(self) -> VertexLayout:
        return UndirectedLayout(self._source.graph.vertex_count)

    def _target_directed(self) -> bool:
        return False

    def _target_alphabet(self) -> Alphabet:
        return _DYCK2

    def _hops(self, edge: Edge) -> List[int]:
        x, label, y = edge
        layout = self._layout
        return ([x] + [layout[(x, label, y, i)]
                       for i in range(1, GADGET_INTERIOR + 1)] + [y])

    def edge_forms(self, edge: Edge) -> Tuple[List[Edge], List[Edge]]:
        return [], _spell(self._hops(edge), PHI_UNDIRECTED[edge.label])

    def psi_path(self, edge: Edge) -> List[Edge]:
        """
        :return: the twelve-edge target path x -> ... -> y of a source edge
        """
        return self.edge_forms(self.check_source_edge(edge))[1]


def _spell(hops: Sequence[int], letters: Sequence[Label]) -> List[Edge]:
    return [Edge(u, letter, v)
            for u, letter, v in zip(hops, letters, hops[1:])]


def compile_alt_to_neardyck(inst: Instance) -> AltToNearDyck:
    return AltToNearDyck(inst)


def compile_neardyck_to_dyck2(inst: Instance) -> NearDyckToDyck2:
    return NearDyckToDyck2(inst)


def compile_dyck2_to_undirected(inst: Instance) -> Dyck2ToUndirected:
    return Dyck2ToUndirected(inst)


_COMPILERS = {
    ReductionKind.ALT_TO_NEAR_DYCK: AltToNearDyck,
    ReductionKind.NEAR_DYCK_TO_DYCK2: NearDyckToDyck2,
    ReductionKind.DYCK2_TO_UNDIRECTED: Dyck2ToUndirected,
}


def compile_reduction(kind: Union[str, ReductionKind],
                      inst: Instance) -> CompiledReduction:
    return _COMPILERS[ReductionKind(kind)](inst)


def translate_updates(red, script: Sequence[UpdateOp]) -> List[UpdateOp]:
    """
    :param red: a compiled reduction or a chain of them
    :param script: updates of the source instance
    :return: the concatenated translations, queries passed through
    """
    out = []
    for op in script:
        out.extend(red.translate(op))
    return out


class ReductionChain(object):
    """
    Several reductions applied one after the other; each stage compiles the
    previous stage's target.
    """

    def __init__(self, source: Instance,
                 kinds: Sequence[Union[str, ReductionKind]]):
        if not kinds:
            raise ValueError("a reduction chain needs at least one stage")
        self._stages = []
        inst = source
        for kind in kinds:
            stage = compile_reduction(kind, inst)
            self._stages.append(stage)
            inst = stage.target

    @property
    def stages(self) -> Tuple[CompiledReduction, ...]:
        return tuple(self._stages)

    @property
    def kinds(self) -> Tuple[ReductionKind, ...]:
        return tuple(stage.kind for stage in self._stages)

    @property
    def source(self) -> Instance:
        return self._stages[0].source

    @property
    def target(self) -> Instance:
        return self._stages[-1].target

    def translate(self, op: UpdateOp) -> List[UpdateOp]:
        ops = [op]
        for stage in self._stages:
            ops = translate_updates(stage, ops)
        return ops


def translation_bounds(red) -> Tuple[int, int]:
    """
    :return: the least and greatest number of target updates one source
            update may turn into
    """
    kinds = red.kinds if isinstance(red, ReductionChain) else (red.kind,)
    low, high = 1, 1
    for kind in kinds:
        k_low, k_high = TRANSLATION_BOUNDS[ReductionKind(kind).value]
        low *= k_low
        high *= k_high
    return low, high


ALTERNATING = "alternating"


def source_engine(red) -> str:
    first = red.kinds[0] if isinstance(red, ReductionChain) else red.kind
    return {ReductionKind.ALT_TO_NEAR_DYCK: ALTERNATING,
            ReductionKind.NEAR_DYCK_TO_DYCK2: ENGINE_NEAR_DYCK,
            ReductionKind.DYCK2_TO_UNDIRECTED: ENGINE_DYCK}[first]


def target_engine(red) -> str:
    if red.target.graph.alphabet.is_dyck:
        return ENGINE_DYCK
    return ENGINE_NEAR_DYCK


class AnswerTracker(object):
    """
    Follows an instance through updates and answers reachability between
    its marks on demand. Insertions extend a live index; a deletion drops
    it and the next query solves from scratch.
    """

    def __init__(self, inst: Instance, engine: str):
        self._inst = inst
        self._engine = engine
        self._index = None

    @property
    def instance(self) -> Instance:
        return self._inst

    def apply(self, op: UpdateOp) -> None:
        if op.kind == OpKind.QUERY:
            return
        if op.kind == OpKind.INS and self._index is not None:
            self._index = resolve_after_update(self._index, self._inst, op)
        else:
            self._index = None
        self._inst = apply_update(self._inst, op)

    def index(self) -> Optional[ReachIndex]:
        if self._engine == ALTERNATING:
            return None
        if self._index is None:
            self._index = solve_for(self._inst, self._engine)
        return self._index

    def answer(self) -> bool:
        if self._engine == ALTERNATING:
            return solve_alternating(self._inst)[0]
        return self.index().query(self._inst.source, self._inst.sink)


@dataclass
class EquivalenceRun:
    """
    Side-by-side answers of a source instance and its compiled target over
    one update script.
    """
    bounds: Tuple[int, int]
    counts: List[int] = field(default_factory=list)
    answers: List[Tuple[int, bool, bool]] = field(default_factory=list)

    @property
    def mismatches(self) -> List[int]:
        return [step for step, src, dst in self.answers if src != dst]

    @property
    def bound_violations(self) -> List[int]:
        low, high = self.bounds
        return [step for step, count in enumerate(self.counts, start=1)
                if count and not low <= count <= high]

    @property
    def passed(self) -> bool:
        return not self.mismatches and not self.bound_violations


def run_equivalence(red, script: Sequence[UpdateOp]) -> EquivalenceRun:
    """
    Replay a script on the source and its translation on the target,
    comparing answers at every query.
    :param red: a compiled reduction or a chain of them
    :param script: updates of the source instance
    :return: the per-step record; counts are 0 for queries
    """
    source = AnswerTracker(red.source, source_engine(red))
    target = AnswerTracker(red.target, target_engine(red))
    run = EquivalenceRun(translation_bounds(red))
    for step, op in enumerate(script, start=1):
        if op.kind == OpKind.QUERY:
            run.counts.append(0)
            run.answers.append((step, source.answer(), target.answer()))
            continue
        translated = red.translate(op)
        run.counts.append(len(translated))
        source.apply(op)
        for target_op in translated:
            target.apply(target_op)
    logger.info("equivalence run: %d steps, %d queries, %d mismatches",
                len(script), len(run.answers), len(run.mismatches))
    return run


def format_vertex_map(red: CompiledReduction) -> str:
    """
    :return: one `name id` line per target vertex
    """
    layout = red.vertex_map
    return "".join("{} {}\n".format(layout.format_name(layout.decode(v)), v)
                   for v in range(len(layout)))


def random_source(kind: Union[str, ReductionKind], rng: random.Random) \
        -> Instance:
    """
    :return: a random source instance for a reduction kind, within the
            fuzzing size caps
    """
    kind = ReductionKind(kind)
    if kind == ReductionKind.ALT_TO_NEAR_DYCK:
        return random_alternating_instance(rng,
                                           rng.randint(1, ALT_MAX_VERTICES))
    if kind == ReductionKind.NEAR_DYCK_TO_DYCK2:
        return random_near_dyck_instance(
            rng, rng.randint(1, NEAR_DYCK_MAX_VERTICES), rng.randint(1, 3),
            density=0.15)
    return random_dyck_instance(rng, rng.randint(1, DYCK2_MAX_VERTICES), 2,
                                density=0.15)


def fuzz_equivalence(kind: Union[str, ReductionKind], rng: random.Random,
                     runs: int = FUZZ_RUNS,
                     script_length: int = FUZZ_SCRIPT_LENGTH) \
        -> List[EquivalenceRun]:
    """
    Compile random sources and replay random scripts on both sides.
    :return: one run record per (instance, script) pair
    """
    out = []
    for i in range(runs):
        source = random_source(kind, rng)
        script = random_script(rng, source, script_length)
        out.append(run_equivalence(compile_reduction(kind, source), script))
        logger.debug("fuzz run %d of %d done", i + 1, runs)
    return out
