"""
Labeled graphs, alphabets, marked instances and edge updates, together with
the line-oriented graph and update-script file formats.

Vertices are dense integers 0..N-1. Every value defined here is immutable:
updates return new instances.
"""
import hashlib
import logging
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

from errors import AlphabetMismatchError, DuplicateEdgeError, \
    GraphFormatError, MissingEdgeError

logger = logging.getLogger(__name__)


class Polarity(IntEnum):
    OPEN = 0
    CLOSE = 1
    NEUTRAL = 2


class AlphabetKind(Enum):
    DYCK = "dyck"
    NEAR_DYCK = "neardyck"


class Gate(Enum):
    AND = "and"
    OR = "or"


class Label(NamedTuple):
    """
    A letter together with its polarity. Dyck letters are numbered 1..n,
    near-Dyck letters 0..m-1; the bullet is the only NEUTRAL label.
    """
    letter: int
    polarity: Polarity

    @property
    def is_open(self) -> bool:
        return self.polarity == Polarity.OPEN

    @property
    def is_close(self) -> bool:
        return self.polarity == Polarity.CLOSE

    @property
    def is_bullet(self) -> bool:
        return self.polarity == Polarity.NEUTRAL

    def bar(self) -> "Label":
        """
        :return: the matching label of this one; the bullet is its own bar.
        """
        if self.polarity == Polarity.OPEN:
            return Label(self.letter, Polarity.CLOSE)
        if self.polarity == Polarity.CLOSE:
            return Label(self.letter, Polarity.OPEN)
        return self


BULLET = Label(0, Polarity.NEUTRAL)

Word = Tuple[Label, ...]

_DIGITS = frozenset("0123456789")


def _is_numeral(text: str) -> bool:
    # ASCII digits only
    return bool(text) and all(ch in _DIGITS for ch in text)


def opening(letter: int) -> Label:
    return Label(letter, Polarity.OPEN)


def closing(letter: int) -> Label:
    return Label(letter, Polarity.CLOSE)


@dataclass(frozen=True)
class Alphabet:
    """
    Either the Dyck alphabet of `size` matched pairs l1..ln, or the near-Dyck
    alphabet of `size` letters v0..v(m-1), their bars, and the bullet.
    """
    kind: AlphabetKind
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise AlphabetMismatchError(
                "alphabet size must be positive, got {}".format(self.size))

    @classmethod
    def dyck(cls, n: int) -> "Alphabet":
        return cls(AlphabetKind.DYCK, n)

    @classmethod
    def near_dyck(cls, m: int) -> "Alphabet":
        return cls(AlphabetKind.NEAR_DYCK, m)

    @property
    def is_dyck(self) -> bool:
        return self.kind == AlphabetKind.DYCK

    def _letters(self) -> range:
        if self.is_dyck:
            return range(1, self.size + 1)
        return range(self.size)

    def open_labels(self) -> Tuple[Label, ...]:
        return tuple(opening(k) for k in self._letters())

    def labels(self) -> Tuple[Label, ...]:
        """
        :return: every label of this alphabet, opens first within each
        letter, bullet last for near-Dyck alphabets.
        """
        out = []
        for k in self._letters():
            out.append(opening(k))
            out.append(closing(k))
        if not self.is_dyck:
            out.append(BULLET)
        return tuple(out)

    def __contains__(self, label: Label) -> bool:
        if label.is_bullet:
            return not self.is_dyck
        return label.letter in self._letters()

    def parse_label(self, token: str) -> Label:
        """
        Parse a label token of this alphabet.
        :param token: `l<k>` / `l<k>bar` for Dyck, `v<i>` / `v<i>bar` / `dot`
        for near-Dyck alphabets
        :return: the label the token denotes
        """
        prefix = "l" if self.is_dyck else "v"
        if token == "dot" and not self.is_dyck:
            return BULLET
        body = token
        polarity = Polarity.OPEN
        if body.endswith("bar"):
            body = body[:-3]
            polarity = Polarity.CLOSE
        if not body.startswith(prefix) or not _is_numeral(body[1:]):
            raise AlphabetMismatchError(
                "unknown label token '{}' for {} alphabet".format(
                    token, self.kind.value))
        label = Label(int(body[1:]), polarity)
        if label not in self:
            raise AlphabetMismatchError(
                "unknown label token '{}': outside {} {}".format(
                    token, self.kind.value, self.size))
        return label

    def format_label(self, label: Label) -> str:
        if label.is_bullet:
            return "dot"
        prefix = "l" if self.is_dyck else "v"
        suffix = "bar" if label.is_close else ""
        return "{}{}{}".format(prefix, label.letter, suffix)

    def header(self) -> str:
        return "alphabet {} {}".format(self.kind.value, self.size)


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """
    :param text: whitespace separated label tokens
    :param alphabet: alphabet the tokens belong to
    :return: the word the tokens spell
    """
    return tuple(alphabet.parse_label(tok) for tok in text.split())


def format_word(word: Iterable[Label], alphabet: Alphabet) -> str:
    return " ".join(alphabet.format_label(label) for label in word)


class Edge(NamedTuple):
    source: int
    label: Label
    target: int


class LabeledGraph(object):
    """
    A finite labeled graph over vertices 0..vertex_count-1. In undirected
    mode each edge is stored once and reported in both orientations.
    """

    def __init__(self, directed: bool, vertex_count: int, alphabet: Alphabet,
                 edges: Iterable[Edge] = ()):
        """
        Initialise this LabeledGraph
        :param directed: False for a symmetric edge relation
        :param vertex_count: number of vertices
        :param alphabet: alphabet every edge label must belong to
        :param edges: initial edges; duplicates are rejected
        """
        if vertex_count < 0:
            raise ValueError("negative vertex count")
        self._directed = directed
        self._vertex_count = vertex_count
        self._alphabet = alphabet

        stored = set()
        for edge in edges:
            key = self.normalize(edge)
            if key in stored:
                raise DuplicateEdgeError(
                    "duplicate edge {}".format(self.describe(edge)))
            stored.add(key)
        self._stored = frozenset(stored)

        self._out = None
        self._in = None

    @property
    def directed(self) -> bool:
        return self._directed

    @property
    def vertex_count(self) -> int:
        return self._vertex_count

    @property
    def alphabet(self) -> Alphabet:
        return self._alphabet

    def describe(self, edge: Edge) -> str:
        return "({}, {}, {})".format(edge.source,
                                     self._alphabet.format_label(edge.label),
                                     edge.target)

    def normalize(self, edge: Edge) -> Edge:
        """
        Validate an edge and return the form it is stored under.
        """
        edge = Edge(*edge)
        for vertex in (edge.source, edge.target):
            if not 0 <= vertex < self._vertex_count:
                raise GraphFormatError(
                    "vertex {} out of range 0..{}".format(
                        vertex, self._vertex_count - 1))
        if edge.label not in self._alphabet:
            raise AlphabetMismatchError(
                "label {} not in {}".format(edge.label,
                                            self._alphabet.header()))
        if not self._directed and edge.source > edge.target:
            return Edge(edge.target, edge.label, edge.source)
        return edge

    def has_edge(self, edge: Edge) -> bool:
        return self.normalize(edge) in self._stored

    def edge_count(self) -> int:
        """
        :return: the number of stored edges (undirected edges count once)
        """
        return len(self._stored)

    def stored_edges(self) -> List[Edge]:
        return sorted(self._stored)

    def edges(self) -> List[Edge]:
        """
        :return: every edge, both orientations for undirected graphs, sorted
        """
        if self._directed:
            return sorted(self._stored)
        out = set(self._stored)
        for u, label, v in self._stored:
            out.add(Edge(v, label, u))
        return sorted(out)

    def _build_adjacency(self) -> None:
        out_edges = {}
        in_edges = {}
        for u, label, v in self.edges():
            out_edges.setdefault(u, []).append((label, v))
            in_edges.setdefault(v, []).append((u, label))
        self._out = {k: tuple(v) for k, v in out_edges.items()}
        self._in = {k: tuple(v) for k, v in in_edges.items()}

    def out_edges(self, vertex: int) -> Tuple[Tuple[Label, int], ...]:
        if self._out is None:
            self._build_adjacency()
        return self._out.get(vertex, ())

    def in_edges(self, vertex: int) -> Tuple[Tuple[int, Label], ...]:
        if self._in is None:
            self._build_adjacency()
        return self._in.get(vertex, ())

    def successors(self, vertex: int) -> List[int]:
        """
        :return: the distinct successors of a vertex, labels ignored
        """
        return sorted({v for _, v in self.out_edges(vertex)})

    def active_vertices(self) -> List[int]:
        """
        :return: the sorted vertices incident to at least one edge
        """
        active = set()
        for u, _, v in self._stored:
            active.add(u)
            active.add(v)
        return sorted(active)

    def with_edge(self, edge: Edge) -> "LabeledGraph":
        key = self.normalize(edge)
        if key in self._stored:
            raise DuplicateEdgeError(
                "edge {} already present".format(self.describe(edge)))
        return self._derive(self._stored | {key})

    def without_edge(self, edge: Edge) -> "LabeledGraph":
        key = self.normalize(edge)
        if key not in self._stored:
            raise MissingEdgeError(
                "edge {} not present".format(self.describe(edge)))
        return self._derive(self._stored - {key})

    def _derive(self, stored: frozenset) -> "LabeledGraph":
        graph = LabeledGraph.__new__(LabeledGraph)
        graph._directed = self._directed
        graph._vertex_count = self._vertex_count
        graph._alphabet = self._alphabet
        graph._stored = stored
        graph._out = None
        graph._in = None
        return graph

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (self._directed == other._directed
                and self._vertex_count == other._vertex_count
                and self._alphabet == other._alphabet
                and self._stored == other._stored)

    def __hash__(self) -> int:
        return hash((self._directed, self._vertex_count, self._alphabet,
                     self._stored))

    def __repr__(self) -> str:
        return "LabeledGraph({}, {} vertices, {} edges)".format(
            "directed" if self._directed else "undirected",
            self._vertex_count, len(self._stored))


@dataclass(frozen=True)
class Instance:
    """
    A graph with a marked source and sink, and for alternating reachability a
    total partition of the vertices into AND and OR gates.
    """
    graph: LabeledGraph
    source: int
    sink: int
    partition: Optional[Tuple[Gate, ...]] = None

    def __post_init__(self):
        n = self.graph.vertex_count
        for vertex in (self.source, self.sink):
            if not 0 <= vertex < n:
                raise GraphFormatError("marked vertex {} out of range 0..{}"
                                       .format(vertex, n - 1))
        if self.partition is not None and len(self.partition) != n:
            raise GraphFormatError(
                "partition covers {} vertices, graph has {}".format(
                    len(self.partition), n))

    def with_graph(self, graph: LabeledGraph) -> "Instance":
        return Instance(graph, self.source, self.sink, self.partition)

    def with_marks(self, source: int, sink: int) -> "Instance":
        return Instance(self.graph, source, sink, self.partition)

    def gate(self, vertex: int) -> Gate:
        return self.partition[vertex]


class OpKind(Enum):
    INS = "ins"
    DEL = "del"
    QUERY = "query"


@dataclass(frozen=True)
class UpdateOp:
    kind: OpKind
    edge: Optional[Edge] = None

    @classmethod
    def ins(cls, u: int, label: Label, v: int) -> "UpdateOp":
        return cls(OpKind.INS, Edge(u, label, v))

    @classmethod
    def delete(cls, u: int, label: Label, v: int) -> "UpdateOp":
        return cls(OpKind.DEL, Edge(u, label, v))

    @classmethod
    def query(cls) -> "UpdateOp":
        return cls(OpKind.QUERY)

    def inverse(self) -> "UpdateOp":
        if self.kind == OpKind.INS:
            return UpdateOp(OpKind.DEL, self.edge)
        if self.kind == OpKind.DEL:
            return UpdateOp(OpKind.INS, self.edge)
        return self


def apply_update(inst: Instance, op: UpdateOp) -> Instance:
    """
    Apply one update to an instance.
    :param inst: the instance to update
    :param op: Ins adds an edge (strict), Del removes one (strict), Query is
    left to the caller
    :return: the updated instance
    """
    if op.kind == OpKind.INS:
        return inst.with_graph(inst.graph.with_edge(op.edge))
    if op.kind == OpKind.DEL:
        return inst.with_graph(inst.graph.without_edge(op.edge))
    return inst


def _significant_lines(text: str) -> Iterable[Tuple[int, List[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _decode(text: Union[str, bytes]) -> str:
    if isinstance(text, bytes):
        return text.decode("utf-8")
    return text


def _int_token(token: str, number: int) -> int:
    if not _is_numeral(token[1:] if token.startswith("-") else token):
        raise GraphFormatError("expected an integer, got '{}'".format(token),
                               number)
    return int(token)


def parse_graph(text: Union[str, bytes]) -> Instance:
    """
    Parse a graph file.
    :param text: file contents, str or UTF-8 bytes
    :return: the described instance
    """
    lines = list(_significant_lines(_decode(text)))
    header = {}
    expected = ["graph", "vertices", "alphabet"]
    for (number, tokens), keyword in zip(lines, expected):
        if tokens[0] != keyword:
            raise GraphFormatError(
                "expected '{}' line, got '{}'".format(keyword, tokens[0]),
                number)
        header[keyword] = (number, tokens)
    if len(header) < 3:
        raise GraphFormatError("missing {} header line".format(
            expected[len(header)]))

    number, tokens = header["graph"]
    if len(tokens) != 2 or tokens[1] not in ("directed", "undirected"):
        raise GraphFormatError("expected 'graph directed|undirected'", number)
    directed = tokens[1] == "directed"

    number, tokens = header["vertices"]
    if len(tokens) != 2:
        raise GraphFormatError("expected 'vertices <N>'", number)
    vertex_count = _int_token(tokens[1], number)
    if vertex_count < 0:
        raise GraphFormatError("negative vertex count {}".format(vertex_count),
                               number)

    number, tokens = header["alphabet"]
    if len(tokens) != 3 or tokens[1] not in ("dyck", "neardyck"):
        raise GraphFormatError("expected 'alphabet dyck|neardyck <n>'", number)
    try:
        alphabet = Alphabet(AlphabetKind(tokens[1]),
                            _int_token(tokens[2], number))
    except AlphabetMismatchError as exc:
        raise GraphFormatError(str(exc), number)

    edges = []
    seen = set()
    mark = None
    partition = None
    scratch = LabeledGraph(directed, vertex_count, alphabet)
    for number, tokens in lines[3:]:
        keyword = tokens[0]
        if keyword == "edge":
            if len(tokens) != 4:
                raise GraphFormatError("expected 'edge <u> <label> <v>'",
                                       number)
            try:
                label = alphabet.parse_label(tokens[2])
                edge = Edge(_int_token(tokens[1], number), label,
                            _int_token(tokens[3], number))
                key = scratch.normalize(edge)
            except GraphFormatError as exc:
                if exc.line is not None:
                    raise
                raise GraphFormatError(str(exc), number)
            except AlphabetMismatchError as exc:
                raise GraphFormatError(str(exc), number)
            if key in seen:
                raise GraphFormatError("duplicate edge", number)
            seen.add(key)
            edges.append(edge)
        elif keyword == "mark":
            if mark is not None:
                raise GraphFormatError("duplicate mark line", number)
            if len(tokens) != 3:
                raise GraphFormatError("expected 'mark <s> <t>'", number)
            mark = (_int_token(tokens[1], number),
                    _int_token(tokens[2], number))
            for vertex in mark:
                if not 0 <= vertex < vertex_count:
                    raise GraphFormatError(
                        "vertex {} out of range".format(vertex), number)
        elif keyword == "partition":
            if partition is not None:
                raise GraphFormatError("duplicate partition line", number)
            if len(tokens) < 2 or tokens[1] != "and":
                raise GraphFormatError("expected 'partition and <u>...'",
                                       number)
            gates = [Gate.OR] * vertex_count
            for token in tokens[2:]:
                vertex = _int_token(token, number)
                if not 0 <= vertex < vertex_count:
                    raise GraphFormatError(
                        "vertex {} out of range".format(vertex), number)
                if gates[vertex] == Gate.AND:
                    raise GraphFormatError(
                        "vertex {} listed twice".format(vertex), number)
                gates[vertex] = Gate.AND
            partition = tuple(gates)
        else:
            raise GraphFormatError("unknown keyword '{}'".format(keyword),
                                   number)

    if mark is None:
        raise GraphFormatError("missing 'mark <s> <t>' line")

    graph = LabeledGraph(directed, vertex_count, alphabet, edges)
    logger.debug("parsed %r", graph)
    return Instance(graph, mark[0], mark[1], partition)


def serialize_graph(inst: Instance) -> str:
    """
    :param inst: the instance to write out
    :return: the graph file text describing the instance
    """
    graph = inst.graph
    out = ["graph {}".format("directed" if graph.directed else "undirected"),
           "vertices {}".format(graph.vertex_count),
           graph.alphabet.header()]
    for u, label, v in graph.stored_edges():
        out.append("edge {} {} {}".format(
            u, graph.alphabet.format_label(label), v))
    out.append("mark {} {}".format(inst.source, inst.sink))
    if inst.partition is not None:
        ands = [str(v) for v, gate in enumerate(inst.partition)
                if gate == Gate.AND]
        out.append(" ".join(["partition", "and"] + ands))
    return "\n".join(out) + "\n"


def fingerprint(inst: Instance) -> str:
    """
    :return: a stable identifier of an instance's graph and marks
    """
    return hashlib.sha1(serialize_graph(inst).encode("utf-8")).hexdigest()


def parse_script_numbered(text: Union[str, bytes], alphabet: Alphabet,
                          vertex_count: Optional[int] = None) \
        -> List[Tuple[int, UpdateOp]]:
    """
    Parse an update script, keeping the line number of every operation.
    :param text: script contents
    :param alphabet: alphabet used for edge labels
    :param vertex_count: when given, every vertex id must lie in
                0..vertex_count-1
    :return: (line number, operation) pairs in script order
    """
    ops = []
    for number, tokens in _significant_lines(_decode(text)):
        keyword = tokens[0]
        if keyword == "query":
            if len(tokens) != 1:
                raise GraphFormatError("'query' takes no arguments", number)
            ops.append((number, UpdateOp.query()))
        elif keyword in ("ins", "del"):
            if len(tokens) != 4:
                raise GraphFormatError(
                    "expected '{} <u> <label> <v>'".format(keyword), number)
            try:
                label = alphabet.parse_label(tokens[2])
            except AlphabetMismatchError as exc:
                raise GraphFormatError(str(exc), number)
            edge = Edge(_int_token(tokens[1], number), label,
                        _int_token(tokens[3], number))
            if vertex_count is not None:
                for vertex in (edge.source, edge.target):
                    if not 0 <= vertex < vertex_count:
                        raise GraphFormatError(
                            "vertex {} out of range 0..{}".format(
                                vertex, vertex_count - 1), number)
            ops.append((number, UpdateOp(OpKind(keyword), edge)))
        else:
            raise GraphFormatError("unknown keyword '{}'".format(keyword),
                                   number)
    return ops


def parse_script(text: Union[str, bytes], alphabet: Alphabet,
                 vertex_count: Optional[int] = None) -> List[UpdateOp]:
    return [op for _, op in parse_script_numbered(text, alphabet,
                                                  vertex_count)]


def format_update(op: UpdateOp, alphabet: Alphabet) -> str:
    if op.kind == OpKind.QUERY:
        return "query"
    u, label, v = op.edge
    return "{} {} {} {}".format(op.kind.value, u, alphabet.format_label(label),
                                v)


def format_script(ops: Iterable[UpdateOp], alphabet: Alphabet) -> str:
    return "".join(format_update(op, alphabet) + "\n" for op in ops)


def count_updates(ops: Iterable[UpdateOp]) -> Dict[OpKind, int]:
    counts = {kind: 0 for kind in OpKind}
    for op in ops:
        counts[op.kind] += 1
    return counts
