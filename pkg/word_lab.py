"""
Word-level machinery: reduction, Dyck and near-Dyck membership, the sets Q
of factors and Q_init of prefixes of Dyck words, the letter encodings used by
the gadget reductions, the counter mu, the projection theta into Z2 * Z2,
and nominal decomposition of Dyck paths in undirected edge gadgets.

Four-letter words are dyck(2) words: 0 is l1 and 1 is l2.
"""
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence, \
    Tuple

from errors import AlphabetMismatchError, DecompositionError, \
    InstanceKindError, MalformedSegmentError, NotDyckPathError
from graph_model import Alphabet, Edge, Label, Word, closing, opening
from regular import ONE, ONE_BAR, ZERO, ZERO_BAR, automaton, lookup

if TYPE_CHECKING:
    from reductions import CompiledReduction

logger = logging.getLogger(__name__)

FOUR_LETTERS = Alphabet.dyck(2)

_TOKENS = {"0": ZERO, "0bar": ZERO_BAR, "1": ONE, "1bar": ONE_BAR}
_NAMES = {label: token for token, label in _TOKENS.items()}


def parse_bits(text: str) -> Word:
    """
    :param text: whitespace separated tokens among 0, 0bar, 1, 1bar
    :return: the four-letter word they spell
    """
    try:
        return tuple(_TOKENS[tok] for tok in text.split())
    except KeyError as exc:
        raise AlphabetMismatchError("unknown four-letter token {}".format(exc))


def format_bits(w: Iterable[Label]) -> str:
    return " ".join(_NAMES[label] for label in w)


def reduce(w: Iterable[Label]) -> Word:
    """
    Delete factors l_k l_k bar until none is left. Only open-then-close pairs
    cancel: 0bar 0 stays as it is.
    :param w: a word over a Dyck alphabet
    :return: the reduced word
    """
    stack = []
    for label in w:
        if (stack and label.is_close and stack[-1].is_open
                and stack[-1].letter == label.letter):
            stack.pop()
        else:
            stack.append(label)
    return tuple(stack)


def _no_bullets(w: Sequence[Label]) -> None:
    if any(label.is_bullet for label in w):
        raise AlphabetMismatchError("bullet in a Dyck word")


def is_dyck(w: Sequence[Label]) -> bool:
    _no_bullets(w)
    return not reduce(w)


def is_near_dyck(w: Sequence[Label]) -> bool:
    """
    :return: whether w is a Dyck word once its bullets are erased
    """
    return not reduce(label for label in w if not label.is_bullet)


def in_Q(w: Sequence[Label]) -> bool:
    """
    Membership in the factors of Dyck words: the reduced word must consist of
    closing letters followed by opening letters.
    """
    _no_bullets(w)
    opened = False
    for label in reduce(w):
        if label.is_open:
            opened = True
        elif opened:
            return False
    return True


def in_Q_init(w: Sequence[Label]) -> bool:
    """
    Membership in the prefixes of Dyck words: the reduced word has no
    closing letter.
    """
    _no_bullets(w)
    return all(label.is_open for label in reduce(w))


def in_regular(w: Sequence[Label], which: str) -> bool:
    """
    :param w: a four-letter word
    :param which: one of omega+, omega-, omega, varpi+, varpi-, varpi
    :return: whether the named expression matches w
    """
    return automaton(lookup(which)).accepts(w)


# the twelve-letter images of l1, l1bar, l2, l2bar; each bar image is the
# formal inverse of the plain one
PHI_UNDIRECTED = {
    opening(1): parse_bits("0 0bar 1 1 0 0 1 1 1 1 1bar 0"),
    closing(1): parse_bits("0bar 1 1bar 1bar 1bar 1bar 0bar 0bar 1bar 1bar "
                           "0 0bar"),
    opening(2): parse_bits("0 0bar 1 0 0 1 1 0 0 1 1bar 0"),
    closing(2): parse_bits("0bar 1 1bar 0bar 0bar 1bar 1bar 0bar 0bar 1bar "
                           "0 0bar"),
}

# positions of the two locks inside every twelve-letter image
LOCK_POSITIONS = ((1, 2), (9, 10))


def phi_undirected(w: Iterable[Label]) -> Word:
    """
    :param w: a word over dyck(2)
    :return: its image over {0, 0bar, 1, 1bar}, twelve letters per letter
    """
    out = []
    for label in w:
        try:
            out.extend(PHI_UNDIRECTED[label])
        except KeyError:
            raise AlphabetMismatchError(
                "no undirected encoding for {}".format(label))
    return tuple(out)


A = opening(1)
A_BAR = closing(1)
B = opening(2)
B_BAR = closing(2)


def phi_neardyck_letter(label: Label, m: int) -> Word:
    """
    :param label: a near-Dyck label over m letters
    :param m: the letter count
    :return: a abar for the bullet, a^(j+1) b a^(m-j) for letter j, and the
            formal inverse of that for its bar
    """
    if label.is_bullet:
        return (A, A_BAR)
    j = label.letter
    if not 0 <= j < m:
        raise AlphabetMismatchError("letter {} outside 0..{}".format(j, m - 1))
    if label.is_open:
        return (A,) * (j + 1) + (B,) + (A,) * (m - j)
    return (A_BAR,) * (m - j) + (B_BAR,) + (A_BAR,) * (j + 1)


def phi_neardyck(w: Iterable[Label], m: int) -> Word:
    out = []
    for label in w:
        out.extend(phi_neardyck_letter(label, m))
    return tuple(out)


def mu(w: Iterable[Label]) -> int:
    """
    :return: the number of opening letters minus the number of closing ones
    """
    total = 0
    for label in w:
        if label.is_open:
            total += 1
        elif label.is_close:
            total -= 1
    return total


class FreeProductElement(object):
    """
    An element of Z2 * Z2 = <alpha, beta | alpha^2 = beta^2 = 1>, stored as
    its reduced word: a string over "a" (alpha) and "b" (beta) with no
    letter repeated twice in a row.
    """

    def __init__(self, generators: str = ""):
        out = []
        for g in generators:
            if g not in "ab":
                raise ValueError("unknown generator '{}'".format(g))
            if out and out[-1] == g:
                out.pop()
            else:
                out.append(g)
        self._word = "".join(out)

    @classmethod
    def identity(cls) -> "FreeProductElement":
        return cls()

    @classmethod
    def gamma(cls, k: int = 1) -> "FreeProductElement":
        """
        :return: gamma^k where gamma = beta alpha
        """
        if k >= 0:
            return cls("ba" * k)
        return cls("ab" * -k)

    @property
    def word(self) -> str:
        return self._word

    def __mul__(self, other: "FreeProductElement") -> "FreeProductElement":
        return FreeProductElement(self._word + other._word)

    def inverse(self) -> "FreeProductElement":
        return FreeProductElement(self._word[::-1])

    def is_identity(self) -> bool:
        return not self._word

    def __len__(self) -> int:
        return len(self._word)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeProductElement):
            return NotImplemented
        return self._word == other._word

    def __hash__(self) -> int:
        return hash(self._word)

    def __repr__(self) -> str:
        return "FreeProductElement('{}')".format(self._word)

    def __str__(self) -> str:
        if not self._word:
            return "1"
        return "".join("α" if g == "a" else "β" for g in self._word)


def theta(w: Iterable[Label]) -> FreeProductElement:
    """
    Project a four-letter word: 0 and 0bar go to alpha, 1 and 1bar to beta.
    """
    return FreeProductElement("".join("a" if label.letter == 1 else "b"
                                      for label in w))


def gamma_exponent(e: FreeProductElement) -> Optional[int]:
    """
    :return: k when e = gamma^k, None when e is no power of gamma
    """
    word = e.word
    if not word:
        return 0
    if len(word) % 2:
        return None
    if word[0] == "b":
        return len(word) // 2
    return -(len(word) // 2)


@dataclass(frozen=True)
class Segment:
    """
    One nominal piece of a path: it leaves and re-enters the original
    vertices exactly at its ends. `source_edge` names the gadget it crosses,
    or is None for a loop of 0 / 0bar edges back to `start`.
    """
    edges: Tuple[Edge, ...]
    start: int
    end: int
    source_edge: Optional[Edge]

    @property
    def is_vertex_loop(self) -> bool:
        return self.source_edge is None

    def label(self) -> Word:
        return tuple(e.label for e in self.edges)


@dataclass(frozen=True)
class NominalDecomposition:
    vertices: Tuple[int, ...]
    segments: Tuple[Segment, ...]

    def label_map(self) -> Dict[int, Label]:
        """
        :return: the 1-based positions of segments crossing a gadget, mapped
                to the label of the source edge they encode
        """
        return {i: seg.source_edge.label
                for i, seg in enumerate(self.segments, start=1)
                if seg.source_edge is not None}

    def ancestor(self) -> List[Edge]:
        return [seg.source_edge for seg in self.segments
                if seg.source_edge is not None]


def path_vertices(path: Sequence[Edge]) -> List[int]:
    """
    :return: the vertex sequence of a path given as chained edges
    """
    if not path:
        return []
    vertices = [path[0].source]
    for edge in path:
        if edge.source != vertices[-1]:
            raise DecompositionError("edges do not chain at vertex {}".format(
                vertices[-1]))
        vertices.append(edge.target)
    return vertices


def nominal_decompose(path: Sequence[Edge], red: "CompiledReduction",
                      start: Optional[int] = None) -> NominalDecomposition:
    """
    Split a Dyck path of an undirected edge-gadget graph into its nominal
    segments and recover the source path it follows.
    :param path: the path as a sequence of target edges, each oriented the
                way it is walked
    :param red: the compiled reduction whose target the path lives in
    :param start: the start vertex, needed only for the empty path
    :return: the decomposition
    """
    if red.kind != "dyck2_to_undirected":
        raise InstanceKindError("nominal decomposition needs a "
                                "dyck2_to_undirected reduction")
    graph = red.target.graph
    layout = red.vertex_map
    for edge in path:
        if not graph.has_edge(edge):
            raise DecompositionError("{} is not an edge of the target".format(
                graph.describe(edge)))
    vertices = path_vertices(path)
    if not vertices:
        if start is None:
            raise DecompositionError("empty path without a start vertex")
        vertices = [start]
    if not is_dyck([e.label for e in path]):
        raise NotDyckPathError("path label is not a Dyck word")
    if not (layout.is_original(vertices[0])
            and layout.is_original(vertices[-1])):
        raise DecompositionError("path must start and end at original "
                                 "vertices")

    segments = []
    nominal = [vertices[0]]
    begin = 0
    for i in range(1, len(vertices)):
        if not layout.is_original(vertices[i]):
            continue
        segments.append(_classify(path[begin:i], red))
        nominal.append(vertices[i])
        begin = i
    logger.debug("decomposed a path of length %d into %d segments",
                 len(path), len(segments))
    return NominalDecomposition(tuple(nominal), tuple(segments))


def _classify(edges: Sequence[Edge], red: "CompiledReduction") -> Segment:
    layout = red.vertex_map
    a = edges[0].source
    b = edges[-1].target
    gadgets = {layout.decode(e.target)[:3] for e in edges[:-1]}
    if len(gadgets) != 1:
        raise MalformedSegmentError(
            "segment from {} to {} touches {} gadgets".format(
                a, b, len(gadgets)))
    x, label, y = gadgets.pop()
    if a not in (x, y) or b not in (x, y):
        raise MalformedSegmentError(
            "segment from {} to {} leaves gadget ({}, {}, {})".format(
                a, b, x, label, y))
    crosses = any(e.label.letter == ONE.letter for e in edges)
    if crosses:
        if (a, b) != (x, y):
            raise MalformedSegmentError(
                "segment walks gadget ({}, {}, {}) from {} to {}".format(
                    x, label, y, a, b))
        return Segment(tuple(edges), a, b, Edge(x, label, y))
    if a != b:
        raise MalformedSegmentError(
            "0-only segment from {} to {} changes vertex".format(a, b))
    return Segment(tuple(edges), a, b, None)
