"""
Brute-force oracles. Nothing here calls the solvers or `word_lab.reduce`:
every check is a direct search or a direct stack scan.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterator, List, NamedTuple, \
    Optional, Sequence, Set, Tuple, Union

from constants import DEFAULT_MAX_EXPANSIONS, DEFAULT_MAX_PATH_LENGTH, \
    DEFAULT_MAX_PATHS, GADGET_INTERIOR
from errors import InstanceKindError
from graph_model import Edge, Instance, Label, LabeledGraph, Word, closing, \
    opening
from regular import Alt, Cat, Expr, Star, Sym

logger = logging.getLogger(__name__)

Path = Tuple[Edge, ...]
WordPredicate = Callable[[Word], bool]


@dataclass(frozen=True)
class EnumerationBudget:
    """
    Bounds for every enumeration: walk length, number of reported walks, and
    number of partial walks extended along the way.
    """
    max_path_length: int = DEFAULT_MAX_PATH_LENGTH
    max_paths: int = DEFAULT_MAX_PATHS
    max_expansions: int = DEFAULT_MAX_EXPANSIONS

    def __post_init__(self):
        for name in ("max_path_length", "max_paths", "max_expansions"):
            if getattr(self, name) < 1:
                raise ValueError("{} must be positive".format(name))


class Enumeration(NamedTuple):
    paths: List[Path]
    truncated: bool


def path_label(path: Sequence[Edge]) -> Word:
    return tuple(edge.label for edge in path)


def _moves(graph: LabeledGraph) -> Dict[int, List[Edge]]:
    moves = {}
    for edge in sorted(graph.edges()):
        moves.setdefault(edge.source, []).append(edge)
    return moves


Step = Callable[[object, Edge], Optional[object]]


def _walks(graph: LabeledGraph, start: int, budget: EnumerationBudget,
           initial: object, step: Step,
           report: Callable[[Path, object], bool],
           enter: Optional[Callable[[Edge], bool]] = None) -> Enumeration:
    """
    Breadth-first over partial walks, so walks come out shortest first and
    lexicographic by edge within one length. Each partial walk carries a
    state; `step` returns None to cut the extension. A whole layer is
    reported before any of it is extended, so a larger budget in any bound
    reports a superset.
    """
    moves = _moves(graph)
    found = []
    layer = [((), initial)]
    expansions = 0
    truncated = False
    for length in range(budget.max_path_length + 1):
        for walk, state in layer:
            if report(walk, state):
                if len(found) == budget.max_paths:
                    return Enumeration(found, True)
                found.append(walk)
        if length == budget.max_path_length:
            break
        nxt = []
        for walk, state in layer:
            at = walk[-1].target if walk else start
            for edge in moves.get(at, ()):
                if enter is not None and walk and not enter(edge):
                    continue
                expansions += 1
                if expansions > budget.max_expansions:
                    truncated = True
                    break
                moved = step(state, edge)
                if moved is not None:
                    nxt.append((walk + (edge,), moved))
            if truncated:
                break
        if truncated or not nxt:
            break
        layer = nxt
    logger.debug("walk enumeration from %d: %d reported, %d expansions",
                 start, len(found), expansions)
    return Enumeration(found, truncated)


def enumerate_paths(inst: Instance, start: int, end: int,
                    budget: EnumerationBudget,
                    label_predicate: WordPredicate,
                    prefix_predicate: Optional[WordPredicate] = None) \
        -> Enumeration:
    """
    List the walks start -> end whose label satisfies a predicate.
    :param inst: the instance to walk in; undirected edges are walked both
                ways
    :param start: first vertex
    :param end: last vertex
    :param budget: the enumeration bounds
    :param label_predicate: a pure function of the label word
    :param prefix_predicate: when given, partial walks whose label fails it
                are not extended; it must accept every prefix of a label
                that satisfies `label_predicate`
    :return: the walks in length-lexicographic order, and whether a bound
            cut the search short
    """
    def step(label: Word, edge: Edge) -> Optional[Word]:
        label = label + (edge.label,)
        if prefix_predicate is not None and not prefix_predicate(label):
            return None
        return label

    def report(walk: Path, label: Word) -> bool:
        at = walk[-1].target if walk else start
        return at == end and label_predicate(label)

    return _walks(inst.graph, start, budget, (), step, report)


Stack = Tuple[int, ...]


def _push(free_closes: bool) -> Callable[[Stack, Label], Optional[Stack]]:
    def step(stack: Stack, label: Label) -> Optional[Stack]:
        if label.is_open:
            return stack + (label.letter,)
        if label.is_close:
            if stack:
                return stack[:-1] if stack[-1] == label.letter else None
            return stack if free_closes else None
        return stack
    return step


def dyck_paths(inst: Instance, start: int, end: int,
               budget: EnumerationBudget) -> Enumeration:
    """
    Walks start -> end with a Dyck label (bullets ignored), cut as soon as a
    partial label stops being a Dyck prefix.
    """
    def report(walk: Path, stack: Stack) -> bool:
        at = walk[-1].target if walk else start
        return at == end and not stack

    push = _push(False)
    return _walks(inst.graph, start, budget, (),
                  lambda stack, edge: push(stack, edge.label), report)


def _scan(w: Sequence[Label], free_closes: bool) -> Optional[Stack]:
    step = _push(free_closes)
    stack = ()
    for label in w:
        stack = step(stack, label)
        if stack is None:
            return None
    return stack


def is_dyck_word(w: Sequence[Label]) -> bool:
    return _scan(w, False) == ()


def is_dyck_prefix(w: Sequence[Label]) -> bool:
    """
    A closing letter must match the innermost pending opening letter.
    """
    return _scan(w, False) is not None


def is_dyck_factor(w: Sequence[Label]) -> bool:
    """
    Like a prefix, except that closing letters with nothing pending are
    allowed: enough opening letters can always be put in front.
    """
    return _scan(w, True) is not None


class Reachability(NamedTuple):
    pairs: Set[Tuple[int, int]]
    truncated: bool


def brute_dyck_search(inst: Instance, budget: EnumerationBudget) \
        -> Reachability:
    """
    Search configurations (vertex, pending opening letters) from every
    vertex, breadth-first up to the walk length bound.
    :param inst: the instance; bullets are read as neutral
    :param budget: max_path_length and max_expansions are used
    :return: every pair joined by a Dyck walk found within the budget,
            identity pairs included, and whether max_expansions cut the
            search short
    """
    moves = _moves(inst.graph)
    pairs = set()
    push = _push(False)
    expansions = 0
    for start in range(inst.graph.vertex_count):
        seen = {(start, ())}
        queue = deque([(start, (), 0)])
        while queue:
            at, stack, depth = queue.popleft()
            if not stack:
                pairs.add((start, at))
            if depth == budget.max_path_length:
                continue
            for _, label, nxt in moves.get(at, ()):
                pushed = push(stack, label)
                if pushed is None:
                    continue
                if len(pushed) > budget.max_path_length - depth - 1:
                    continue
                state = (nxt, pushed)
                if state in seen:
                    continue
                expansions += 1
                if expansions > budget.max_expansions:
                    logger.warning("brute Dyck search stopped after %d "
                                   "expansions", expansions - 1)
                    return Reachability(pairs, True)
                seen.add(state)
                queue.append((nxt, pushed, depth + 1))
    return Reachability(pairs, False)


def brute_dyck_reach(inst: Instance, budget: EnumerationBudget) \
        -> Set[Tuple[int, int]]:
    """
    :return: the pairs of `brute_dyck_search`, a subset of the true relation
    """
    return brute_dyck_search(inst, budget).pairs


NominalTag = Union[int, Edge]


def _has_one(walk: Sequence[Edge]) -> bool:
    return any(edge.label.letter == 2 for edge in walk)


def nominal_walks(red, start: int, budget: EnumerationBudget) -> Enumeration:
    """
    Every walk from an original vertex whose interior avoids the original
    vertices, that ends at an original vertex and whose label is a factor
    of a Dyck word.
    :param red: a compiled dyck2_to_undirected reduction
    :param start: an original vertex
    :param budget: the enumeration bounds
    """
    if red.kind != "dyck2_to_undirected":
        raise InstanceKindError("nominal paths live in dyck2_to_undirected "
                                "targets")
    layout = red.vertex_map
    if not layout.is_original(start):
        raise InstanceKindError("{} is not an original vertex".format(start))

    def report(walk: Path, _) -> bool:
        return bool(walk) and layout.is_original(walk[-1].target)

    def enter(edge: Edge) -> bool:
        return not layout.is_original(edge.source)

    push = _push(True)
    return _walks(red.target.graph, start, budget, (),
                  lambda stack, edge: push(stack, edge.label), report, enter)


def nominal_tag_of(red, walk: Sequence[Edge]) -> Optional[NominalTag]:
    """
    :return: the source edge (x, lambda, y) when the walk crosses that
            edge's gadget from x to y using a 1 or 1bar edge, the vertex x
            when it returns to x over 0 and 0bar edges only, None otherwise
    """
    layout = red.vertex_map
    start, end = walk[0].source, walk[-1].target
    if not _has_one(walk):
        return start if start == end else None
    x, label, y, first = layout.decode(walk[0].target)
    last = layout.decode(walk[-1].source)[3]
    if (start, end, first, last) == (x, y, 1, GADGET_INTERIOR):
        return Edge(x, label, y)
    return None


def enumerate_nominal_paths(red, tag: NominalTag,
                            budget: EnumerationBudget) -> Enumeration:
    """
    :param red: a compiled dyck2_to_undirected reduction
    :param tag: a vertex x for the returning paths at x, or a source edge
                for the paths crossing its gadget
    :param budget: the enumeration bounds
    :return: the approximate-Dyck nominal paths carrying the tag
    """
    start = tag if isinstance(tag, int) else tag.source
    walks = nominal_walks(red, start, budget)
    return Enumeration([w for w in walks.paths
                        if nominal_tag_of(red, w) == tag], walks.truncated)


def iter_words(letters: Sequence[Label], max_len: int) -> Iterator[Word]:
    """
    All words of length at most max_len, shortest first, then in the order
    of `letters`.
    """
    for length in range(max_len + 1):
        yield from itertools.product(letters, repeat=length)


def exhaustive_words(letters: Sequence[Label], max_len: int,
                     predicate: Optional[WordPredicate] = None) -> List[Word]:
    return [w for w in iter_words(letters, max_len)
            if predicate is None or predicate(w)]


def dyck_words(n: int, max_len: int) -> List[Word]:
    """
    Generate the Dyck words over n bracket pairs from the grammar
    D -> eps | l_k D l_k bar D, shortest first.
    """
    by_length = {0: [()]}
    for length in range(2, max_len + 1, 2):
        out = []
        for k in range(1, n + 1):
            wrap = (opening(k),), (closing(k),)
            for inner in range(0, length - 1, 2):
                for u in by_length[inner]:
                    for v in by_length[length - 2 - inner]:
                        out.append(wrap[0] + u + wrap[1] + v)
        by_length[length] = out
    return [w for length in sorted(by_length) for w in by_length[length]]


def dyck_count(n: int, length: int) -> int:
    """
    :return: the number of Dyck words of a given length over n bracket pairs
    """
    counts = [1]
    for even in range(2, length + 1, 2):
        counts.append(sum(n * counts[j // 2] * counts[(even - 2 - j) // 2]
                          for j in range(0, even - 1, 2)))
    return counts[length // 2] if length % 2 == 0 else 0


@lru_cache(maxsize=1 << 16)
def _ends(expr: Expr, w: Word, i: int) -> FrozenSet[int]:
    if isinstance(expr, Sym):
        if i < len(w) and w[i] == expr.label:
            return frozenset([i + 1])
        return frozenset()
    if isinstance(expr, Cat):
        positions = frozenset([i])
        for part in expr.parts:
            positions = frozenset().union(*(_ends(part, w, p)
                                             for p in positions))
            if not positions:
                break
        return positions
    if isinstance(expr, Alt):
        return frozenset().union(*(_ends(part, w, i) for part in expr.parts))
    if isinstance(expr, Star):
        reached = {i}
        frontier = [i]
        while frontier:
            p = frontier.pop()
            for q in _ends(expr.inner, w, p):
                if q not in reached:
                    reached.add(q)
                    frontier.append(q)
        return frozenset(reached)
    raise TypeError("not an expression: {!r}".format(expr))


def matches_expression(w: Sequence[Label], expr: Expr) -> bool:
    """
    Decide membership straight from the expression's meaning, by computing
    the positions each subexpression can end at.
    """
    w = tuple(w)
    return len(w) in _ends(expr, w, 0)


def bfs_distance(graph: LabeledGraph, s: int, t: int) -> Optional[int]:
    """
    :return: the number of edges on a shortest s -> t path, labels ignored,
            or None when t cannot be reached
    """
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        if u == t:
            return dist[u]
        for v in graph.successors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return None
