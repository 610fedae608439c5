"""
Dyck and near-Dyck reachability by saturating the set of vertex pairs joined
by a path whose label is balanced.

Two engines live here. The pair saturation (`solve_dyck`, `solve_near_dyck`,
`solve_dyck_wrap_only`) applies the wrap rule

    (u', v') in S, (u, l_k, u') in E, (v', l_k bar, v) in E  =>  (u, v) in S

and, except in the wrap-only variant, closes S under concatenation. The
grammar engine (`solve_cfl`) runs a Hellings-style worklist over any grammar
in binary normal form and is used as the independent second opinion.

Both store pairs in dense numpy boolean matrices indexed by the *active*
vertices, those incident to an edge. An isolated vertex only ever reaches
itself through the empty word, so it needs no row.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Iterable, NamedTuple, Optional, \
    Sequence, Set, Tuple, Union

import numpy as np

from errors import AlphabetMismatchError, FingerprintMismatchError, \
    GrammarError, InstanceKindError
from graph_model import Alphabet, BULLET, Instance, Label, LabeledGraph, \
    OpKind, UpdateOp, apply_update, closing, fingerprint, opening

logger = logging.getLogger(__name__)

ENGINE_DYCK = "dyck"
ENGINE_WRAP_ONLY = "wrap-only"
ENGINE_NEAR_DYCK = "neardyck"
ENGINE_CFL = "cfl"


class ReachIndex(object):
    """
    The saturated pair set of one instance. Rows and columns of the matrix
    follow `active`; pairs between other vertices are the identity pairs
    when the index is reflexive and absent otherwise.
    """

    def __init__(self, vertex_count: int, active: Sequence[int],
                 matrix: np.ndarray, graph_fingerprint: str, engine: str,
                 reflexive: bool = True):
        self._vertex_count = vertex_count
        self._active = tuple(active)
        self._pos = {v: i for i, v in enumerate(self._active)}
        self._matrix = matrix
        self._matrix.setflags(write=False)
        self._fingerprint = graph_fingerprint
        self._engine = engine
        self._reflexive = reflexive

    @property
    def vertex_count(self) -> int:
        return self._vertex_count

    @property
    def graph_fingerprint(self) -> str:
        return self._fingerprint

    @property
    def engine(self) -> str:
        return self._engine

    @property
    def reflexive(self) -> bool:
        return self._reflexive

    @property
    def active(self) -> Tuple[int, ...]:
        return self._active

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def query(self, u: int, v: int) -> bool:
        """
        :param u: path start
        :param v: path end
        :return: whether a path u -> v with a balanced label exists
        """
        pu = self._pos.get(u)
        pv = self._pos.get(v)
        if pu is None or pv is None:
            return self._reflexive and u == v
        return bool(self._matrix[pu, pv])

    def explicit_pairs(self) -> Set[Tuple[int, int]]:
        """
        :return: every stored pair, leaving out identity pairs a reflexive
        index holds for all vertices anyway
        """
        us, vs = np.nonzero(self._matrix)
        out = set()
        for pu, pv in zip(us.tolist(), vs.tolist()):
            if pu != pv or not self._reflexive:
                out.add((self._active[pu], self._active[pv]))
        return out

    def nontrivial_pairs(self) -> Set[Tuple[int, int]]:
        return {(u, v) for u, v in self.explicit_pairs() if u != v}

    def pairs(self) -> Set[Tuple[int, int]]:
        """
        :return: the full pair set; for reflexive indexes this lists the
        identity pair of every vertex, so avoid it on large gadgets
        """
        out = self.explicit_pairs()
        if self._reflexive:
            out.update((v, v) for v in range(self._vertex_count))
        return out

    def __len__(self) -> int:
        count = int(self._matrix.sum())
        if self._reflexive:
            count += self._vertex_count - len(self._active)
        return count

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReachIndex):
            return NotImplemented
        return (self._vertex_count == other._vertex_count
                and self._reflexive == other._reflexive
                and self.explicit_pairs() == other.explicit_pairs())

    def __repr__(self) -> str:
        return "ReachIndex({}, {} pairs, {} active)".format(
            self._engine, len(self), len(self._active))


class _Saturation(object):
    """
    Worklist saturation of a pair matrix under the wrap rule, the bullet
    rule and (optionally) concatenation. Every pair on the worklist is
    already set in the matrix.
    """

    def __init__(self, graph: LabeledGraph, active: Sequence[int],
                 matrix: np.ndarray, concat: bool):
        self._graph = graph
        self._active = list(active)
        self._pos = {v: i for i, v in enumerate(self._active)}
        self._matrix = matrix
        self._concat = concat
        self._worklist = []
        self.pops = 0

        k = len(self._active)
        self._opens_into = [{} for _ in range(k)]
        self._closes_from = [{} for _ in range(k)]
        self._bullets = []
        for u, label, v in graph.edges():
            pu = self._pos[u]
            pv = self._pos[v]
            if label.is_open:
                self._opens_into[pv].setdefault(label.letter, []).append(pu)
            elif label.is_close:
                self._closes_from[pu].setdefault(label.letter, []).append(pv)
            else:
                self._bullets.append((pu, pv))

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def position(self, vertex: int) -> int:
        return self._pos[vertex]

    def add(self, a: int, b: int) -> None:
        if not self._matrix[a, b]:
            self._matrix[a, b] = True
            self._worklist.append((a, b))

    def push(self, a: int, b: int) -> None:
        self._worklist.append((a, b))

    def seed_fresh(self) -> None:
        for p in range(len(self._active)):
            self._matrix[p, p] = True
            self._worklist.append((p, p))
        for pu, pv in self._bullets:
            self.add(pu, pv)

    def seed_edge(self, u: int, label: Label, v: int) -> None:
        """
        Queue what a freshly inserted edge can take part in: the stored
        pairs it can wrap, or the pair it stands for if it is a bullet.
        """
        orientations = [(u, v)]
        if not self._graph.directed and u != v:
            orientations.append((v, u))
        for x, y in orientations:
            px = self._pos[x]
            py = self._pos[y]
            if label.is_open:
                for b in np.flatnonzero(self._matrix[py]).tolist():
                    self.push(py, b)
            elif label.is_close:
                for a in np.flatnonzero(self._matrix[:, px]).tolist():
                    self.push(a, px)
            else:
                self.add(px, py)

    def run(self) -> None:
        matrix = self._matrix
        worklist = self._worklist
        while worklist:
            a, b = worklist.pop()
            self.pops += 1
            wrappers = self._opens_into[a]
            if wrappers:
                closers = self._closes_from[b]
                for letter, sources in wrappers.items():
                    targets = closers.get(letter)
                    if not targets:
                        continue
                    for u in sources:
                        for v in targets:
                            self.add(u, v)
            if not self._concat:
                continue
            # (a, b) then (b, c)
            fresh = np.flatnonzero(matrix[b] & ~matrix[a])
            if fresh.size:
                matrix[a, fresh] = True
                worklist.extend((a, c) for c in fresh.tolist())
            # (c, a) then (a, b)
            fresh = np.flatnonzero(matrix[:, a] & ~matrix[:, b])
            if fresh.size:
                matrix[fresh, b] = True
                worklist.extend((c, b) for c in fresh.tolist())


def _check_alphabet(inst: Instance, dyck: bool) -> None:
    alphabet = inst.graph.alphabet
    if alphabet.is_dyck != dyck:
        raise AlphabetMismatchError(
            "expected a {} alphabet, instance has {}".format(
                "dyck" if dyck else "neardyck", alphabet.header()))


def _saturate(inst: Instance, concat: bool, engine: str) -> ReachIndex:
    graph = inst.graph
    active = graph.active_vertices()
    matrix = np.zeros((len(active), len(active)), dtype=bool)
    sat = _Saturation(graph, active, matrix, concat)
    sat.seed_fresh()
    sat.run()
    logger.debug("%s: %d pairs over %d active vertices after %d pops",
                 engine, int(matrix.sum()), len(active), sat.pops)
    return ReachIndex(graph.vertex_count, active, matrix, fingerprint(inst),
                      engine)


def solve_dyck(inst: Instance) -> ReachIndex:
    """
    Dyck reachability between all pairs of vertices. Undirected edges are
    walked in both directions with the same label.
    :param inst: an instance over a dyck(n) alphabet
    :return: the pairs joined by a path labeled with a Dyck word
    """
    _check_alphabet(inst, True)
    return _saturate(inst, True, ENGINE_DYCK)


def solve_dyck_wrap_only(inst: Instance) -> ReachIndex:
    """
    The least pair set containing the identity and closed under the wrap
    rule alone. It misses pairs that need two balanced blocks side by side,
    such as l1 l1bar l2 l2bar.
    """
    _check_alphabet(inst, True)
    return _saturate(inst, False, ENGINE_WRAP_ONLY)


def solve_near_dyck(inst: Instance) -> ReachIndex:
    """
    Near-Dyck reachability: Dyck reachability where bullet edges may be
    crossed freely.
    :param inst: an instance over a neardyck(m) alphabet
    :return: the pairs joined by a path labeled with a near-Dyck word
    """
    _check_alphabet(inst, False)
    return _saturate(inst, True, ENGINE_NEAR_DYCK)


_SOLVERS = {
    ENGINE_DYCK: solve_dyck,
    ENGINE_WRAP_ONLY: solve_dyck_wrap_only,
    ENGINE_NEAR_DYCK: solve_near_dyck,
}


def resolve_after_update(index: ReachIndex, inst: Instance,
                         op: UpdateOp) -> ReachIndex:
    """
    Bring an index up to date with one update. Insertions continue the
    saturation from the old pair set; deletions start over.
    :param index: an index computed for `inst`
    :param inst: the instance before `op`
    :param op: the update to apply
    :return: an index equal to solving the updated instance from scratch
    """
    if index.graph_fingerprint != fingerprint(inst):
        raise FingerprintMismatchError(
            "index was computed for a different instance")
    if op.kind == OpKind.QUERY:
        return index
    updated = apply_update(inst, op)
    if op.kind == OpKind.DEL or index.engine not in _SOLVERS:
        return solve_for(updated, index.engine)

    graph = updated.graph
    u, label, v = op.edge
    active = sorted(set(index.active) | {u, v})
    matrix = np.zeros((len(active), len(active)), dtype=bool)
    pos = {x: i for i, x in enumerate(active)}
    old = np.array([pos[x] for x in index.active], dtype=np.intp)
    if old.size:
        matrix[np.ix_(old, old)] = index.matrix
    sat = _Saturation(graph, active, matrix, index.engine != ENGINE_WRAP_ONLY)
    for x in {u, v}:
        if x not in index.active:
            p = sat.position(x)
            matrix[p, p] = True
            sat.push(p, p)
    sat.seed_edge(u, label, v)
    sat.run()
    logger.debug("incremental %s: %d pops", index.engine, sat.pops)
    return ReachIndex(graph.vertex_count, active, matrix, fingerprint(updated),
                      index.engine)


Symbol = Union[str, Label]


class Production(NamedTuple):
    head: str
    body: Tuple[Symbol, ...]


@dataclass(frozen=True)
class Grammar:
    """
    A context-free grammar in binary normal form: every production is
    A -> eps, A -> a or A -> B C.
    """
    alphabet: Alphabet
    productions: Tuple[Production, ...]
    start: str

    def __post_init__(self):
        heads = self.nonterminals
        if self.start not in heads:
            raise GrammarError("start symbol {} has no production".format(
                self.start))
        for prod in self.productions:
            body = prod.body
            if len(body) == 0:
                continue
            if len(body) == 1 and isinstance(body[0], Label):
                if body[0] not in self.alphabet:
                    raise AlphabetMismatchError(
                        "terminal {} outside {}".format(
                            body[0], self.alphabet.header()))
                continue
            if (len(body) == 2 and all(isinstance(s, str) for s in body)
                    and all(s in heads for s in body)):
                continue
            raise GrammarError("production {} -> {} is not in binary normal "
                               "form".format(prod.head, body))

    @property
    def nonterminals(self) -> FrozenSet[str]:
        return frozenset(p.head for p in self.productions)

    def nullable(self, nonterminal: str) -> bool:
        return Production(nonterminal, ()) in self.productions


def _bracket_productions(letters: Iterable[int]) -> List[Production]:
    # S -> eps | S S | O_k P_k ; P_k -> S C_k ; O_k -> l_k ; C_k -> l_k bar
    prods = [Production("S", ()), Production("S", ("S", "S"))]
    for k in letters:
        o, p, c = "O{}".format(k), "P{}".format(k), "C{}".format(k)
        prods.append(Production("S", (o, p)))
        prods.append(Production(p, ("S", c)))
        prods.append(Production(o, (opening(k),)))
        prods.append(Production(c, (closing(k),)))
    return prods


def dyck_grammar(n: int) -> Grammar:
    """
    The Dyck language over n bracket pairs, in binary normal form.
    """
    alphabet = Alphabet.dyck(n)
    return Grammar(alphabet, tuple(_bracket_productions(range(1, n + 1))),
                   "S")


def near_dyck_grammar(m: int) -> Grammar:
    """
    The near-Dyck language over m letters: Dyck words with bullets
    inserted anywhere.
    """
    alphabet = Alphabet.near_dyck(m)
    prods = _bracket_productions(range(m))
    prods.append(Production("S", (BULLET,)))
    return Grammar(alphabet, tuple(prods), "S")


def solve_cfl(inst: Instance, grammar: Grammar) -> Dict[str, ReachIndex]:
    """
    Context-free reachability for every nonterminal of a grammar.
    :param inst: the instance; its alphabet must be the grammar's
    :param grammar: a grammar in binary normal form
    :return: for each nonterminal A the pairs (u, v) joined by a path whose
    label A derives
    """
    graph = inst.graph
    if graph.alphabet != grammar.alphabet:
        raise AlphabetMismatchError("grammar is over {}, instance over {}"
                                    .format(grammar.alphabet.header(),
                                            graph.alphabet.header()))
    active = graph.active_vertices()
    pos = {v: i for i, v in enumerate(active)}
    k = len(active)
    heads = sorted(grammar.nonterminals)
    sets = {a: np.zeros((k, k), dtype=bool) for a in heads}

    as_left = {a: [] for a in heads}
    as_right = {a: [] for a in heads}
    by_terminal = {}
    worklist = []

    def add(a, pu, pv):
        if not sets[a][pu, pv]:
            sets[a][pu, pv] = True
            worklist.append((a, pu, pv))

    for prod in grammar.productions:
        if len(prod.body) == 2:
            left, right = prod.body
            as_left[left].append((prod.head, right))
            as_right[right].append((prod.head, left))
        elif len(prod.body) == 1:
            by_terminal.setdefault(prod.body[0], []).append(prod.head)
        else:
            for p in range(k):
                add(prod.head, p, p)

    for u, label, v in graph.edges():
        for head in by_terminal.get(label, ()):
            add(head, pos[u], pos[v])

    pops = 0
    while worklist:
        b, pu, pv = worklist.pop()
        pops += 1
        for head, right in as_left[b]:
            fresh = np.flatnonzero(sets[right][pv] & ~sets[head][pu])
            for w in fresh.tolist():
                add(head, pu, w)
        for head, left in as_right[b]:
            fresh = np.flatnonzero(sets[left][:, pu] & ~sets[head][:, pv])
            for w in fresh.tolist():
                add(head, w, pv)
    logger.debug("cfl: %d pops over %d active vertices", pops, k)

    print_id = fingerprint(inst)
    return {a: ReachIndex(graph.vertex_count, active, sets[a], print_id,
                          ENGINE_CFL, grammar.nullable(a))
            for a in heads}


def solve_with_grammar(inst: Instance) -> ReachIndex:
    """
    :return: the start-symbol pairs of the Dyck or near-Dyck grammar that
    matches the instance's alphabet
    """
    alphabet = inst.graph.alphabet
    if alphabet.is_dyck:
        grammar = dyck_grammar(alphabet.size)
    else:
        grammar = near_dyck_grammar(alphabet.size)
    return solve_cfl(inst, grammar)[grammar.start]


def solve_for(inst: Instance, engine: Optional[str] = None) -> ReachIndex:
    """
    Solve with a named engine, defaulting to the saturation that fits the
    instance's alphabet.
    """
    if engine is None:
        engine = ENGINE_DYCK if inst.graph.alphabet.is_dyck \
            else ENGINE_NEAR_DYCK
    if engine == ENGINE_CFL:
        return solve_with_grammar(inst)
    if engine not in _SOLVERS:
        raise InstanceKindError("unknown engine '{}'".format(engine))
    return _SOLVERS[engine](inst)
