"""
Regular expressions over the four letters 0, 0bar, 1, 1bar and their
Thompson automata.

The letters are the dyck(2) labels: 0 is l1, 1 is l2. Membership is decided
by simulating the automaton on sets of states; `Automaton.words` lists the
accepted words up to a length bound.
"""
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, Tuple

from graph_model import Label, Word, closing, opening

ZERO = opening(1)
ZERO_BAR = closing(1)
ONE = opening(2)
ONE_BAR = closing(2)
LETTERS = (ZERO, ZERO_BAR, ONE, ONE_BAR)


class Expr(object):
    """
    Base of the expression combinators. `a + b` is alternation, `a * b`
    concatenation.
    """

    def __add__(self, other: "Expr") -> "Expr":
        return Alt((self, other))

    def __mul__(self, other: "Expr") -> "Expr":
        return Cat((self, other))

    def star(self) -> "Expr":
        return Star(self)


@dataclass(frozen=True)
class Sym(Expr):
    label: Label


@dataclass(frozen=True)
class Cat(Expr):
    parts: Tuple[Expr, ...]


@dataclass(frozen=True)
class Alt(Expr):
    parts: Tuple[Expr, ...]


@dataclass(frozen=True)
class Star(Expr):
    inner: Expr


def word(*labels: Label) -> Expr:
    return Cat(tuple(Sym(label) for label in labels))


def cat(*parts: Expr) -> Expr:
    return Cat(tuple(parts))


def alt(*parts: Expr) -> Expr:
    return Alt(tuple(parts))


class Automaton(object):
    """
    A nondeterministic automaton with epsilon moves, built by Thompson's
    construction: one start state, one accepting state.
    """

    def __init__(self, expr: Expr):
        self._eps = []
        self._moves = []
        self.start, self.accept = self._build(expr)
        self._closures = {}

    def _state(self) -> int:
        self._eps.append([])
        self._moves.append({})
        return len(self._eps) - 1

    def _build(self, expr: Expr) -> Tuple[int, int]:
        if isinstance(expr, Sym):
            s, f = self._state(), self._state()
            self._moves[s].setdefault(expr.label, []).append(f)
            return s, f
        if isinstance(expr, Cat):
            s = self._state()
            f = s
            for part in expr.parts:
                ps, pf = self._build(part)
                self._eps[f].append(ps)
                f = pf
            return s, f
        if isinstance(expr, Alt):
            s, f = self._state(), self._state()
            for part in expr.parts:
                ps, pf = self._build(part)
                self._eps[s].append(ps)
                self._eps[pf].append(f)
            return s, f
        if isinstance(expr, Star):
            s, f = self._state(), self._state()
            ps, pf = self._build(expr.inner)
            self._eps[s].extend((ps, f))
            self._eps[pf].extend((ps, f))
            return s, f
        raise TypeError("not an expression: {!r}".format(expr))

    @property
    def state_count(self) -> int:
        return len(self._eps)

    def _closure(self, states: Iterable[int]) -> FrozenSet[int]:
        key = frozenset(states)
        cached = self._closures.get(key)
        if cached is not None:
            return cached
        seen = set(key)
        stack = list(key)
        while stack:
            for nxt in self._eps[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        result = frozenset(seen)
        self._closures[key] = result
        return result

    def initial(self) -> FrozenSet[int]:
        return self._closure([self.start])

    def step(self, states: FrozenSet[int], label: Label) -> FrozenSet[int]:
        targets = []
        for q in states:
            targets.extend(self._moves[q].get(label, ()))
        return self._closure(targets)

    def accepts(self, w: Iterable[Label]) -> bool:
        states = self.initial()
        for label in w:
            states = self.step(states, label)
            if not states:
                return False
        return self.accept in states

    def words(self, max_len: int) -> Iterator[Word]:
        """
        :param max_len: the longest word to list
        :return: accepted words of length at most max_len, shortest first,
                then in letter order
        """
        layer = [((), self.initial())]
        for length in range(max_len + 1):
            for w, states in layer:
                if self.accept in states:
                    yield w
            if length == max_len:
                break
            nxt = []
            for w, states in layer:
                for label in LETTERS:
                    moved = self.step(states, label)
                    if moved:
                        nxt.append((w + (label,), moved))
            layer = nxt


def _pairs(*labels: Label) -> Expr:
    return alt(*(word(label, label) for label in labels))


OMEGA_PLUS = _pairs(ZERO, ONE).star()
OMEGA_MINUS = _pairs(ZERO_BAR, ONE_BAR).star()
OMEGA = alt(OMEGA_PLUS, OMEGA_MINUS, word(ZERO_BAR, ZERO)).star()
VARPI_PLUS = cat(cat(OMEGA_PLUS, Sym(ONE), OMEGA_PLUS, Sym(ONE)).star(),
                 OMEGA_PLUS)
VARPI_MINUS = cat(cat(OMEGA_MINUS, Sym(ONE_BAR), OMEGA_MINUS,
                      Sym(ONE_BAR)).star(), OMEGA_MINUS)
VARPI = cat(cat(OMEGA, Sym(ONE), OMEGA, Sym(ONE_BAR)).star(), OMEGA)

EXPRESSIONS = {
    "omega+": OMEGA_PLUS,
    "omega-": OMEGA_MINUS,
    "omega": OMEGA,
    "varpi+": VARPI_PLUS,
    "varpi-": VARPI_MINUS,
    "varpi": VARPI,
}

# reduced labels of the nominal segments crossing one edge gadget
SEGMENT_SHAPES = {
    (1, True): cat(VARPI, word(ONE, ONE, ZERO, ZERO), OMEGA_PLUS,
                   word(ONE, ZERO)),
    (2, True): cat(VARPI, Sym(ONE), OMEGA_PLUS, word(ZERO, ZERO, ONE, ONE),
                   OMEGA_PLUS, Sym(ZERO)),
    (1, False): cat(word(ZERO_BAR, ONE_BAR), OMEGA_MINUS,
                    word(ZERO_BAR, ZERO_BAR, ONE_BAR, ONE_BAR), VARPI),
    (2, False): cat(Sym(ZERO_BAR), OMEGA_MINUS, word(ONE_BAR, ONE_BAR,
                                                     ZERO_BAR, ZERO_BAR),
                    OMEGA_MINUS, Sym(ONE_BAR), VARPI),
}

ONE_ZERO_VARPI_PLUS = cat(word(ONE, ZERO), VARPI_PLUS)
VARPI_MINUS_ZERO_ONE_BAR = cat(VARPI_MINUS, word(ZERO_BAR, ONE_BAR))

_automata = {}


def automaton(expr: Expr) -> Automaton:
    """
    :return: the automaton of an expression, built once per expression
    """
    found = _automata.get(expr)
    if found is None:
        found = Automaton(expr)
        _automata[expr] = found
    return found


def segment_shape(label: Label) -> Expr:
    return SEGMENT_SHAPES[(label.letter, label.is_open)]


def lookup(name: str) -> Expr:
    try:
        return EXPRESSIONS[name]
    except KeyError:
        raise KeyError("unknown expression '{}', expected one of {}".format(
            name, ", ".join(EXPRESSIONS)))
