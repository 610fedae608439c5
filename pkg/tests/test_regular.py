import pytest

from graph_model import closing, opening
from oracle import iter_words, matches_expression
from regular import EXPRESSIONS, LETTERS, ONE_ZERO_VARPI_PLUS, \
    SEGMENT_SHAPES, automaton, lookup, segment_shape
from word_lab import PHI_UNDIRECTED, in_regular, parse_bits, reduce


@pytest.mark.parametrize("name", sorted(EXPRESSIONS))
def test_every_expression_accepts_the_empty_word(name):
    assert automaton(lookup(name)).accepts(())


@pytest.mark.parametrize("text, name, expected", [
    ("0 0", "omega+", True),
    ("1 1 0 0", "omega+", True),
    ("0", "omega+", False),
    ("0bar 0", "omega+", False),
    ("0bar 0", "omega", True),
    ("0bar 0bar 0 0", "omega", True),
    ("0 0bar", "omega", False),
    ("1bar 1bar", "omega-", True),
    ("1 1", "varpi+", True),
    ("1 0 0 1", "varpi+", True),
    ("1", "varpi+", False),
    ("1bar", "varpi-", False),
    ("1 1bar", "varpi", True),
    ("0bar 0 1 0 0 1bar", "varpi", True),
    ("1bar 1", "varpi", False),
])
def test_examples(text, name, expected):
    assert in_regular(parse_bits(text), name) == expected


@pytest.mark.parametrize("name", sorted(EXPRESSIONS))
def test_automaton_agrees_with_expression(name):
    expr = lookup(name)
    machine = automaton(expr)
    for w in iter_words(LETTERS, 5):
        assert machine.accepts(w) == matches_expression(w, expr), w


@pytest.mark.parametrize("key", sorted(SEGMENT_SHAPES))
def test_shape_automaton_agrees_with_expression(key):
    expr = SEGMENT_SHAPES[key]
    machine = automaton(expr)
    for w in iter_words(LETTERS, 5):
        assert machine.accepts(w) == matches_expression(w, expr), w


def test_listed_words_are_accepted_and_ordered():
    machine = automaton(lookup("varpi"))
    words = list(machine.words(4))
    assert words[0] == ()
    assert [len(w) for w in words] == sorted(len(w) for w in words)
    assert all(machine.accepts(w) for w in words)
    assert len(set(words)) == len(words)


@pytest.mark.parametrize("label", [opening(1), closing(1), opening(2),
                                   closing(2)])
def test_shapes_cover_the_encodings(label):
    image = reduce(PHI_UNDIRECTED[label])
    assert automaton(segment_shape(label)).accepts(image)


def test_shape_examples():
    assert automaton(segment_shape(opening(1))).accepts(
        parse_bits("1 1 0 0 1 1 1 0"))
    assert not automaton(segment_shape(opening(1))).accepts(
        parse_bits("1 1 0 0 1 1 1"))
    assert automaton(ONE_ZERO_VARPI_PLUS).accepts(parse_bits("1 0 1 1"))


def test_unknown_expression():
    with pytest.raises(KeyError):
        lookup("sigma")


def test_automata_are_built_once():
    assert automaton(lookup("omega")) is automaton(lookup("omega"))
