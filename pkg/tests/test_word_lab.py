import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from errors import AlphabetMismatchError, DecompositionError, \
    InstanceKindError, NotDyckPathError
from graph_model import BULLET, Alphabet, Edge, closing, opening
from oracle import dyck_words, is_dyck_factor, is_dyck_prefix, \
    is_dyck_word, iter_words
from reductions import compile_dyck2_to_undirected, \
    compile_neardyck_to_dyck2
from regular import LETTERS, ZERO, ZERO_BAR, automaton, lookup
from word_lab import PHI_UNDIRECTED, FreeProductElement, format_bits, \
    gamma_exponent, in_Q, in_Q_init, is_dyck, is_near_dyck, mu, \
    nominal_decompose, parse_bits, phi_neardyck, phi_neardyck_letter, \
    phi_undirected, reduce, theta
from .strategies import four_letter_words

L1, L1_BAR, L2, L2_BAR = opening(1), closing(1), opening(2), closing(2)


def test_reduce_examples():
    assert reduce(parse_bits("0 0bar")) == ()
    assert reduce(parse_bits("0bar 0")) == parse_bits("0bar 0")
    assert reduce(parse_bits("0 1 1bar 0bar")) == ()
    assert reduce(parse_bits("0 1bar")) == parse_bits("0 1bar")
    assert format_bits(reduce(PHI_UNDIRECTED[L1])) == "1 1 0 0 1 1 1 0"


def _cancel_randomly(w, rng):
    w = list(w)
    while True:
        spots = [i for i in range(len(w) - 1)
                 if w[i].is_open and w[i + 1] == w[i].bar()]
        if not spots:
            return tuple(w)
        i = rng.choice(spots)
        del w[i:i + 2]


@given(four_letter_words(14), st.randoms())
def test_reduction_order_does_not_matter(w, rng):
    assert _cancel_randomly(w, rng) == reduce(w)


def test_q_examples():
    assert not in_Q(parse_bits("1 0bar"))
    assert in_Q(parse_bits("0bar 1"))
    assert not in_Q_init(parse_bits("0bar 1"))
    assert in_Q(()) and in_Q_init(())
    assert in_Q_init(parse_bits("0 1 1 1bar"))


def test_bullets_are_rejected():
    with pytest.raises(AlphabetMismatchError):
        is_dyck((opening(0), BULLET, closing(0)))
    with pytest.raises(AlphabetMismatchError):
        in_Q((BULLET,))
    with pytest.raises(AlphabetMismatchError):
        parse_bits("0 2")


def test_near_dyck_examples():
    assert is_near_dyck((opening(1), BULLET, closing(1)))
    assert is_near_dyck((BULLET, BULLET))
    assert not is_near_dyck((opening(1), closing(2)))


def test_membership_matches_scans():
    for w in iter_words(LETTERS, 6):
        assert is_dyck(w) == is_dyck_word(w)
        assert in_Q(w) == is_dyck_factor(w)
        assert in_Q_init(w) == is_dyck_prefix(w)


@given(four_letter_words(10))
def test_q_is_closed_under_factors(w):
    if in_Q(w):
        for i in range(len(w) + 1):
            for j in range(i, len(w) + 1):
                assert in_Q(w[i:j])
    if in_Q_init(w):
        assert in_Q(w)


def test_generated_dyck_words():
    words = dyck_words(2, 8)
    assert all(is_dyck(w) for w in words)
    assert len(set(words)) == len(words)


def test_undirected_encoding():
    for label, image in PHI_UNDIRECTED.items():
        assert len(image) == 12
        if label.is_open:
            assert is_dyck(image + PHI_UNDIRECTED[label.bar()])
        else:
            assert not is_dyck(image + PHI_UNDIRECTED[label.bar()])
    assert phi_undirected((L1, L1_BAR)) == (PHI_UNDIRECTED[L1]
                                            + PHI_UNDIRECTED[L1_BAR])
    assert not is_dyck(phi_undirected((L1, L2_BAR)))
    with pytest.raises(AlphabetMismatchError):
        phi_undirected((opening(3),))


def test_undirected_encoding_keeps_dyck_words():
    for w in dyck_words(2, 4):
        assert is_dyck(phi_undirected(w))


def test_near_dyck_encoding():
    a, a_bar, b, b_bar = L1, L1_BAR, L2, L2_BAR
    assert phi_neardyck_letter(BULLET, 3) == (a, a_bar)
    assert phi_neardyck_letter(opening(1), 3) == (a, a, b, a, a)
    assert phi_neardyck_letter(closing(1), 3) == (a_bar, a_bar, b_bar,
                                                  a_bar, a_bar)
    assert len(phi_neardyck_letter(opening(0), 3)) == 5
    with pytest.raises(AlphabetMismatchError):
        phi_neardyck_letter(opening(3), 3)


def test_near_dyck_encoding_is_exact():
    near = Alphabet.near_dyck(2)
    for w in iter_words(near.labels(), 5):
        assert is_dyck(phi_neardyck(w, 2)) == is_near_dyck(w), w


def test_mu():
    assert mu(()) == 0
    assert mu(parse_bits("0 1 1bar")) == 1
    assert mu(parse_bits("0bar 1bar")) == -2
    assert mu((BULLET, opening(0))) == 1


def test_free_product():
    alpha = FreeProductElement("a")
    assert (alpha * alpha).is_identity()
    gamma = FreeProductElement.gamma()
    assert gamma.word == "ba"
    assert (gamma * gamma.inverse()).is_identity()
    assert FreeProductElement.gamma(-2) == FreeProductElement("abab")
    assert FreeProductElement("abba") == FreeProductElement.identity()
    assert str(FreeProductElement.identity()) == "1"
    assert str(gamma) == "βα"
    with pytest.raises(ValueError):
        FreeProductElement("c")


def test_theta_of_encodings():
    assert theta(parse_bits("0 0bar")).is_identity()
    assert theta(PHI_UNDIRECTED[L1]) == FreeProductElement.gamma(1)
    assert theta(PHI_UNDIRECTED[L2]) == FreeProductElement.gamma(1)
    assert theta(PHI_UNDIRECTED[L1_BAR]) == FreeProductElement.gamma(-1)
    assert theta(PHI_UNDIRECTED[L2_BAR]) == FreeProductElement.gamma(-1)


def test_theta_is_trivial_on_varpi():
    for w in automaton(lookup("varpi")).words(8):
        assert theta(w).is_identity(), format_bits(w)


@pytest.mark.parametrize("element, exponent", [
    (FreeProductElement(), 0),
    (FreeProductElement("ba"), 1),
    (FreeProductElement("baba"), 2),
    (FreeProductElement("abab"), -2),
    (FreeProductElement("a"), None),
    (FreeProductElement("bab"), None),
])
def test_gamma_exponent(element, exponent):
    assert gamma_exponent(element) == exponent


def test_decompose_a_matched_pair(fig2):
    red = compile_dyck2_to_undirected(fig2)
    path = red.psi_path(Edge(0, L1, 1)) + red.psi_path(Edge(1, L1_BAR, 0))
    found = nominal_decompose(path, red)
    assert found.vertices == (0, 1, 0)
    assert found.ancestor() == [Edge(0, L1, 1), Edge(1, L1_BAR, 0)]
    assert found.label_map() == {1: L1, 2: L1_BAR}
    assert not any(seg.is_vertex_loop for seg in found.segments)


def test_decompose_vertex_loops(fig2):
    red = compile_dyck2_to_undirected(fig2)
    layout = red.vertex_map
    first = layout[(0, L1, 1, 1)]
    last = layout[(1, L1_BAR, 0, 11)]
    path = [Edge(0, ZERO, first), Edge(first, ZERO, 0),
            Edge(0, ZERO_BAR, last), Edge(last, ZERO_BAR, 0)]
    found = nominal_decompose(path, red)
    assert found.ancestor() == []
    assert len(found.segments) == 2
    assert all(seg.is_vertex_loop for seg in found.segments)
    assert found.segments[0].label() == (ZERO, ZERO)


def test_decompose_empty_path(fig2):
    red = compile_dyck2_to_undirected(fig2)
    assert nominal_decompose([], red, start=1).vertices == (1,)
    with pytest.raises(DecompositionError):
        nominal_decompose([], red)


def test_decompose_rejects_bad_paths(fig2):
    red = compile_dyck2_to_undirected(fig2)
    with pytest.raises(NotDyckPathError):
        nominal_decompose(red.psi_path(Edge(0, L1, 1)), red)
    with pytest.raises(DecompositionError):
        nominal_decompose([Edge(0, L2, 1)], red)
    path = red.psi_path(Edge(0, L1, 1))
    with pytest.raises(DecompositionError):
        nominal_decompose(path[:1] + path[1:][::-1], red)


def test_decompose_needs_undirected_gadgets(bullets):
    red = compile_neardyck_to_dyck2(bullets)
    with pytest.raises(InstanceKindError):
        nominal_decompose([], red, start=0)


def test_random_cancellation_helper_terminates():
    w = parse_bits("0 1 1bar 0bar 1")
    assert _cancel_randomly(w, random.Random(3)) == parse_bits("1")
