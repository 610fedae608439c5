import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfl_reach import ENGINE_CFL, ENGINE_DYCK, ENGINE_WRAP_ONLY, Grammar, \
    Production, dyck_grammar, resolve_after_update, solve_cfl, solve_dyck, \
    solve_dyck_wrap_only, solve_for, solve_near_dyck, solve_with_grammar
from constants import DEFAULT_SEED
from errors import AlphabetMismatchError, FingerprintMismatchError, \
    GrammarError, InstanceKindError
from graph_model import BULLET, Alphabet, Edge, Instance, LabeledGraph, \
    UpdateOp, apply_update, closing, opening
from oracle import EnumerationBudget, brute_dyck_reach, brute_dyck_search
from util import candidate_edges, random_dyck_instance, random_script
from .strategies import dyck_instances, near_dyck_instances, scripts


def chain(directed, *labels):
    edges = [Edge(i, label, i + 1) for i, label in enumerate(labels)]
    return Instance(LabeledGraph(directed, len(labels) + 1, Alphabet.dyck(2),
                                 edges), 0, len(labels))


def test_concatenation_needs_the_full_engine(chain4):
    assert solve_dyck(chain4).query(0, 4)
    assert not solve_dyck_wrap_only(chain4).query(0, 4)
    assert solve_dyck_wrap_only(chain4).query(0, 2)
    assert solve_dyck_wrap_only(chain4).query(2, 4)


def test_chain4_pairs(chain4):
    assert solve_dyck(chain4).nontrivial_pairs() == {(0, 2), (2, 4), (0, 4)}


def test_fig2(fig2):
    index = solve_dyck(fig2)
    assert index.query(0, 0)
    assert not index.query(0, 1)
    assert index.nontrivial_pairs() == set()


def test_nesting():
    inst = chain(True, opening(1), opening(2), closing(2), closing(1))
    index = solve_dyck(inst)
    assert index.query(0, 4)
    assert index.query(1, 3)
    assert not index.query(0, 3)


def test_mismatched_letters():
    inst = chain(True, opening(1), closing(2))
    assert not solve_dyck(inst).query(0, 2)


def test_isolated_vertices_are_reflexive_only():
    inst = Instance(LabeledGraph(True, 3, Alphabet.dyck(1)), 0, 2)
    index = solve_dyck(inst)
    assert index.query(2, 2)
    assert not index.query(0, 2)
    assert len(index) == 3


def test_undirected_edges_keep_their_label():
    single = chain(False, opening(1))
    assert not solve_dyck(single).query(0, 1)
    assert solve_dyck(single).nontrivial_pairs() == set()
    both = chain(False, opening(1), closing(1))
    index = solve_dyck(both)
    assert index.query(0, 2)
    assert not index.query(2, 0)


def test_bullets_are_free(bullets):
    index = solve_near_dyck(bullets)
    assert index.query(0, 3)
    assert index.query(1, 2)
    assert not index.query(0, 2)


def test_alphabet_checks(fig2, bullets):
    with pytest.raises(AlphabetMismatchError):
        solve_dyck(bullets)
    with pytest.raises(AlphabetMismatchError):
        solve_near_dyck(fig2)
    with pytest.raises(AlphabetMismatchError):
        solve_cfl(fig2, dyck_grammar(3))
    with pytest.raises(InstanceKindError):
        solve_for(fig2, "quantum")


def test_grammar_validation():
    with pytest.raises(GrammarError):
        Grammar(Alphabet.dyck(1), (Production("T", ()),), "S")
    with pytest.raises(GrammarError):
        Grammar(Alphabet.dyck(1), (Production("S", ("S", "S", "S")),), "S")
    with pytest.raises(AlphabetMismatchError):
        Grammar(Alphabet.dyck(1), (Production("S", (BULLET,)),), "S")


def test_cfl_nonterminals(chain4):
    sets = solve_cfl(chain4, dyck_grammar(2))
    assert sets["S"].query(0, 4)
    assert sets["O1"].query(0, 1)
    assert not sets["O1"].query(0, 0)
    assert sets["P1"].query(1, 2)


@given(dyck_instances())
def test_saturation_matches_grammar(inst):
    assert solve_dyck(inst) == solve_with_grammar(inst)


@given(dyck_instances(directed=False, max_edges=8))
def test_saturation_matches_grammar_undirected(inst):
    assert solve_dyck(inst) == solve_for(inst, ENGINE_CFL)


@given(near_dyck_instances())
def test_near_dyck_matches_grammar(inst):
    assert solve_near_dyck(inst) == solve_with_grammar(inst)


@given(dyck_instances(max_vertices=4, max_edges=6))
def test_wrap_only_is_a_subset(inst):
    assert solve_dyck_wrap_only(inst).pairs() <= solve_dyck(inst).pairs()


@settings(max_examples=50)
@given(dyck_instances(max_vertices=4, max_edges=5))
def test_enumerated_paths_are_found(inst):
    budget = EnumerationBudget(8, 5000, 50000)
    assert brute_dyck_reach(inst, budget) <= solve_dyck(inst).pairs()


@settings(max_examples=40)
@given(st.data(), st.sampled_from([ENGINE_DYCK, ENGINE_WRAP_ONLY]))
def test_updates_match_fresh_solve(data, engine):
    inst = data.draw(dyck_instances(max_vertices=4))
    index = solve_for(inst, engine)
    for op in data.draw(scripts(inst, 15)):
        index = resolve_after_update(index, inst, op)
        inst = apply_update(inst, op)
        assert index == solve_for(inst, engine)


@settings(max_examples=30)
@given(st.data())
def test_near_dyck_updates_match_fresh_solve(data):
    inst = data.draw(near_dyck_instances(max_vertices=4))
    index = solve_near_dyck(inst)
    for op in data.draw(scripts(inst, 15)):
        index = resolve_after_update(index, inst, op)
        inst = apply_update(inst, op)
        assert index == solve_near_dyck(inst)


def test_stale_index_is_rejected(fig2):
    index = solve_dyck(fig2)
    moved = apply_update(fig2, UpdateOp.ins(0, opening(2), 1))
    with pytest.raises(FingerprintMismatchError):
        resolve_after_update(index, moved, UpdateOp.query())


def test_insert_joins_new_vertices():
    inst = Instance(LabeledGraph(True, 3, Alphabet.dyck(1),
                                 [Edge(0, opening(1), 1)]), 0, 2)
    index = solve_dyck(inst)
    op = UpdateOp.ins(1, closing(1), 2)
    index = resolve_after_update(index, inst, op)
    assert index.query(0, 2)
    assert index.query(2, 2)


def barred(inst: Instance) -> Instance:
    graph = inst.graph
    edges = [Edge(u, label.bar(), v) for u, label, v in graph.stored_edges()]
    return inst.with_graph(LabeledGraph(graph.directed, graph.vertex_count,
                                        graph.alphabet, edges))


@given(dyck_instances(directed=False, max_edges=8))
def test_undirected_pairs_transpose_under_bars(inst):
    pairs = solve_dyck(inst).pairs()
    assert solve_dyck(barred(inst)).pairs() == {(v, u) for u, v in pairs}


@given(st.data())
def test_adding_an_edge_keeps_every_pair(data):
    inst = data.draw(dyck_instances(directed=data.draw(st.booleans())))
    graph = inst.graph
    fresh = [e for e in candidate_edges(graph.vertex_count, graph.alphabet,
                                        graph.directed)
             if not graph.has_edge(e)]
    if not fresh:
        return
    grown = apply_update(inst, UpdateOp.ins(*data.draw(st.sampled_from(
        fresh))))
    assert solve_dyck(inst).pairs() <= solve_dyck(grown).pairs()


@pytest.mark.slow
def test_engines_agree_at_scale():
    rng = random.Random(DEFAULT_SEED)
    for _ in range(500):
        inst = random_dyck_instance(rng, rng.randint(1, 12),
                                    rng.randint(1, 3),
                                    density=rng.uniform(0.0, 0.4))
        assert solve_dyck(inst) == solve_for(inst, ENGINE_CFL)


@pytest.mark.slow
def test_brute_reach_is_sound_at_scale():
    rng = random.Random(DEFAULT_SEED)
    budget = EnumerationBudget(8, 1, 200000)
    for _ in range(200):
        inst = random_dyck_instance(rng, 8, rng.randint(1, 3),
                                    density=rng.uniform(0.02, 0.2))
        found = brute_dyck_search(inst, budget)
        assert not found.truncated
        assert found.pairs <= solve_dyck(inst).pairs()


@pytest.mark.slow
def test_updates_match_fresh_solve_at_scale():
    rng = random.Random(DEFAULT_SEED)
    for _ in range(100):
        inst = random_dyck_instance(rng, rng.randint(1, 8),
                                    rng.randint(1, 3),
                                    directed=rng.random() < 0.5)
        index = solve_dyck(inst)
        for op in random_script(rng, inst, 50):
            index = resolve_after_update(index, inst, op)
            inst = apply_update(inst, op)
            assert index == solve_dyck(inst)
