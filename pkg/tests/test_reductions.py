import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfl_reach import solve_dyck, solve_near_dyck
from constants import GADGET_INTERIOR
from errors import AlphabetMismatchError, InstanceKindError, \
    MissingPartitionError
from graph_model import BULLET, Alphabet, Edge, Gate, Instance, \
    LabeledGraph, OpKind, UpdateOp, apply_update, closing, opening, \
    parse_script
from oracle import EnumerationBudget, dyck_paths, path_label
from reductions import AnswerTracker, ReductionChain, ReductionKind, \
    compile_alt_to_neardyck, compile_dyck2_to_undirected, \
    compile_neardyck_to_dyck2, compile_reduction, format_vertex_map, \
    fuzz_equivalence, run_equivalence, source_engine, target_engine, \
    translate_updates, translation_bounds
from regular import ONE, ONE_BAR, ZERO, ZERO_BAR
from word_lab import PHI_UNDIRECTED, phi_neardyck_letter
from .conftest import data_path
from .strategies import alternating_instances, instances, \
    near_dyck_instances

L1 = opening(1)
DYCK2 = Alphabet.dyck(2)


def script(name, inst):
    with open(data_path(name)) as f:
        return parse_script(f.read(), inst.graph.alphabet)


def labels_of(path):
    return tuple(e.label for e in path)


def test_fig1_target_shape(fig1):
    red = compile_alt_to_neardyck(fig1)
    target = red.target
    assert target.graph.vertex_count == 5 + 2 * 6
    assert target.graph.alphabet == Alphabet.near_dyck(5)
    assert (target.source, target.sink) == (4, 0)
    assert solve_near_dyck(target).query(4, 0)


def test_fig1_gates_translate_differently(fig1):
    red = compile_alt_to_neardyck(fig1)
    or_toggle = red.translate(UpdateOp.delete(1, L1, 3))
    assert or_toggle == [UpdateOp.delete(3, BULLET, 1)]
    and_toggle = red.translate(UpdateOp.delete(2, L1, 4))
    start = red.vertex_map[(2, 4)]
    end = red.vertex_map[(2, 5)]
    assert and_toggle == [UpdateOp.delete(start, closing(4), end),
                          UpdateOp.ins(start, BULLET, end)]


def test_inn_path_lives_in_target(fig1):
    red = compile_alt_to_neardyck(fig1)
    path = red.inn_path(2)
    assert len(path) == 5 + 2
    assert all(red.target.graph.has_edge(e) for e in path)
    assert [e.label for e in path[1:-1]] == [BULLET, closing(1), BULLET,
                                             BULLET, closing(4)]


def test_alt_source_checks(fig1, fig2):
    with pytest.raises(MissingPartitionError):
        compile_alt_to_neardyck(fig2)
    wide = Instance(LabeledGraph(True, 2, DYCK2, [Edge(0, opening(2), 1)]),
                    0, 1, (Gate.OR, Gate.AND))
    with pytest.raises(AlphabetMismatchError):
        compile_alt_to_neardyck(wide)
    red = compile_alt_to_neardyck(fig1)
    with pytest.raises(AlphabetMismatchError):
        red.translate(UpdateOp.ins(0, closing(1), 4))


def test_kind_checks(fig2, bullets):
    with pytest.raises(AlphabetMismatchError):
        compile_neardyck_to_dyck2(fig2)
    with pytest.raises(AlphabetMismatchError):
        compile_dyck2_to_undirected(bullets)
    flat = Instance(LabeledGraph(False, 2, DYCK2), 0, 1)
    with pytest.raises(InstanceKindError):
        compile_dyck2_to_undirected(flat)
    with pytest.raises(ValueError):
        compile_reduction("sideways", fig2)


def test_near_dyck_layout(bullets):
    red = compile_neardyck_to_dyck2(bullets)
    layout = red.vertex_map
    assert len(layout) == 2 * 4 + 4 * 2 * 2 * 3
    assert layout[(1, BULLET)] == 5
    name = (3, closing(1), 2)
    assert layout.decode(layout[name]) == name
    assert list(layout)[layout[name]] == name
    assert layout.format_name(name) == "(3,v1bar,2)"
    with pytest.raises(KeyError):
        layout[(0, opening(2), 0)]
    with pytest.raises(KeyError):
        layout[9]


def test_near_dyck_paths_spell_the_encoding(bullets):
    red = compile_neardyck_to_dyck2(bullets)
    for edge in bullets.graph.edges():
        path = red.psi_path(edge)
        assert labels_of(path) == phi_neardyck_letter(edge.label, 2)
        assert all(red.target.graph.has_edge(e) for e in path)
        assert path[0].source == edge.source
        assert path[-1].target == edge.target
    assert solve_dyck(red.target).query(0, 3)


def test_fig2_undirected_target(fig2):
    red = compile_dyck2_to_undirected(fig2)
    target = red.target
    assert target.graph.vertex_count == 178
    assert not target.graph.directed
    assert target.graph.edge_count() == 2 * 12
    assert solve_dyck(target).query(0, 0)
    path = red.psi_path(Edge(0, L1, 1))
    assert labels_of(path) == PHI_UNDIRECTED[L1]
    assert path[5].source == red.vertex_map[(0, L1, 1, 5)]
    assert red.vertex_map.decode(path[5].source) == (0, L1, 1, 5)


def test_vertex_map_file(fig2):
    red = compile_dyck2_to_undirected(fig2)
    lines = format_vertex_map(red).splitlines()
    assert len(lines) == 178
    assert lines[0] == "0 0"
    assert lines[2] == "(0,l1,0,1) 2"


def test_translation_sizes(fig2):
    red = compile_dyck2_to_undirected(fig2)
    ops = red.translate(UpdateOp.ins(0, opening(2), 1))
    assert len(ops) == GADGET_INTERIOR + 1
    assert all(op.kind == OpKind.INS for op in ops)
    assert red.translate(UpdateOp.query()) == [UpdateOp.query()]
    assert translation_bounds(red) == (12, 12)


@pytest.mark.parametrize("kind, bounds", [
    (ReductionKind.ALT_TO_NEAR_DYCK, (1, 2)),
    (ReductionKind.NEAR_DYCK_TO_DYCK2, (1, 1)),
    (ReductionKind.DYCK2_TO_UNDIRECTED, (12, 12)),
])
def test_translation_bounds(kind, bounds):
    source = {
        ReductionKind.ALT_TO_NEAR_DYCK: Instance(
            LabeledGraph(True, 1, Alphabet.dyck(1)), 0, 0, (Gate.AND,)),
        ReductionKind.NEAR_DYCK_TO_DYCK2: Instance(
            LabeledGraph(True, 1, Alphabet.near_dyck(1)), 0, 0),
        ReductionKind.DYCK2_TO_UNDIRECTED: Instance(
            LabeledGraph(True, 1, DYCK2), 0, 0),
    }[kind]
    assert translation_bounds(compile_reduction(kind, source)) == bounds


def _images_stay_in_step(red, inst, op):
    translated = red.translate(op)
    low, high = translation_bounds(red)
    assert low <= len(translated) <= high
    target = red.target
    for target_op in translated:
        target = apply_update(target, target_op)
    fresh = compile_reduction(red.kind, apply_update(inst, op))
    assert target == fresh.target
    undo = red.translate(op.inverse())
    assert set(undo) == {t.inverse() for t in translated}


@settings(max_examples=40)
@given(st.data())
def test_alt_translation_matches_recompile(data):
    inst = data.draw(alternating_instances(max_vertices=4))
    n = inst.graph.vertex_count
    edge = Edge(data.draw(st.integers(0, n - 1)), L1,
                data.draw(st.integers(0, n - 1)))
    kind = OpKind.DEL if inst.graph.has_edge(edge) else OpKind.INS
    _images_stay_in_step(compile_alt_to_neardyck(inst), inst,
                         UpdateOp(kind, edge))


@settings(max_examples=40)
@given(st.data())
def test_near_dyck_translation_matches_recompile(data):
    inst = data.draw(near_dyck_instances(max_vertices=3, max_letters=2))
    edge = data.draw(st.sampled_from(inst.graph.edges())) \
        if inst.graph.edge_count() else None
    if edge is None:
        edge = Edge(0, BULLET, 0)
        op = UpdateOp(OpKind.INS, edge)
    else:
        op = UpdateOp(OpKind.DEL, edge)
    _images_stay_in_step(compile_neardyck_to_dyck2(inst), inst, op)


@settings(max_examples=30)
@given(instances(DYCK2, max_vertices=3, max_edges=4))
def test_undirected_translation_matches_recompile(inst):
    edge = Edge(0, opening(2), inst.graph.vertex_count - 1)
    kind = OpKind.DEL if inst.graph.has_edge(edge) else OpKind.INS
    _images_stay_in_step(compile_dyck2_to_undirected(inst), inst,
                         UpdateOp(kind, edge))


def test_fig1_equivalence(fig1):
    red = compile_alt_to_neardyck(fig1)
    run = run_equivalence(red, script("fig1.script", fig1))
    assert run.passed
    assert [(src, dst) for _, src, dst in run.answers] == [
        (True, True), (False, False), (True, True)]
    assert run.counts == [0, 1, 0, 1, 0]


def test_fig2_equivalence(fig2):
    red = compile_dyck2_to_undirected(fig2)
    run = run_equivalence(red, script("fig2.script", fig2))
    assert run.passed
    assert [src for _, src, _ in run.answers] == [True, True, True]
    assert run.counts == [0, 12, 0, 12, 12, 0]


def test_bullets_equivalence(bullets):
    red = compile_neardyck_to_dyck2(bullets)
    run = run_equivalence(red, script("bullets.script", bullets))
    assert run.passed
    assert run.answers


def test_engines(fig1, fig2, bullets):
    assert source_engine(compile_alt_to_neardyck(fig1)) == "alternating"
    assert target_engine(compile_alt_to_neardyck(fig1)) == "neardyck"
    assert source_engine(compile_neardyck_to_dyck2(bullets)) == "neardyck"
    assert target_engine(compile_dyck2_to_undirected(fig2)) == "dyck"


def test_answer_tracker_drops_index_on_delete(chain4):
    tracker = AnswerTracker(chain4, "dyck")
    assert tracker.answer()
    tracker.apply(UpdateOp.delete(1, closing(1), 2))
    assert tracker.index() is not None
    assert not tracker.answer()
    tracker.apply(UpdateOp.ins(1, closing(1), 2))
    assert tracker.answer()


def test_chain_of_two():
    small = Instance(LabeledGraph(True, 2, Alphabet.dyck(1),
                                  [Edge(0, L1, 1)]), 0, 1,
                     (Gate.AND, Gate.OR))
    chain = ReductionChain(small, ["alt_to_neardyck", "neardyck_to_dyck2"])
    assert chain.kinds == (ReductionKind.ALT_TO_NEAR_DYCK,
                           ReductionKind.NEAR_DYCK_TO_DYCK2)
    assert chain.source is small
    assert chain.target.graph.alphabet == DYCK2
    assert translation_bounds(chain) == (1, 2)
    ops = [UpdateOp.query(), UpdateOp.delete(0, L1, 1), UpdateOp.query(),
           UpdateOp.ins(0, L1, 0), UpdateOp.query()]
    run = run_equivalence(chain, ops)
    assert run.passed
    assert [src for _, src, _ in run.answers] == [True, True, False]
    assert len(translate_updates(chain, ops)) == sum(run.counts) + 3
    with pytest.raises(ValueError):
        ReductionChain(small, [])


@pytest.mark.parametrize("kind", list(ReductionKind))
def test_fuzz_small(kind):
    runs = fuzz_equivalence(kind, random.Random(7), runs=4, script_length=10)
    assert len(runs) == 4
    assert all(run.passed for run in runs)


@pytest.mark.slow
@pytest.mark.parametrize("kind", list(ReductionKind))
def test_fuzz_acceptance(kind):
    runs = fuzz_equivalence(kind, random.Random(20170406))
    assert all(run.passed for run in runs)


def test_full_chain():
    small = Instance(LabeledGraph(True, 2, Alphabet.dyck(1),
                                  [Edge(1, L1, 0)]), 0, 1,
                     (Gate.OR, Gate.OR))
    chain = ReductionChain(small, list(ReductionKind))
    assert translation_bounds(chain) == (12, 24)
    run = run_equivalence(chain, [UpdateOp.query(),
                                  UpdateOp.ins(0, L1, 1),
                                  UpdateOp.query()])
    assert run.passed
    assert [src for _, src, _ in run.answers] == [False, True]


LOCK_FACTORS = {(ONE, ZERO_BAR), (ZERO, ONE_BAR)}
LOCK_BUDGET = EnumerationBudget(40, 400, 20000)


def crosses_a_lock_backwards(word):
    return any(pair in LOCK_FACTORS for pair in zip(word, word[1:]))


def dyck_paths_between_originals(red, sources):
    for s in range(sources):
        for t in range(sources):
            yield from dyck_paths(red.target, s, t, LOCK_BUDGET).paths


def test_dyck_paths_in_fig2_gadget_respect_locks(fig2):
    red = compile_dyck2_to_undirected(fig2)
    paths = list(dyck_paths_between_originals(red, 2))
    assert paths
    for path in paths:
        assert not crosses_a_lock_backwards(path_label(path))


@settings(max_examples=10)
@given(instances(DYCK2, max_vertices=2, max_edges=2))
def test_dyck_paths_in_compiled_gadgets_respect_locks(inst):
    red = compile_dyck2_to_undirected(inst)
    for path in dyck_paths_between_originals(red, inst.graph.vertex_count):
        assert not crosses_a_lock_backwards(path_label(path))
