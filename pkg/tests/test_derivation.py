"""Domination between sibling moves and the closed state space."""

import pytest

from ccpbisim import (Ask, Call, Configuration, MissingDerivedState,
                      NotDominating, Partition, Sum, Transition, closure,
                      reachable)
from ccpbisim.derivation import (attach_dominators, derived_target, derives,
                                 derives_def, is_redundant)
from ccpbisim.lattice import leq, lub
from ccpbisim.semantics import KIND_DERIVED, KIND_LABELED

from _corpus import corpus_programs
from _fixtures import (GOLDEN_ARCS, GOLDEN_DERIVED_ARCS, GOLDEN_DERIVED_STATE,
                       GOLDEN_EXTRA_LABELED_ARC, GOLDEN_STATES, arc_set,
                       build_example, build_system)

CORPUS = corpus_programs(40)


def sibling_pair():
    """Two moves out of one source where the smaller can stand in."""
    system = build_system()
    x7 = system.atom("x_lt_7")
    x5 = system.atom("x_lt_5")
    t_proc = Call("T", ())
    src = Configuration(Sum(Ask(x7, t_proc), Ask(x5, t_proc)), system.true)
    small = Transition(src, x7, Configuration(t_proc, x7), KIND_LABELED)
    big = Transition(src, x5, Configuration(t_proc, x5), KIND_LABELED)
    return system, src, small, big


def test_derives_accepts_standin():
    system, _, small, big = sibling_pair()
    assert derives(small, big)
    assert derives_def(small, big, system)


def test_derives_rejects_reverse_and_equal():
    system, src, small, big = sibling_pair()
    assert not derives(big, small)
    assert not derives_def(big, small, system)
    assert not derives(small, small)
    assert not derives_def(small, small, system)


def test_derives_rejects_different_process():
    system, src, small, big = sibling_pair()
    other = Transition(src, big.label,
                       Configuration(Call("Tp", ()), big.label), KIND_LABELED)
    assert not derives(small, other)
    assert not derives_def(small, other, system)


def test_derives_rejects_unaccounted_store():
    system, src, small, big = sibling_pair()
    y1 = system.atom("y_eq_1")
    bigger_store = Transition(src, big.label,
                              Configuration(big.target.process,
                                            lub(big.label, y1)),
                              KIND_LABELED)
    # The label difference cannot explain the extra y atom in the store.
    assert not derives(small, bigger_store)
    assert not derives_def(small, bigger_store, system)


def test_derives_def_agrees_with_derives():
    system, src, small, big = sibling_pair()
    for t1 in (small, big):
        for t2 in (small, big):
            assert derives(t1, t2) == derives_def(t1, t2, system)


def test_derives_agreement_on_corpus():
    for system, env, config, space in CORPUS:
        for state in space.states:
            outs = space.transitions_from(state, kind=KIND_LABELED)
            for t1 in outs:
                for t2 in outs:
                    if t1 is t2:
                        continue
                    assert derives(t1, t2) == derives_def(t1, t2, system)


# -- the closed space ---------------------------------------------------------


@pytest.fixture(scope="module")
def example():
    system, env, initials = build_example()
    return system, env, initials, closure(initials, env)


@pytest.fixture(scope="module")
def closed(example):
    return example[3]


def test_closure_golden_states(closed):
    assert {c.pretty() for c in closed.states} == \
        GOLDEN_STATES | {GOLDEN_DERIVED_STATE}


def test_closure_golden_arcs(closed):
    labeled = [t for t in closed.transitions if t.kind == KIND_LABELED]
    derived = [t for t in closed.transitions if t.kind == KIND_DERIVED]
    assert arc_set(labeled) == GOLDEN_ARCS | {GOLDEN_EXTRA_LABELED_ARC}
    assert arc_set(derived) == GOLDEN_DERIVED_ARCS
    assert len(labeled) == len(GOLDEN_ARCS) + 1
    assert len(derived) == len(GOLDEN_DERIVED_ARCS)


def test_closure_flags_exactly_the_unreached(closed):
    flagged = {c.pretty() for c, f in zip(closed.states, closed.derived_flags)
               if f}
    assert flagged == {GOLDEN_DERIVED_STATE}


def test_closure_contains_reachable(example):
    system, env, initials, closed = example
    plain = reachable(initials, env)
    assert set(plain.states) <= set(closed.states)
    extra = set(closed.states) - set(plain.states)
    assert {c.pretty() for c in extra} == {GOLDEN_DERIVED_STATE}


def test_closure_explores_standin_states(closed):
    derived_state, = [c for c, f in zip(closed.states, closed.derived_flags)
                      if f]
    outs = closed.transitions_from(derived_state, kind=KIND_LABELED)
    assert [t.pretty() for t in outs] != []


def assert_fixpoint(space):
    for state in space.states:
        outs = space.transitions_from(state, kind=KIND_LABELED)
        for t2 in outs:
            for t1 in outs:
                if t1.label == t2.label or not leq(t1.label, t2.label):
                    continue
                assert derived_target(t1, t2.label) in space.index


def test_closure_is_a_fixpoint(closed):
    assert_fixpoint(closed)


def test_closure_fixpoint_on_corpus():
    for system, env, config, space in CORPUS:
        assert_fixpoint(space)


def test_closure_flags_match_plain_reachability_on_corpus():
    for system, env, config, space in CORPUS:
        flagged = {c for c, f in zip(space.states, space.derived_flags) if f}
        plain = reachable([config], env)
        assert set(space.states) - flagged == set(plain.states)


def test_dominators_follow_derived_arcs(closed):
    assert closed.dominators is not None
    assert len(closed.dominators) == len(closed.transitions)
    by_pretty = {c.pretty(): i for i, c in enumerate(closed.states)}
    for k, t in enumerate(closed.transitions):
        if t.kind != KIND_LABELED:
            assert closed.dominators[k] == ()
    for src, label, dst in GOLDEN_DERIVED_ARCS:
        matches = [k for k, t in enumerate(closed.transitions)
                   if t.kind == KIND_LABELED and t.source.pretty() == src
                   and t.label.pretty() == label]
        assert len(matches) == 1
        assert by_pretty[dst] in closed.dominators[matches[0]]


def test_is_redundant_depends_on_blocks(closed):
    src, label, dst = next(iter(GOLDEN_DERIVED_ARCS))
    t, = [t for t in closed.transitions
          if t.kind == KIND_LABELED and t.source.pretty() == src
          and t.label.pretty() == label]
    n = len(closed.states)
    coarse = Partition(closed.states, [0] * n)
    fine = Partition(closed.states, list(range(n)))
    assert is_redundant(t, coarse, closed)
    assert not is_redundant(t, fine, closed)


def test_derived_target_requires_strictly_smaller_label():
    system, src, small, big = sibling_pair()
    with pytest.raises(NotDominating):
        derived_target(big, small.label)
    with pytest.raises(NotDominating):
        derived_target(small, small.label)


def test_attach_dominators_needs_standins_present():
    system, env, initials = build_example()
    plain = reachable(initials, env)
    with pytest.raises(MissingDerivedState):
        attach_dominators(plain)


def test_closure_rejects_empty_initials():
    system, env, initials = build_example()
    with pytest.raises(ValueError):
        closure([], env)
