"""Partition refinement over the closed space, against the frozen trace."""

import random

import pytest

from ccpbisim import (STOP, Call, Configuration, Partition, ProcEnv, Sum,
                      ccp_partition_refine, closure, initial_partition_barbs,
                      refine_F, refine_IR, refine_space, sb_equiv,
                      std_partition_refine)
from ccpbisim.refinement import transition_redundancy
from ccpbisim.semantics import KIND_LABELED, StateSpace

from _corpus import corpus_programs
from _fixtures import (GOLDEN_BLOCK_COUNTS, GOLDEN_INITIAL_BLOCKS,
                       GOLDEN_VERDICT_FLIPS, build_example)


@pytest.fixture(scope="module")
def refined():
    system, env, initials = build_example()
    part, trace = ccp_partition_refine(initials, env)
    return system, env, initials, part, trace


def find_labeled(space, src, label, tgt):
    t, = [t for t in space.transitions
          if t.kind == KIND_LABELED and t.source.pretty() == src
          and t.label.pretty() == label and t.target.pretty() == tgt]
    return t


def test_block_counts_per_row(refined):
    _, _, _, part, trace = refined
    assert [p.n_blocks for p in trace.partitions] == GOLDEN_BLOCK_COUNTS
    assert trace.iterations == len(GOLDEN_BLOCK_COUNTS) - 1


def test_initial_row_groups_by_store(refined):
    _, _, _, _, trace = refined
    first = trace.partitions[0]
    assert first == initial_partition_barbs(trace.space)
    got = frozenset(frozenset(c.pretty() for c in block)
                    for block in first.blocks)
    assert got == GOLDEN_INITIAL_BLOCKS


def test_fixpoint_row_repeats(refined):
    _, _, _, part, trace = refined
    assert trace.partitions[-1].ids == trace.partitions[-2].ids
    assert part.ids == trace.partitions[-1].ids


def test_rows_refine_monotonically(refined):
    _, _, _, _, trace = refined
    for before, after in zip(trace.partitions, trace.partitions[1:]):
        assert after.refines(before)


def test_verdicts_flip_as_blocks_split(refined):
    _, _, _, _, trace = refined
    for (src, label, tgt), flips in GOLDEN_VERDICT_FLIPS.items():
        t = find_labeled(trace.space, src, label, tgt)
        got = [trace.redundant(i, t) for i in range(trace.iterations)]
        assert got == flips, (src, label, tgt)


def test_together_verdicts(refined):
    system, env, initials, part, trace = refined
    rs, s, rps = initials
    assert part.together(rs, s)
    assert not part.together(rps, s)
    assert not part.together(rps, rs)


def test_sb_equiv_on_the_summand_pairs(refined):
    system, env, _, _, _ = refined
    z5 = system.atom("z_lt_5")
    pq = Configuration(Sum(Call("P"), Call("Q")), z5)
    pqp = Configuration(Sum(Call("P"), Call("Qp")), z5)
    p = Configuration(Call("P"), z5)
    assert sb_equiv(pq, p, env)
    assert not sb_equiv(pqp, p, env)


def test_iterations_within_state_bound(refined):
    _, _, _, _, trace = refined
    assert trace.iterations <= len(trace.space.states)


def test_scan_order_does_not_matter(refined):
    _, _, _, part, trace = refined
    space = trace.space
    init = initial_partition_barbs(space)
    n = len(space.states)
    for seed in range(8):
        order = list(range(n))
        random.Random(seed).shuffle(order)
        assert refine_IR(init, space, order=order).same_blocks(
            refine_IR(init, space))
        # Iterating with a fresh shuffle each round still lands on the
        # same fixpoint.
        cur = init
        rng = random.Random(100 + seed)
        for _ in range(n + 1):
            order = list(range(n))
            rng.shuffle(order)
            nxt = refine_IR(cur, space, order=order)
            if nxt.ids == cur.ids:
                break
            cur = nxt
        assert cur.same_blocks(part)


def test_classic_refiner_is_idempotent_at_its_fixpoint(refined):
    _, _, _, _, trace = refined
    space = trace.space
    final = std_partition_refine(space, initial_partition_barbs(space))
    assert refine_F(final, space).ids == final.ids


def test_classic_refiner_oversplits_the_closed_space(refined):
    system, _, _, part, trace = refined
    space = trace.space
    classic = std_partition_refine(space, initial_partition_barbs(space))
    assert classic.refines(part)
    z5 = system.atom("z_lt_5")
    pq = Configuration(Sum(Call("P"), Call("Q")), z5)
    p = Configuration(Call("P"), z5)
    assert part.together(pq, p)
    assert not classic.together(pq, p)


def test_pruned_space_classic_refinement_reproduces_fixpoint(refined):
    system, _, _, part, trace = refined
    space = trace.space
    red = transition_redundancy(part, space)
    kept = [t for k, t in enumerate(space.transitions)
            if t.kind == KIND_LABELED and not red[k]]
    pruned = StateSpace(system, space.states, kept, space.initials,
                        derived_flags=space.derived_flags)
    redone = std_partition_refine(pruned, initial_partition_barbs(pruned))
    assert redone.same_blocks(part)


def test_single_state_space_exits_immediately():
    system, env, _ = build_example()
    cfg = Configuration(STOP, system.atom("x_lt_5"))
    part, trace = ccp_partition_refine([cfg], env)
    assert len(trace.partitions) == 1
    assert trace.iterations == 0
    assert part.n_blocks == 1


def test_all_singleton_start_exits_immediately():
    system, env, _ = build_example()
    cfgs = [Configuration(STOP, system.true),
            Configuration(STOP, system.atom("y_eq_1"))]
    part, trace = ccp_partition_refine(cfgs, env)
    assert trace.iterations == 0
    assert part.n_blocks == 2


def test_barb_partition_on_corpus():
    for system, env, config, space in corpus_programs(12):
        init = initial_partition_barbs(space)
        for c1 in space.states:
            for c2 in space.states:
                assert init.together(c1, c2) == (c1.store == c2.store)


def test_partition_helpers():
    states = ("a", "b", "c", "d")
    part = Partition(states, [1, 1, 0, 2])
    assert part.ids == (0, 0, 1, 2)
    assert part.n_blocks == 3
    assert part.blocks == [["a", "b"], ["c"], ["d"]]
    assert part.together("a", "b")
    assert not part.together("a", "c")
    finer = Partition(states, [0, 1, 2, 3])
    assert finer.refines(part)
    assert not part.refines(finer)
    sub = part.restricted(lambda s: s != "b")
    assert sub.blocks == [["a"], ["c"], ["d"]]
    with pytest.raises(ValueError):
        Partition(states, [0, 0, 0])
