"""Reference deciders, by direct greatest fixpoint.

Each equivalence is computed the slow, definitional way: build a finite
universe of candidate pairs, then repeatedly delete pairs that violate
their defining conditions until nothing changes.  The algorithmic side of
the package never feeds these; they share only the lattice kernel and the
step functions, so disagreement in tests points at a real bug.

Every equivalence here forces related configurations to carry the same
store (each store is itself a barb, so differing stores differ in barbs).
Candidate pairs are therefore stored as (left process, right process,
shared store) triples, and the saturation clause "adding any constraint
preserves relatedness" becomes upward closure in the store coordinate.
"""

from .derivation import closure
from .errors import StateSpaceExceeded
from .lattice import enumerate_con0, leq, lub
from .semantics import (DEFAULT_BOUND, KIND_LABELED, Configuration,
                        labeled_steps, reduce)


class _Steps:
    """Memoized reduction and labeled-step lookups."""

    def __init__(self, env):
        self.env = env
        self.red = {}
        self.lab = {}

    def reductions(self, process, store):
        key = (process, store)
        out = self.red.get(key)
        if out is None:
            out = self.red[key] = reduce(Configuration(process, store),
                                         self.env)
        return out

    def labeled(self, process, store):
        key = (process, store)
        out = self.lab.get(key)
        if out is None:
            out = self.lab[key] = labeled_steps(Configuration(process, store),
                                                self.env)
        return out


def _grow(seed, expand, bound):
    """Dependency closure of the seed triple under the expand function."""
    universe = {seed}
    queue = [seed]
    while queue:
        triple = queue.pop()
        for nxt in expand(triple):
            if nxt not in universe:
                if len(universe) >= bound:
                    raise StateSpaceExceeded(bound)
                universe.add(nxt)
                queue.append(nxt)
    return universe


def _prune(universe, ok):
    """Delete triples failing ok until stable; return the survivors."""
    alive = set(universe)
    changed = True
    while changed:
        changed = False
        for triple in list(alive):
            if triple in alive and not ok(triple, alive):
                alive.discard(triple)
                changed = True
    return alive


def _match_reductions(p, q, e, steps, alive):
    """Every reduction of <p,e> answered by one of <q,e> into alive."""
    for t1 in steps.reductions(p, e):
        if not any(t2.store == t1.store
                   and (t1.process, t2.process, t1.store) in alive
                   for t2 in steps.reductions(q, e)):
            return False
    return True


def sb_oracle(gamma1, gamma2, env, sys, bound=DEFAULT_BOUND):
    """Saturated barbed bisimilarity, straight from its definition.

    Conditions: equal barbs, mutual reduction matching, and closure under
    joining any constraint onto the store.  The candidate universe is the
    seed's closure under store shifts and equal-store joint reductions.
    """
    if gamma1.store != gamma2.store:
        return False
    steps = _Steps(env)
    upset = [e for e in enumerate_con0(sys) if leq(gamma1.store, e)]
    shifts = {}

    def shifts_of(e):
        out = shifts.get(e)
        if out is None:
            out = shifts[e] = tuple(e2 for e2 in upset
                                    if e2 != e and leq(e, e2))
        return out

    def expand(triple):
        p, q, e = triple
        for e2 in shifts_of(e):
            yield (p, q, e2)
        for t1 in steps.reductions(p, e):
            for t2 in steps.reductions(q, e):
                if t1.store == t2.store:
                    # Both orientations: the reverse matching direction
                    # looks candidates up with the sides swapped.
                    yield (t1.process, t2.process, t1.store)
                    yield (t2.process, t1.process, t1.store)

    seed = (gamma1.process, gamma2.process, gamma1.store)
    universe = _grow(seed, expand, bound)

    def ok(triple, alive):
        p, q, e = triple
        if any((p, q, e2) not in alive for e2 in shifts_of(e)):
            return False
        return (_match_reductions(p, q, e, steps, alive)
                and _match_reductions(q, p, e, steps, alive))

    return seed in _prune(universe, ok)


def barbed_bisim(gamma1, gamma2, env, bound=DEFAULT_BOUND):
    """Equal barbs plus mutual reduction matching; no store shifting."""
    if gamma1.store != gamma2.store:
        return False
    steps = _Steps(env)

    def expand(triple):
        p, q, e = triple
        for t1 in steps.reductions(p, e):
            for t2 in steps.reductions(q, e):
                if t1.store == t2.store:
                    yield (t1.process, t2.process, t1.store)
                    yield (t2.process, t1.process, t1.store)

    seed = (gamma1.process, gamma2.process, gamma1.store)
    universe = _grow(seed, expand, bound)

    def ok(triple, alive):
        p, q, e = triple
        return (_match_reductions(p, q, e, steps, alive)
                and _match_reductions(q, p, e, steps, alive))

    return seed in _prune(universe, ok)


def syntactic_bisim(gamma1, gamma2, env, bound=DEFAULT_BOUND):
    """Equal barbs plus exact-label matching of labeled moves."""
    if gamma1.store != gamma2.store:
        return False
    steps = _Steps(env)

    def expand(triple):
        p, q, e = triple
        for a1, t1 in steps.labeled(p, e):
            for a2, t2 in steps.labeled(q, e):
                if a1 == a2 and t1.store == t2.store:
                    yield (t1.process, t2.process, t1.store)
                    yield (t2.process, t1.process, t1.store)

    seed = (gamma1.process, gamma2.process, gamma1.store)
    universe = _grow(seed, expand, bound)

    def half(p, q, e, alive):
        for a1, t1 in steps.labeled(p, e):
            if not any(a2 == a1 and t2.store == t1.store
                       and (t1.process, t2.process, t1.store) in alive
                       for a2, t2 in steps.labeled(q, e)):
                return False
        return True

    def ok(triple, alive):
        p, q, e = triple
        return half(p, q, e, alive) and half(q, p, e, alive)

    return seed in _prune(universe, ok)


def irredundant_gfp(gamma1, gamma2, env, bound=DEFAULT_BOUND):
    """Matching of non-redundant moves, as a direct gfp over the closure.

    Redundancy is judged against the candidate relation itself and
    re-evaluated every round.  The domination data is recomputed here from
    the lattice operations so this path shares nothing with the partition
    refiner beyond the closure's transition table.
    """
    if gamma1.store != gamma2.store:
        return False
    space = closure([gamma1, gamma2], env, bound)
    idx = space.index
    n = len(space.states)
    lmoves = [[] for _ in range(n)]
    amoves = [[] for _ in range(n)]
    for t in space.transitions:
        u = idx[t.source]
        entry = (t.label, idx[t.target])
        amoves[u].append(entry)
        if t.kind == KIND_LABELED:
            lmoves[u].append(entry)
    stand_ins = [[] for _ in range(n)]
    for u in range(n):
        for label, tgt in lmoves[u]:
            cands = []
            for label1, tgt1 in lmoves[u]:
                if label1 == label or not leq(label1, label):
                    continue
                spun = Configuration(space.states[tgt1].process,
                                     lub(space.states[tgt1].store, label))
                cands.append(idx[spun])
            stand_ins[u].append(cands)

    alive = set()
    for u in range(n):
        for v in range(n):
            if space.states[u].store == space.states[v].store:
                alive.add((u, v))

    def half(u, v, current):
        for pos, (label, tgt) in enumerate(lmoves[u]):
            if any((s, tgt) in current for s in stand_ins[u][pos]):
                continue
            if not any(label2 == label and (tgt, w) in current
                       for label2, w in amoves[v]):
                return False
        return True

    changed = True
    while changed:
        changed = False
        for (u, v) in list(alive):
            if (u, v) not in alive:
                continue
            if not (half(u, v, alive) and half(v, u, alive)):
                alive.discard((u, v))
                alive.discard((v, u))
                changed = True
    return (idx[gamma1], idx[gamma2]) in alive
