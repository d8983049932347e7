"""Transition domination and the redundancy closure.

A move with a small label can stand in for a move with a bigger one: if
``t1`` reaches the same process and the bigger label's extra information
accounts for the difference in stores, every behaviour of the bigger move
is already implied by ``t1``.  ``derives_def`` states this by searching for
the extra piece explicitly; ``derives`` is the equivalent direct test
(strictly smaller label, target store equal to the smaller move's target
joined with the bigger label).

``closure`` grows the labeled reachable space with every configuration a
domination check can mention, so ``is_redundant`` becomes a pure block
lookup.  Added states and stand-in arrows are tagged as derived; matching
during refinement may use them, but only genuine labeled moves ever need
to be matched.
"""

from .errors import MissingDerivedState, NotDominating, StateSpaceExceeded
from .lattice import enumerate_con0, leq, lub
from .semantics import (DEFAULT_BOUND, KIND_DERIVED, KIND_LABELED,
                        Configuration, Transition, _finalize, labeled_steps)


def derives_def(t1, t2, system):
    """Domination by explicit search for the label difference.

    Both transitions must leave the same source.  True iff the targets
    share a process and some constraint e turns t1's label and target
    store into t2's, with the labels actually distinct.
    """
    if t1.target.process != t2.target.process:
        return False
    alpha, beta = t1.label, t2.label
    if alpha == beta:
        return False
    c1, c2 = t1.target.store, t2.target.store
    for e in enumerate_con0(system):
        if beta == lub(alpha, e) and c2 == lub(c1, e):
            return True
    return False


def derives(t1, t2):
    """Direct domination test: no search, constant lattice work."""
    if t1.target.process != t2.target.process:
        return False
    alpha, beta = t1.label, t2.label
    if alpha == beta or not leq(alpha, beta):
        return False
    return t2.target.store == lub(t1.target.store, beta)


def derived_target(t1, beta):
    """Where t1's move lands when replayed under the bigger label beta."""
    alpha = t1.label
    if alpha == beta or not leq(alpha, beta):
        raise NotDominating(alpha, beta)
    return Configuration(t1.target.process, lub(t1.target.store, beta))


def closure(initials, env, bound=DEFAULT_BOUND):
    """Labeled reachable space plus every redundancy witness.

    Three growth rules, applied to a fixpoint: the initials are in; labeled
    successors of members are in; and whenever one member's move can stand
    in for a sibling move with a bigger label, the stand-in's target is in.
    Stand-in targets are explored like any other state.  States that no
    chain of labeled moves reaches from the initials are flagged derived,
    and each stand-in arrow is materialized with the derived kind (unless a
    real labeled move already covers the same triple).

    The result carries, per labeled transition, the list of stand-in
    target states competing with it; redundancy checks read only that.
    """
    initials = list(initials)
    if not initials:
        raise ValueError("no initial configurations")
    system = initials[0].store.system
    seen = set()
    queue = []
    for c in sorted(set(initials), key=Configuration.sort_key):
        seen.add(c)
        queue.append(c)
    labeled = []
    derived = []
    head = 0
    while head < len(queue):
        config = queue[head]
        head += 1
        outs = []
        for label, target in labeled_steps(config, env):
            outs.append(Transition(config, label, target, KIND_LABELED))
            labeled.append(outs[-1])
            if target not in seen:
                if len(seen) >= bound:
                    raise StateSpaceExceeded(bound)
                seen.add(target)
                queue.append(target)
        for t2 in outs:
            beta = t2.label
            for t1 in outs:
                if t1.label == beta or not leq(t1.label, beta):
                    continue
                stand_in = Configuration(t1.target.process,
                                         lub(t1.target.store, beta))
                derived.append(Transition(config, beta, stand_in,
                                          KIND_DERIVED))
                if stand_in not in seen:
                    if len(seen) >= bound:
                        raise StateSpaceExceeded(bound)
                    seen.add(stand_in)
                    queue.append(stand_in)
    space = _finalize(system, seen, labeled + derived, initials,
                      derived=_unreached(seen, initials, labeled))
    attach_dominators(space)
    return space


def _unreached(states, initials, labeled):
    """States no labeled path from the initials visits."""
    out = {}
    for t in labeled:
        out.setdefault(t.source, []).append(t.target)
    seen = set(initials)
    stack = list(seen)
    while stack:
        for target in out.get(stack.pop(), ()):
            if target not in seen:
                seen.add(target)
                stack.append(target)
    return states - seen


def attach_dominators(space):
    """Fill space.dominators from the transition table.

    For each labeled transition, collect the states where same-source
    moves with strictly smaller labels land when replayed under its
    label.  The closure guarantees those states exist in the space.
    """
    if space.dominators is not None:
        return
    doms = []
    for t in space.transitions:
        if t.kind != KIND_LABELED:
            doms.append(())
            continue
        entries = []
        for t1 in space.transitions_from(t.source, kind=KIND_LABELED):
            if t1.label == t.label or not leq(t1.label, t.label):
                continue
            stand_in = derived_target(t1, t.label)
            s = space.index.get(stand_in)
            if s is None:
                raise MissingDerivedState(stand_in)
            entries.append(s)
        doms.append(tuple(entries))
    space.dominators = tuple(doms)


def is_redundant(t, part, space):
    """Is some same-source move a stand-in for t, up to part's blocks?

    True iff a strictly smaller-labeled sibling move, replayed under t's
    label, lands in the same block as t's own target.
    """
    attach_dominators(space)
    k = space.tindex[t]
    home = part.block_of[t.target]
    for s in space.dominators[k]:
        if part.block_of[space.states[s]] == home:
            return True
    return False
