"""Configurations and the two transition relations.

``reduce`` is the unlabeled relation: a step fires only when the store
already entails what is asked.  ``labeled_steps`` additionally borrows a
minimal constraint from the environment as the label; a true label means no
help was needed, so true-labeled steps and reductions coincide.  Both walk
the same term structure; hiding runs the premise in a store where the bound
variable's outside information has been projected away (reductions) or the
bound variable has been renamed apart (labeled steps).
"""

from .errors import CcpError, NoCylindrification, StateSpaceExceeded
from .lattice import exists_var, leq, lub, min_enablers
from .syntax import (Ask, Call, Local, Par, Stop, Sum, Tell, fresh_var,
                     substitute, unfold)

DEFAULT_BOUND = 100000

KIND_REDUCTION = "reduction"
KIND_LABELED = "labeled"
KIND_DERIVED = "derived"

_KIND_RANK = {KIND_LABELED: 0, KIND_REDUCTION: 1, KIND_DERIVED: 2}


class Configuration:
    """A process paired with a store."""

    __slots__ = ("process", "store", "_hash", "_key")

    def __init__(self, process, store):
        self.process = process
        self.store = store
        self._hash = hash((process, store))
        self._key = None

    def pretty(self):
        return "<%s, %s>" % (self.process.pretty(), self.store.pretty())

    def sort_key(self):
        if self._key is None:
            self._key = (self.store.sort_key(), self.process.pretty())
        return self._key

    def __eq__(self, other):
        return (isinstance(other, Configuration)
                and other.store == self.store and other.process == self.process)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.pretty()


class Transition:
    """A step between configurations; reductions carry the label true."""

    __slots__ = ("source", "label", "target", "kind", "_hash")

    def __init__(self, source, label, target, kind):
        self.source = source
        self.label = label
        self.target = target
        self.kind = kind
        self._hash = hash((source, label, target, kind))

    def triple(self):
        return (self.source, self.label, self.target)

    def pretty(self):
        arrow = {KIND_REDUCTION: "-->", KIND_LABELED: "--%s-->",
                 KIND_DERIVED: "..%s..>"}[self.kind]
        if self.kind == KIND_REDUCTION:
            return "%s --> %s" % (self.source.pretty(), self.target.pretty())
        return "%s %s %s" % (self.source.pretty(),
                             arrow % self.label.pretty(), self.target.pretty())

    def __eq__(self, other):
        return (isinstance(other, Transition) and other.kind == self.kind
                and other.source == self.source and other.label == self.label
                and other.target == self.target)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.pretty()


def satisfies_barb(config, c):
    """The configuration exposes c: its store entails c."""
    return leq(c, config.store)


# -- single steps -------------------------------------------------------------

def reduce(config, env):
    """Targets of all one-step reductions, deduplicated and ordered."""
    steps = _steps(config.process, config.store, env, labeled=False, spine=())
    targets = {Configuration(p, d) for (_, p, d) in steps}
    return sorted(targets, key=Configuration.sort_key)


def labeled_steps(config, env):
    """(label, target) pairs of all labeled one-step moves, ordered."""
    steps = _steps(config.process, config.store, env, labeled=True, spine=())
    out = {(a, Configuration(p, d)) for (a, p, d) in steps}
    return sorted(out, key=lambda it: (it[0].sort_key(), it[1].sort_key()))


def _steps(process, store, env, labeled, spine):
    t = type(process)
    if t is Stop:
        return []
    if t is Tell:
        target = lub(store, process.constraint)
        label = store.system.true if labeled else None
        return [(label, _STOP_SINGLETON, target)]
    if t is Ask:
        if labeled:
            return [(a, process.body, lub(store, a))
                    for a in min_enablers(process.constraint, store)]
        if leq(process.constraint, store):
            return [(None, process.body, store)]
        return []
    if t is Par:
        out = [(a, Par(p, process.right), d)
               for (a, p, d) in _steps(process.left, store, env, labeled, spine)]
        out += [(a, Par(process.left, p), d)
                for (a, p, d) in _steps(process.right, store, env, labeled, spine)]
        return out
    if t is Sum:
        out = list(_steps(process.left, store, env, labeled, spine))
        out += _steps(process.right, store, env, labeled, spine)
        return out
    if t is Call:
        if process in spine:
            # A cycle of unguarded unfoldings has no finite derivation.
            return []
        if len(spine) > 500:
            raise CcpError("unguarded recursion too deep at %s" % process.pretty())
        return _steps(unfold(process, env), store, env, labeled, spine + (process,))
    if t is Local:
        return _local_steps(process, store, env, labeled, spine)
    raise TypeError("not a process: %r" % (process,))


def _local_steps(process, store, env, labeled, spine):
    system = store.system
    x = process.var
    if x not in system.exists_tables:
        raise NoCylindrification(x)
    if not labeled:
        inner = lub(process.local_info, exists_var(system, x, store))
        out = []
        for (_, p1, d1) in _steps(process.body, inner, env, False, spine):
            outer = lub(store, exists_var(system, x, d1))
            out.append((None, Local(x, d1, p1), outer))
        return out

    # Rename the bound variable apart before stepping under the binder.
    avoid = set(process.body.free_vars()) | {x}
    avoid |= system.constraint_vars(process.local_info)
    avoid |= system.constraint_vars(store)
    z = fresh_var(avoid)
    body_z = substitute(process.body, {x: z})
    info_z = system.rename_constraint(process.local_info, {x: z})
    inner = lub(info_z, store)
    out = []
    for (alpha, p1, d1) in _steps(body_z, inner, env, True, spine):
        if z in system.constraint_vars(alpha):
            # The environment cannot supply information about the hidden name.
            continue
        residual = _store_residual(d1, lub(store, alpha))
        if x in system.constraint_vars(residual):
            continue
        info_back = system.rename_constraint(residual, {z: x})
        body_back = substitute(p1, {z: x})
        outer = lub(lub(exists_var(system, x, info_back), store), alpha)
        out.append((alpha, Local(x, info_back, body_back), outer))
    return out


def _store_residual(full, rest):
    """Closed part of ``full`` not already carried by ``rest``.

    Joined back with ``rest`` this gives ``full`` again, which is the
    decomposition the hiding rule asks for.
    """
    system = full.system
    if full.is_false:
        return full
    if rest.is_false:
        return system.true
    return system.from_mask(system.canonical_mask(full.mask & ~rest.mask))


_STOP_SINGLETON = Stop()


# -- bounded exploration ------------------------------------------------------

class StateSpace:
    """A finite explored fragment: ordered states, transitions, initials.

    ``derived_flags[i]`` marks states that are present only because the
    closure added them (not reachable from the initials by rule-generated
    transitions).  ``dominators`` is filled by the closure: for each labeled
    transition it holds a tuple of state indices, one per competing
    transition that leaves the same source with a strictly smaller label,
    naming the state that competitor's target becomes once pushed up to the
    dominated transition's label.
    """

    def __init__(self, system, states, transitions, initials, derived_flags=None):
        self.system = system
        self.states = tuple(states)
        self.index = {c: i for i, c in enumerate(self.states)}
        self.transitions = tuple(transitions)
        self.initials = tuple(initials)
        self.derived_flags = tuple(derived_flags or [False] * len(self.states))
        self.dominators = None
        self.out = [[] for _ in self.states]
        self.tindex = {}
        for k, tr in enumerate(self.transitions):
            self.out[self.index[tr.source]].append(k)
            self.tindex[tr] = k

    def index_of(self, config):
        return self.index[config]

    def labeled_transitions(self):
        return [t for t in self.transitions if t.kind == KIND_LABELED]

    def transitions_from(self, config, kind=None):
        i = self.index[config]
        out = [self.transitions[k] for k in self.out[i]]
        if kind is not None:
            out = [t for t in out if t.kind == kind]
        return out

    def __len__(self):
        return len(self.states)


def _finalize(system, configs, transitions, initials, derived=None):
    states = sorted(configs, key=Configuration.sort_key)
    order = {c: i for i, c in enumerate(states)}
    transitions = sorted(
        set(transitions),
        key=lambda t: (order[t.source], t.label.sort_key(), order[t.target],
                       _KIND_RANK[t.kind]))
    # A triple reached both by a rule and as derived counts once, as the rule's.
    seen = {}
    kept = []
    for t in transitions:
        key = (t.source, t.label, t.target)
        if key in seen:
            continue
        seen[key] = t
        kept.append(t)
    flags = None
    if derived is not None:
        flags = [c in derived for c in states]
    return StateSpace(system, states, kept, sorted({order[c] for c in initials}),
                      derived_flags=flags)


def reachable(initials, env, mode=KIND_LABELED, bound=DEFAULT_BOUND):
    """Worklist closure of the initials under one transition relation."""
    if mode not in (KIND_REDUCTION, KIND_LABELED):
        raise ValueError("mode must be reduction or labeled")
    initials = list(initials)
    if not initials:
        raise ValueError("no initial configurations")
    system = initials[0].store.system
    seen = set()
    queue = []
    for c in sorted(set(initials), key=Configuration.sort_key):
        seen.add(c)
        queue.append(c)
    transitions = []
    head = 0
    while head < len(queue):
        config = queue[head]
        head += 1
        if mode == KIND_REDUCTION:
            succs = [(system.true, t) for t in reduce(config, env)]
        else:
            succs = labeled_steps(config, env)
        for label, target in succs:
            transitions.append(Transition(config, label, target, mode))
            if target not in seen:
                if len(seen) >= bound:
                    raise StateSpaceExceeded(bound)
                seen.add(target)
                queue.append(target)
    return _finalize(system, seen, transitions, initials)
