"""Process terms, procedure environments, substitution and printing.

Terms are immutable with cached hashes and free-variable sets; they are
hashed constantly during exploration.  Printing and parsing are mutually
stable: prefixes (ask, local) bind tighter than ``||``, which binds tighter
than ``+``; both binary operators are left-associative and parentheses are
emitted exactly where reparsing would otherwise change the shape.
"""

from .errors import DuplicateProcedure, InvalidParameter, UnboundFreeVariable

_PREC_SUM = 0
_PREC_PAR = 1
_PREC_PREFIX = 2


class Process:
    __slots__ = ("_hash", "_fv", "_pretty")

    def free_vars(self):
        return self._fv

    def pretty(self):
        got = getattr(self, "_pretty", None)
        if got is None:
            got = self._pretty = self._render(_PREC_SUM)
        return got

    def _wrap(self, text, context):
        if self._prec < context:
            return "(" + text + ")"
        return text

    def __hash__(self):
        return self._hash

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return self.pretty()


class Stop(Process):
    __slots__ = ()
    _prec = _PREC_PREFIX + 1

    def __init__(self):
        self._hash = hash(("stop",))
        self._fv = frozenset()

    def __eq__(self, other):
        return type(other) is Stop

    __hash__ = Process.__hash__

    def _render(self, context):
        return "0"


STOP = Stop()


class Tell(Process):
    __slots__ = ("constraint",)
    _prec = _PREC_PREFIX + 1

    def __init__(self, constraint):
        self.constraint = constraint
        self._hash = hash(("tell", constraint))
        self._fv = frozenset(constraint.system.constraint_vars(constraint))

    def __eq__(self, other):
        return type(other) is Tell and other.constraint == self.constraint

    __hash__ = Process.__hash__

    def _render(self, context):
        return "tell(%s)" % self.constraint.pretty()


class Ask(Process):
    __slots__ = ("constraint", "body")
    _prec = _PREC_PREFIX

    def __init__(self, constraint, body):
        self.constraint = constraint
        self.body = body
        self._hash = hash(("ask", constraint, body))
        self._fv = frozenset(constraint.system.constraint_vars(constraint)) | body._fv

    def __eq__(self, other):
        return (type(other) is Ask and other._hash == self._hash
                and other.constraint == self.constraint and other.body == self.body)

    __hash__ = Process.__hash__

    def _render(self, context):
        text = "ask(%s) -> %s" % (self.constraint.pretty(),
                                  self.body._render(_PREC_PREFIX))
        return self._wrap(text, context)


class Par(Process):
    __slots__ = ("left", "right")
    _prec = _PREC_PAR

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self._hash = hash(("par", left, right))
        self._fv = left._fv | right._fv

    def __eq__(self, other):
        return (type(other) is Par and other._hash == self._hash
                and other.left == self.left and other.right == self.right)

    __hash__ = Process.__hash__

    def _render(self, context):
        text = "%s || %s" % (self.left._render(_PREC_PAR),
                             self.right._render(_PREC_PAR + 1))
        return self._wrap(text, context)


class Sum(Process):
    __slots__ = ("left", "right")
    _prec = _PREC_SUM

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self._hash = hash(("sum", left, right))
        self._fv = left._fv | right._fv

    def __eq__(self, other):
        return (type(other) is Sum and other._hash == self._hash
                and other.left == self.left and other.right == self.right)

    __hash__ = Process.__hash__

    def _render(self, context):
        text = "%s + %s" % (self.left._render(_PREC_SUM),
                            self.right._render(_PREC_SUM + 1))
        return self._wrap(text, context)


class Local(Process):
    """Hiding: ``local x with e in P`` runs P with x renamed apart.

    ``local_info`` is the store fragment private to the binder (``true``
    unless the hiding has already accumulated local information).
    """

    __slots__ = ("var", "local_info", "body")
    _prec = _PREC_PREFIX

    def __init__(self, var, local_info, body):
        self.var = var
        self.local_info = local_info
        self.body = body
        self._hash = hash(("local", var, local_info, body))
        sys_ = local_info.system
        self._fv = (body._fv | frozenset(sys_.constraint_vars(local_info))) - {var}

    def __eq__(self, other):
        return (type(other) is Local and other._hash == self._hash
                and other.var == self.var and other.local_info == self.local_info
                and other.body == self.body)

    __hash__ = Process.__hash__

    def _render(self, context):
        if self.local_info.is_true:
            text = "local %s in %s" % (self.var, self.body._render(_PREC_PREFIX))
        else:
            text = "local %s with %s in %s" % (
                self.var, self.local_info.pretty(), self.body._render(_PREC_PREFIX))
        return self._wrap(text, context)


class Call(Process):
    __slots__ = ("name", "args")
    _prec = _PREC_PREFIX + 1

    def __init__(self, name, args=()):
        self.name = name
        self.args = tuple(args)
        self._hash = hash(("call", name, self.args))
        self._fv = frozenset(self.args)

    def __eq__(self, other):
        return (type(other) is Call and other.name == self.name
                and other.args == self.args)

    __hash__ = Process.__hash__

    def _render(self, context):
        return "%s(%s)" % (self.name, ", ".join(self.args))


class ProcEnv:
    """Named procedure definitions: name -> (formal parameters, body)."""

    def __init__(self, defs=()):
        self.defs = {}
        self.order = []
        for name, formals, body in defs:
            self.define(name, formals, body)

    def define(self, name, formals, body):
        if name in self.defs:
            raise DuplicateProcedure(name)
        formals = tuple(formals)
        extra = body.free_vars() - set(formals)
        if extra:
            raise UnboundFreeVariable(sorted(extra)[0], "procedure %s" % name)
        self.defs[name] = (formals, body)
        self.order.append(name)

    def lookup(self, name):
        return self.defs[name]

    def __contains__(self, name):
        return name in self.defs


class Program:
    """A constraint system, a procedure environment and equivalence queries.

    Each query is a (kind, left, right) triple where kind names the
    equivalence asked about and left/right are configurations.
    """

    def __init__(self, system, env, queries=()):
        self.system = system
        self.env = env
        self.queries = list(queries)


def fresh_var(avoid):
    """Least variable of the reserved ``#k`` namespace not in ``avoid``."""
    k = 0
    while "#%d" % k in avoid:
        k += 1
    return "#%d" % k


def substitute(process, mapping):
    """Capture-avoiding simultaneous renaming of variables in a term."""
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return process
    return _subst(process, mapping)


def _subst(process, mapping):
    relevant = process.free_vars() & set(mapping)
    if not relevant:
        return process
    t = type(process)
    if t is Tell:
        sys_ = process.constraint.system
        return Tell(sys_.rename_constraint(process.constraint, mapping))
    if t is Ask:
        sys_ = process.constraint.system
        return Ask(sys_.rename_constraint(process.constraint, mapping),
                   _subst(process.body, mapping))
    if t is Par:
        return Par(_subst(process.left, mapping), _subst(process.right, mapping))
    if t is Sum:
        return Sum(_subst(process.left, mapping), _subst(process.right, mapping))
    if t is Call:
        return Call(process.name,
                    tuple(mapping.get(a, a) for a in process.args))
    if t is Local:
        inner = {k: v for k, v in mapping.items()
                 if k != process.var and k in process.free_vars()}
        if not inner:
            return process
        var = process.var
        body = process.body
        info = process.local_info
        if var in inner.values():
            # The binder would capture a renamed variable: alpha-rename first.
            avoid = set(body.free_vars()) | set(inner) | set(inner.values()) | {var}
            avoid |= info.system.constraint_vars(info)
            new_var = fresh_var(avoid)
            body = _subst(body, {var: new_var}) if var in body.free_vars() else body
            info = info.system.rename_constraint(info, {var: new_var})
            var = new_var
        return Local(var, info.system.rename_constraint(info, inner),
                     _subst(body, inner))
    raise TypeError("not a process: %r" % (process,))


def unfold(call, env):
    """Body of a procedure call with actuals substituted for formals."""
    formals, body = env.lookup(call.name)
    if len(formals) != len(call.args):
        raise InvalidParameter(
            "call %s passes %d arguments, procedure takes %d"
            % (call.name, len(call.args), len(formals)))
    return substitute(body, dict(zip(formals, call.args)))
