"""Text format for constraint systems, procedure definitions and queries.

    system {
      atoms x_lt_7, x_lt_5, z_lt_7, z_lt_5, y_eq_1;
      imply x_lt_5 -> x_lt_7;
      imply z_lt_5 -> z_lt_7;
      # also available: conflict a, b;   exists x: a -> b & c;
    }
    proc T() = tell(true);
    proc P() = ask(x_lt_7) -> T();
    query sb <P() + T(), true> ~ <P(), true>;

Processes: ``0``, ``tell(c)``, ``ask(c) -> P``, ``P || Q``, ``P + Q``,
``local x in P``, ``local x with c in P``, ``name(...)``.  Prefixes bind
tighter than ``||``, which binds tighter than ``+``; both operators are
left-associative; ask/local bodies chain through further prefixes and stop
at the first infix operator, so ``ask(a) -> T() + Q()`` is a sum whose left
summand is the ask.  Constraints are ``true``, ``false`` or ``&``-joined
atom names.  Comments run from ``#`` or ``//`` to end of line.  Atoms are
opaque names here; systems with schematic predicate(variable) atoms are
built through the API instead.
"""

from .errors import CcpError, ProgramSyntaxError, UnknownAtom
from .lattice import ConstraintSystem
from .semantics import Configuration
from .syntax import (STOP, Ask, Call, Local, Par, ProcEnv, Program, Sum,
                     Tell)

QUERY_KINDS = ("sb", "barbed", "syntactic", "irredundant")

_KEYWORDS = {"system", "atoms", "imply", "conflict", "exists", "proc",
             "query", "tell", "ask", "local", "with", "in", "true", "false"}

_TWO_CHAR = ("->", "||", "//")
_ONE_CHAR = "{}()<>,;=+&~:"


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#" or text[i:i + 2] == "//":
            while i < n and text[i] != "\n":
                i += 1
            continue
        two = text[i:i + 2]
        if two in ("->", "||"):
            tokens.append(_Token(two, two, line, col))
            i += 2
            col += 2
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = word if word in _KEYWORDS else "name"
            tokens.append(_Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if ch == "0":
            tokens.append(_Token("0", "0", line, col))
            i += 1
            col += 1
            continue
        if ch in _ONE_CHAR:
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ProgramSyntaxError("unexpected character %r" % ch, line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text, enum_threshold, check_laws):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.enum_threshold = enum_threshold
        self.check_laws = check_laws
        self.system = None
        self.call_sites = []
        self.proc_sites = []

    # -- token plumbing --

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok.kind != kind:
            raise ProgramSyntaxError(
                "expected %s, found %r" % (kind, tok.text or "end of input"),
                tok.line, tok.col)
        self.pos += 1
        return tok

    def at(self, kind):
        return self.tokens[self.pos].kind == kind

    def fail(self, message):
        tok = self.peek()
        raise ProgramSyntaxError(message, tok.line, tok.col)

    # -- grammar --

    def parse(self):
        self.parse_system()
        procs = []
        queries = []
        while not self.at("eof"):
            if self.at("proc"):
                procs.append(self.parse_proc())
            elif self.at("query"):
                queries.append(self.parse_query())
            else:
                self.fail("expected 'proc' or 'query'")
        seen = {}
        for (name, _, _), (line, col) in zip(procs, self.proc_sites):
            if name in seen:
                raise ProgramSyntaxError(
                    "procedure %r defined twice" % name, line, col)
            seen[name] = (line, col)
        env = ProcEnv(procs)
        for name, nargs, line, col in self.call_sites:
            if name not in env:
                raise ProgramSyntaxError(
                    "undefined procedure %r" % name, line, col)
            formals, _ = env.lookup(name)
            if len(formals) != nargs:
                raise ProgramSyntaxError(
                    "%s(...) passes %d arguments, procedure takes %d"
                    % (name, nargs, len(formals)), line, col)
        return Program(self.system, env, queries)

    def parse_system(self):
        head = self.take("system")
        self.take("{")
        atoms = []
        implications = []
        conflicts = []
        exists_tables = {}
        while not self.at("}"):
            if self.at("atoms"):
                self.take()
                atoms.append(self.take("name").text)
                while self.at(","):
                    self.take()
                    atoms.append(self.take("name").text)
                self.take(";")
            elif self.at("imply"):
                self.take()
                a = self.take("name").text
                self.take("->")
                b = self.take("name").text
                self.take(";")
                implications.append((a, b))
            elif self.at("conflict"):
                self.take()
                a = self.take("name").text
                self.take(",")
                b = self.take("name").text
                self.take(";")
                conflicts.append((a, b))
            elif self.at("exists"):
                self.take()
                var = self.take("name").text
                self.take(":")
                atom = self.take("name").text
                self.take("->")
                proj = self.parse_atom_list()
                self.take(";")
                exists_tables.setdefault(var, {})[atom] = tuple(proj)
            else:
                self.fail("expected atoms, imply, conflict or exists")
        self.take("}")
        try:
            self.system = ConstraintSystem(
                atoms, implications, conflicts,
                exists_tables=exists_tables or None,
                enum_threshold=self.enum_threshold,
                check_laws=self.check_laws)
        except CcpError as exc:
            raise ProgramSyntaxError(str(exc), head.line, head.col) from None

    def parse_atom_list(self):
        if self.at("true"):
            self.take()
            return []
        names = [self.take("name").text]
        while self.at("&"):
            self.take()
            names.append(self.take("name").text)
        return names

    def parse_constraint(self):
        if self.at("true"):
            self.take()
            return self.system.true
        if self.at("false"):
            self.take()
            return self.system.false
        tok = self.peek()
        try:
            return self.system.constraint(self.parse_atom_list())
        except UnknownAtom as exc:
            raise ProgramSyntaxError(
                "unknown atom %r" % exc.name, tok.line, tok.col) from None

    def parse_proc(self):
        self.take("proc")
        tok = self.take("name")
        name = tok.text
        self.proc_sites.append((tok.line, tok.col))
        self.take("(")
        if not self.at(")"):
            tok = self.peek()
            raise ProgramSyntaxError(
                "procedure parameters need schematic atoms; this system's "
                "atoms are opaque", tok.line, tok.col)
        self.take(")")
        self.take("=")
        body = self.parse_sum()
        self.take(";")
        return (name, (), body)

    def parse_query(self):
        self.take("query")
        tok = self.peek()
        if tok.kind != "name" or tok.text not in QUERY_KINDS:
            self.fail("expected query kind (%s)" % ", ".join(QUERY_KINDS))
        kind = self.take("name").text
        left = self.parse_config()
        self.take("~")
        right = self.parse_config()
        self.take(";")
        return (kind, left, right)

    def parse_config(self):
        self.take("<")
        process = self.parse_sum()
        self.take(",")
        store = self.parse_constraint()
        self.take(">")
        return Configuration(process, store)

    def parse_sum(self):
        node = self.parse_par()
        while self.at("+"):
            self.take()
            node = Sum(node, self.parse_par())
        return node

    def parse_par(self):
        node = self.parse_prefix()
        while self.at("||"):
            self.take()
            node = Par(node, self.parse_prefix())
        return node

    def parse_prefix(self):
        if self.at("ask"):
            self.take()
            self.take("(")
            c = self.parse_constraint()
            self.take(")")
            self.take("->")
            return Ask(c, self.parse_prefix())
        if self.at("local"):
            self.take()
            var = self.take("name").text
            info = self.system.true
            if self.at("with"):
                tok = self.take()
                info = self.parse_constraint()
                if not info.is_true:
                    raise ProgramSyntaxError(
                        "local information needs schematic atoms; this "
                        "system's atoms are opaque", tok.line, tok.col)
            self.take("in")
            return Local(var, info, self.parse_prefix())
        return self.parse_primary()

    def parse_primary(self):
        if self.at("0"):
            self.take()
            return STOP
        if self.at("tell"):
            self.take()
            self.take("(")
            c = self.parse_constraint()
            self.take(")")
            return Tell(c)
        if self.at("name"):
            tok = self.take()
            self.take("(")
            if not self.at(")"):
                raise ProgramSyntaxError(
                    "call arguments need schematic atoms; this system's "
                    "atoms are opaque", tok.line, tok.col)
            self.take(")")
            self.call_sites.append((tok.text, 0, tok.line, tok.col))
            return Call(tok.text, ())
        if self.at("("):
            self.take()
            node = self.parse_sum()
            self.take(")")
            return node
        self.fail("expected a process")

def parse_program(text, enum_threshold=16, check_laws=True):
    """Parse a program file; constraints come out canonicalized."""
    return _Parser(text, enum_threshold, check_laws).parse()
