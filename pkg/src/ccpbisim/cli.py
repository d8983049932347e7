"""Command line front end.

Subcommands:
  check       answer the equivalence queries in a program file
  lts         print or export the reachable transition system
  closure     print or export the closed space, derived parts marked
  partitions  print the refinement trace, one row per iteration
  bench-exp   run the ladder benchmark family and report growth

A program file carries its constraint system, procedure definitions and
queries in one piece; the parser module documents the grammar.  Stdout is
deterministic for a given input so runs can be diffed byte for byte;
wall-clock timing appears only in JSON-lines benchmark records.

Exit codes: 0 when every query was answered (whatever the verdicts), 1
for unreadable or ill-formed input, 2 when a resource guard tripped.
"""

import argparse
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .bench import format_table, run_bench
from .derivation import closure
from .engine import backend_name
from .errors import CcpError, InvalidParameter
from .oracle import barbed_bisim, irredundant_gfp, sb_oracle, syntactic_bisim
from .parser import parse_program
from .refinement import ccp_partition_refine
from .semantics import DEFAULT_BOUND, KIND_DERIVED, reachable

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_RESOURCE = 2

ORACLE_NAMES = ("sb", "barbed", "syntactic", "irredundant")


@dataclass
class CheckReport:
    """Outcome of one query: what was asked, the answer, how it was got.

    ``blocks`` and the closure numbers are present only for the refiner
    route; ``trace`` is kept only when the caller asked for it.
    """

    query: tuple
    verdict: str
    method: str
    closure_size: Optional[int] = None
    iterations: Optional[int] = None
    wall_time: float = 0.0
    blocks: Optional[tuple] = None
    trace: Optional[object] = None


def _run_oracle(name, program, left, right, bound):
    if name == "sb":
        return sb_oracle(left, right, program.env, program.system, bound)
    if name == "barbed":
        return barbed_bisim(left, right, program.env, bound)
    if name == "syntactic":
        return syntactic_bisim(left, right, program.env, bound)
    if name == "irredundant":
        return irredundant_gfp(left, right, program.env, bound)
    raise InvalidParameter("unknown oracle %r" % name)


def answer_query(program, query, max_states, oracle=None, backend=None,
                 want_trace=False):
    """Decide one query and wrap the outcome in a CheckReport.

    Saturated-equivalence queries run the refiner unless ``oracle`` names
    a verdict source; every other query kind runs its matching oracle.
    """
    kind, left, right = query
    t0 = time.perf_counter()
    if oracle is None and kind == "sb":
        initials = [left] if left == right else [left, right]
        part, trace = ccp_partition_refine(
            initials, program.env, max_states, backend=backend)
        same = part.together(left, right)
        return CheckReport(
            query=query,
            verdict="equivalent" if same else "inequivalent",
            method="refinement",
            closure_size=len(trace.space.states),
            iterations=trace.iterations,
            wall_time=time.perf_counter() - t0,
            blocks=(part.block_of[left], part.block_of[right]),
            trace=trace if want_trace else None)
    name = oracle if oracle is not None else kind
    same = _run_oracle(name, program, left, right, max_states)
    return CheckReport(
        query=query,
        verdict="equivalent" if same else "inequivalent",
        method="oracle:" + name,
        wall_time=time.perf_counter() - t0)


def query_initials(program):
    """Union of all query configurations, in file order without repeats."""
    configs = []
    for _, left, right in program.queries:
        for config in (left, right):
            if config not in configs:
                configs.append(config)
    return configs


def partition_rows(partitions):
    """Trace rows in the shape 'P0: {state, state} {state} ...'."""
    rows = []
    for i, part in enumerate(partitions):
        blocks = ["{%s}" % ", ".join(c.pretty() for c in block)
                  for block in part.blocks]
        rows.append("P%d: %s" % (i, " ".join(blocks)) if blocks
                    else "P%d:" % i)
    return rows


def render_listing(space):
    """State and transition listing; derived parts are marked."""
    flags = space.derived_flags
    n_derived = sum(flags)
    lines = []
    if n_derived:
        lines.append("states (%d; derived %d):"
                     % (len(space.states), n_derived))
    else:
        lines.append("states (%d):" % len(space.states))
    for config, flag in zip(space.states, flags):
        lines.append("  %s%s" % (config.pretty(),
                                 "  [derived]" if flag else ""))
    t_derived = sum(1 for t in space.transitions if t.kind == KIND_DERIVED)
    if t_derived:
        lines.append("transitions (%d; derived %d):"
                     % (len(space.transitions), t_derived))
    else:
        lines.append("transitions (%d):" % len(space.transitions))
    for t in space.transitions:
        lines.append("  " + t.pretty())
    return "\n".join(lines) + "\n"


def _dot_escape(text):
    return text.replace("\\", "\\\\").replace('"', '\\"')


def render_dot(space, name):
    """Graphviz digraph; derived states dashed, derived moves dotted."""
    lines = ["digraph %s {" % name, "  rankdir=LR;"]
    for i, config in enumerate(space.states):
        attrs = 'label="%s"' % _dot_escape(config.pretty())
        if space.derived_flags[i]:
            attrs += " style=dashed"
        lines.append("  n%d [%s];" % (i, attrs))
    for t in space.transitions:
        attrs = []
        if t.label is not None:
            attrs.append('label="%s"' % _dot_escape(t.label.pretty()))
        if t.kind == KIND_DERIVED:
            attrs.append("style=dotted")
        src = space.index[t.source]
        tgt = space.index[t.target]
        if attrs:
            lines.append("  n%d -> n%d [%s];" % (src, tgt, " ".join(attrs)))
        else:
            lines.append("  n%d -> n%d;" % (src, tgt))
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_HEAD = re.compile(r"digraph [A-Za-z_]\w* \{\Z")
_DOT_VALUE = r"(?:\"(?:[^\"\\]|\\.)*\"|[\w.]+)"
_DOT_GRAPH_ATTR = re.compile(r"\w+=%s;\Z" % _DOT_VALUE)
_DOT_NODE = re.compile(r"(\w+) \[(.*)\];\Z")
_DOT_EDGE = re.compile(r"(\w+) -> (\w+)(?: \[(.*)\])?;\Z")
_DOT_ATTRS = re.compile(r"\w+=%s(?: \w+=%s)*\Z" % (_DOT_VALUE, _DOT_VALUE))


def validate_dot(text):
    """Reject malformed digraph text; returns None when it is well formed.

    Checks the dialect this module emits: one digraph header, one closing
    brace, graph attributes, each node declared once before any edge uses
    it, attribute lists of key=value pairs with balanced quotes.
    """
    lines = text.splitlines()
    if not lines or not _DOT_HEAD.match(lines[0]):
        raise ValueError("missing digraph header")
    if len(lines) < 2 or lines[-1] != "}":
        raise ValueError("missing closing brace")
    declared = set()
    for ln in lines[1:-1]:
        if not ln.startswith("  ") or ln != "  " + ln.strip():
            raise ValueError("bad indentation: %r" % ln)
        body = ln[2:]
        m = _DOT_EDGE.match(body)
        if m is not None:
            if m.group(1) not in declared or m.group(2) not in declared:
                raise ValueError("edge uses undeclared node: %r" % ln)
            if m.group(3) is not None and not _DOT_ATTRS.match(m.group(3)):
                raise ValueError("bad attribute list: %r" % ln)
            continue
        m = _DOT_NODE.match(body)
        if m is not None:
            if m.group(1) in declared:
                raise ValueError("node declared twice: %r" % ln)
            if not _DOT_ATTRS.match(m.group(2)):
                raise ValueError("bad attribute list: %r" % ln)
            declared.add(m.group(1))
            continue
        if _DOT_GRAPH_ATTR.match(body):
            continue
        raise ValueError("unrecognized statement: %r" % ln)


def _load(path):
    """Parse the program file; on failure report it and signal exit 1."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        sys.stderr.write("error: cannot read %s: %s\n" % (path, exc))
        return None, EXIT_PARSE
    try:
        return parse_program(text), EXIT_OK
    except CcpError as exc:
        sys.stderr.write("error: %s: %s\n" % (path, exc))
        return None, EXIT_PARSE


def _describe_query(index, query):
    kind, left, right = query
    return "query %d: %s %s ~ %s" % (index, kind, left.pretty(),
                                     right.pretty())


def _print_report(out, index, report):
    out.write(_describe_query(index, report.query) + "\n")
    bits = [report.method]
    if report.closure_size is not None:
        bits.append("closure %d states" % report.closure_size)
    if report.iterations is not None:
        bits.append("%d iterations" % report.iterations)
    if report.blocks is not None:
        a, b = report.blocks
        bits.append("blocks %d %s %d" % (a, "=" if a == b else "!=", b))
    out.write("  %s  [%s]\n" % (report.verdict, "; ".join(bits)))
    if report.trace is not None:
        for row in partition_rows(report.trace.partitions):
            out.write("  " + row + "\n")


def cmd_check(args, out):
    program, rc = _load(args.file)
    if program is None:
        return rc
    jobs = list(enumerate(program.queries, start=1))

    def work(item):
        index, query = item
        try:
            report = answer_query(program, query, args.max_states,
                                  oracle=args.oracle, backend=args.backend,
                                  want_trace=args.trace_partitions)
            return index, report, None
        except CcpError as exc:
            return index, None, exc

    if args.parallel and len(jobs) > 1:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(work, jobs))
    else:
        results = map(work, jobs)
    for index, report, err in results:
        if err is not None:
            sys.stderr.write("error: %s: %s\n"
                             % (_describe_query(index, jobs[index - 1][1]),
                                err))
            return EXIT_RESOURCE
        _print_report(out, index, report)
    return EXIT_OK


def _cmd_space(args, out, build, graph_name):
    program, rc = _load(args.file)
    if program is None:
        return rc
    initials = query_initials(program)
    if not initials:
        out.write("digraph %s {\n}\n" % graph_name if args.dot
                  else "states (0):\ntransitions (0):\n")
        return EXIT_OK
    try:
        space = build(initials, program.env, args.max_states)
    except CcpError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_RESOURCE
    if args.dot:
        out.write(render_dot(space, graph_name))
    else:
        out.write(render_listing(space))
    return EXIT_OK


def cmd_lts(args, out):
    return _cmd_space(
        args, out,
        lambda initials, env, bound: reachable(initials, env, bound=bound),
        "lts")


def cmd_closure(args, out):
    return _cmd_space(args, out, closure, "closure")


def cmd_partitions(args, out):
    program, rc = _load(args.file)
    if program is None:
        return rc
    initials = query_initials(program)
    if not initials:
        return EXIT_OK
    try:
        _, trace = ccp_partition_refine(
            initials, program.env, args.max_states,
            backend=args.backend)
    except CcpError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_RESOURCE
    for row in partition_rows(trace.partitions):
        out.write(row + "\n")
    return EXIT_OK


def cmd_bench(args, out):
    try:
        n_list = [int(tok) for tok in args.n.split(",") if tok.strip()]
    except ValueError:
        sys.stderr.write("error: --n takes a comma-separated integer list\n")
        return EXIT_PARSE
    backends = ("pure", "compiled") if args.backend == "both" \
        else (args.backend,)
    rows = []
    try:
        for b in backends:
            resolved = backend_name(b)
            reports = run_bench(n_list, bound=args.max_states, backend=b)
            rows.append((resolved, reports))
    except InvalidParameter as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_PARSE
    except CcpError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_RESOURCE
    for i, (resolved, reports) in enumerate(rows):
        if i:
            out.write("\n")
        out.write("backend %s:\n" % resolved)
        out.write(format_table(reports, include_time=False) + "\n")
    if args.jsonl:
        with open(args.jsonl, "w", encoding="utf-8") as fh:
            for resolved, reports in rows:
                for r in reports:
                    fh.write(r.json_line(backend=resolved) + "\n")
    return EXIT_OK


def _add_input_args(sp):
    sp.add_argument("file",
                    help="program file with system, procedures and queries")
    sp.add_argument("--max-states", type=int, default=DEFAULT_BOUND,
                    metavar="N",
                    help="abort after exploring N states "
                         "(default %(default)s)")


def _add_backend_arg(sp, both=False):
    choices = ("auto", "pure", "compiled", "both") if both \
        else ("auto", "pure", "compiled")
    sp.add_argument("--backend", choices=choices, default="auto",
                    help="refinement engine to run (default auto)")


def build_arg_parser():
    parser = argparse.ArgumentParser(
        prog="ccpbisim",
        description="Equivalence checking for finite concurrent "
                    "constraint programs.")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="COMMAND")

    p = sub.add_parser(
        "check", help="answer the queries in a program file",
        description="Answers each query in file order.  Saturated "
                    "equivalence queries run the partition refiner; other "
                    "query kinds run their matching reference oracle.  "
                    "With --oracle NAME every query is answered by that "
                    "oracle instead.")
    _add_input_args(p)
    p.add_argument("--oracle", choices=ORACLE_NAMES, metavar="NAME",
                   help="verdict source: one of %s" % (", ".join(ORACLE_NAMES)))
    p.add_argument("--trace-partitions", action="store_true",
                   help="print the refinement trace under each "
                        "refiner verdict")
    p.add_argument("--parallel", action="store_true",
                   help="evaluate queries concurrently; output is "
                        "unchanged")
    _add_backend_arg(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser(
        "lts", help="print the reachable transition system",
        description="Explores the reachable states from every query "
                    "configuration and lists them with their moves.")
    _add_input_args(p)
    p.add_argument("--dot", action="store_true",
                   help="emit a Graphviz digraph instead of text")
    p.set_defaults(func=cmd_lts)

    p = sub.add_parser(
        "closure", help="print the closed space used by the refiner",
        description="Like lts, but includes the extra stand-in states "
                    "and moves the refiner adds; those are marked "
                    "(dashed and dotted in --dot output).")
    _add_input_args(p)
    p.add_argument("--dot", action="store_true",
                   help="emit a Graphviz digraph instead of text")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser(
        "partitions", help="print the refinement trace",
        description="Runs the refiner over the union of all query "
                    "configurations and prints every partition from the "
                    "initial one to the repeated fixpoint row.")
    _add_input_args(p)
    _add_backend_arg(p)
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser(
        "bench-exp", help="run the ladder benchmark family",
        description="Generates ladder instances for each n, closes and "
                    "refines them, and reports how the closed space grows "
                    "against the plain reachable one.")
    p.add_argument("--n", default="2,4,6,8", metavar="LIST",
                   help="comma-separated instance sizes "
                        "(default %(default)s)")
    p.add_argument("--max-states", type=int, default=DEFAULT_BOUND,
                   metavar="N",
                   help="abort an instance past N states "
                        "(default %(default)s)")
    p.add_argument("--jsonl", metavar="FILE",
                   help="also write one JSON record per report to FILE")
    _add_backend_arg(p, both=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_arg_parser().parse_args(argv)
    return args.func(args, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
