"""Growth measurements on a family built to blow up the closure.

The generated instance chains n levels.  Level i owns an atom a_i and two
stronger atoms b_i0, b_i1; nothing else relates, so distinct levels are
incomparable.  The process ladder can commit to the a_i branch early or
dawdle through a true-labeled detour first, and the closure must keep a
stand-in state for every way the commitments interleave, while the plain
reachable space stays linear in n.  Reports count both spaces and the
entailment calls spent, which is the natural unit of lattice work.
"""

import json
import time
from dataclasses import asdict, dataclass
from typing import Optional

from .derivation import closure
from .errors import InvalidParameter, StateSpaceExceeded
from .lattice import ConstraintSystem, get_leq_calls
from .refinement import refine_space
from .semantics import DEFAULT_BOUND, Configuration
from .syntax import STOP, Ask, Call, ProcEnv, Program, Sum


@dataclass
class BenchReport:
    n: int
    config_states: int
    config_transitions: int
    closure_states: int
    iterations: int
    leq_calls: int
    wall_time: float
    error: Optional[str] = None

    def ratio(self):
        if self.config_states == 0:
            return 0.0
        return self.closure_states / self.config_states

    def json_line(self, backend=None):
        record = asdict(self)
        if backend is not None:
            record["backend"] = backend
        return json.dumps(record, sort_keys=True)


def gen_exponential(n):
    """Build the n-level ladder program; n must be even and positive.

    Atoms a_0..a_{n-1} and b_{i,j}; each b_{i,j} implies its a_i and
    nothing else.  Ladder procedures: at level i the 0-stage may take a
    true-labeled detour to the 1-stage, bail out on b_{i,0}, or advance on
    a_i; the 1-stage has no detour and bails on b_{i,1}.  The top of the
    ladder stops, or loops once back from stage 1.  The single query pins
    the start of the ladder in an empty store.
    """
    if n < 2 or n % 2 != 0:
        raise InvalidParameter("n must be an even number >= 2, got %r" % (n,))
    atoms = []
    implications = []
    for i in range(n):
        atoms.append("a%d" % i)
        for j in (0, 1):
            atoms.append("b%d_%d" % (i, j))
            implications.append(("b%d_%d" % (i, j), "a%d" % i))
    system = ConstraintSystem(atoms, implications)
    a = [system.constraint(["a%d" % i]) for i in range(n)]
    b = [[system.constraint(["b%d_%d" % (i, j)]) for j in (0, 1)]
         for i in range(n)]

    def call(i, j):
        return Call("s%d_%d" % (i, j), ())

    defs = [("s%d_0" % n, (), STOP),
            ("s%d_1" % n, (), Ask(system.true, call(n, 0)))]
    for i in range(n):
        detour = Ask(system.true, call(i, 1))
        bail0 = Ask(b[i][0], STOP)
        bail1 = Ask(b[i][1], STOP)
        defs.append(("s%d_0" % i, (),
                     Sum(Sum(detour, bail0), Ask(a[i], call(i + 1, 0)))))
        defs.append(("s%d_1" % i, (),
                     Sum(bail1, Ask(a[i], call(i + 1, 1)))))
    env = ProcEnv(defs)
    start = Configuration(call(0, 0), system.true)
    return Program(system, env, [("sb", start, start)])


def run_bench(n_list, bound=DEFAULT_BOUND, backend=None):
    """One report per instance; state-space overruns are recorded, not raised."""
    reports = []
    for n in n_list:
        program = gen_exponential(n)
        start = program.queries[0][1]
        before = get_leq_calls()
        t0 = time.perf_counter()
        try:
            space = closure([start], program.env, bound)
            _, trace = refine_space(space, backend=backend)
            wall = time.perf_counter() - t0
            reachable = sum(1 for f in space.derived_flags if not f)
            flags = space.derived_flags
            idx = space.index
            reach_trans = sum(
                1 for t in space.labeled_transitions()
                if not flags[idx[t.source]])
            reports.append(BenchReport(
                n=n, config_states=reachable,
                config_transitions=reach_trans,
                closure_states=len(space.states),
                iterations=trace.iterations,
                leq_calls=get_leq_calls() - before,
                wall_time=wall))
        except StateSpaceExceeded as exc:
            reports.append(BenchReport(
                n=n, config_states=0, config_transitions=0,
                closure_states=0, iterations=0,
                leq_calls=get_leq_calls() - before,
                wall_time=time.perf_counter() - t0,
                error=str(exc)))
    return reports


def format_table(reports, include_time=True):
    """Text table; pass include_time=False for run-to-run stable output."""
    header = ["n", "config_states", "config_transitions", "closure_states",
              "iterations", "leq_calls", "ratio"]
    if include_time:
        header.append("wall_time")
    rows = [tuple(header)]
    for r in reports:
        if r.error:
            row = [str(r.n), "-", "-", "-", "-", str(r.leq_calls), r.error]
        else:
            row = [str(r.n), str(r.config_states),
                   str(r.config_transitions), str(r.closure_states),
                   str(r.iterations), str(r.leq_calls), "%.2f" % r.ratio()]
        if include_time:
            row.append("%.3fs" % r.wall_time if not r.error else "-")
        rows.append(tuple(row))
    widths = [max(len(row[c]) for row in rows) for c in range(len(header))]
    lines = []
    for row in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines)
