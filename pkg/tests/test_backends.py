"""The compiled refinement kernel against its plain Python twin."""

import os
import subprocess
import sys

import pytest

from ccpbisim import CcpError, ccp_partition_refine, closure, gen_exponential
from ccpbisim.engine import backend_name, encode_space, get_backend
from ccpbisim.lattice import get_leq_calls
from ccpbisim.refinement import initial_partition_barbs, refine_space

from _corpus import corpus_programs
from _fixtures import build_example

HAVE_COMPILED = True
try:
    get_backend("compiled")
except CcpError:
    HAVE_COMPILED = False

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED,
                                    reason="compiled kernel not built")


def run_both(space):
    init = initial_partition_barbs(space)
    enc = encode_space(space)
    out = {}
    for name in ("pure", "compiled"):
        rows, verdicts = get_backend(name).refine_fixpoint(
            enc, list(init.ids), len(space.states) + 1)
        out[name] = ([list(r) for r in rows], [bytes(v) for v in verdicts])
    return out["pure"], out["compiled"]


@needs_compiled
def test_twins_agree_on_the_running_example():
    system, env, initials = build_example()
    space = closure(initials, env)
    pure, compiled = run_both(space)
    assert pure == compiled


@needs_compiled
def test_twins_agree_on_corpus():
    for system, env, config, space in corpus_programs(30):
        pure, compiled = run_both(space)
        assert pure == compiled


@needs_compiled
def test_twins_agree_on_ladders():
    for n in (2, 4):
        program = gen_exponential(n)
        start = program.queries[0][1]
        space = closure([start], program.env)
        pure, compiled = run_both(space)
        assert pure == compiled


@needs_compiled
def test_refine_space_backend_argument():
    system, env, initials = build_example()
    space = closure(initials, env)
    part_p, trace_p = refine_space(space, backend="pure")
    part_c, trace_c = refine_space(space, backend="compiled")
    assert part_p.ids == part_c.ids
    assert [p.ids for p in trace_p.partitions] == \
        [p.ids for p in trace_c.partitions]
    assert trace_p.verdicts == trace_c.verdicts


def test_lattice_work_is_backend_invariant():
    # The kernels consume a pre-encoded space, so entailment-call counts
    # must not depend on which one runs.
    system, env, initials = build_example()
    counts = {}
    for name in ("pure",) + (("compiled",) if HAVE_COMPILED else ()):
        before = get_leq_calls()
        ccp_partition_refine(initials, env, backend=name)
        counts[name] = get_leq_calls() - before
        system, env, initials = build_example()
    assert len(set(counts.values())) == 1


def test_backend_names():
    assert get_backend("pure").NAME == "pure"
    assert backend_name("pure") == "pure"
    if HAVE_COMPILED:
        assert get_backend("compiled").NAME == "compiled"
        assert backend_name(None) == "compiled"
    with pytest.raises(CcpError):
        get_backend("fast")


def test_environment_override_forces_pure():
    code = ("import ccpbisim.engine as e; print(e.backend_name())")
    env = dict(os.environ, CCPBISIM_PURE="1")
    got = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert got.stdout.strip() == "pure"
    env.pop("CCPBISIM_PURE")
    got = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    expected = "compiled" if HAVE_COMPILED else "pure"
    assert got.stdout.strip() == expected
