"""Backend selection and array encoding for the refinement inner loop.

The loop that recomputes redundancy and splits blocks dominates runtime
once closures get large, so it runs over a flat integer encoding of the
space: one array triple for labeled moves, one for all moves, and a
packed offset table of stand-in target states per labeled move.  Two
interchangeable implementations exist: a compiled extension and a plain
Python twin with identical observable behaviour.  The compiled one is
preferred when importable; set CCPBISIM_PURE=1 to force the twin.
"""

import os
from array import array

from .derivation import attach_dominators
from .errors import CcpError
from .semantics import KIND_LABELED


class EncodedSpace:
    """Flat view of a state space for the refinement kernel."""

    __slots__ = ("n", "lsrc", "llab", "ltgt", "dom_off", "dom_state",
                 "asrc", "alab", "atgt", "n_labels")

    def __init__(self, n, lsrc, llab, ltgt, dom_off, dom_state,
                 asrc, alab, atgt, n_labels):
        self.n = n
        self.lsrc = lsrc
        self.llab = llab
        self.ltgt = ltgt
        self.dom_off = dom_off
        self.dom_state = dom_state
        self.asrc = asrc
        self.alab = alab
        self.atgt = atgt
        self.n_labels = n_labels


def encode_space(space):
    """Strip a space down to the integer arrays the kernel reads."""
    attach_dominators(space)
    idx = space.index
    label_ids = {}
    lsrc = array("l")
    llab = array("l")
    ltgt = array("l")
    asrc = array("l")
    alab = array("l")
    atgt = array("l")
    dom_off = array("l", [0])
    dom_state = array("l")
    for k, t in enumerate(space.transitions):
        lab = label_ids.setdefault(t.label, len(label_ids))
        si, ti = idx[t.source], idx[t.target]
        asrc.append(si)
        alab.append(lab)
        atgt.append(ti)
        if t.kind == KIND_LABELED:
            lsrc.append(si)
            llab.append(lab)
            ltgt.append(ti)
            dom_state.extend(space.dominators[k])
            dom_off.append(len(dom_state))
    return EncodedSpace(len(space.states), lsrc, llab, ltgt, dom_off,
                        dom_state, asrc, alab, atgt, len(label_ids))


def _load_compiled():
    from . import _engine_c
    return _engine_c


def _load_pure():
    from . import _engine_py
    return _engine_py


def get_backend(name=None):
    """Resolve a kernel module by name: compiled, pure, or default."""
    if name in (None, "auto"):
        if os.environ.get("CCPBISIM_PURE") == "1":
            return _load_pure()
        try:
            return _load_compiled()
        except ImportError:
            return _load_pure()
    if name == "compiled":
        try:
            return _load_compiled()
        except ImportError as exc:
            raise CcpError("compiled backend unavailable: %s" % exc) from exc
    if name == "pure":
        return _load_pure()
    raise CcpError("unknown backend %r" % (name,))


def backend_name(name=None):
    return get_backend(name).NAME
