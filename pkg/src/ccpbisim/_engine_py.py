"""Plain-Python refinement kernel; behavioural twin of the compiled one.

Keep the two implementations in lockstep: same signature pass, same
greedy grouping with a running union of demands and intersection of
offers per group, same canonical renumbering by first occurrence.
"""

from .errors import CcpError

NAME = "pure"


def refine_fixpoint(enc, init_ids, max_iters):
    """Iterate the store-aware refiner to its fixpoint.

    Returns (rows, verdicts): rows is every block-id assignment from the
    initial one to the repeated fixpoint row; verdicts holds, per
    iteration, one byte per labeled move (1 = redundant for that row).
    """
    n = enc.n
    base = n + 1
    lsrc, llab, ltgt = enc.lsrc, enc.llab, enc.ltgt
    dom_off, dom_state = enc.dom_off, enc.dom_state
    asrc, alab, atgt = enc.asrc, enc.alab, enc.atgt
    nl = len(lsrc)
    na = len(asrc)
    ids = list(init_ids)
    rows = [list(ids)]
    verdicts = []
    if len(set(ids)) == n:
        # every block is a singleton already; nothing can split further
        return rows, verdicts
    for _ in range(max_iters):
        red = bytearray(nl)
        for k in range(nl):
            home = ids[ltgt[k]]
            for o in range(dom_off[k], dom_off[k + 1]):
                if ids[dom_state[o]] == home:
                    red[k] = 1
                    break
        can = [set() for _ in range(n)]
        must = [set() for _ in range(n)]
        for k in range(na):
            can[asrc[k]].add(alab[k] * base + ids[atgt[k]])
        for k in range(nl):
            if not red[k]:
                must[lsrc[k]].add(llab[k] * base + ids[ltgt[k]])
        new_ids = [0] * n
        groups_of = {}
        counter = 0
        for i in range(n):
            placed = -1
            for g in groups_of.setdefault(ids[i], []):
                if must[i] <= g[1] and g[0] <= can[i]:
                    g[0] |= must[i]
                    g[1] &= can[i]
                    placed = g[2]
                    break
            if placed < 0:
                groups_of[ids[i]].append([set(must[i]), set(can[i]), counter])
                placed = counter
                counter += 1
            new_ids[i] = placed
        verdicts.append(bytes(red))
        rows.append(new_ids)
        if new_ids == ids:
            return rows, verdicts
        ids = new_ids
    raise CcpError("refinement failed to stabilize within its bound")
