"""Finite constraint lattices built from atoms, implications and conflicts.

A constraint is an implication-closed set of atoms (more atoms = more
information) or the inconsistent top element ``false``.  Entailment is
atom-set inclusion with ``false`` above everything, and joins are unions
followed by re-canonicalization.  Implication rules have a single
antecedent, so closure distributes over union and the closed sets form a
lattice whose double-step structure is precomputed per system.
"""

from itertools import combinations

from .errors import (HidingLawViolation, InvalidParameter, NoCylindrification,
                     NoSchematicAtoms, TooManyAtoms, UnknownAtom)

DEFAULT_ENUM_THRESHOLD = 16

# Global entailment-call counter, read by the benchmark harness.
_LEQ_CALLS = 0


def reset_leq_calls():
    global _LEQ_CALLS
    _LEQ_CALLS = 0


def get_leq_calls():
    return _LEQ_CALLS


def add_leq_calls(n):
    """Fold in entailment checks performed outside this module (engine twins)."""
    global _LEQ_CALLS
    _LEQ_CALLS += n


class Constraint:
    """Immutable canonical constraint: a closed atom mask, or false (mask -1)."""

    __slots__ = ("system", "mask", "_hash", "_key")

    def __init__(self, system, mask):
        self.system = system
        self.mask = mask
        self._hash = hash((id(system), mask))
        self._key = None

    @property
    def is_false(self):
        return self.mask < 0

    @property
    def is_true(self):
        return self.mask == 0

    def atoms(self):
        """Atom names in this constraint, sorted; false has no atom view."""
        if self.mask < 0:
            raise ValueError("false has no atom set")
        return self.system.mask_atoms(self.mask)

    def sort_key(self):
        if self._key is None:
            if self.mask < 0:
                self._key = (1, ())
            else:
                self._key = (0, self.system.mask_atoms(self.mask))
        return self._key

    def pretty(self):
        if self.mask < 0:
            return "false"
        if self.mask == 0:
            return "true"
        return " & ".join(self.system.mask_atoms(self.mask))

    def __eq__(self, other):
        return (isinstance(other, Constraint)
                and other.system is self.system
                and other.mask == self.mask)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Constraint(%s)" % self.pretty()


class ConstraintSystem:
    """Atoms plus single-antecedent implication rules plus conflict pairs.

    ``exists_tables`` optionally maps a variable name to a per-atom
    projection table (atom name -> tuple of atom names); unlisted atoms
    project to themselves.  The three hiding laws are validated at
    construction whenever the carrier can be enumerated.
    """

    def __init__(self, atoms, implications=(), conflicts=(), exists_tables=None,
                 enum_threshold=DEFAULT_ENUM_THRESHOLD, check_laws=True):
        names = sorted(set(atoms))
        if len(names) != len(list(atoms)):
            # Duplicates collapse silently; order is by name regardless.
            pass
        self.names = tuple(names)
        self.index = {a: i for i, a in enumerate(self.names)}
        self.n = len(self.names)
        self.enum_threshold = enum_threshold
        self.full_mask = (1 << self.n) - 1
        self.schematic_mode = False
        self._atom_var = {}

        direct = [0] * self.n
        for ant, cons in implications:
            ia = self._atom_index(ant)
            ic = self._atom_index(cons)
            direct[ia] |= 1 << ic
        # Transitive closure of the implication digraph, one bit row per atom.
        reach = [direct[i] | (1 << i) for i in range(self.n)]
        changed = True
        while changed:
            changed = False
            for i in range(self.n):
                acc = reach[i]
                scan = acc
                while scan:
                    j = (scan & -scan).bit_length() - 1
                    scan &= scan - 1
                    acc |= reach[j]
                if acc != reach[i]:
                    reach[i] = acc
                    changed = True
        self.reach = tuple(reach)
        self.implications = tuple(sorted(set(
            (self.names[self._atom_index(a)], self.names[self._atom_index(b)])
            for a, b in implications)))

        pairs = set()
        for a, b in conflicts:
            ia = self._atom_index(a)
            ib = self._atom_index(b)
            if ia == ib:
                raise InvalidParameter("conflict pair must name two distinct atoms")
            pairs.add((min(ia, ib), max(ia, ib)))
        self.conflict_pairs = tuple(sorted(pairs))
        self.conflict_masks = tuple((1 << a) | (1 << b) for a, b in self.conflict_pairs)
        conflict_atoms = 0
        for m in self.conflict_masks:
            conflict_atoms |= m
        self._conflict_atoms = conflict_atoms

        self.false = Constraint(self, -1)
        self.true = Constraint(self, 0)
        self._interned = {-1: self.false, 0: self.true}
        self._con0 = None

        self.exists_tables = {}
        if exists_tables:
            for var, table in exists_tables.items():
                compiled = {}
                for atom, proj in table.items():
                    ia = self._atom_index(atom)
                    mask = 0
                    for p in proj:
                        mask |= 1 << self._atom_index(p)
                    compiled[ia] = self._close(mask)
                self.exists_tables[var] = compiled
            if check_laws:
                self._validate_hiding_laws()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def schematic(cls, predicates, variables, implications=(), conflicts=(),
                  fresh_atoms=2, enum_threshold=DEFAULT_ENUM_THRESHOLD,
                  check_laws=True):
        """Build a system whose atoms are predicate(variable) instances.

        Rules and conflicts are given on predicates and instantiated per
        variable (so they are closed under renaming).  ``fresh_atoms`` extra
        variables from the reserved ``#k`` namespace are materialized so that
        hiding can rename apart.  Projection tables are generated
        structurally: hiding a variable drops that variable's atoms.
        """
        vars_all = list(variables) + ["#%d" % k for k in range(fresh_atoms)]
        if len(set(vars_all)) != len(vars_all):
            raise InvalidParameter("duplicate variable names")
        atoms = ["%s(%s)" % (p, v) for p in predicates for v in vars_all]
        impl = [("%s(%s)" % (p, v), "%s(%s)" % (q, v))
                for p, q in implications for v in vars_all]
        confl = [("%s(%s)" % (p, v), "%s(%s)" % (q, v))
                 for p, q in conflicts for v in vars_all]
        tables = {v: {"%s(%s)" % (p, v): () for p in predicates} for v in vars_all}
        sys_ = cls(atoms, impl, confl, exists_tables=tables,
                   enum_threshold=enum_threshold, check_laws=False)
        sys_.schematic_mode = True
        sys_._atom_var = {"%s(%s)" % (p, v): v for p in predicates for v in vars_all}
        sys_._atom_pred = {"%s(%s)" % (p, v): p for p in predicates for v in vars_all}
        if check_laws:
            # Structural tables satisfy the laws by construction; the check
            # is a guard against regressions, so the quadratic part may be
            # skipped when the carrier is large instead of rejecting.
            sys_._validate_hiding_laws(skip_infeasible_pairs=True)
        return sys_

    def _atom_index(self, name):
        try:
            return self.index[name]
        except KeyError:
            raise UnknownAtom(name) from None

    # -- mask-level kernel ----------------------------------------------------

    def _close(self, mask):
        out = 0
        scan = mask
        while scan:
            i = (scan & -scan).bit_length() - 1
            scan &= scan - 1
            out |= self.reach[i]
        return out

    def _consistent(self, mask):
        for cm in self.conflict_masks:
            if mask & cm == cm:
                return False
        return True

    def canonical_mask(self, mask):
        """Close ``mask`` under implications; -1 when a conflict fires."""
        closed = self._close(mask)
        return closed if self._consistent(closed) else -1

    def mask_atoms(self, mask):
        return tuple(self.names[i] for i in range(self.n) if mask >> i & 1)

    # -- constraint construction ----------------------------------------------

    def constraint(self, atoms):
        mask = 0
        for a in atoms:
            mask |= 1 << self._atom_index(a)
        return self.from_mask(self.canonical_mask(mask))

    def atom(self, name):
        return self.from_mask(self.canonical_mask(1 << self._atom_index(name)))

    def from_mask(self, mask):
        got = self._interned.get(mask)
        if got is None:
            got = self._interned[mask] = Constraint(self, mask)
        return got

    # -- hiding ---------------------------------------------------------------

    def _project_mask(self, var, mask):
        table = self.exists_tables[var]
        out = 0
        scan = mask
        while scan:
            i = (scan & -scan).bit_length() - 1
            scan &= scan - 1
            out |= table.get(i, self.reach[i])
        return out if self._consistent(out) else -1

    def _validate_hiding_laws(self, skip_infeasible_pairs=False):
        if self.n > self.enum_threshold:
            raise TooManyAtoms(self.n, self.enum_threshold)
        carrier = enumerate_con0(self)
        vars_ = sorted(self.exists_tables)
        # The join law ranges over constraint pairs; cap the quadratic part.
        pair_work = len(carrier) * len(carrier) * max(len(vars_), 1)
        if pair_work > 4_000_000 and not skip_infeasible_pairs:
            raise TooManyAtoms(self.n, self.enum_threshold)
        for x in vars_:
            for c in carrier:
                if not leq(exists_var(self, x, c), c):
                    raise HidingLawViolation(
                        "hiding table for %r violates the projection law on %s"
                        % (x, c.pretty()))
        for x, y in combinations(vars_, 2):
            for c in carrier:
                if exists_var(self, x, exists_var(self, y, c)) != \
                        exists_var(self, y, exists_var(self, x, c)):
                    raise HidingLawViolation(
                        "hiding tables for %r and %r do not commute on %s"
                        % (x, y, c.pretty()))
        if pair_work > 4_000_000:
            return
        for x in vars_:
            for c in carrier:
                exc = exists_var(self, x, c)
                for d in carrier:
                    exd = exists_var(self, x, d)
                    if exists_var(self, x, lub(c, exd)) != lub(exc, exd):
                        raise HidingLawViolation(
                            "hiding table for %r violates the join law on "
                            "(%s, %s)" % (x, c.pretty(), d.pretty()))

    # -- renaming (schematic systems) -----------------------------------------

    def rename_constraint(self, c, mapping):
        """Rename variables inside atoms; identity on unaffected atoms."""
        if c.is_false or not mapping:
            return c
        if not self.schematic_mode:
            for name in c.atoms():
                var = _opaque_atom_var(name)
                if var is not None and var in mapping and mapping[var] != var:
                    raise NoSchematicAtoms(name, var)
            return c
        mask = 0
        for name in c.atoms():
            var = self._atom_var.get(name)
            if var is None or var not in mapping or mapping[var] == var:
                mask |= 1 << self.index[name]
            else:
                target = "%s(%s)" % (self._atom_pred[name], mapping[var])
                if target not in self.index:
                    raise UnknownAtom(target)
                mask |= 1 << self.index[target]
        return self.from_mask(self.canonical_mask(mask))

    def constraint_vars(self, c):
        """Variables mentioned by the atoms of ``c`` (schematic systems)."""
        if c.is_false or not self.schematic_mode:
            return frozenset()
        return frozenset(v for v in (self._atom_var.get(a) for a in c.atoms())
                         if v is not None)


def _opaque_atom_var(name):
    """Extract a pred(var) shape from an opaque atom name, if it has one."""
    if name.endswith(")") and "(" in name:
        inner = name[name.index("(") + 1:-1]
        if inner.isidentifier() or inner.startswith("#"):
            return inner
    return None


# -- lattice operations -------------------------------------------------------

def canonicalize(system, atoms):
    """Close an atom set under the implication rules; detect conflicts."""
    return system.constraint(atoms)


def leq(c, d):
    """Entailment: d carries at least the information of c (false on top)."""
    global _LEQ_CALLS
    _LEQ_CALLS += 1
    if c.system is not d.system:
        raise ValueError("constraints from different systems")
    if d.mask < 0:
        return True
    if c.mask < 0:
        return False
    return c.mask & ~d.mask == 0


def lub(c, d):
    if c.system is not d.system:
        raise ValueError("constraints from different systems")
    if c.mask < 0 or d.mask < 0:
        return c.system.false
    merged = c.mask | d.mask
    # Unions of closed sets are closed (single-antecedent rules), so only
    # conflicts can strike the join down.
    return c.system.from_mask(merged if c.system._consistent(merged) else -1)


def enumerate_con0(system):
    """All canonical constraints in deterministic order, false last."""
    if system._con0 is not None:
        return list(system._con0)
    if system.n > system.enum_threshold:
        raise TooManyAtoms(system.n, system.enum_threshold)
    out = []
    for mask in range(1 << system.n):
        ok = True
        scan = mask
        while scan:
            i = (scan & -scan).bit_length() - 1
            scan &= scan - 1
            if system.reach[i] & ~mask:
                ok = False
                break
        if ok and system._consistent(mask):
            out.append(system.from_mask(mask))
    out.sort(key=lambda c: c.sort_key())
    out.append(system.false)
    system._con0 = tuple(out)
    return list(out)


def _minimal(system, candidates):
    cands = sorted(set(candidates), key=lambda c: c.sort_key())
    out = []
    for c in cands:
        if not any(other != c and leq(other, c) for other in cands):
            out.append(c)
    return out


def min_enablers(c, d):
    """Minimal constraints a with c entailed by d joined with a.

    Enumerates joins of *relevant* atoms only: an enabler stripped of atoms
    whose implication closure meets neither the missing atoms of ``c`` nor a
    conflict pair is still an enabler, so minimal enablers live inside the
    relevant-atom sublattice.  The inconsistent constraint is always an
    enabler and survives to the output only when nothing consistent works.
    """
    system = c.system
    if d.system is not system:
        raise ValueError("constraints from different systems")
    if leq(c, d):
        return [system.true]
    missing = 0 if c.mask < 0 else c.mask & ~d.mask
    relevant = [i for i in range(system.n)
                if (system.reach[i] & missing)
                or (system.reach[i] & system._conflict_atoms)]
    if len(relevant) > system.enum_threshold:
        raise TooManyAtoms(len(relevant), system.enum_threshold)
    candidates = [system.false]
    for r in range(len(relevant) + 1):
        for combo in combinations(relevant, r):
            mask = 0
            for i in combo:
                mask |= system.reach[i]
            a = system.from_mask(mask if system._consistent(mask) else -1)
            if leq(c, lub(d, a)):
                candidates.append(a)
    return _minimal(system, candidates)


def min_enablers_by_enumeration(c, d):
    """Reference implementation over the full enumerated carrier."""
    system = c.system
    enablers = [a for a in enumerate_con0(system) if leq(c, lub(d, a))]
    return _minimal(system, enablers)


def exists_var(system, x, c):
    """Project out variable x via the system's hiding table."""
    if x not in system.exists_tables:
        raise NoCylindrification(x)
    if c.is_false:
        return system.false
    return system.from_mask(system._project_mask(x, c.mask))
