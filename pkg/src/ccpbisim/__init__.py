"""Checker for saturated barbed bisimilarity of finite concurrent constraint programs."""

from .bench import BenchReport, gen_exponential, run_bench
from .derivation import (closure, derived_target, derives, derives_def,
                         is_redundant)
from .errors import (CcpError, DuplicateProcedure, HidingLawViolation,
                     InvalidParameter, MissingDerivedState, NoCylindrification,
                     NoSchematicAtoms, NotDominating, ProgramSyntaxError,
                     StateSpaceExceeded, TooManyAtoms, UnboundFreeVariable,
                     UnknownAtom)
from .lattice import (Constraint, ConstraintSystem, canonicalize,
                      enumerate_con0, exists_var, leq, lub, min_enablers)
from .oracle import barbed_bisim, irredundant_gfp, sb_oracle, syntactic_bisim
from .parser import parse_program
from .refinement import (Partition, RefinementTrace, ccp_partition_refine,
                         initial_partition_barbs, refine_F, refine_IR,
                         refine_space, sb_equiv, std_partition_refine)
from .semantics import (Configuration, StateSpace, Transition, labeled_steps,
                        reachable, reduce, satisfies_barb)
from .syntax import (STOP, Ask, Call, Local, Par, ProcEnv, Process, Program,
                     Stop, Sum, Tell)

__version__ = "0.1.0"
