"""Propositional-logic workbench: formulas, truth tables, normal forms,
equivalence-law derivations, consequence proofs, exercises and services."""

import sys as _sys

# DNF/CNF spines may legitimately hold thousands of operands; the recursive
# tree walks need headroom beyond CPython's conservative default.
_sys.setrecursionlimit(max(_sys.getrecursionlimit(), 20000))

from .formula import (
    And,
    Atom,
    Const,
    FALSE,
    Formula,
    Iff,
    Implies,
    Literal,
    Not,
    Or,
    TRUE,
    atoms,
    replace_at,
    subformula_at,
)
from .syntax import ParseError, SyntaxStyle, parse, parse_infix, parse_polish, print_formula
from .semantics import (
    CanonicalIndexSets,
    Classification,
    TooManyVariables,
    UnboundAtom,
    classify,
    entails,
    equivalent,
    evaluate,
    index_sets,
    truth_table,
)
from .laws import Direction, LawId, PatternMismatch, applicable_laws, apply_law
from .derivation import (
    Derivation,
    Mode,
    ShapeGoal,
    Step,
    validate_derivation,
)
from .autoderive import AutoGoal, NotConstant, StepLimitExceeded, TermBlowupLimit, auto_derive
from .normal_forms import CanonicalForm, CnfForm, DnfForm, to_cnf, to_dnf, to_nnf, to_principal

__version__ = "0.1.0"
