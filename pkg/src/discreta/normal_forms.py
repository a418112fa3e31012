"""Normal-form transformation: NNF, DNF/CNF, and the principal (canonical)
forms FNDP/FNCP with their Σm/ΠM index sets.

Every transformation returns the structured form together with a replayable
derivation.  Canonical expansion follows the identity/negation/distributivity
postulate chain: a term missing a variable B becomes t ∧ T, then
t ∧ (B ∨ ¬B), then (t ∧ B) ∨ (t ∧ ¬B) — and dually for sum terms — with
duplicates removed by idempotence and a final commutativity step ordering the
canonical terms by index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .autoderive import (
    AutoGoal,
    DEFAULT_TERM_CAP,
    Rewriter,
    TermBlowupLimit,
    auto_derive,
)
from .derivation import Derivation, ShapeGoal, ac_key
from .formula import (
    And,
    Atom,
    Const,
    FALSE,
    Formula,
    Literal,
    Not,
    Or,
    TRUE,
    as_literal,
    atoms,
    flatten,
    spine_paths,
)
from .laws import Direction, LawId
from .semantics import CanonicalIndexSets, DuplicateVariable, MissingVariable

EXPANSION_CAP = 12  # 2^12 = 4096 canonical terms, the default term cap


def is_literal(f: Formula) -> bool:
    return as_literal(f) is not None


def is_nnf(f: Formula) -> bool:
    """Only ∧, ∨, literals and constants."""
    if isinstance(f, (Const, Atom)):
        return True
    if isinstance(f, Not):
        return isinstance(f.child, Atom)
    if isinstance(f, (And, Or)):
        return is_nnf(f.left) and is_nnf(f.right)
    return False


def _is_junction_of_literals(f: Formula, op: type) -> bool:
    return all(is_literal(x) for x in flatten(f, op))


def is_dnf(f: Formula) -> bool:
    if isinstance(f, Const):
        return True
    return all(_is_junction_of_literals(t, And) for t in flatten(f, Or))


def is_cnf(f: Formula) -> bool:
    if isinstance(f, Const):
        return True
    return all(_is_junction_of_literals(t, Or) for t in flatten(f, And))


def _is_canonical(f: Formula, outer: type, inner: type, empty: Formula) -> bool:
    if f == empty:
        return True
    if not (is_dnf(f) if outer is Or else is_cnf(f)):
        return False
    var_sets = []
    seen = set()
    for t in flatten(f, outer):
        lits = [as_literal(x) for x in flatten(t, inner)]
        names = [l.atom for l in lits]
        if len(set(names)) != len(names):
            return False
        key = frozenset(lits)
        if key in seen:
            return False
        seen.add(key)
        var_sets.append(frozenset(names))
    return len(set(var_sets)) <= 1


def has_shape(f: Formula, shape: ShapeGoal) -> bool:
    if shape is ShapeGoal.NNF:
        return is_nnf(f)
    if shape is ShapeGoal.DNF:
        return is_dnf(f)
    if shape is ShapeGoal.CNF:
        return is_cnf(f)
    if shape is ShapeGoal.FNDP:
        return _is_canonical(f, Or, And, FALSE)
    return _is_canonical(f, And, Or, TRUE)


def _term_literals(t: Formula, inner: type) -> tuple[Literal, ...]:
    lits = []
    for x in flatten(t, inner):
        lit = as_literal(x)
        if lit is None:
            raise ValueError(f"not a literal term operand: {x!r}")
        lits.append(lit)
    return tuple(sorted(lits, key=lambda l: (l.atom, l.negated)))


def _normal_term_ok(lits: Sequence[Literal]) -> bool:
    names = [l.atom for l in lits]
    if len(set(names)) != len(names):
        return False
    return not any(l.complement() in lits for l in lits)


@dataclass(frozen=True)
class DnfForm:
    """Sum of product terms; () means F, a single empty term means T."""

    terms: tuple[tuple[Literal, ...], ...]

    def __post_init__(self):
        for term in self.terms:
            if not _normal_term_ok(term):
                raise ValueError(f"not a normal product term: {term}")

    def to_formula(self) -> Formula:
        if not self.terms:
            return FALSE
        parts = [_fold_literals(t, And, TRUE) for t in self.terms]
        out = parts[0]
        for p in parts[1:]:
            out = Or(out, p)
        return out


@dataclass(frozen=True)
class CnfForm:
    """Product of sum terms; () means T, a single empty term means F."""

    terms: tuple[tuple[Literal, ...], ...]

    def __post_init__(self):
        for term in self.terms:
            if not _normal_term_ok(term):
                raise ValueError(f"not a normal sum term: {term}")

    def to_formula(self) -> Formula:
        if not self.terms:
            return TRUE
        parts = [_fold_literals(t, Or, FALSE) for t in self.terms]
        out = parts[0]
        for p in parts[1:]:
            out = And(out, p)
        return out


def _fold_literals(lits: Sequence[Literal], ctor: type, empty: Formula) -> Formula:
    if not lits:
        return empty
    out: Formula = lits[0].to_formula()
    for lit in lits[1:]:
        out = ctor(out, lit.to_formula())
    return out


def _extract(f: Formula, outer: type, inner: type, absorbing: Formula) -> tuple[tuple[Literal, ...], ...]:
    # absorbing: FALSE for DNF (empty sum), TRUE for CNF (empty product)
    if f == absorbing:
        return ()
    if isinstance(f, Const):
        return ((),)
    return tuple(_term_literals(t, inner) for t in flatten(f, outer))


def to_nnf(f: Formula) -> tuple[Formula, Derivation]:
    d = auto_derive(f, AutoGoal.TO_NNF)
    return d.final, d


def to_dnf(f: Formula, term_cap: int = DEFAULT_TERM_CAP, step_limit: int | None = None) -> tuple[DnfForm, Derivation]:
    d = auto_derive(f, AutoGoal.TO_DNF, step_limit=step_limit or _budget(term_cap), term_cap=term_cap)
    return DnfForm(_extract(d.final, Or, And, FALSE)), d


def to_cnf(f: Formula, term_cap: int = DEFAULT_TERM_CAP, step_limit: int | None = None) -> tuple[CnfForm, Derivation]:
    d = auto_derive(f, AutoGoal.TO_CNF, step_limit=step_limit or _budget(term_cap), term_cap=term_cap)
    return CnfForm(_extract(d.final, And, Or, TRUE)), d


def _budget(term_cap: int) -> int:
    # generous: the node/term caps bound tree size, the step budget only
    # breaks cycles
    return max(8192, term_cap * 64)


def term_index(lits: Sequence[Literal], order: Sequence[str], kind: ShapeGoal) -> int:
    """Canonical-term index: for minterms bit 1 marks a positive literal, for
    maxterms bit 1 marks a negated one (so maxterm i is false at row i)."""
    by_atom = {l.atom: l for l in lits}
    n = len(order)
    idx = 0
    for j, name in enumerate(order):
        lit = by_atom[name]
        bit = (not lit.negated) if kind is ShapeGoal.FNDP else lit.negated
        if bit:
            idx |= 1 << (n - 1 - j)
    return idx


@dataclass(frozen=True)
class CanonicalForm:
    kind: ShapeGoal
    order: tuple[str, ...]
    terms: tuple[tuple[Literal, ...], ...]  # index-sorted; literals follow `order`
    indices: CanonicalIndexSets

    def to_formula(self) -> Formula:
        if self.kind is ShapeGoal.FNDP:
            return DnfForm(self.terms).to_formula() if self.terms else FALSE
        return CnfForm(self.terms).to_formula() if self.terms else TRUE


def to_principal(
    f: Formula,
    kind: ShapeGoal,
    order: Sequence[str] | None = None,
    term_cap: int = DEFAULT_TERM_CAP,
) -> tuple[CanonicalForm, Derivation]:
    if kind not in (ShapeGoal.FNDP, ShapeGoal.FNCP):
        raise ValueError("kind must be FNDP or FNCP")
    order = tuple(atoms(f) if order is None else order)
    seen: set[str] = set()
    for name in order:
        if name in seen:
            raise DuplicateVariable(name)
        seen.add(name)
    for name in atoms(f):
        if name not in seen:
            raise MissingVariable(name)
    if len(order) > EXPANSION_CAP or (1 << len(order)) > term_cap:
        raise TermBlowupLimit(1 << len(order), min(term_cap, 1 << EXPANSION_CAP))

    fndp = kind is ShapeGoal.FNDP
    outer, inner = (Or, And) if fndp else (And, Or)
    unit = TRUE if fndp else FALSE  # identity element of the inner junction
    absorbing = FALSE if fndp else TRUE
    dist_law = LawId.DIST_AND_OVER_OR if fndp else LawId.DIST_OR_OVER_AND

    rw = Rewriter(f, step_limit=_budget(term_cap), term_cap=term_cap)
    rw.normalize(AutoGoal.TO_DNF if fndp else AutoGoal.TO_CNF)

    # expansion: complete every non-canonical term, left to right
    while rw.current != absorbing:
        top = rw.current
        paths = spine_paths(top, outer)
        ops = flatten(top, outer)
        if len(ops) > term_cap:
            raise TermBlowupLimit(len(ops), term_cap)
        target = None
        for path, t in zip(paths, ops):
            if isinstance(t, Const):
                target = (path, t, None)
                break
            missing = [v for v in order if v not in atoms(t)]
            if missing:
                target = (path, t, missing[0])
                break
        if target is None:
            break
        path, t, var = target
        if var is None:
            # constant term: T ⇒ v ∨ ¬v (or F ⇒ v ∧ ¬v), a Negación expansion
            v = Atom(order[0]) if order else None
            if v is None:
                break  # empty order: the constant itself is the empty term
            rw.construct(LawId.NEGATION, Direction.RL, path, outer(v, Not(v)))
            continue
        v = Atom(var)
        rw.construct(LawId.IDENTITY, Direction.RL, path, inner(t, unit))
        rw.construct(LawId.NEGATION, Direction.RL, path + (1,), outer(v, Not(v)))
        rw.apply(dist_law, Direction.LR, path)

    # idempotence: drop repeated canonical terms
    while rw.current != absorbing:
        ops = flatten(rw.current, outer)
        dup = None
        keys = [ac_key(op) for op in ops]
        for i, key in enumerate(keys):
            if key in keys[:i]:
                dup = (keys.index(key), i)
                break
        if dup is None:
            break
        first, second = dup
        others = [ops[k] for k in range(len(ops)) if k not in dup]
        pair = outer(ops[first], ops[first])
        rw.shuffle_spine((), rw.current, others + [pair], outer)
        rw.apply(LawId.IDEMPOTENCE, Direction.LR, (1,) if others else ())

    # final commutativity: order terms by index, literals by the variable order
    if rw.current == absorbing:
        terms: tuple[tuple[Literal, ...], ...] = ()
    else:
        raw_terms = []
        for t in flatten(rw.current, outer):
            lits = {l.atom: l for l in (as_literal(x) for x in flatten(t, inner)) if l is not None}
            ordered = tuple(lits[name] for name in order)
            raw_terms.append((term_index(ordered, order, kind), ordered))
        raw_terms.sort(key=lambda pair: pair[0])
        terms = tuple(t for _, t in raw_terms)
        sorted_formula = _fold_terms(terms, outer, inner)
        if sorted_formula != rw.current:
            comm = LawId.COMM_OR if fndp else LawId.COMM_AND
            rw.construct(comm, Direction.LR, (), sorted_formula)

    n = len(order)
    rows = 1 << n
    own = tuple(term_index(t, order, kind) for t in terms)
    rest = tuple(i for i in range(rows) if i not in set(own))
    if fndp:
        indices = CanonicalIndexSets(n, own, rest)
    else:
        indices = CanonicalIndexSets(n, rest, own)
    form = CanonicalForm(kind=kind, order=order, terms=terms, indices=indices)
    return form, Derivation(start=f, steps=rw.steps, goal=kind)


def _fold_terms(terms: Sequence[Sequence[Literal]], outer: type, inner: type) -> Formula:
    unit_empty = TRUE if inner is And else FALSE
    parts = [_fold_literals(t, inner, unit_empty) for t in terms]
    out = parts[0]
    for p in parts[1:]:
        out = outer(out, p)
    return out
