"""Truth-table semantics: evaluation, the tautology/contingency/contradiction
trichotomy, minterm/maxterm index sets, and the exhaustive-enumeration oracle
(`equivalent` / `entails`) every other module is checked against.

Row convention: over a variable order [v0, .., v(n-1)], row i assigns vj the
j-th bit of i written MSB-first, bit 1 meaning true.  Tables therefore read
top-down as binary counting, matching the appendix-style Σm/ΠM indices.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from typing import Mapping, Sequence

from .formula import (
    And,
    Atom,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    atoms,
)

DEFAULT_VAR_CAP = 20
VAR_CAP_ENV = "DISCRETA_VAR_CAP"


class UnboundAtom(Exception):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"assignment does not bind atom {name!r}")


class TooManyVariables(Exception):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} variables exceeds the cap of {cap} (truth tables grow exponentially)")


class MissingVariable(Exception):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable order does not cover atom {name!r}")


class DuplicateVariable(Exception):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable order lists {name!r} twice")


class Classification(enum.Enum):
    TAUTOLOGY = "tautology"
    CONTINGENCY = "contingency"
    CONTRADICTION = "contradiction"


def default_var_cap() -> int:
    raw = os.environ.get(VAR_CAP_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_VAR_CAP


def _cap(cap: int | None) -> int:
    return default_var_cap() if cap is None else cap


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Standard semantics; → is material implication, ↔ is equality."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Atom):
        try:
            return bool(assignment[f.name])
        except KeyError:
            raise UnboundAtom(f.name) from None
    if isinstance(f, Not):
        return not evaluate(f.child, assignment)
    left = evaluate(f.left, assignment)
    if isinstance(f, And):
        return left and evaluate(f.right, assignment)
    if isinstance(f, Or):
        return left or evaluate(f.right, assignment)
    right = evaluate(f.right, assignment)
    if isinstance(f, Implies):
        return (not left) or right
    if isinstance(f, Iff):
        return left == right
    raise TypeError(f"not a formula: {f!r}")


def _check_order(f: Formula, order: Sequence[str], cap: int | None) -> tuple[str, ...]:
    order = tuple(order)
    seen: set[str] = set()
    for name in order:
        if name in seen:
            raise DuplicateVariable(name)
        seen.add(name)
    for name in atoms(f):
        if name not in seen:
            raise MissingVariable(name)
    limit = _cap(cap)
    if len(order) > limit:
        raise TooManyVariables(len(order), limit)
    return order


def _column_bits(f: Formula, order: tuple[str, ...]) -> int:
    """Value column of f over all 2^n rows, packed into an int: bit i of the
    result is the value at row i.  One tree walk instead of 2^n of them."""
    n = len(order)
    rows = 1 << n
    full = (1 << rows) - 1

    # var masks: bit i set iff row i assigns the variable true; built by
    # doubling one period so construction is O(n log rows), not O(rows)
    masks: dict[str, int] = {}
    for j, name in enumerate(order):
        k = n - 1 - j  # bit position of this variable inside a row index
        run = 1 << k
        mask = ((1 << run) - 1) << run  # one period: r zeros then r ones
        width = run * 2
        while width < rows:
            mask |= mask << width
            width *= 2
        masks[name] = mask

    def walk(node: Formula) -> int:
        if isinstance(node, Const):
            return full if node.value else 0
        if isinstance(node, Atom):
            return masks[node.name]
        if isinstance(node, Not):
            return full ^ walk(node.child)
        a = walk(node.left)
        b = walk(node.right)
        if isinstance(node, And):
            return a & b
        if isinstance(node, Or):
            return a | b
        if isinstance(node, Implies):
            return (full ^ a) | b
        return full ^ (a ^ b)  # Iff

    return walk(f)


def assignment_for_row(order: Sequence[str], row: int) -> dict[str, bool]:
    n = len(order)
    return {name: bool((row >> (n - 1 - j)) & 1) for j, name in enumerate(order)}


@dataclass(frozen=True)
class TruthTable:
    order: tuple[str, ...]
    rows: tuple[tuple[dict[str, bool], bool], ...]

    def values(self) -> tuple[bool, ...]:
        return tuple(v for _, v in self.rows)


def truth_table(f: Formula, order: Sequence[str] | None = None, cap: int | None = None) -> TruthTable:
    """Materialized table, computed row by row with `evaluate` (this is the
    slow, independent route; classify/index_sets use the packed column)."""
    order = _check_order(f, atoms(f) if order is None else order, cap)
    rows = []
    for i in range(1 << len(order)):
        a = assignment_for_row(order, i)
        rows.append((a, evaluate(f, a)))
    return TruthTable(order, tuple(rows))


def classify(f: Formula, cap: int | None = None) -> Classification:
    order = _check_order(f, atoms(f), cap)
    bits = _column_bits(f, order)
    full = (1 << (1 << len(order))) - 1
    if bits == full:
        return Classification.TAUTOLOGY
    if bits == 0:
        return Classification.CONTRADICTION
    return Classification.CONTINGENCY


@dataclass(frozen=True)
class CanonicalIndexSets:
    """Σm / ΠM of a formula over a variable order: minterms are the indices
    of true rows, maxterms those of false rows; together they partition
    {0, .., 2^n - 1}."""

    n: int
    minterms: tuple[int, ...]
    maxterms: tuple[int, ...]


def index_sets(f: Formula, order: Sequence[str], cap: int | None = None) -> CanonicalIndexSets:
    order = _check_order(f, order, cap)
    bits = _column_bits(f, order)
    rows = 1 << len(order)
    minterms = tuple(i for i in range(rows) if (bits >> i) & 1)
    maxterms = tuple(i for i in range(rows) if not (bits >> i) & 1)
    return CanonicalIndexSets(len(order), minterms, maxterms)


def equivalent(f: Formula, g: Formula, cap: int | None = None) -> bool:
    """True iff f and g agree on every assignment over their combined atoms.
    Project-wide oracle."""
    order = tuple(sorted(set(atoms(f)) | set(atoms(g))))
    limit = _cap(cap)
    if len(order) > limit:
        raise TooManyVariables(len(order), limit)
    return _column_bits(f, order) == _column_bits(g, order)


def entails(premises: Sequence[Formula], conclusion: Formula, cap: int | None = None) -> bool:
    """True iff every assignment making all premises true makes the
    conclusion true."""
    names: set[str] = set(atoms(conclusion))
    for p in premises:
        names.update(atoms(p))
    order = tuple(sorted(names))
    limit = _cap(cap)
    if len(order) > limit:
        raise TooManyVariables(len(order), limit)
    rows = 1 << len(order)
    full = (1 << rows) - 1
    prem = full
    for p in premises:
        prem &= _column_bits(p, order)
    return prem & (full ^ _column_bits(conclusion, order)) == 0


def first_countermodel(premises: Sequence[Formula], conclusion: Formula, cap: int | None = None) -> dict[str, bool] | None:
    """Lowest-index assignment making all premises true and the conclusion
    false, or None when the argument is valid."""
    names: set[str] = set(atoms(conclusion))
    for p in premises:
        names.update(atoms(p))
    order = tuple(sorted(names))
    limit = _cap(cap)
    if len(order) > limit:
        raise TooManyVariables(len(order), limit)
    rows = 1 << len(order)
    full = (1 << rows) - 1
    prem = full
    for p in premises:
        prem &= _column_bits(p, order)
    bad = prem & (full ^ _column_bits(conclusion, order))
    if bad == 0:
        return None
    row = (bad & -bad).bit_length() - 1
    return assignment_for_row(order, row)
