"""Formula syntax trees, literals and subformula addressing.

Formulas are immutable values: every operation that "modifies" a tree
returns a new one, so they can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


class PathOutOfRange(Exception):
    """A path step points past the children of some node."""

    def __init__(self, path: tuple[int, ...], at: int):
        self.path = path
        self.at = at
        super().__init__(f"path {list(path)} invalid at step {at}")


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[Const, Atom, Not, And, Or, Implies, Iff]
BinaryOp = (And, Or, Implies, Iff)

TRUE = Const(True)
FALSE = Const(False)

# Empty path addresses the root; 0 is the only/left child, 1 the right one.
Path = tuple[int, ...]


@dataclass(frozen=True)
class Literal:
    """An atom or its single negation."""

    atom: str
    negated: bool = False

    def complement(self) -> "Literal":
        return Literal(self.atom, not self.negated)

    def to_formula(self) -> Formula:
        f: Formula = Atom(self.atom)
        return Not(f) if self.negated else f


def as_literal(f: Formula) -> Literal | None:
    """Return the literal this formula is, or None if it is not one."""
    if isinstance(f, Atom):
        return Literal(f.name)
    if isinstance(f, Not) and isinstance(f.child, Atom):
        return Literal(f.child.name, negated=True)
    return None


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Const, Atom)):
        return ()
    if isinstance(f, Not):
        return (f.child,)
    return (f.left, f.right)


def with_children(f: Formula, kids: tuple[Formula, ...]) -> Formula:
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, BinaryOp):
        return type(f)(kids[0], kids[1])
    return f


def subformula_at(f: Formula, path: Path) -> Formula:
    node = f
    for i, step in enumerate(path):
        kids = children(node)
        if step < 0 or step >= len(kids):
            raise PathOutOfRange(tuple(path), i)
        node = kids[step]
    return node


def replace_at(f: Formula, path: Path, g: Formula) -> Formula:
    spine: list[tuple[Formula, int]] = []
    node = f
    for i, step in enumerate(path):
        kids = children(node)
        if step < 0 or step >= len(kids):
            raise PathOutOfRange(tuple(path), i)
        spine.append((node, step))
        node = kids[step]
    out = g
    for node, step in reversed(spine):
        kids = children(node)
        out = with_children(node, kids[:step] + (out,) + kids[step + 1 :])
    return out


def all_paths(f: Formula) -> Iterator[Path]:
    """Paths of every node in pre-order (root first)."""

    def walk(node: Formula, prefix: Path) -> Iterator[Path]:
        yield prefix
        for i, kid in enumerate(children(node)):
            yield from walk(kid, prefix + (i,))

    return walk(f, ())


def atoms(f: Formula) -> list[str]:
    """Distinct atom names, sorted ascending. This is the default variable
    order everywhere."""
    found: set[str] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            found.add(node.name)
        else:
            stack.extend(children(node))
    return sorted(found)


def node_count(f: Formula) -> int:
    total = 0
    stack = [f]
    while stack:
        node = stack.pop()
        total += 1
        stack.extend(children(node))
    return total


def depth(f: Formula) -> int:
    kids = children(f)
    if not kids:
        return 0
    return 1 + max(depth(k) for k in kids)


def fold_and(parts: list[Formula]) -> Formula:
    """Left-associated conjunction; T when the list is empty."""
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def fold_or(parts: list[Formula]) -> Formula:
    """Left-associated disjunction; F when the list is empty."""
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def flatten(f: Formula, op: type) -> list[Formula]:
    """Operands of the maximal `op`-spine rooted at f (left-to-right)."""
    out: list[Formula] = []
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, op):
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def spine_paths(f: Formula, op: type) -> list[Path]:
    """Paths of the operands returned by flatten(f, op), in the same order."""
    out: list[Path] = []
    stack: list[tuple[Formula, Path]] = [(f, ())]
    while stack:
        node, prefix = stack.pop()
        if isinstance(node, op):
            stack.append((node.right, prefix + (1,)))
            stack.append((node.left, prefix + (0,)))
        else:
            out.append(prefix)
    return out
