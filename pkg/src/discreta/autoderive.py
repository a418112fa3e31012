"""Automatic derivation engine.

Produces checked, replayable derivations: eliminate ↔/→ (EL2/EL1), push
negations inward (De Morgan, double negation), then repeatedly prefer the
size-reducing laws (Negación, Identidad, Dominación, Idempotencia, Absorción)
over distribution, scanning leftmost-innermost and breaking ties by catalog
priority.

Where a reduction needs operands that are only adjacent up to
associativity/commutativity, the engine emits an explicit reordering step
first (the appendix writes these as "Asociativa, Conmutativa" lines), so the
whole trace replays under the LenientAC validator.
"""

from __future__ import annotations

import enum
from collections import Counter
from typing import Iterator

from . import semantics
from .derivation import Derivation, ShapeGoal, Step, ac_key
from .formula import (
    And,
    Const,
    FALSE,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Path,
    TRUE,
    children,
    flatten,
    node_count,
    replace_at,
    subformula_at,
)
from .laws import Direction, LawId, PatternMismatch, rewrite_subtree

DEFAULT_STEP_LIMIT = 512
DEFAULT_TERM_CAP = 4096

_REDUCTIONS = (
    LawId.NEGATION,
    LawId.IDENTITY,
    LawId.DOMINATION,
    LawId.IDEMPOTENCE,
    LawId.ABSORPTION,
)

# pairwise absorption scans are quadratic; above this spine width they are
# skipped (the result is still a valid normal form, just not absorbed)
_ABSORPTION_SCAN_LIMIT = 128


class StepLimitExceeded(Exception):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"derivation exceeded the step limit of {limit}")


class TermBlowupLimit(Exception):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} terms exceeds the cap of {cap}")


class NotConstant(Exception):
    def __init__(self, formula: Formula):
        self.formula = formula
        super().__init__("formula is a contingency; it reduces to neither T nor F")


class AutoGoal(enum.Enum):
    TO_CONSTANT = "constant"
    TO_NNF = "nnf"
    TO_DNF = "dnf"
    TO_CNF = "cnf"


def _postorder(f: Formula, prefix: Path = ()) -> Iterator[tuple[Path, Formula]]:
    stack: list[tuple[Path, Formula, bool]] = [(prefix, f, False)]
    while stack:
        path, node, expanded = stack.pop()
        if expanded:
            yield path, node
            continue
        stack.append((path, node, True))
        kids = children(node)
        for i in range(len(kids) - 1, -1, -1):
            stack.append((path + (i,), kids[i], False))


def _fold(ops: list[Formula], ctor: type) -> Formula:
    out = ops[0]
    for op in ops[1:]:
        out = ctor(out, op)
    return out


class Rewriter:
    """Accumulates a derivation while rewriting a working formula."""

    def __init__(self, start: Formula, step_limit: int = DEFAULT_STEP_LIMIT, term_cap: int = DEFAULT_TERM_CAP):
        self.start = start
        self.current = start
        self.steps: list[Step] = []
        self.step_limit = step_limit
        self.term_cap = term_cap
        self._nodes = node_count(start)
        self._node_cap = max(term_cap * 32, 2048)
        self._spine_op: type | None = None
        self._emits_since_term_check = 0

    # -- step emission ------------------------------------------------------

    def _emit_sub(self, law: LawId, direction: Direction, path: Path, old_sub: Formula, new_sub: Formula) -> None:
        if len(self.steps) >= self.step_limit:
            raise StepLimitExceeded(self.step_limit)
        self._nodes += node_count(new_sub) - node_count(old_sub)
        if self._nodes > self._node_cap:
            raise TermBlowupLimit(self._nodes, self.term_cap)
        result = replace_at(self.current, path, new_sub)
        self.steps.append(Step.make(law, direction, path, result))
        self.current = result
        self._emits_since_term_check += 1
        if self._spine_op is not None and self._emits_since_term_check >= 64:
            self._emits_since_term_check = 0
            self._check_blowup(self._spine_op)

    def apply(self, law: LawId, direction: Direction, path: Path) -> None:
        old_sub = subformula_at(self.current, path)
        new_sub = rewrite_subtree(old_sub, law, direction)
        if new_sub is None:
            raise PatternMismatch(law, direction, tuple(path))
        self._emit_sub(law, direction, path, old_sub, new_sub)

    def construct(self, law: LawId, direction: Direction, path: Path, new_sub: Formula) -> None:
        """Record a step whose rewritten subtree the engine built itself
        (expansion steps with synthesized metavariables, AC reorderings)."""
        self._emit_sub(law, direction, path, subformula_at(self.current, path), new_sub)

    def derivation(self, goal) -> Derivation:
        return Derivation(start=self.start, steps=self.steps, goal=goal)

    # -- passes -------------------------------------------------------------

    def eliminate_iff_implies(self) -> None:
        # innermost-first: an elimination never introduces the connective it
        # removes below itself, so one collected pass per connective suffices
        targets = [p for p, n in _postorder(self.current) if isinstance(n, Iff)]
        for path in targets:
            self.apply(LawId.EL2, Direction.LR, path)
        targets = [p for p, n in _postorder(self.current) if isinstance(n, Implies)]
        for path in targets:
            self.apply(LawId.EL1, Direction.LR, path)

    def push_negations(self, path: Path = ()) -> None:
        node = subformula_at(self.current, path)
        if isinstance(node, Not):
            inner = node.child
            if isinstance(inner, Not):
                self.apply(LawId.DOUBLE_NEGATION, Direction.LR, path)
                self.push_negations(path)
            elif isinstance(inner, And):
                self.apply(LawId.DE_MORGAN_AND, Direction.LR, path)
                self.push_negations(path + (0,))
                self.push_negations(path + (1,))
            elif isinstance(inner, Or):
                self.apply(LawId.DE_MORGAN_OR, Direction.LR, path)
                self.push_negations(path + (0,))
                self.push_negations(path + (1,))
            elif isinstance(inner, Const):
                self.apply(LawId.NEGATION, Direction.LR, path)
            return
        for i in range(len(children(node))):
            self.push_negations(path + (i,))

    def reduce_once(self) -> bool:
        """One size-reducing law application at the leftmost-innermost
        position where any of them strictly matches."""
        for path, node in _postorder(self.current):
            for law in _REDUCTIONS:
                new_sub = rewrite_subtree(node, law, Direction.LR)
                if new_sub is not None:
                    self._emit_sub(law, Direction.LR, path, node, new_sub)
                    return True
        return False

    def _reduce_at(self, path: Path) -> bool:
        """Apply reductions at one node until none fits.  Reduction results
        are pieces of the old node, so no recursion is needed."""
        applied = False
        while True:
            node = subformula_at(self.current, path)
            for law in _REDUCTIONS:
                new_sub = rewrite_subtree(node, law, Direction.LR)
                if new_sub is not None:
                    self._emit_sub(law, Direction.LR, path, node, new_sub)
                    applied = True
                    break
            else:
                return applied

    def _normalize_subtree(self, path: Path, toward: "AutoGoal", parent_op: type | None = None) -> None:
        """Bottom-up reductions-over-distribution fixpoint of the subtree at
        `path` (negations already pushed to atoms).  At the top of every ∧/∨
        spine, duplicated, complementary and absorbing operands are cleaned
        up immediately so spines never accumulate redundant terms."""
        node = subformula_at(self.current, path)
        own_op = type(node)
        for i in range(len(children(node))):
            self._normalize_subtree(path + (i,), toward, own_op)
        law_dist = LawId.DIST_AND_OVER_OR if toward is AutoGoal.TO_DNF else LawId.DIST_OR_OVER_AND
        outer = And if toward is AutoGoal.TO_DNF else Or
        inner = Or if toward is AutoGoal.TO_DNF else And
        while True:
            if self._reduce_at(path):
                continue
            node = subformula_at(self.current, path)
            if isinstance(node, outer) and (isinstance(node.left, inner) or isinstance(node.right, inner)):
                new_sub = rewrite_subtree(node, law_dist, Direction.LR)
                if new_sub is not None:
                    self._emit_sub(law_dist, Direction.LR, path, node, new_sub)
                    self._normalize_subtree(path + (0,), toward, parent_op)
                    self._normalize_subtree(path + (1,), toward, parent_op)
                    continue
            if (
                isinstance(node, (And, Or))
                and type(node) is not parent_op
                and self._spine_cleanup_once(path)
            ):
                continue
            return

    # -- AC-aware cleanups ---------------------------------------------------

    def _spine_roots(self) -> Iterator[tuple[Path, Formula, type]]:
        def walk(node: Formula, prefix: Path, parent_op: type | None) -> Iterator[tuple[Path, Formula, type]]:
            op = type(node) if isinstance(node, (And, Or)) else None
            if op is not None and op is not parent_op:
                yield prefix, node, op
            for i, kid in enumerate(children(node)):
                yield from walk(kid, prefix + (i,), op)

        yield from walk(self.current, (), None)

    def shuffle_spine(self, path: Path, old: Formula, new_ops: list[Formula], ctor: type) -> None:
        """Emit a reordering step replacing the spine at `path` by the fold of
        `new_ops` (which must be AC-equal to the old spine)."""
        new_spine = _fold(new_ops, ctor)
        if new_spine == old:
            return
        old_seq = flatten(old, ctor)
        flat_new = flatten(new_spine, ctor)
        same_order = old_seq == flat_new
        if ctor is And:
            law = LawId.ASSOC_AND if same_order else LawId.COMM_AND
        else:
            law = LawId.ASSOC_OR if same_order else LawId.COMM_OR
        self.construct(law, Direction.LR, path, new_spine)

    def _spine_cleanup_once(self, path: Path) -> bool:
        """One reduction that first needs operands brought together: a
        complementary pair (Negación), a duplicated operand (Idempotencia),
        or an absorbing pair (Absorción) inside the ∧/∨ spine at `path`."""
        node = subformula_at(self.current, path)
        if not isinstance(node, (And, Or)):
            return False
        ctor = type(node)
        ops = flatten(node, ctor)
        if len(ops) < 2:
            return False
        keys = [ac_key(op) for op in ops]
        index: dict = {}
        for key in keys:
            index.setdefault(key, len(index))

        def close(i: int, j: int, pair: Formula, law: LawId) -> None:
            others = [ops[k] for k in range(len(ops)) if k not in (i, j)]
            self.shuffle_spine(path, node, others + [pair], ctor)
            self.apply(law, Direction.LR, path + ((1,) if others else ()))

        first_at: dict = {}
        for i, key in enumerate(keys):
            j = first_at.get(("not", key))
            if j is None and key[0] == "not":
                j = first_at.get(key[1])
            if j is not None:
                pos = i if keys[i][0] != "not" else j
                neg = j if pos == i else i
                close(min(i, j), max(i, j), ctor(ops[pos], Not(ops[pos])), LawId.NEGATION)
                return True
            if key in first_at:
                close(first_at[key], i, ctor(ops[first_at[key]], ops[first_at[key]]), LawId.IDEMPOTENCE)
                return True
            first_at[key] = i

        # absorbing pair; pairwise scan gated to keep big spines linear
        if len(ops) > _ABSORPTION_SCAN_LIMIT:
            return False
        dual = Or if ctor is And else And
        op_multisets = [Counter(ac_key(x) for x in flatten(op, dual)) for op in ops]
        for i in range(len(ops)):
            for j in range(len(ops)):
                if i == j or not isinstance(ops[j], dual):
                    continue
                small, big = op_multisets[i], op_multisets[j]
                if small == big or (small - big):
                    continue
                # rebuild ops[j] as dual(ops[i], rest) so the law matches
                rest: list[Formula] = []
                need = dict(small)
                for x in flatten(ops[j], dual):
                    k = ac_key(x)
                    if need.get(k, 0) > 0:
                        need[k] -= 1
                    else:
                        rest.append(x)
                close(i, j, ctor(ops[i], dual(ops[i], _fold(rest, dual))), LawId.ABSORPTION)
                return True
        return False

    def ac_reduce_once(self) -> bool:
        for path, node, ctor in self._spine_roots():
            if self._spine_cleanup_once(path):
                return True
        return False

    # -- distribution ---------------------------------------------------------

    def distribute_once(self, toward: AutoGoal) -> bool:
        law = LawId.DIST_AND_OVER_OR if toward is AutoGoal.TO_DNF else LawId.DIST_OR_OVER_AND
        outer = And if toward is AutoGoal.TO_DNF else Or
        inner = Or if toward is AutoGoal.TO_DNF else And
        for path, node in _postorder(self.current):
            if isinstance(node, outer) and (isinstance(node.left, inner) or isinstance(node.right, inner)):
                self.apply(law, Direction.LR, path)
                return True
        return False

    def _check_blowup(self, spine_op: type) -> None:
        terms = len(flatten(self.current, spine_op))
        if terms > self.term_cap:
            raise TermBlowupLimit(terms, self.term_cap)

    def normalize(self, toward: AutoGoal) -> None:
        """NNF first, then reductions preferred over distribution."""
        self.eliminate_iff_implies()
        self.push_negations()
        spine_op = Or if toward is AutoGoal.TO_DNF else And
        self._spine_op = spine_op
        while True:
            self._normalize_subtree((), toward)
            self._check_blowup(spine_op)
            if self.ac_reduce_once():
                continue
            return


def auto_derive(
    f: Formula,
    goal: AutoGoal,
    step_limit: int = DEFAULT_STEP_LIMIT,
    term_cap: int = DEFAULT_TERM_CAP,
    cap: int | None = None,
) -> Derivation:
    """Derive f to the requested goal, returning a validating derivation.

    For TO_CONSTANT the formula must be a tautology or a contradiction
    (checked against the oracle first); contingencies raise NotConstant.
    """
    rw = Rewriter(f, step_limit=step_limit, term_cap=term_cap)

    if goal is AutoGoal.TO_NNF:
        rw.eliminate_iff_implies()
        rw.push_negations()
        return Derivation(start=f, steps=rw.steps, goal=ShapeGoal.NNF)

    if goal is AutoGoal.TO_DNF:
        rw.normalize(AutoGoal.TO_DNF)
        return Derivation(start=f, steps=rw.steps, goal=ShapeGoal.DNF)

    if goal is AutoGoal.TO_CNF:
        rw.normalize(AutoGoal.TO_CNF)
        return Derivation(start=f, steps=rw.steps, goal=ShapeGoal.CNF)

    # TO_CONSTANT
    cls = semantics.classify(f, cap=cap)
    if cls is semantics.Classification.CONTINGENCY:
        raise NotConstant(f)
    target = TRUE if cls is semantics.Classification.TAUTOLOGY else FALSE
    toward = AutoGoal.TO_CNF if target == TRUE else AutoGoal.TO_DNF
    rw.normalize(toward)
    while rw.current != target:
        if rw.reduce_once():
            continue
        if rw.ac_reduce_once():
            continue
        if rw.distribute_once(toward):
            continue
        raise StepLimitExceeded(rw.step_limit)
    return Derivation(start=f, steps=rw.steps, goal=target)
