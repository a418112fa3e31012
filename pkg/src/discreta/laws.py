"""Named equivalence-law catalog and single-step application at a position.

Each law is a schema (or a family of dual/mirrored schemas under one name)
over the metavariables F, G, H.  Laws are directional: L→R rewrites the left
pattern into the right one, R→L the reverse.  A direction whose target uses
metavariables the source does not bind (e.g. Negation R→L, T ⇒ F ∨ ¬F) cannot
be applied blindly; such steps are produced by the derivation engines, which
supply the synthesized subformula, and are checked by the validator's
two-sided matching.
"""

from __future__ import annotations

import enum

from .formula import (
    And,
    Atom,
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
    replace_at,
    subformula_at,
    with_children,
)


class PatternMismatch(Exception):
    def __init__(self, law: "LawId", direction: "Direction", path: Path):
        self.law = law
        self.direction = direction
        self.path = path
        super().__init__(f"{law.value} ({direction.value}) does not match at {list(path)}")


class LawId(enum.Enum):
    EL1 = "EL1"
    EL2 = "EL2"
    DE_MORGAN_AND = "DeMorganAnd"
    DE_MORGAN_OR = "DeMorganOr"
    DOUBLE_NEGATION = "DoubleNegation"
    DIST_AND_OVER_OR = "DistAndOverOr"
    DIST_OR_OVER_AND = "DistOrOverAnd"
    ASSOC_AND = "AssocAnd"
    ASSOC_OR = "AssocOr"
    COMM_AND = "CommAnd"
    COMM_OR = "CommOr"
    IDEMPOTENCE = "Idempotence"
    NEGATION = "Negation"
    IDENTITY = "Identity"
    DOMINATION = "Domination"
    ABSORPTION = "Absorption"


class Direction(enum.Enum):
    LR = "LR"
    RL = "RL"

    def flip(self) -> "Direction":
        return Direction.RL if self is Direction.LR else Direction.LR


METAVARS = ("F", "G", "H")

_F, _G, _H = Atom("F"), Atom("G"), Atom("H")

# One entry per law: list of (left, right) schema variants.  Variants cover
# the ∧/∨ duals and mirrored constant positions the appendix uses freely.
LAW_SCHEMAS: dict[LawId, list[tuple[Formula, Formula]]] = {
    LawId.EL1: [(Implies(_F, _G), Or(Not(_F), _G))],
    LawId.EL2: [(Iff(_F, _G), And(Implies(_F, _G), Implies(_G, _F)))],
    LawId.DE_MORGAN_AND: [(Not(And(_F, _G)), Or(Not(_F), Not(_G)))],
    LawId.DE_MORGAN_OR: [(Not(Or(_F, _G)), And(Not(_F), Not(_G)))],
    LawId.DOUBLE_NEGATION: [(Not(Not(_F)), _F)],
    LawId.DIST_AND_OVER_OR: [
        (And(_F, Or(_G, _H)), Or(And(_F, _G), And(_F, _H))),
        (And(Or(_G, _H), _F), Or(And(_G, _F), And(_H, _F))),
    ],
    LawId.DIST_OR_OVER_AND: [
        (Or(_F, And(_G, _H)), And(Or(_F, _G), Or(_F, _H))),
        (Or(And(_G, _H), _F), And(Or(_G, _F), Or(_H, _F))),
    ],
    LawId.ASSOC_AND: [(And(And(_F, _G), _H), And(_F, And(_G, _H)))],
    LawId.ASSOC_OR: [(Or(Or(_F, _G), _H), Or(_F, Or(_G, _H)))],
    LawId.COMM_AND: [(And(_F, _G), And(_G, _F))],
    LawId.COMM_OR: [(Or(_F, _G), Or(_G, _F))],
    LawId.IDEMPOTENCE: [(And(_F, _F), _F), (Or(_F, _F), _F)],
    LawId.NEGATION: [
        (And(_F, Not(_F)), FALSE),
        (And(Not(_F), _F), FALSE),
        (Or(_F, Not(_F)), TRUE),
        (Or(Not(_F), _F), TRUE),
        (Not(TRUE), FALSE),
        (Not(FALSE), TRUE),
    ],
    LawId.IDENTITY: [
        (And(_F, TRUE), _F),
        (And(TRUE, _F), _F),
        (Or(_F, FALSE), _F),
        (Or(FALSE, _F), _F),
    ],
    LawId.DOMINATION: [
        (Or(_F, TRUE), TRUE),
        (Or(TRUE, _F), TRUE),
        (And(_F, FALSE), FALSE),
        (And(FALSE, _F), FALSE),
    ],
    LawId.ABSORPTION: [
        (And(_F, Or(_F, _G)), _F),
        (And(Or(_F, _G), _F), _F),
        (Or(_F, And(_F, _G)), _F),
        (Or(And(_F, _G), _F), _F),
        (And(_F, Or(_G, _F)), _F),
        (And(Or(_G, _F), _F), _F),
        (Or(_F, And(_G, _F)), _F),
        (Or(And(_G, _F), _F), _F),
    ],
}

CATALOG_ORDER = tuple(LAW_SCHEMAS)

# Expansion directions hidden from the applicable-law menu (they match every
# formula); still usable through an explicit apply_law call.
MENU_EXCLUDED: dict[LawId, frozenset[Direction]] = {
    LawId.IDENTITY: frozenset({Direction.RL}),
}

Binding = dict[str, Formula]


def pattern_vars(pattern: Formula) -> set[str]:
    if isinstance(pattern, Atom) and pattern.name in METAVARS:
        return {pattern.name}
    out: set[str] = set()
    for kid in children(pattern):
        out |= pattern_vars(kid)
    return out


def match(pattern: Formula, f: Formula, binding: Binding | None = None) -> Binding | None:
    """Structural one-sided matching; schema atoms F/G/H are wildcards."""
    if binding is None:
        binding = {}
    if isinstance(pattern, Atom) and pattern.name in METAVARS:
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = f
            return binding
        return binding if bound == f else None
    if type(pattern) is not type(f):
        return None
    if isinstance(pattern, Const):
        return binding if pattern.value == f.value else None
    if isinstance(pattern, Atom):
        return binding if pattern.name == f.name else None
    for pkid, fkid in zip(children(pattern), children(f)):
        if match(pkid, fkid, binding) is None:
            return None
    return binding


def instantiate(pattern: Formula, binding: Binding) -> Formula:
    if isinstance(pattern, Atom) and pattern.name in METAVARS:
        return binding[pattern.name]
    kids = tuple(instantiate(k, binding) for k in children(pattern))
    return with_children(pattern, kids)


def oriented_schemas(law: LawId, direction: Direction) -> list[tuple[Formula, Formula]]:
    pairs = LAW_SCHEMAS[law]
    if direction is Direction.LR:
        return pairs
    return [(rhs, lhs) for lhs, rhs in pairs]


def _build_probe_index():
    """(law, direction) -> source root type -> applicable (src, dst) pairs.
    Variants whose target needs metavariables the source does not bind are
    left out: they cannot be applied forward."""
    index: dict[tuple[LawId, Direction], dict[type, list[tuple[Formula, Formula]]]] = {}
    for law in LAW_SCHEMAS:
        for direction in (Direction.LR, Direction.RL):
            by_type: dict[type, list[tuple[Formula, Formula]]] = {}
            for src, dst in oriented_schemas(law, direction):
                if not pattern_vars(dst) <= pattern_vars(src):
                    continue
                by_type.setdefault(type(src), []).append((src, dst))
            index[(law, direction)] = by_type
    return index


_PROBE_INDEX = _build_probe_index()
_METAVAR_ROOT = Atom  # a bare-metavariable source pattern matches any root


def rewrite_subtree(sub: Formula, law: LawId, direction: Direction) -> Formula | None:
    by_type = _PROBE_INDEX[(law, direction)]
    candidates = by_type.get(type(sub), ())
    if type(sub) is not _METAVAR_ROOT and _METAVAR_ROOT in by_type:
        # bare-metavariable sources (e.g. Idempotence R→L) live under Atom
        candidates = list(candidates) + by_type[_METAVAR_ROOT]
    for src, dst in candidates:
        binding = match(src, sub)
        if binding is not None:
            return instantiate(dst, binding)
    return None


def apply_law(f: Formula, law: LawId, direction: Direction, path: Path) -> Formula:
    """Rewrite the subtree at `path` by the first matching schema variant."""
    sub = subformula_at(f, path)
    new_sub = rewrite_subtree(sub, law, direction)
    if new_sub is None:
        raise PatternMismatch(law, direction, tuple(path))
    return replace_at(f, path, new_sub)


def applicable_laws(f: Formula, path: Path, include_expansions: bool = False) -> list[tuple[LawId, Direction]]:
    """Exactly the (law, direction) pairs apply_law would accept at `path`,
    in catalog order; expansion directions are hidden unless asked for."""
    sub = subformula_at(f, path)
    out: list[tuple[LawId, Direction]] = []
    for law in CATALOG_ORDER:
        for direction in (Direction.LR, Direction.RL):
            if not include_expansions and direction in MENU_EXCLUDED.get(law, ()):
                continue
            if rewrite_subtree(sub, law, direction) is not None:
                out.append((law, direction))
    return out


# Paper names (and their abbreviations) -> catalog ids.  Ambiguous names map
# to every candidate; the validator tries each.
_ALIAS_GROUPS: dict[str, tuple[LawId, ...]] = {
    "el1": (LawId.EL1,),
    "el 1": (LawId.EL1,),
    "eli": (LawId.EL1,),
    "el2": (LawId.EL2,),
    "el 2": (LawId.EL2,),
    "morgan": (LawId.DE_MORGAN_AND, LawId.DE_MORGAN_OR),
    "ley de morgan": (LawId.DE_MORGAN_AND, LawId.DE_MORGAN_OR),
    "de morgan": (LawId.DE_MORGAN_AND, LawId.DE_MORGAN_OR),
    "demorgan": (LawId.DE_MORGAN_AND, LawId.DE_MORGAN_OR),
    "distributiva": (LawId.DIST_AND_OVER_OR, LawId.DIST_OR_OVER_AND),
    "distributividad": (LawId.DIST_AND_OVER_OR, LawId.DIST_OR_OVER_AND),
    "distrib": (LawId.DIST_AND_OVER_OR, LawId.DIST_OR_OVER_AND),
    "dist": (LawId.DIST_AND_OVER_OR, LawId.DIST_OR_OVER_AND),
    "asociativa": (LawId.ASSOC_AND, LawId.ASSOC_OR),
    "asociacion": (LawId.ASSOC_AND, LawId.ASSOC_OR),
    "asociatividad": (LawId.ASSOC_AND, LawId.ASSOC_OR),
    "asoc": (LawId.ASSOC_AND, LawId.ASSOC_OR),
    "conmutatividad": (LawId.COMM_AND, LawId.COMM_OR),
    "conmutativa": (LawId.COMM_AND, LawId.COMM_OR),
    "conm": (LawId.COMM_AND, LawId.COMM_OR),
    "comm": (LawId.COMM_AND, LawId.COMM_OR),
    "idempotencia": (LawId.IDEMPOTENCE,),
    "idem": (LawId.IDEMPOTENCE,),
    "negacion": (LawId.NEGATION,),
    "neg": (LawId.NEGATION,),
    "identidad": (LawId.IDENTITY,),
    "ident": (LawId.IDENTITY,),
    "dominacion": (LawId.DOMINATION,),
    "dom": (LawId.DOMINATION,),
    "absorcion": (LawId.ABSORPTION,),
    "doble negacion": (LawId.DOUBLE_NEGATION,),
    "doblenegacion": (LawId.DOUBLE_NEGATION,),
}

_BY_VALUE = {law.value.lower(): law for law in LawId}

_ACCENTS = str.maketrans("áéíóúñÁÉÍÓÚÑ", "aeiounAEIOUN")


def resolve_law_name(name: str) -> tuple[LawId, ...]:
    """Map a catalog id or a paper alias to its candidate law ids."""
    key = name.strip().translate(_ACCENTS).lower()
    if key in _BY_VALUE:
        return (_BY_VALUE[key],)
    if key in _ALIAS_GROUPS:
        return _ALIAS_GROUPS[key]
    raise KeyError(f"unknown law name {name!r}")


# Display names in the appendix style, used by solution rendering.
SPANISH_NAMES: dict[LawId, str] = {
    LawId.EL1: "EL 1",
    LawId.EL2: "EL 2",
    LawId.DE_MORGAN_AND: "Ley de Morgan",
    LawId.DE_MORGAN_OR: "Ley de Morgan",
    LawId.DOUBLE_NEGATION: "Doble Negación",
    LawId.DIST_AND_OVER_OR: "Distributiva",
    LawId.DIST_OR_OVER_AND: "Distributiva",
    LawId.ASSOC_AND: "Asociativa",
    LawId.ASSOC_OR: "Asociativa",
    LawId.COMM_AND: "Conmutatividad",
    LawId.COMM_OR: "Conmutatividad",
    LawId.IDEMPOTENCE: "Idempotencia",
    LawId.NEGATION: "Negación",
    LawId.IDENTITY: "Identidad",
    LawId.DOMINATION: "Dominación",
    LawId.ABSORPTION: "Absorción",
}
