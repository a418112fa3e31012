import random
from pathlib import Path

import pytest

from discreta.formula import And, Atom, Const, Formula, Iff, Implies, Not, Or

REPO = Path(__file__).resolve().parent.parent
CORPUS = REPO / "corpus"
TRACES = CORPUS / "traces"
SCHEMAS = REPO / "schemas"

DEFAULT_ATOMS = ("P", "Q", "R", "S", "A", "B")


def random_formula(
    rng: random.Random,
    max_depth: int = 5,
    atoms: tuple[str, ...] = DEFAULT_ATOMS,
    allow_const: bool = True,
    allow_arrows: bool = True,
) -> Formula:
    if max_depth <= 0 or rng.random() < 0.25:
        if allow_const and rng.random() < 0.08:
            return Const(rng.random() < 0.5)
        return Atom(rng.choice(atoms))
    roll = rng.random()
    if roll < 0.22:
        return Not(random_formula(rng, max_depth - 1, atoms, allow_const, allow_arrows))
    ctors = [And, Or]
    if allow_arrows:
        ctors += [Implies, Iff]
    ctor = rng.choice(ctors)
    return ctor(
        random_formula(rng, max_depth - 1, atoms, allow_const, allow_arrows),
        random_formula(rng, max_depth - 1, atoms, allow_const, allow_arrows),
    )


def random_assignment(rng: random.Random, names) -> dict[str, bool]:
    return {name: rng.random() < 0.5 for name in names}


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20220818)


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def traces_dir() -> Path:
    return TRACES


@pytest.fixture(scope="session")
def schemas_dir() -> Path:
    return SCHEMAS
