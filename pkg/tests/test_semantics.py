import itertools

import pytest

from discreta.formula import atoms
from discreta.semantics import (
    Classification,
    DuplicateVariable,
    MissingVariable,
    TooManyVariables,
    UnboundAtom,
    classify,
    entails,
    equivalent,
    evaluate,
    first_countermodel,
    index_sets,
    truth_table,
)
from discreta.syntax import parse_infix

from conftest import random_formula


def test_evaluate_examples():
    f = parse_infix("A ∨ ¬B ∧ C")
    assert evaluate(f, {"A": False, "B": False, "C": True}) is True
    g = parse_infix("(P ∧ (P → Q)) → Q")
    assert evaluate(g, {"P": True, "Q": False}) is True
    assert evaluate(parse_infix("P ↔ P"), {"P": False}) is True


def test_evaluate_unbound():
    with pytest.raises(UnboundAtom):
        evaluate(parse_infix("P ∧ Q"), {"P": True})


def test_classify_examples():
    assert classify(parse_infix("(P ∧ (P → Q)) → Q")) is Classification.TAUTOLOGY
    contra = parse_infix("((P ∧ Q) → P) → (Q ∨ R) ∧ (¬Q ∧ ¬R)")
    assert classify(contra) is Classification.CONTRADICTION
    assert classify(parse_infix("A ∨ ¬B ∧ C")) is Classification.CONTINGENCY


def test_classify_zero_atom_formulas():
    assert classify(parse_infix("T ∧ (F ∨ T)")) is Classification.TAUTOLOGY
    assert classify(parse_infix("F ∨ F")) is Classification.CONTRADICTION


def test_variable_cap():
    big = parse_infix(" & ".join(f"x{i}" for i in range(25)))
    with pytest.raises(TooManyVariables):
        classify(big)
    assert classify(big, cap=25) is Classification.CONTINGENCY


def test_index_sets_reproduce_worked_answers():
    f = parse_infix("A ∨ ¬B ∧ C")
    idx = index_sets(f, ["A", "B", "C"])
    assert idx.minterms == (1, 4, 5, 6, 7)
    assert idx.maxterms == (0, 2, 3)

    g = parse_infix("(¬p ∨ ¬q) ∧ (p ∨ r)")
    idx = index_sets(g, ["p", "q", "r"])
    assert idx.maxterms == (0, 2, 6, 7)
    assert idx.minterms == (1, 3, 4, 5)

    h = parse_infix("p ∧ (¬q ∨ (r ∧ ¬s))")
    assert index_sets(h, ["p", "q", "r", "s"]).minterms == (8, 9, 10, 11, 14)


def test_index_set_bit_convention_against_row_evaluation():
    """First variable in the order is the most significant bit: derived by
    brute force and frozen here."""
    f = parse_infix("A ∨ ¬B ∧ C")
    order = ["A", "B", "C"]
    expected_minterms = []
    for bits in itertools.product([False, True], repeat=3):
        assignment = dict(zip(order, bits))
        row = int("".join("1" if b else "0" for b in bits), 2)
        if evaluate(f, assignment):
            expected_minterms.append(row)
    assert tuple(sorted(expected_minterms)) == index_sets(f, order).minterms == (1, 4, 5, 6, 7)


def test_index_sets_errors():
    f = parse_infix("p ∧ q")
    with pytest.raises(MissingVariable):
        index_sets(f, ["p"])
    with pytest.raises(DuplicateVariable):
        index_sets(f, ["p", "q", "p"])


def test_truth_table_matches_column(rng):
    """Dual route: the row-by-row table agrees with the packed-column path
    used by classify/index_sets."""
    for _ in range(120):
        f = random_formula(rng, max_depth=5)
        order = atoms(f)
        table = truth_table(f, order)
        idx = index_sets(f, order) if order else None
        values = table.values()
        if idx is not None:
            assert tuple(i for i, v in enumerate(values) if v) == idx.minterms
            assert tuple(i for i, v in enumerate(values) if not v) == idx.maxterms


def test_partition_property(rng):
    for _ in range(150):
        f = random_formula(rng, max_depth=5)
        order = atoms(f)
        idx = index_sets(f, order)
        rows = 1 << len(order)
        assert sorted(idx.minterms + idx.maxterms) == list(range(rows))
        assert not (set(idx.minterms) & set(idx.maxterms))


def test_classification_vs_index_sets(rng):
    for _ in range(200):
        f = random_formula(rng, max_depth=6)
        idx = index_sets(f, atoms(f))
        cls = classify(f)
        assert (cls is Classification.TAUTOLOGY) == (idx.maxterms == ())
        assert (cls is Classification.CONTRADICTION) == (idx.minterms == ())


def test_equivalent_examples():
    assert equivalent(parse_infix("P → Q"), parse_infix("¬Q → ¬P"))
    assert not equivalent(parse_infix("P → Q"), parse_infix("Q → P"))


def test_entails_examples():
    premises = [parse_infix("P"), parse_infix("P → (Q ∨ R)"), parse_infix("(Q ∨ R) → S")]
    assert entails(premises, parse_infix("S"))
    assert not entails([parse_infix("P → Q"), parse_infix("Q")], parse_infix("P"))
    model = first_countermodel([parse_infix("P → Q"), parse_infix("Q")], parse_infix("P"))
    assert model == {"P": False, "Q": True}


def test_entails_matches_classify(rng):
    for _ in range(150):
        premises = [random_formula(rng, max_depth=3, atoms=("P", "Q", "R", "S", "U")) for _ in range(rng.randint(0, 3))]
        conclusion = random_formula(rng, max_depth=3, atoms=("P", "Q", "R", "S", "U"))
        from discreta.formula import Implies, fold_and

        implication = Implies(fold_and(premises), conclusion) if premises else conclusion
        assert entails(premises, conclusion) == (classify(implication) is Classification.TAUTOLOGY)


def test_evaluate_deterministic(rng):
    for _ in range(50):
        f = random_formula(rng, max_depth=5)
        assignment = {name: rng.random() < 0.5 for name in atoms(f)}
        assert evaluate(f, assignment) == evaluate(f, assignment)
