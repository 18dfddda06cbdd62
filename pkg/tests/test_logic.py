import pytest

from equitree.budgets import Budgets
from equitree.errors import (
    BudgetExceeded,
    FormatError,
    PreconditionError,
    VocabularyMismatch,
)
from equitree.logic import (
    And,
    Atom,
    Eq,
    Exists,
    ExistsSet,
    Forall,
    Member,
    evaluate,
    format_formula,
    infer_logic,
    parse_formula,
    rank,
)

from helpers import (
    complete_graph,
    empty_graph,
    eval_by_substitution,
    random_formula,
    random_structure,
    seeded,
    word_structure,
)


def test_rank_atoms_and_nesting():
    assert rank(Atom("E", ("x", "y"))) == 0
    assert rank(Exists("x", Forall("y", Atom("E", ("x", "y"))))) == 2


def test_rank_is_per_path_maximum():
    # (exists x P x) and (exists y exists z E y z): paths carry 1 and 2
    # quantifiers respectively, so the rank is 2.
    phi = And(
        Exists("x", Atom("P", ("x",))),
        Exists("y", Exists("z", Atom("E", ("y", "z")))),
    )
    assert rank(phi) == 2


def test_rank_counts_set_quantifiers():
    phi = ExistsSet("X", Exists("x", Member("x", "X")))
    assert rank(phi) == 2


def test_evaluate_tautology_and_k2():
    taut = Exists("x", Eq("x", "x"))
    assert evaluate(complete_graph(2), taut)
    assert evaluate(empty_graph(2), taut)
    edge = Exists("x", Exists("y", Atom("E", ("x", "y"))))
    assert evaluate(complete_graph(2), edge)
    assert not evaluate(empty_graph(2), edge)


def test_evaluate_word_first_letter():
    # exists x (P_a(x) and forall y (x <= y)): first letter is 'a'
    phi = Exists("x", And(Atom("P_a", ("x",)), Forall("y", Atom("<=", ("x", "y")))))
    assert evaluate(word_structure("ab"), phi)
    assert not evaluate(word_structure("ba"), phi)


def test_evaluate_unbound_and_vocab_errors():
    with pytest.raises(PreconditionError):
        evaluate(complete_graph(2), Atom("E", ("x", "y")))
    with pytest.raises(VocabularyMismatch):
        evaluate(complete_graph(2), Exists("x", Atom("Q", ("x",))))
    with pytest.raises(VocabularyMismatch):
        evaluate(complete_graph(2), Exists("x", Atom("E", ("x",))))


def test_evaluate_sentences_ignore_assignment():
    phi = Exists("x", Atom("E", ("x", "x")))
    assert evaluate(complete_graph(2), phi, {"z": 1}) == evaluate(complete_graph(2), phi)


def test_mso_set_budget():
    phi = ExistsSet("X", Exists("x", Member("x", "X")))
    assert evaluate(complete_graph(2), phi)
    with pytest.raises(BudgetExceeded):
        evaluate(complete_graph(4), phi, budgets=Budgets(eval_set_moves=8))


def test_parse_format_round_trip_on_corpus():
    rng = seeded(11)
    vocab = complete_graph(2).vocab
    for i in range(50):
        phi = random_formula(rng, vocab, depth=rng.randint(0, 3), allow_mso=bool(i % 2))
        text = format_formula(phi)
        assert parse_formula(text) == phi
        assert format_formula(parse_formula(text)) == text


def test_parse_errors():
    for bad in ["(exists x)", "(atom)", "(= x)", "(foo x)", "(and (true))", "((", "(true) (true)"]:
        with pytest.raises(FormatError):
            parse_formula(bad)


def test_parse_example_from_docs():
    phi = parse_formula("(exists x (and (atom P x) (forall y (atom <= x y))))")
    assert rank(phi) == 2
    assert infer_logic(phi) == "fo"


def test_evaluate_agrees_with_substitution_oracle():
    rng = seeded(23)
    agreements = 0
    while agreements < 200:
        vocab = complete_graph(1).vocab
        struct = random_structure(rng, vocab, max_size=5)
        mso = rng.random() < 0.4 and struct.size() <= 4
        phi = random_formula(rng, vocab, depth=rng.randint(0, 2), allow_mso=mso)
        want = eval_by_substitution(struct, phi)
        got = evaluate(struct, phi)
        assert got == want
        agreements += 1
