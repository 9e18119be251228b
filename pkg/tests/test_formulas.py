import pytest

from fhplab.formulas import evaluate_formula, evaluate_term
from fhplab.pseudofield import FieldStructure


F5 = FieldStructure.for_prime(5)


def test_term_arithmetic():
    env = {0: 3, 1: 4}
    assert evaluate_term(F5, ["+", ["var", 0], ["var", 1]], env) == 2
    assert evaluate_term(F5, ["*", ["var", 0], ["var", 1]], env) == 2
    assert evaluate_term(F5, ["-", ["var", 0], ["var", 1]], env) == 4
    assert evaluate_term(F5, ["neg", ["const", 1]], env) == 4
    assert evaluate_term(F5, ["const", 9], {}) == 4


def test_unbound_variable():
    with pytest.raises(ValueError, match="unbound variable 3"):
        evaluate_term(F5, ["var", 3], {})


def test_equality_and_connectives():
    env = {0: 2}
    assert evaluate_formula(F5, ["=", ["var", 0], ["const", 2]], env)
    assert not evaluate_formula(F5, ["not", ["true"]], env)
    assert evaluate_formula(
        F5, ["or", ["false"], ["=", ["const", 1], ["const", 1]]], env
    )
    assert not evaluate_formula(
        F5, ["and", ["true"], ["false"]], env
    )


def test_quantifiers():
    # every x has an additive inverse
    f = ["forall", 0, ["exists", 1,
         ["=", ["+", ["var", 0], ["var", 1]], ["const", 0]]]]
    assert evaluate_formula(F5, f, {})
    # some x squares to 3? QR(5) = {0,1,4} so no
    g = ["exists", 0, ["=", ["*", ["var", 0], ["var", 0]], ["const", 3]]]
    assert not evaluate_formula(F5, g, {})


def test_quantifier_shadowing_restores_binding():
    env = {0: 1}
    f = ["exists", 0, ["=", ["var", 0], ["const", 4]]]
    assert evaluate_formula(F5, f, env)
    assert env[0] == 1


def test_malformed_node_rejected():
    with pytest.raises(ValueError):
        evaluate_formula(F5, ["xor", ["true"], ["false"]], {})
    with pytest.raises(ValueError):
        evaluate_term(F5, ["pow", ["const", 2], ["const", 3]], {})
