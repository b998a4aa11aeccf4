"""Finite algebras: evaluation, satisfaction, model enumeration."""

import pytest

from termalg.algebras import (
    FiniteAlgebra,
    distinguish_over_models,
    distinguishing_assignment,
    enumerate_tables,
    essential_vars_alg,
    eval_term,
    eval_vector,
    satisfies,
)
from termalg.errors import MissingAssignmentError
from termalg.terms import parse_term, v

LEFT_ZERO = FiniteAlgebra.from_rows([[0, 0], [1, 1]])  # f(a,b) = a
XOR = FiniteAlgebra.from_rows([[0, 1], [1, 0]])


class TestEvaluation:
    def test_left_projection(self):
        assert eval_term(LEFT_ZERO, parse_term("f(x1,x2)"), {1: 1, 2: 0}) == 1

    def test_leaf(self):
        assert eval_term(LEFT_ZERO, v(3), {3: 1}) == 1

    def test_xor_hand_evaluation(self):
        # XOR(XOR(1,1),1) = 1
        assert eval_term(XOR, parse_term("f(f(x1,x1),x2)"), {1: 1, 2: 1}) == 1

    def test_missing_assignment(self):
        with pytest.raises(MissingAssignmentError):
            eval_term(XOR, parse_term("f(x1,x2)"), {1: 0})

    def test_eval_vector_matches_pointwise(self):
        t = parse_term("f(f(x1,x2),f(x2,x3))")
        vs = [1, 2, 3]
        vec = eval_vector(XOR, t, vs)
        import itertools

        for k, values in enumerate(itertools.product(range(2), repeat=3)):
            assert vec[k] == eval_term(XOR, t, dict(zip(vs, values)))


class TestSatisfaction:
    def test_xor_satisfies_cancellation(self):
        assert satisfies(XOR, parse_term("f(f(x1,x1),x2)"), v(2))

    def test_left_zero_fails_commutativity(self):
        assert not satisfies(LEFT_ZERO, parse_term("f(x1,x2)"), parse_term("f(x2,x1)"))

    def test_distinguishing_assignment(self):
        got = distinguishing_assignment(LEFT_ZERO, parse_term("f(x1,x2)"), parse_term("f(x2,x1)"))
        assert got is not None
        lhs = eval_term(LEFT_ZERO, parse_term("f(x1,x2)"), got)
        rhs = eval_term(LEFT_ZERO, parse_term("f(x2,x1)"), got)
        assert lhs != rhs

    def test_distinguish_over_models_agrees_with_scan(self):
        models = list(enumerate_tables((), 2))
        lhs, rhs = parse_term("f(x1,x2)"), parse_term("f(x2,x1)")
        batched = distinguish_over_models(models, lhs, rhs)
        # the first model with any distinguishing assignment, scanned in order
        for m in models:
            single = distinguishing_assignment(m, lhs, rhs)
            if single is not None:
                assert batched[0] == m
                a = batched[1]
                assert eval_term(m, lhs, a) != eval_term(m, rhs, a)
                break
        else:
            assert batched is None


class TestEnumeration:
    def test_all_size_2_tables(self):
        assert len(list(enumerate_tables((), 2))) == 16

    def test_idempotent_size_2_count(self):
        # f(a,a)=a pins the diagonal; the two off-diagonal cells are free
        axiom = (parse_term("f(x1,x1)"), v(1))
        assert len(list(enumerate_tables((axiom,), 2))) == 4

    def test_flat_round_trip(self):
        assert FiniteAlgebra.from_flat(2, XOR.to_flat()) == XOR

    def test_bad_tables_rejected(self):
        with pytest.raises(ValueError):
            FiniteAlgebra.from_rows([[0, 2], [1, 1]])
        with pytest.raises(ValueError):
            FiniteAlgebra.from_flat(2, [0, 1, 1])


class TestEssentialVars:
    def test_left_zero_second_arg_fictive(self):
        assert essential_vars_alg(parse_term("f(x1,x2)"), LEFT_ZERO) == {1}

    def test_xor_both_essential(self):
        assert essential_vars_alg(parse_term("f(x1,x2)"), XOR) == {1, 2}
