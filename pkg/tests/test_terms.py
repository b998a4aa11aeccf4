"""Term core: positions, orders, valuations, arrays, text syntax, enumeration."""

import pytest
from hypothesis import given, strategies as st

from termalg.errors import InvalidPositionError, MalformedArraysError, ParseError
from termalg.terms import (
    Node,
    Var,
    enumerate_terms,
    enumerate_terms_by_length,
    f,
    from_arrays,
    fresh_var_index,
    is_valid_position,
    kth_variable,
    lex_compare,
    max_var_index,
    parse_position,
    parse_term,
    position_to_text,
    positions,
    prefix_leq,
    proper_prefix,
    random_term,
    rename_canonical,
    replace_at,
    substitute,
    subterm_at,
    subterm_set,
    term_to_text,
    to_arrays,
    v,
    valuations,
    var_set,
    variables,
)

import random


def terms_strategy(max_depth=5, num_vars=4):
    leaf = st.integers(1, num_vars).map(Var)
    return st.recursive(leaf, lambda sub: st.tuples(sub, sub).map(lambda p: Node(*p)), max_leaves=2**max_depth)


SAMPLE = parse_term("f(x3,f(f(x1,x2),x2))")


class TestStructure:
    def test_var_index_validation(self):
        with pytest.raises(ValueError):
            Var(0)
        with pytest.raises(ValueError):
            Var(-3)

    def test_node_children_validation(self):
        with pytest.raises(TypeError):
            Node(Var(1), "x2")

    def test_immutability(self):
        t = f(v(1), v(2))
        with pytest.raises(AttributeError):
            t.left = v(3)

    def test_structural_equality_and_hash(self):
        a = f(v(1), f(v(2), v(1)))
        b = f(v(1), f(v(2), v(1)))
        assert a == b and hash(a) == hash(b)
        assert a != f(v(1), f(v(1), v(2)))


class TestPositions:
    def test_positions_sample(self):
        assert positions(SAMPLE) == (
            (),
            (1,),
            (2,),
            (2, 1),
            (2, 1, 1),
            (2, 1, 2),
            (2, 2),
        )

    def test_subterm_at(self):
        assert subterm_at(SAMPLE, ()) == SAMPLE
        assert subterm_at(SAMPLE, (1,)) == v(3)
        assert subterm_at(SAMPLE, (2, 1)) == parse_term("f(x1,x2)")

    def test_subterm_at_bad_position(self):
        with pytest.raises(InvalidPositionError):
            subterm_at(SAMPLE, (1, 1))

    def test_replace_at(self):
        out = replace_at(SAMPLE, (2, 2), v(9))
        assert out == parse_term("f(x3,f(f(x1,x2),x9))")
        assert replace_at(SAMPLE, (), v(1)) == v(1)

    def test_is_valid_position(self):
        assert is_valid_position(SAMPLE, (2, 1, 2))
        assert not is_valid_position(SAMPLE, (1, 1))

    def test_prefix_predicates(self):
        assert prefix_leq((1,), (1, 2))
        assert prefix_leq((1,), (1,))
        assert not proper_prefix((1,), (1,))
        assert proper_prefix((), (2,))

    def test_lex_compare_padding_rule(self):
        # shorter position padded with 0 sorts below its extensions
        assert lex_compare((1,), (1, 1)) == -1
        assert lex_compare((1, 2), (2,)) == -1
        assert lex_compare((2, 1), (2, 1)) == 0

    @given(terms_strategy())
    def test_prefix_implies_lex_less(self, t):
        ps = positions(t)
        for p in ps:
            for q in ps:
                if proper_prefix(p, q):
                    assert lex_compare(p, q) == -1

    @given(terms_strategy())
    def test_subterm_composition(self, t):
        for p in positions(t):
            sub = subterm_at(t, p)
            for q in positions(sub):
                assert subterm_at(t, p + q) == subterm_at(sub, q)


class TestValuations:
    def test_counts_relation(self):
        # binary signature: one more leaf than nodes, positions = leaves + nodes
        for t in enumerate_terms(3, 2):
            length, siz, _ = valuations(t)
            assert length == siz + 1
            assert len(positions(t)) == length + siz

    def test_variables_order(self):
        assert variables(SAMPLE) == (3, 1, 2, 2)

    def test_kth_variable(self):
        assert kth_variable(SAMPLE, 1) == 3
        assert kth_variable(SAMPLE, 2) == 1
        assert kth_variable(v(5), 1) == 5
        with pytest.raises(IndexError):
            kth_variable(SAMPLE, 5)

    def test_fresh_var_index(self):
        assert fresh_var_index(SAMPLE) == 4
        assert fresh_var_index() == 1
        assert max_var_index(v(2), v(7)) == 7

    def test_subterm_set(self):
        assert subterm_set(parse_term("f(x1,x1)")) == {parse_term("f(x1,x1)"), v(1)}
        assert subterm_set(v(2)) == {v(2)}
        assert len(subterm_set(SAMPLE)) == 6


class TestSubstitution:
    def test_substitute(self):
        out = substitute(parse_term("f(x1,f(x2,x1))"), {1: parse_term("f(x3,x3)")})
        assert out == parse_term("f(f(x3,x3),f(x2,f(x3,x3)))")

    def test_rename_canonical(self):
        assert rename_canonical(parse_term("f(x7,f(x2,x7))")) == parse_term("f(x1,f(x2,x1))")

    @given(terms_strategy())
    def test_rename_canonical_idempotent(self, t):
        canon = rename_canonical(t)
        assert rename_canonical(canon) == canon
        assert positions(canon) == positions(t)


class TestArrays:
    def test_sample_encoding(self):
        arrays = to_arrays(SAMPLE)
        assert arrays.positions == positions(SAMPLE)
        assert arrays.var_indexes == (3, 1, 2, 2)
        assert from_arrays(arrays) == SAMPLE

    def test_leaf_encoding(self):
        arrays = to_arrays(v(1))
        assert arrays.positions == ((),)
        assert arrays.var_indexes == (1,)

    def test_exhaustive_round_trip_small(self):
        for t in enumerate_terms(3, 2):
            assert from_arrays(to_arrays(t)) == t

    def test_random_round_trip_deep(self):
        rng = random.Random(8)
        for _ in range(200):
            t = random_term(rng, 8, 4)
            assert from_arrays(to_arrays(t)) == t

    def test_one_child_rejected(self):
        from termalg.terms import TermArrays

        with pytest.raises(MalformedArraysError):
            from_arrays(TermArrays(((), (1,)), (1, 2)))

    def test_missing_root_rejected(self):
        from termalg.terms import TermArrays

        with pytest.raises(MalformedArraysError):
            from_arrays(TermArrays(((1,), (2,)), (1, 2)))

    def test_wrong_leaf_count_rejected(self):
        from termalg.terms import TermArrays

        with pytest.raises(MalformedArraysError):
            from_arrays(TermArrays(((), (1,), (2,)), (1,)))


class TestTextSyntax:
    def test_parse_print_examples(self):
        assert term_to_text(SAMPLE) == "f(x3,f(f(x1,x2),x2))"
        assert parse_term(" f( x3 , f(f(x1,x2),x2) ) ") == SAMPLE

    def test_parse_errors(self):
        for bad in ("f(x1)", "f(x1,x2", "x", "g(x1,x2)", "f(x1,x2)x"):
            with pytest.raises(ParseError):
                parse_term(bad)

    def test_position_syntax(self):
        assert parse_position("e") == ()
        assert parse_position("211") == (2, 1, 1)
        assert position_to_text(()) == "e"
        assert position_to_text((1, 2)) == "12"
        with pytest.raises(ParseError):
            parse_position("13")

    @given(terms_strategy())
    def test_parse_print_round_trip(self, t):
        assert parse_term(term_to_text(t)) == t


class TestEnumeration:
    def test_enumerate_terms_counts(self):
        # depth<=1 over 2 vars: 2 leaves + 4 two-leaf nodes
        assert len(list(enumerate_terms(1, 2))) == 6
        ts = list(enumerate_terms(2, 2))
        assert len(ts) == len(set(ts))
        assert all(t.depth <= 2 and max_var_index(t) <= 2 for t in ts)

    def test_enumerate_by_length_catalan(self):
        # number of terms of Len n over 1 variable is the Catalan number C(n-1)
        from math import comb

        counts = {}
        for t in enumerate_terms_by_length(6, 1):
            counts[t.length] = counts.get(t.length, 0) + 1
        for n in range(1, 7):
            assert counts[n] == comb(2 * (n - 1), n - 1) // n

    def test_random_term_bounds(self):
        rng = random.Random(1)
        for _ in range(100):
            t = random_term(rng, 4, 3)
            assert t.depth <= 4 and max_var_index(t) <= 3
