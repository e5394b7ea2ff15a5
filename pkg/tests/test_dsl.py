"""Functional mini-language: parsing, diagnostics, round-trip, semantics."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poisson_ou import DslError, functional_from_text, parse, serialize
from poisson_ou.dsl import BUILTINS, Expr, Term, to_functional


class TestParsing:
    def test_single_call(self):
        e = parse("count(0)")
        assert e == Expr(const=0.0, terms=(Term(1.0, "count", (0.0,)),))

    def test_coefficient_and_constant(self):
        e = parse("2.5*exp_neg(0.3, 1) - 4")
        assert e.const == -4.0
        (term,) = e.terms
        assert term.coeff == 2.5 and term.func == "exp_neg"
        assert term.args == (0.3, 1.0)

    def test_leading_sign(self):
        e = parse("-count(0) + 1")
        assert e.terms[0].coeff == -1.0
        assert e.const == 1.0

    def test_constant_only(self):
        assert parse("3.5") == Expr(const=3.5, terms=())

    def test_whitespace_insensitive(self):
        assert parse(" count( 0 )+2 ") == parse("count(0) + 2")

    def test_scientific_notation(self):
        e = parse("1e-3*count(0)")
        assert e.terms[0].coeff == 1e-3


class TestDiagnostics:
    def test_unknown_builtin(self):
        with pytest.raises(DslError, match="line 1, column 1"):
            parse("foo(0)")

    def test_bad_character_position(self):
        with pytest.raises(DslError, match="column 10"):
            parse("count(0) @")

    def test_multiline_position(self):
        with pytest.raises(DslError, match="line 2"):
            parse("count(0) +\n%")

    def test_arity_error(self):
        with pytest.raises(DslError, match="argument"):
            parse("indicator_le(0)")

    def test_empty_expression(self):
        with pytest.raises(DslError, match="empty"):
            parse("   ")

    def test_missing_operand(self):
        with pytest.raises(DslError):
            parse("count(0) +")

    def test_error_carries_line_and_column(self):
        try:
            parse("count(0) $ 1")
        except DslError as err:
            assert err.line == 1 and err.column == 10
        else:
            pytest.fail("expected a DslError")


class TestRoundTrip:
    CASES = [
        "count(0)",
        "2*exp_neg(0.3, 0) - indicator_le(1, 3) + 5",
        "-cumsum_g(0, 2)",
        "0.25*max_radius_gt(0) + 0.5",
        "7",
        "-1.5",
    ]

    @pytest.mark.parametrize("text", CASES)
    def test_parse_serialize_parse(self, text):
        e = parse(text)
        assert parse(serialize(e)) == e

    @pytest.mark.parametrize("text", CASES)
    def test_serialize_is_canonical(self, text):
        e = parse(text)
        assert serialize(parse(serialize(e))) == serialize(e)

    @given(
        const=st.floats(-100, 100, allow_nan=False),
        coeffs=st.lists(st.floats(-10, 10).filter(lambda x: x != 0), max_size=4),
        seed=st.integers(0, 2**16),
    )
    @settings(max_examples=80, deadline=None)
    def test_round_trip_property(self, const, coeffs, seed):
        import random

        rng = random.Random(seed)
        terms = []
        for coeff in coeffs:
            name = rng.choice(sorted(BUILTINS))
            args = tuple(float(rng.randint(0, 5)) for _ in range(BUILTINS[name]))
            terms.append(Term(coeff, name, args))
        e = Expr(const=const, terms=tuple(terms))
        assert parse(serialize(e)) == e


class TestSemantics:
    def test_count(self):
        F = functional_from_text("count(1)")
        assert F((3, 7)) == 7.0

    def test_indicator(self):
        F = functional_from_text("indicator_le(0, 2)")
        assert F((2,)) == 1.0 and F((3,)) == 0.0

    def test_exp_neg(self):
        F = functional_from_text("exp_neg(0.5, 0)")
        assert F((2,)) == pytest.approx(math.exp(-1.0))

    def test_cumsum(self):
        # G(n) = sum_{j<n} 1{j <= M}: caps at M + 1
        F = functional_from_text("cumsum_g(0, 1)")
        assert [F((n,)) for n in range(4)] == [0.0, 1.0, 2.0, 2.0]

    def test_affine_combination(self):
        F = functional_from_text("2*count(0) - 3*indicator_le(0, 0) + 1")
        assert F((0,)) == -2.0
        assert F((2,)) == 5.0

    def test_sign_inference_single_call(self):
        assert functional_from_text("exp_neg(0.5, 0)").sign_df == "nonpos"
        assert functional_from_text("-1*exp_neg(0.5, 0)").sign_df == "nonneg"
        assert functional_from_text("cumsum_g(0, 2)").sign_d2f == "nonpos"
        assert functional_from_text("count(0) + 5").sign_df == "nonneg"

    def test_no_sign_inference_for_sums(self):
        F = functional_from_text("count(0) + exp_neg(1, 0)")
        assert F.sign_df == "unknown"
