import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from provwb import (
    EvaluationError,
    Monomial,
    ParseError,
    Polynomial,
    ProvenanceBundle,
    Valuation,
    bundle_size,
    evaluate,
    evaluate_bundle,
    parse_bundle,
    serialize_bundle,
)
from provwb.core import canonical_monomials

from conftest import TELEPHONY_TEXT


def poly_from_text(expr, key="k"):
    return parse_bundle(f"# key: {key}\n{expr}\n", "text").polynomials[0]


class TestTextParsing:
    def test_paper_terms(self):
        poly = poly_from_text("208.8*p1*m1 + 240*p1*m3", key="10001")
        assert len(poly.monomials) == 2
        assert poly.monomials[0].factors == (("m1", 1), ("p1", 1))
        assert poly.monomials[0].coefficient == 208.8

    def test_zero_monomial_dropped_and_constant(self):
        poly = poly_from_text("0*x + 5")
        assert len(poly.monomials) == 1
        assert poly.monomials[0] == Monomial(5.0, ())

    def test_repeated_variable_merges_with_power(self):
        # oracle: 2*x*x + 3*x^2 = (2+3)*x^2
        poly = poly_from_text("2*x*x + 3*x^2")
        assert poly.monomials == (Monomial(5.0, (("x", 2),)),)

    def test_negative_terms(self):
        poly = poly_from_text("3*x - 4*x + -2*y")
        assert poly.monomials == (Monomial(-1.0, (("x", 1),)), Monomial(-2.0, (("y", 1),)))

    def test_whitespace_insensitive(self):
        a = poly_from_text("2 * x ^ 2+ 3*y")
        b = poly_from_text("2*x^2+3*y")
        assert a == b

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_bundle("# key: a\n2*!x\n", "text")

    def test_non_positive_exponent(self):
        with pytest.raises(ParseError, match="exponent"):
            poly_from_text("2*x^0")

    def test_non_finite_coefficient(self):
        with pytest.raises(ParseError, match="non-finite"):
            poly_from_text("1e999*x")

    def test_duplicate_key(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_bundle("# key: a\n1*x\n# key: a\n2*y\n", "text")

    def test_body_without_header(self):
        with pytest.raises(ParseError, match="key"):
            parse_bundle("2*x\n", "text")

    def test_telephony_fixture(self):
        bundle = parse_bundle(TELEPHONY_TEXT, "text")
        assert [p.key for p in bundle.polynomials] == ["10001", "10002"]
        assert [len(p.monomials) for p in bundle.polynomials] == [8, 6]


class TestJsonFormat:
    def test_round_trip_micro(self, micro_bundle):
        text = serialize_bundle(micro_bundle, "json")
        assert parse_bundle(text, "json") == micro_bundle

    def test_empty_bundle(self):
        assert serialize_bundle(ProvenanceBundle(), "json") == '{"polynomials":[]}\n'

    def test_bad_exponent(self):
        with pytest.raises(ParseError, match="exponent"):
            parse_bundle('{"polynomials":[{"key":"a","monomials":[{"c":1,"v":[["x",0]]}]}]}')

    def test_bad_name(self):
        with pytest.raises(ParseError, match="variable name"):
            parse_bundle('{"polynomials":[{"key":"a","monomials":[{"c":1,"v":[["1x",1]]}]}]}')


class TestCanonicalization:
    def test_idempotent(self):
        ms = [Monomial.make(2, [("x", 1)]), Monomial.make(3, [("x", 1)])]
        once = canonical_monomials(ms)
        assert canonical_monomials(once) == once

    def test_constants_sort_first(self):
        poly = poly_from_text("2*x + 7")
        assert poly.monomials[0].factors == ()


names = st.sampled_from(["x", "y", "z", "m1", "m2", "p1"])
monomials_st = st.builds(
    Monomial.make,
    st.floats(min_value=-100, max_value=100).filter(lambda c: abs(c) > 1e-6),
    st.lists(st.tuples(names, st.integers(1, 4)), max_size=3),
)
polys_st = st.lists(monomials_st, max_size=10)


@settings(max_examples=100, deadline=None)
@given(polys_st, st.dictionaries(names, st.floats(-2, 2), max_size=6), st.floats(-2, 2))
def test_merge_preserves_value(monomials, assignments, default):
    raw = Polynomial("k", tuple(monomials))
    canonical = Polynomial.make("k", monomials)
    val = Valuation(assignments, default)
    a = sum(
        m.coefficient * math.prod(val.value(n) ** e for n, e in m.factors)
        for m in raw.monomials
    )
    b = evaluate(canonical, val)
    assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.lists(polys_st, max_size=4))
def test_round_trip_both_formats(poly_bodies):
    bundle = ProvenanceBundle.make(
        [Polynomial.make(f"k{i}", ms) for i, ms in enumerate(poly_bodies)]
    )
    for fmt in ("json", "text"):
        assert parse_bundle(serialize_bundle(bundle, fmt), fmt) == bundle


class TestEvaluation:
    def test_all_ones(self, micro_bundle):
        values, _ = evaluate_bundle(micro_bundle, Valuation({}, 1.0))
        assert values == pytest.approx({"10001": 905.25, "10002": 437.45})

    def test_all_zeros(self, micro_bundle):
        values, _ = evaluate_bundle(micro_bundle, Valuation({}, 0.0))
        assert values == {"10001": 0.0, "10002": 0.0}

    def test_march_decrease_scenario(self, micro_bundle):
        # m3 drops by 20%: 454.1 + 0.8 * 451.15
        values, _ = evaluate_bundle(micro_bundle, Valuation({"m3": 0.8}, 1.0))
        assert values["10001"] == pytest.approx(815.02)

    def test_empty_bundle(self):
        values, duration = evaluate_bundle(ProvenanceBundle(), Valuation())
        assert values == {} and duration >= 0

    def test_additivity_matches_per_polynomial(self, micro_bundle):
        val = Valuation({"m1": 1.5, "v": -0.5}, 0.7)
        values, _ = evaluate_bundle(micro_bundle, val)
        for poly in micro_bundle.polynomials:
            assert values[poly.key] == evaluate(poly, val)

    def test_overflow_reported(self):
        poly = poly_from_text("1*x^4")
        with pytest.raises(EvaluationError):
            evaluate(poly, Valuation({"x": 1e100}, 1.0))


class TestBundleSize:
    def test_micro(self, micro_bundle):
        assert bundle_size(micro_bundle) == 14

    def test_empty(self):
        assert bundle_size(ProvenanceBundle()) == 0
