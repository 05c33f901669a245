"""Polynomial and quotient ring layer: ring axioms, divided differences,
degree-wise normal forms, and graded dimension series against brute
monomial counting."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from moymf import (
    CutoffExceeded,
    GradedVar,
    Poly,
    QuotientRing,
    divided_difference,
    divided_difference_values,
    poincare_regular_quotient,
    quotient_dimension_series,
)

X = GradedVar("x", 2)
Y = GradedVar("y", 2)
Z = GradedVar("z", 4)
VARS = (X, Y, Z)


def _mono(exps: tuple[int, int, int], c: int) -> Poly:
    term = Poly.const(c)
    for v, e in zip(VARS, exps):
        term = term * Poly.variable(v) ** e
    return term


@st.composite
def polys(draw) -> Poly:
    p = Poly.zero()
    for _ in range(draw(st.integers(0, 4))):
        exps = tuple(draw(st.integers(0, 2)) for _ in VARS)
        p = p + _mono(exps, draw(st.integers(-3, 3)))
    return p


@st.composite
def points(draw) -> dict:
    return {v: Fraction(draw(st.integers(-5, 5))) for v in VARS}


class TestPolyArithmetic:
    @given(polys(), polys(), polys())
    def test_ring_axioms(self, p: Poly, q: Poly, r: Poly) -> None:
        assert p + q == q + p
        assert (p + q) + r == p + (q + r)
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p + Poly.zero() == p
        assert p * Poly.const(1) == p

    @given(polys(), polys(), points())
    def test_evaluate_is_a_homomorphism(self, p: Poly, q: Poly, pt: dict) -> None:
        assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)
        assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)

    @given(polys(), polys())
    def test_product_degree_adds(self, p: Poly, q: Poly) -> None:
        # restrict to the homogeneous pieces the invariant quantifies over
        for dp, hp in p.homogeneous_components().items():
            for dq, hq in q.homogeneous_components().items():
                prod = hp * hq
                if prod:
                    assert prod.homogeneous_degree() == dp + dq

    @given(polys(), polys())
    def test_differentiate_product_rule(self, p: Poly, q: Poly) -> None:
        lhs = (p * q).differentiate(X)
        rhs = p.differentiate(X) * q + p * q.differentiate(X)
        assert lhs == rhs

    def test_variable_degree_constraints(self) -> None:
        with pytest.raises(ValueError):
            GradedVar("w", 1)
        with pytest.raises(ValueError):
            GradedVar("w", 0)
        with pytest.raises(ValueError):
            GradedVar("w", -2)


class TestDividedDifference:
    @given(polys())
    def test_exactness(self, f: Poly) -> None:
        # dd(f,x,y)*(x - y) + f[x -> y] = f, the defining identity
        dd = divided_difference(f, X, Y)
        sub = f.substitute({X: Poly.variable(Y)})
        recovered = dd * (Poly.variable(X) - Poly.variable(Y)) + sub
        assert recovered == f

    @given(
        polys(),
        st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
        st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
    )
    def test_value_form_exactness(self, f: Poly, ca: tuple, cb: tuple) -> None:
        # slot images must stay homogeneous of the slot degree
        a = _mono((1, 0, 0), ca[0]) + _mono((0, 1, 0), ca[1])
        b = _mono((1, 0, 0), cb[0]) + _mono((0, 1, 0), cb[1])
        dd = divided_difference_values(f, X, a, b)
        diff = f.substitute({X: a}) - f.substitute({X: b})
        assert dd * (a - b) == diff

    def test_symmetric_input_has_zero_difference(self) -> None:
        f = _mono((1, 1, 0), 1) + _mono((2, 0, 0), 1) + _mono((0, 2, 0), 1)
        assert divided_difference(f, X, Y) * (
            Poly.variable(X) - Poly.variable(Y)
        ) + f.substitute({X: Poly.variable(Y)}) == f


class TestQuotientRing:
    def setup_method(self) -> None:
        gens = (_mono((2, 0, 0), 1) + _mono((0, 2, 0), 1), _mono((1, 1, 0), 1))
        self.ring = QuotientRing((X, Y), gens)

    @given(polys())
    def test_normal_form_is_a_projection(self, p: Poly) -> None:
        p = p.substitute({Z: Poly.const(0)})  # stay inside Q[x, y]
        nf = self.ring.normal_form
        assert nf(nf(p)) == nf(p)

    @given(polys(), polys())
    def test_normal_form_respects_addition(self, p: Poly, q: Poly) -> None:
        p = p.substitute({Z: Poly.const(0)})
        q = q.substitute({Z: Poly.const(0)})
        nf = self.ring.normal_form
        assert nf(p + q) == nf(nf(p) + nf(q))
        assert nf(p * q) == nf(nf(p) * nf(q))

    def test_dimension_series_frozen_instance(self) -> None:
        # dims of Q[x,y]/<x^2+y^2, x*y> counted by brute monomial algebra
        series = quotient_dimension_series(self.ring, 10)
        assert dict(series.coeffs) == {0: 1, 2: 2, 4: 1}

    def test_dimension_series_frozen_mixed_weights(self) -> None:
        # Q[x(2), z(4)] / <x*z - x^3>
        ring = QuotientRing((X, Z), (_mono((1, 0, 1), 1) - _mono((3, 0, 0), 1),))
        series = quotient_dimension_series(ring, 12)
        assert dict(series.coeffs) == {0: 1, 2: 1, 4: 2, 6: 1, 8: 2, 10: 1, 12: 2}

    def test_dimension_series_frozen_three_vars(self) -> None:
        # Q[x(2), y(2), z(4)] / <x^2 - z, y^3>
        ring = QuotientRing(
            (X, Y, Z),
            (_mono((2, 0, 0), 1) - _mono((0, 0, 1), 1), _mono((0, 3, 0), 1)),
        )
        series = quotient_dimension_series(ring, 12)
        assert dict(series.coeffs) == {
            0: 1, 2: 2, 4: 3, 6: 3, 8: 3, 10: 3, 12: 3,
        }

    def test_dimension_series_against_monomial_counting(self) -> None:
        # three random monomial-power ideals, always regular sequences
        rng = random.Random(2026)
        sx, sy, sz = sympy.symbols("x y z")
        for _ in range(3):
            ex, ey = rng.randint(1, 3), rng.randint(1, 3)
            gens = (_mono((ex, 0, 0), 1), _mono((0, ey, 0), 1))
            ring = QuotientRing((X, Y), gens)
            got = quotient_dimension_series(ring, 14)
            want = oracles.weighted_quotient_dims(
                [2, 2], [sx**ex, sy**ey], [sx, sy], 14
            )
            for d in range(15):
                assert got.coeff(d) == want[d], (ex, ey, d)

    def test_regular_sequence_series_matches_prediction(self) -> None:
        # P(R/<seq>) = P(R) * prod(1 - q^{d_i}) for a regular sequence
        ring = QuotientRing(
            (X, Y, Z), (_mono((2, 0, 0), 1) + _mono((0, 0, 1), 3),)
        )
        got = quotient_dimension_series(ring, 16)
        want = poincare_regular_quotient([2, 2, 4], [4], 16)
        assert got == want

    def test_two_alphabet_difference_ideal(self) -> None:
        # two rank-2 alphabets glued by their difference ideal: the series
        # drops by (1-q^2)(1-q^4) exactly
        x2, y2 = GradedVar("x2", 4), GradedVar("y2", 4)
        x1, y1 = GradedVar("x1", 2), GradedVar("y1", 2)
        gens = (
            Poly.variable(x1) - Poly.variable(y1),
            Poly.variable(x2) - Poly.variable(y2),
        )
        ring = QuotientRing((x1, x2, y1, y2), gens)
        got = quotient_dimension_series(ring, 16)
        want = poincare_regular_quotient([2, 4, 2, 4], [2, 4], 16)
        assert got == want

    def test_construction_rejections(self) -> None:
        with pytest.raises(ValueError):
            QuotientRing((X, GradedVar("x", 2)))  # duplicate names
        with pytest.raises(ValueError):
            QuotientRing((X,), (Poly.zero(),))
        with pytest.raises(ValueError):
            QuotientRing((X,), (Poly.variable(X) + Poly.const(1),))
        with pytest.raises(ValueError):
            QuotientRing((X,), (Poly.variable(Y),))

    def test_cutoff_enforced(self) -> None:
        ring = QuotientRing((X,), (Poly.variable(X) ** 2,), cutoff=6)
        with pytest.raises(CutoffExceeded):
            ring.normal_form(Poly.variable(X) ** 10)
