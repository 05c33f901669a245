"""Symmetric function layer: power sums in elementary symmetric slots and
the row polynomials whose telescoping sums reproduce potentials."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

import oracles
from moymf import (
    Alphabet,
    ColorMismatch,
    L_poly,
    Lambda_poly,
    Poly,
    V_poly,
    power_sum_F,
    power_sum_in,
    product_term,
)
from moymf.symfun import IndexOutOfRange, generic_slots


class TestAlphabet:
    def test_variable_degrees_and_names(self) -> None:
        a = Alphabet(3, "a")
        for j in range(1, 4):
            v = a.var(j)
            assert v.degree == 2 * j
            assert v.name == f"x{j}_a"

    def test_slot_out_of_range(self) -> None:
        a = Alphabet(2, "a")
        with pytest.raises(IndexError):
            a.var(3)
        with pytest.raises(IndexError):
            a.var(0)


class TestPowerSum:
    def test_matches_power_sums_of_roots(self) -> None:
        # freeze ten random points per (i, n) through the oracle side:
        # e_j(roots) plugged into the slot variables must return p_{n+1}
        rng = random.Random(20260816)
        for i in range(1, 4):
            for n in range(max(i, 2), 5):
                f = power_sum_F(i, n)
                slots = generic_slots(i)
                for _ in range(10):
                    roots = [
                        Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                        for _ in range(i)
                    ]
                    point = dict(zip(slots, oracles.elementary_symmetric(roots)))
                    assert f.evaluate(point) == oracles.power_sum(roots, n + 1)

    def test_homogeneous_of_potential_degree(self) -> None:
        for i in range(1, 5):
            for n in range(i, 6):
                assert power_sum_F(i, n).homogeneous_degree() == 2 * n + 2
                assert (
                    power_sum_in(Alphabet(i, "t"), n).homogeneous_degree()
                    == 2 * n + 2
                )

    def test_frozen_rank_one(self) -> None:
        # single slot: p_{n+1} = e_1^{n+1}
        a = Alphabet(1, "a")
        assert power_sum_in(a, 3) == a.poly(1) ** 4

    def test_rejects_bad_arguments(self) -> None:
        with pytest.raises(ValueError):
            power_sum_F(0, 3)
        with pytest.raises(ValueError):
            power_sum_F(2, 0)


class TestProductTerm:
    def test_frozen_example(self) -> None:
        a, b = Alphabet(1, "a"), Alphabet(2, "b")
        assert product_term(1, a, b) == a.poly(1) + b.poly(1)
        assert product_term(2, a, b) == a.poly(1) * b.poly(1) + b.poly(2)
        assert product_term(3, a, b) == a.poly(1) * b.poly(2)

    def test_homogeneous(self) -> None:
        a, b = Alphabet(2, "a"), Alphabet(2, "b")
        for j in range(1, 5):
            assert product_term(j, a, b).homogeneous_degree() == 2 * j

    def test_out_of_range(self) -> None:
        a, b = Alphabet(1, "a"), Alphabet(1, "b")
        with pytest.raises(IndexError):
            product_term(3, a, b)


class TestTelescoping:
    def test_line_rows_reproduce_potential_difference(self) -> None:
        for i in range(1, 5):
            for n in range(i, 6):
                src, dst = Alphabet(i, "s"), Alphabet(i, "d")
                total = Poly.zero()
                for j in range(1, i + 1):
                    total = total + L_poly(j, i, n, src, dst) * (
                        src.poly(j) - dst.poly(j)
                    )
                assert total == power_sum_in(src, n) - power_sum_in(dst, n), (i, n)

    def test_merge_rows_reproduce_potential_difference(self) -> None:
        for i1 in range(1, 4):
            for i2 in range(1, 4):
                i3 = i1 + i2
                for n in range(i3, 6):
                    a, b, c = Alphabet(i1, "a"), Alphabet(i2, "b"), Alphabet(i3, "c")
                    total = Poly.zero()
                    for j in range(1, i3 + 1):
                        total = total + Lambda_poly(j, a, b, c, n) * (
                            c.poly(j) - product_term(j, a, b)
                        )
                    want = (
                        power_sum_in(c, n)
                        - power_sum_in(a, n)
                        - power_sum_in(b, n)
                    )
                    assert total == want, (i1, i2, n)

    def test_split_rows_reproduce_potential_difference(self) -> None:
        for i1 in range(1, 4):
            for i2 in range(1, 4):
                i3 = i1 + i2
                for n in range(i3, 6):
                    a, b, c = Alphabet(i1, "a"), Alphabet(i2, "b"), Alphabet(i3, "c")
                    total = Poly.zero()
                    for j in range(1, i3 + 1):
                        total = total + V_poly(j, a, b, c, n) * (
                            product_term(j, a, b) - c.poly(j)
                        )
                    want = (
                        power_sum_in(a, n)
                        + power_sum_in(b, n)
                        - power_sum_in(c, n)
                    )
                    assert total == want, (i1, i2, n)

    def test_row_degrees(self) -> None:
        src, dst = Alphabet(2, "s"), Alphabet(2, "d")
        a, b, c = Alphabet(1, "a"), Alphabet(1, "b"), Alphabet(2, "c")
        n = 4
        for j in (1, 2):
            assert L_poly(j, 2, n, src, dst).homogeneous_degree() == 2 * n + 2 - 2 * j
            assert Lambda_poly(j, a, b, c, n).homogeneous_degree() == 2 * n + 2 - 2 * j
            assert V_poly(j, a, b, c, n).homogeneous_degree() == 2 * n + 2 - 2 * j


class TestColorChecks:
    def test_line_color_mismatch(self) -> None:
        with pytest.raises(ColorMismatch):
            L_poly(1, 2, 4, Alphabet(1, "s"), Alphabet(2, "d"))

    def test_vertex_color_mismatch(self) -> None:
        a, b, c = Alphabet(1, "a"), Alphabet(1, "b"), Alphabet(3, "c")
        with pytest.raises(ColorMismatch):
            Lambda_poly(1, a, b, c, 4)
        with pytest.raises(ColorMismatch):
            V_poly(1, a, b, c, 4)

    def test_slot_bounds(self) -> None:
        a, b, c = Alphabet(1, "a"), Alphabet(1, "b"), Alphabet(2, "c")
        with pytest.raises(IndexError):
            Lambda_poly(3, a, b, c, 4)
        with pytest.raises(IndexError):
            L_poly(0, 2, 4, Alphabet(2, "s"), Alphabet(2, "d"))
