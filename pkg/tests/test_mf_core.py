"""Matrix factorization layer: Koszul row presentations, expansion,
tensor products, shifts, and the defining-identity validator."""

from __future__ import annotations

import dataclasses
import random

import pytest

import corpus
from moymf import (
    GradedFreeModule,
    GradedVar,
    KoszulMF,
    Poly,
    QuotientRing,
    SparseMat,
    grade_shift,
    koszul_expand,
    merge_bases,
    tensor,
    translate,
    unit_object,
)
from moymf.mf_core import IncompatibleBases, InhomogeneousRow, validate

X = GradedVar("x", 2)
Y = GradedVar("y", 2)
CUTOFF = 14


def _simple_koszul() -> KoszulMF:
    x, y = Poly.variable(X), Poly.variable(Y)
    base = QuotientRing((X, Y))
    return KoszulMF(base, ((x, x * y * y), (y, x * x * y)), 0, 0, 8)


class TestKoszulConstruction:
    def test_row_shift_is_always_integral(self) -> None:
        rng = random.Random(5)
        for _ in range(20):
            k = corpus.random_koszul(rng)
            for row in range(k.row_count):
                assert isinstance(k.row_shift(row), int)

    def test_inhomogeneous_row_rejected(self) -> None:
        x, y = Poly.variable(X), Poly.variable(Y)
        base = QuotientRing((X, Y))
        with pytest.raises(InhomogeneousRow):
            KoszulMF(base, ((x + x * y, x),), 0, 0, 8)

    def test_wrong_row_degree_rejected(self) -> None:
        x = Poly.variable(X)
        base = QuotientRing((X, Y))
        with pytest.raises(InhomogeneousRow):
            KoszulMF(base, ((x, x),), 0, 0, 8)  # degrees sum to 4, not 8

    def test_zero_zero_row_rejected(self) -> None:
        base = QuotientRing((X, Y))
        with pytest.raises(InhomogeneousRow):
            KoszulMF(base, ((Poly.zero(), Poly.zero()),), 0, 0, 8)

    def test_potential_is_row_product_sum(self) -> None:
        k = _simple_koszul()
        x, y = Poly.variable(X), Poly.variable(Y)
        assert k.potential() == x * x * y * y + x * x * y * y


class TestExpansion:
    def test_expanded_object_validates(self) -> None:
        assert validate(koszul_expand(_simple_koszul())) == []

    def test_series_agree_between_presentations(self) -> None:
        # two independent code paths: row-shift bookkeeping versus the
        # expanded module's generator shifts
        rng = random.Random(17)
        for _ in range(10):
            k = corpus.random_koszul(rng)
            assert k.graded_series(CUTOFF) == koszul_expand(k).graded_series(CUTOFF)

    def test_expand_ranks(self) -> None:
        m = koszul_expand(_simple_koszul())
        assert m.m0.rank == 2 and m.m1.rank == 2

    def test_corrupted_differential_is_caught(self) -> None:
        m = koszul_expand(_simple_koszul())
        entries = dict(m.d0.entries)
        (i, j), p = next(iter(entries.items()))
        entries[(i, j)] = p + Poly.variable(X) * Poly.variable(Y) ** (
            (p.homogeneous_degree() - 2) // 2
        ) if p.homogeneous_degree() >= 4 else p + Poly.variable(X)
        bad = dataclasses.replace(m, d0=SparseMat(m.d0.nrows, m.d0.ncols, entries))
        assert validate(bad) != []


class TestTensor:
    def test_potentials_add(self) -> None:
        rng = random.Random(23)
        for _ in range(10):
            a = koszul_expand(corpus.random_koszul(rng))
            b = koszul_expand(corpus.random_koszul(rng))
            t = tensor(a, b)
            assert t.base.normal_form(
                t.potential - (a.potential + b.potential)
            ) == Poly.zero()

    def test_commutative_at_graded_rank(self) -> None:
        rng = random.Random(29)
        for _ in range(12):
            a = koszul_expand(corpus.random_koszul(rng))
            b = koszul_expand(corpus.random_koszul(rng))
            assert tensor(a, b).graded_series(CUTOFF) == tensor(b, a).graded_series(
                CUTOFF
            )

    def test_associative_at_graded_rank(self) -> None:
        rng = random.Random(31)
        for _ in range(8):
            a = koszul_expand(corpus.random_koszul(rng))
            b = koszul_expand(corpus.random_koszul(rng))
            c = koszul_expand(corpus.random_koszul(rng))
            left = tensor(tensor(a, b), c)
            right = tensor(a, tensor(b, c))
            assert left.graded_series(CUTOFF) == right.graded_series(CUTOFF)

    def test_tensor_results_validate(self) -> None:
        rng = random.Random(37)
        for _ in range(6):
            a = koszul_expand(corpus.random_koszul(rng))
            b = koszul_expand(corpus.random_koszul(rng))
            assert validate(tensor(a, b)) == []

    def test_unit_object_is_neutral(self) -> None:
        a = koszul_expand(_simple_koszul())
        u = unit_object(a.base, a.potential_degree)
        t = tensor(a, u)
        assert t.graded_series(CUTOFF) == a.graded_series(CUTOFF)
        assert validate(t) == []


class TestShifts:
    def test_translation_squares_to_identity(self) -> None:
        rng = random.Random(41)
        for _ in range(10):
            k = corpus.random_koszul(rng)
            assert k.translated(1).translated(1) == k
            m = koszul_expand(k)
            assert translate(translate(m)).graded_series(CUTOFF) == m.graded_series(
                CUTOFF
            )

    def test_grading_shifts_compose_additively(self) -> None:
        rng = random.Random(43)
        for _ in range(10):
            k = corpus.random_koszul(rng)
            s, t = rng.randint(-3, 3), rng.randint(-3, 3)
            assert k.grade_shifted(s).grade_shifted(t) == k.grade_shifted(s + t)
            m = koszul_expand(k)
            assert grade_shift(grade_shift(m, s), t) == grade_shift(m, s + t)

    def test_translation_swaps_series(self) -> None:
        k = _simple_koszul()
        e, o = k.graded_series(CUTOFF)
        et, ot = k.translated(1).graded_series(CUTOFF)
        assert (et, ot) == (o, e)

    def test_grade_shift_multiplies_series(self) -> None:
        k = _simple_koszul()
        e, o = k.graded_series(CUTOFF)
        es, os_ = k.grade_shifted(2).graded_series(CUTOFF + 2)
        assert es.truncate(CUTOFF) == e.shift(2).truncate(CUTOFF)
        assert os_.truncate(CUTOFF) == o.shift(2).truncate(CUTOFF)


class TestMergeBases:
    def test_shared_names_must_agree_in_degree(self) -> None:
        b1 = QuotientRing((GradedVar("x", 2),))
        b2 = QuotientRing((GradedVar("x", 4),))
        with pytest.raises(IncompatibleBases):
            merge_bases(b1, b2)

    def test_union_semantics(self) -> None:
        b1 = QuotientRing((X,), (Poly.variable(X) ** 2,))
        b2 = QuotientRing((Y,), (Poly.variable(Y) ** 3,))
        merged = merge_bases(b1, b2)
        assert set(merged.vars) == {X, Y}
        assert len(merged.ideal_gens) == 2


class TestSerialization:
    def test_as_dict_shape_and_determinism(self) -> None:
        m = koszul_expand(_simple_koszul())
        d1 = m.as_dict()
        d2 = koszul_expand(_simple_koszul()).as_dict()
        assert d1 == d2
        assert set(d1) == {
            "base", "rank0", "rank1", "shifts0", "shifts1",
            "d0", "d1", "potential", "potential_degree",
        }
        for key, entry in d1["d0"].items():
            i, j = key.split(",")
            assert i.isdigit() and j.isdigit()
            assert isinstance(entry, str)
