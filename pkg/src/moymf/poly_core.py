"""Exact multivariate polynomial arithmetic over Q with even Z-gradings.

Representation
--------------
A variable is a ``GradedVar`` (name, even degree >= 2).  A monomial is a
tuple of ``(GradedVar, exponent)`` pairs, sorted by variable name, with all
exponents positive; the empty tuple is the monomial 1.  A ``Poly`` maps
monomials to nonzero ``Fraction`` coefficients.  All arithmetic is exact;
no floating point appears anywhere in this package.

Quotient rings by homogeneous ideals are handled degree by degree: for each
degree d the span of ``{m * g : g generator, m monomial, deg(m*g) = d}`` is
row-reduced once (a Macaulay matrix over Q) and cached, after which normal
forms in degree d are a single linear reduction.  No Groebner machinery is
needed because every ideal here is homogeneous and every computation is
degree-bounded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

__all__ = [
    "GradedVar",
    "Mono",
    "Poly",
    "QuotientRing",
    "DegreeMismatch",
    "NotDivisible",
    "CutoffExceeded",
    "divided_difference",
    "divided_difference_values",
]


class DegreeMismatch(ValueError):
    """A substitution image is inhomogeneous or has the wrong degree."""


class NotDivisible(ArithmeticError):
    """An exact polynomial division failed; indicates an internal error."""


class CutoffExceeded(RuntimeError):
    """A degree-bounded computation was asked past its configured cutoff."""


@dataclass(frozen=True, order=True)
class GradedVar:
    """A polynomial variable carrying a positive even Z-grading."""

    name: str
    degree: int

    def __post_init__(self) -> None:
        if self.degree < 2 or self.degree % 2 != 0:
            raise ValueError(f"variable degree must be even and >= 2: {self!r}")


# Monomial: ((var, exp), ...) sorted by var name, exps > 0.  () is 1.
Mono = tuple[tuple[GradedVar, int], ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def mono_degree(m: Mono) -> int:
    return sum(v.degree * e for v, e in m)


def mono_mul(m1: Mono, m2: Mono) -> Mono:
    if not m1:
        return m2
    if not m2:
        return m1
    merged: dict[GradedVar, int] = dict(m1)
    for v, e in m2:
        merged[v] = merged.get(v, 0) + e
    return _mono_from_dict(merged)


def _mono_from_dict(d: Mapping[GradedVar, int]) -> Mono:
    items = tuple(sorted(((v, e) for v, e in d.items() if e), key=lambda p: p[0].name))
    # same name with two different degrees would silently split a variable
    for (a, _), (b, _) in zip(items, items[1:]):
        if a.name == b.name:
            raise ValueError(f"conflicting gradings for variable {a.name}")
    return items


def mono_divides(m1: Mono, m2: Mono) -> bool:
    """True when m1 | m2."""
    need = dict(m1)
    for v, e in m2:
        if v in need:
            need[v] -= min(need[v], e)
    return all(e <= 0 for e in need.values())


def mono_key(m: Mono) -> tuple:
    """Graded lexicographic sort key: total degree, then name-wise exponents."""
    return (mono_degree(m), tuple((v.name, e) for v, e in m))


class Poly:
    """Immutable exact polynomial.  Supports +, -, *, ** and scalar mixing."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Mono, Fraction] | None = None):
        clean: dict[Mono, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        self._terms: dict[Mono, Fraction] = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return _POLY_ZERO

    @staticmethod
    def const(c: Fraction | int) -> "Poly":
        c = Fraction(c)
        return Poly({(): c}) if c else _POLY_ZERO

    @staticmethod
    def variable(v: GradedVar) -> "Poly":
        return Poly({((v, 1),): _ONE})

    # -- inspection ----------------------------------------------------

    @property
    def terms(self) -> Mapping[Mono, Fraction]:
        return self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, m: Mono) -> Fraction:
        return self._terms.get(m, _ZERO)

    def constant_value(self) -> Fraction | None:
        """The value of a constant polynomial, else None."""
        if not self._terms:
            return _ZERO
        if len(self._terms) == 1 and () in self._terms:
            return self._terms[()]
        return None

    def variables(self) -> frozenset[GradedVar]:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self) -> int:
        """Top degree; 0 for the zero polynomial."""
        return max((mono_degree(m) for m in self._terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {mono_degree(m) for m in self._terms}
        return len(degs) <= 1

    def homogeneous_degree(self) -> int:
        """Degree of a nonzero homogeneous polynomial; raises otherwise."""
        degs = {mono_degree(m) for m in self._terms}
        if len(degs) != 1:
            raise DegreeMismatch(f"not nonzero-homogeneous: {self}")
        return degs.pop()

    def homogeneous_components(self) -> dict[int, "Poly"]:
        parts: dict[int, dict[Mono, Fraction]] = {}
        for m, c in self._terms.items():
            parts.setdefault(mono_degree(m), {})[m] = c
        return {d: Poly(t) for d, t in sorted(parts.items())}

    def max_exponent(self, v: GradedVar) -> int:
        best = 0
        for m in self._terms:
            for w, e in m:
                if w == v and e > best:
                    best = e
        return best

    # -- arithmetic ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self._terms.items()})

    def __add__(self, other: "Poly | int | Fraction") -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, _ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = Poly.__new__(Poly)
        p._terms = out
        p._hash = None
        return p

    __radd__ = __add__

    def __sub__(self, other: "Poly | int | Fraction") -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "Poly | int | Fraction") -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: "Poly | int | Fraction") -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return _POLY_ZERO
            return Poly({m: k * c for m, k in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        if not self._terms or not other._terms:
            return _POLY_ZERO
        # keep the outer loop on the smaller operand
        a, b = self._terms, other._terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[Mono, Fraction] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = mono_mul(m1, m2)
                s = out.get(m, _ZERO) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        p = Poly.__new__(Poly)
        p._terms = out
        p._hash = None
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- substitution and calculus --------------------------------------

    def substitute(self, sigma: Mapping[GradedVar, "Poly"]) -> "Poly":
        """Simultaneous substitution.  Images must be homogeneous of the
        replaced variable's degree (DegreeMismatch otherwise)."""
        for v, img in sigma.items():
            if img and img.homogeneous_degree() != v.degree:
                raise DegreeMismatch(
                    f"image of {v.name} (degree {v.degree}) has degree "
                    f"{img.homogeneous_degree()}"
                )
            if not img.is_homogeneous():
                raise DegreeMismatch(f"image of {v.name} is inhomogeneous")
        return self._apply_map(lambda v: sigma.get(v))

    def evaluate(self, point: Mapping[GradedVar, Fraction | int]) -> Fraction:
        """Evaluate at a rational point; every variable must be assigned."""
        total = _ZERO
        for m, c in self._terms.items():
            val = c
            for v, e in m:
                val *= Fraction(point[v]) ** e
            total += val
        return total

    def _apply_map(self, image: Callable[[GradedVar], "Poly | None"]) -> "Poly":
        # cache per-variable powers; substitution cost is dominated by these
        powers: dict[tuple[GradedVar, int], Poly] = {}

        def power(v: GradedVar, e: int) -> Poly:
            key = (v, e)
            got = powers.get(key)
            if got is None:
                img = image(v)
                base = Poly.variable(v) if img is None else img
                got = base ** e
                powers[key] = got
            return got

        total = _POLY_ZERO
        for m, c in self._terms.items():
            term = Poly.const(c)
            for v, e in m:
                if image(v) is None:
                    term = term * Poly({((v, e),): _ONE})
                else:
                    term = term * power(v, e)
            total = total + term
        return total

    def differentiate(self, v: GradedVar) -> "Poly":
        out: dict[Mono, Fraction] = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if not e:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            mm = _mono_from_dict(d)
            s = out.get(mm, _ZERO) + c * e
            if s:
                out[mm] = s
            else:
                del out[mm]
        return Poly(out)

    def coefficients_in(self, v: GradedVar) -> dict[int, "Poly"]:
        """Write self as sum_k c_k * v^k; returns {k: c_k} with c_k free of v."""
        buckets: dict[int, dict[Mono, Fraction]] = {}
        for m, c in self._terms.items():
            d = dict(m)
            k = d.pop(v, 0)
            buckets.setdefault(k, {})[_mono_from_dict(d)] = c
        return {k: Poly(t) for k, t in sorted(buckets.items())}

    # -- rendering -------------------------------------------------------

    def render(self) -> str:
        """Deterministic human-readable form, graded-lex term order."""
        if not self._terms:
            return "0"
        parts: list[str] = []
        for m in sorted(self._terms, key=mono_key):
            c = self._terms[m]
            body = "*".join(
                v.name if e == 1 else f"{v.name}^{e}" for v, e in m
            )
            mag = abs(c)
            if not body:
                frag = str(mag)
            elif mag == 1:
                frag = body
            else:
                frag = f"{mag}*{body}"
            if not parts:
                parts.append(frag if c > 0 else f"-{frag}")
            else:
                parts.append(f"+ {frag}" if c > 0 else f"- {frag}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self.render()})"


def _coerce(x: "Poly | int | Fraction") -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    return NotImplemented  # type: ignore[return-value]


_POLY_ZERO = Poly()


def divided_difference(f: Poly, x: GradedVar, y: GradedVar) -> Poly:
    """(f - f[x -> y]) / (x - y), exact.

    Requires deg x = deg y.  Computed termwise through the identity
    (x^k - y^k)/(x - y) = sum_{p+q=k-1} x^p y^q, so no division occurs.
    """
    if x.degree != y.degree:
        raise DegreeMismatch(f"deg {x.name} != deg {y.name}")
    return divided_difference_values(f, x, Poly.variable(x), Poly.variable(y))


def divided_difference_values(f: Poly, z: GradedVar, a: Poly, b: Poly) -> Poly:
    """(f[z -> a] - f[z -> b]) / (a - b) for homogeneous a, b of deg z.

    Exact by construction: writing f = sum_k c_k z^k, the result is
    sum_k c_k * sum_{p+q=k-1} a^p b^q.  Returns 0 when f is free of z.
    """
    for img in (a, b):
        if img and img.homogeneous_degree() != z.degree:
            raise DegreeMismatch("slot image degree mismatch")
    out = Poly.zero()
    a_pows = [Poly.const(1)]
    b_pows = [Poly.const(1)]
    for k, c_k in f.coefficients_in(z).items():
        if k == 0 or not c_k:
            continue
        while len(a_pows) < k:
            a_pows.append(a_pows[-1] * a)
            b_pows.append(b_pows[-1] * b)
        geom = Poly.zero()
        for p in range(k):
            geom = geom + a_pows[p] * b_pows[k - 1 - p]
        out = out + c_k * geom
    return out


# ---------------------------------------------------------------------------
# Quotient rings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientRing:
    """Q[vars] / <homogeneous ideal_gens>, reduced degree by degree.

    An empty ``ideal_gens`` is the free polynomial ring.  ``cutoff`` bounds
    the degrees this ring will ever compute in; normal forms past it raise
    CutoffExceeded rather than silently truncating.
    """

    vars: tuple[GradedVar, ...]
    ideal_gens: tuple[Poly, ...] = ()
    cutoff: int = 512
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names in ring")
        known = set(self.vars)
        for g in self.ideal_gens:
            if not g:
                raise ValueError("zero ideal generator")
            if not g.is_homogeneous():
                raise ValueError(f"inhomogeneous ideal generator: {g.render()}")
            if not g.variables() <= known:
                raise ValueError("ideal generator uses a variable not in the ring")

    # -- construction helpers -------------------------------------------

    def with_generator(self, g: Poly) -> "QuotientRing":
        return QuotientRing(self.vars, self.ideal_gens + (g,), self.cutoff)

    def without_var(self, y: GradedVar, gens: Sequence[Poly]) -> "QuotientRing":
        remaining = tuple(v for v in self.vars if v != y)
        return QuotientRing(remaining, tuple(g for g in gens if g), self.cutoff)

    # -- monomial bases ---------------------------------------------------

    def monomials(self, d: int) -> tuple[Mono, ...]:
        """All monomials of total degree d, graded-lex ordered."""
        if d > self.cutoff:
            raise CutoffExceeded(f"degree {d} beyond ring cutoff {self.cutoff}")
        cache = self._cache.setdefault("monos", {})
        if d not in cache:
            cache[d] = tuple(sorted(self._enumerate(d, 0, {}), key=mono_key))
        return cache[d]

    def _enumerate(self, d: int, i: int, acc: dict[GradedVar, int]) -> Iterator[Mono]:
        if d == 0:
            yield _mono_from_dict(acc)
            return
        if i >= len(self.vars):
            return
        v = self.vars[i]
        for e in range(d // v.degree, -1, -1):
            if e:
                acc[v] = e
            yield from self._enumerate(d - e * v.degree, i + 1, acc)
            acc.pop(v, None)

    # -- degreewise row reduction ------------------------------------------

    def _pivots(self, d: int) -> dict[Mono, dict[Mono, Fraction]]:
        """Reduced rows of the degree-d Macaulay matrix, keyed by pivot.

        Each row is stored as {mono: coeff} with pivot coefficient 1 and
        pivot = graded-lex-largest monomial of the row.  Tails may mention
        smaller pivots; normal_form reduces iteratively, which terminates
        because the largest reducible monomial strictly decreases.
        """
        cache = self._cache.setdefault("pivots", {})
        if d in cache:
            return cache[d]
        rows: list[dict[Mono, Fraction]] = []
        for g in self.ideal_gens:
            dg = g.homogeneous_degree()
            if dg > d:
                continue
            for m in self.monomials(d - dg):
                rows.append({mono_mul(m, mg): c for mg, c in g.terms.items()})
        pivots: dict[Mono, dict[Mono, Fraction]] = {}
        for row in rows:
            row = _reduce_row(row, pivots)
            if not row:
                continue
            piv = max(row, key=mono_key)
            inv = 1 / row[piv]
            pivots[piv] = {m: c * inv for m, c in row.items()}
        cache[d] = pivots
        return pivots

    def normal_form(self, p: Poly) -> Poly:
        """Canonical representative of p modulo the ideal."""
        if not p:
            return p
        if not self.ideal_gens:
            return p
        out: dict[Mono, Fraction] = {}
        for d, part in p.homogeneous_components().items():
            reduced = _reduce_row(dict(part.terms), self._pivots(d))
            for m, c in reduced.items():
                out[m] = c
        return Poly(out)

    def is_zero(self, p: Poly) -> bool:
        return not self.normal_form(p)

    def dimension(self, d: int) -> int:
        """dim_Q of the degree-d piece of the quotient."""
        if d < 0:
            return 0
        return len(self.monomials(d)) - len(self._pivots(d))

    def standard_monomials(self, d: int) -> tuple[Mono, ...]:
        piv = self._pivots(d)
        return tuple(m for m in self.monomials(d) if m not in piv)

    def dimension_series(self, cutoff: int):
        """Sum_d dim_Q(degree-d piece) q^d for 0 <= d <= cutoff.

        Uses a closed-form product when the ideal visibly presents the ring
        as a finite free module tower (each generator monic in its own
        otherwise-untouched variable); general homogeneous ideals fall back
        to the degreewise Macaulay computation.
        """
        from .qseries import QLaurent, geometric_series, poly_factor

        structured = self._monic_structure()
        if structured is not None:
            series = QLaurent.one()
            used = {v for v, _ in structured}
            for v, k in structured:
                series = series * poly_factor([v.degree * j for j in range(k)])
                series = series.truncate(cutoff)
            for v in self.vars:
                if v not in used:
                    series = (series * geometric_series(v.degree, cutoff)).truncate(cutoff)
            return series.truncate(cutoff)
        coeffs = {}
        for d in range(0, cutoff + 1):
            n = self.dimension(d)
            if n:
                coeffs[d] = n
        return QLaurent(coeffs)

    def _monic_structure(self) -> list[tuple[GradedVar, int]] | None:
        """Detect [(v, k)] with each generator = unit*v^k + (terms not
        divisible by v^k), distinct v per generator, v in no other generator.
        Then the quotient is a free module with basis {1..v^(k-1)} per v."""
        if not self.ideal_gens:
            return []
        result: list[tuple[GradedVar, int]] = []
        claimed: set[GradedVar] = set()
        for idx, g in enumerate(self.ideal_gens):
            found = None
            for v in sorted(g.variables(), key=lambda w: w.name):
                k = g.max_exponent(v)
                pure: Mono = ((v, k),)
                c = g.coefficient(pure)
                if not c:
                    continue
                rest_ok = all(
                    m == pure or not mono_divides(pure, m) for m in g.terms
                )
                others_ok = all(
                    v not in h.variables()
                    for j, h in enumerate(self.ideal_gens)
                    if j != idx
                )
                if rest_ok and others_ok and v not in claimed:
                    found = (v, k)
                    break
            if found is None:
                return None
            claimed.add(found[0])
            result.append(found)
        return result

    def render(self) -> str:
        vs = ", ".join(f"{v.name}({v.degree})" for v in self.vars)
        if not self.ideal_gens:
            return f"Q[{vs}]"
        gs = "; ".join(g.render() for g in self.ideal_gens)
        return f"Q[{vs}] / <{gs}>"


def _reduce_row(
    row: dict[Mono, Fraction], pivots: Mapping[Mono, Mapping[Mono, Fraction]]
) -> dict[Mono, Fraction]:
    """Linear reduction of a sparse row against reduced pivot rows."""
    if not row or not pivots:
        return dict(row)
    work = dict(row)
    while True:
        hit = None
        for m in sorted(work, key=mono_key, reverse=True):
            if m in pivots:
                hit = m
                break
        if hit is None:
            return work
        c = work[hit]
        for m, pc in pivots[hit].items():
            s = work.get(m, _ZERO) - c * pc
            if s:
                work[m] = s
            else:
                work.pop(m, None)


def quotient_dimension_series(r: QuotientRing, cutoff: int):
    """Module-level alias: the Poincare series of the quotient up to cutoff."""
    return r.dimension_series(cutoff)
