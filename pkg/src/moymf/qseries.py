"""Integer Laurent polynomials in one variable q, plus quantum combinatorics.

Everything downstream that counts graded dimensions or states a decomposition
multiplicity lands in this module's ``QLaurent`` type: a finite map from
integer exponents to integer coefficients.  Truncated power series (Poincare
series of infinite-dimensional rings) are represented by the same type
together with an explicit cutoff chosen by the caller.

The quantum binomials here are the *balanced* ones, symmetric under
q -> 1/q: qbinomial(n, i) has lowest term q^(-i(n-i)) and value C(n, i)
at q = 1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

__all__ = [
    "QLaurent",
    "qbinomial",
    "quantum_integer",
    "p_coeff",
    "jacobi_series",
    "poincare_regular_quotient",
    "geometric_series",
    "poly_factor",
    "cor_square_sides",
]


class QLaurent:
    """Finite Z-linear combination of integer powers of q."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._c: dict[int, int] = {}
        if coeffs:
            for k, v in coeffs.items():
                if v:
                    self._c[int(k)] = int(v)

    @staticmethod
    def zero() -> "QLaurent":
        return QLaurent()

    @staticmethod
    def one() -> "QLaurent":
        return QLaurent({0: 1})

    @staticmethod
    def q_power(k: int, coeff: int = 1) -> "QLaurent":
        return QLaurent({k: coeff})

    @property
    def coeffs(self) -> Mapping[int, int]:
        return self._c

    def coeff(self, k: int) -> int:
        return self._c.get(k, 0)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def min_exp(self) -> int:
        if not self._c:
            raise ValueError("zero series has no exponents")
        return min(self._c)

    def max_exp(self) -> int:
        if not self._c:
            raise ValueError("zero series has no exponents")
        return max(self._c)

    def __neg__(self) -> "QLaurent":
        return QLaurent({k: -v for k, v in self._c.items()})

    def __add__(self, other: "QLaurent") -> "QLaurent":
        if not isinstance(other, QLaurent):
            return NotImplemented
        out = dict(self._c)
        for k, v in other._c.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                del out[k]
        r = QLaurent.__new__(QLaurent)
        r._c = out
        return r

    def __sub__(self, other: "QLaurent") -> "QLaurent":
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "QLaurent | int") -> "QLaurent":
        if isinstance(other, int):
            return QLaurent({k: v * other for k, v in self._c.items()})
        if not isinstance(other, QLaurent):
            return NotImplemented
        out: dict[int, int] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                s = out.get(k, 0) + v1 * v2
                if s:
                    out[k] = s
                else:
                    del out[k]
        r = QLaurent.__new__(QLaurent)
        r._c = out
        return r

    __rmul__ = __mul__

    def shift(self, k: int) -> "QLaurent":
        """Multiply by q^k."""
        return QLaurent({e + k: v for e, v in self._c.items()})

    def truncate(self, hi: int) -> "QLaurent":
        """Drop terms with exponent > hi (series work at a cutoff)."""
        return QLaurent({k: v for k, v in self._c.items() if k <= hi})

    def reverse(self) -> "QLaurent":
        """q -> 1/q."""
        return QLaurent({-k: v for k, v in self._c.items()})

    def at_one(self) -> int:
        """Evaluation at q = 1 (sum of coefficients)."""
        return sum(self._c.values())

    def divide_exact(self, other: "QLaurent", hi: int | None = None) -> "QLaurent":
        """Exact division, ascending from the lowest exponent.

        With hi=None both operands must be genuinely divisible (zero
        remainder); with hi set, computes the series quotient through
        exponent hi.  Raises ArithmeticError on a non-exact step.
        """
        if not other:
            raise ZeroDivisionError("division by zero series")
        if not self:
            return QLaurent.zero()
        lead = other.min_exp()
        lead_c = other._c[lead]
        rem = dict(self._c)
        out: dict[int, int] = {}
        bound = hi if hi is not None else self.max_exp() - lead
        while rem:
            lo = min(rem)
            k = lo - lead
            if k > bound:
                if hi is not None:
                    break
                raise ArithmeticError("non-terminating exact division")
            c = Fraction(rem[lo], lead_c)
            if c.denominator != 1:
                raise ArithmeticError("non-integer coefficient in exact division")
            out[k] = int(c)
            for e, v in other._c.items():
                t = e + k
                s = rem.get(t, 0) - int(c) * v
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return QLaurent(out)

    def render(self) -> str:
        """Canonical ascending form: e.g. ``q^-3 + 2*q^-1 + 2*q + q^3``."""
        if not self._c:
            return "0"
        parts: list[str] = []
        for k in sorted(self._c):
            v = self._c[k]
            mag = abs(v)
            if k == 0:
                frag = str(mag)
            else:
                body = "q" if k == 1 else f"q^{k}"
                frag = body if mag == 1 else f"{mag}*{body}"
            if not parts:
                parts.append(frag if v > 0 else f"-{frag}")
            else:
                parts.append(f"+ {frag}" if v > 0 else f"- {frag}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"QLaurent({self.render()})"


def poly_factor(exponents: Iterable[int]) -> QLaurent:
    """Sum of q^e over the given exponents (with multiplicity)."""
    out: dict[int, int] = {}
    for e in exponents:
        out[e] = out.get(e, 0) + 1
    return QLaurent(out)


def geometric_series(d: int, cutoff: int) -> QLaurent:
    """1/(1 - q^d) through exponent cutoff."""
    if d <= 0:
        raise ValueError("geometric step must be positive")
    return QLaurent({k: 1 for k in range(0, cutoff + 1, d)})


def quantum_integer(m: int) -> QLaurent:
    """[m] = q^(1-m) + q^(3-m) + ... + q^(m-1); zero for m <= 0."""
    if m <= 0:
        return QLaurent.zero()
    return QLaurent({1 - m + 2 * j: 1 for j in range(m)})


@lru_cache(maxsize=None)
def qbinomial(n: int, i: int) -> QLaurent:
    """Balanced quantum binomial; zero when i < 0 or i > n or n < 0."""
    if i < 0 or n < 0 or i > n:
        return QLaurent.zero()
    if i == 0 or i == n:
        return QLaurent.one()
    # balanced Pascal: [n i] = q^(i-n)*[n-1 i-1] + q^i*[n-1 i]
    return qbinomial(n - 1, i - 1).shift(i - n) + qbinomial(n - 1, i).shift(i)


def p_coeff(j: int, n1: int, n2: int) -> int:
    """Number of partitions of j inside an n2 x (n1 - n2) box.

    Read off as a coefficient of the balanced binomial, whose exponent
    ladder is -n2*(n1 - n2) + 2*j for j = 0, 1, ...
    """
    if j < 0:
        return 0
    return qbinomial(n1, n2).coeff(-n2 * (n1 - n2) + 2 * j)


def jacobi_series(n: int, r: int) -> QLaurent:
    """prod_{k<=n}(1-q^2k) / [prod_{k<=r}(1-q^2k) * prod_{k<=n-r}(1-q^2k)].

    Computed by exact polynomial division, independently of qbinomial's
    recurrence; the two agree after recentering, and tests rely on that
    agreement as a cross-check.
    """
    if r < 0 or r > n:
        raise ValueError("need 0 <= r <= n")
    num = QLaurent.one()
    for k in range(1, n + 1):
        num = num * (QLaurent.one() - QLaurent.q_power(2 * k))
    den = QLaurent.one()
    for k in range(1, r + 1):
        den = den * (QLaurent.one() - QLaurent.q_power(2 * k))
    for k in range(1, n - r + 1):
        den = den * (QLaurent.one() - QLaurent.q_power(2 * k))
    return num.divide_exact(den)


def poincare_regular_quotient(
    var_degrees: Iterable[int], gen_degrees: Iterable[int], cutoff: int
) -> QLaurent:
    """Poincare series of Q[vars]/<regular sequence>, truncated at cutoff.

    prod_g (1 - q^deg(g)) / prod_v (1 - q^deg(v)); exactness of that formula
    is precisely the regularity of the sequence.
    """
    series = QLaurent.one()
    for d in gen_degrees:
        series = (series * (QLaurent.one() - QLaurent.q_power(d))).truncate(cutoff)
    for d in var_degrees:
        series = (series * geometric_series(d, cutoff)).truncate(cutoff)
    return series


def cor_square_sides(j1: int, j2: int) -> tuple[QLaurent, QLaurent]:
    """Both sides of the square-count identity
    [j1-1]*[j1-1 ch j2-1] - [j2-1]*[j1 ch j2] = [j1-1 ch j2],
    for callers that want to compare or display them."""
    lhs = quantum_integer(j1 - 1) * qbinomial(j1 - 1, j2 - 1) - quantum_integer(
        j2 - 1
    ) * qbinomial(j1, j2)
    rhs = qbinomial(j1 - 1, j2)
    return lhs, rhs
