"""Independent oracles for the test suite.

Everything here is computed with sympy or bare combinatorics, on purpose
avoiding the package's own algebra, so that agreement between the two is
evidence rather than a tautology.  Tests freeze values produced by these
functions; the package is never consulted to produce an expected value.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def qbinom_product(n: int, i: int) -> dict[int, int]:
    """Balanced q-binomial via the product formula, as {exponent: coeff}.

    [n choose i] = prod_{k=1..i} (q^{n-i+k} - q^{-(n-i+k)}) / (q^k - q^{-k})
    """
    if i < 0 or i > n:
        return {}
    q = sympy.symbols("q")
    expr = sympy.Integer(1)
    for k in range(1, i + 1):
        expr *= (q ** (n - i + k) - q ** (-(n - i + k))) / (q**k - q ** (-k))
    # clear the balanced shift so sympy can treat it as an honest polynomial
    shift = i * (n - i)
    poly = sympy.Poly(sympy.expand(sympy.cancel(expr * q**shift)), q)
    out: dict[int, int] = {}
    for (e,), c in poly.terms():
        out[e - shift] = int(c)
    return out


def partitions_in_box(j: int, rows: int, cols: int) -> int:
    """Count partitions of j with at most `rows` parts, each at most `cols`."""
    if j < 0:
        return 0
    count = 0
    for parts in itertools.product(range(cols + 1), repeat=rows):
        if sum(parts) == j and all(a >= b for a, b in zip(parts, parts[1:])):
            count += 1
    return count


def weighted_monomials(weights: list[int], d: int) -> list[tuple[int, ...]]:
    """Exponent vectors with sum(e_k * weights[k]) == d, in a fixed order."""
    if not weights:
        return [()] if d == 0 else []
    out = []
    w = weights[0]
    for e in range(d // w + 1):
        for rest in weighted_monomials(weights[1:], d - e * w):
            out.append((e,) + rest)
    return out


def weighted_quotient_dims(
    weights: list[int],
    gens: list[sympy.Expr],
    syms: list[sympy.Symbol],
    cutoff: int,
) -> dict[int, int]:
    """Graded dimensions of Q[x]/<gens> by brute monomial linear algebra.

    weights[k] is the grading of syms[k]; each generator must be
    homogeneous for those weights.  For each total degree d <= cutoff, the
    span of {m * g} with m a monomial is row-reduced over the full
    monomial basis of degree d and the dimension is basis minus rank.
    """
    gen_polys = [sympy.Poly(sympy.expand(g), *syms) for g in gens]
    gen_degrees = []
    for gp in gen_polys:
        degs = {sum(e * w for e, w in zip(mono, weights)) for mono in gp.monoms()}
        if len(degs) != 1:
            raise ValueError(f"generator not weighted-homogeneous: {gp}")
        gen_degrees.append(degs.pop())
    dims: dict[int, int] = {}
    for d in range(cutoff + 1):
        basis = weighted_monomials(weights, d)
        if not basis:
            dims[d] = 0
            continue
        index = {mono: k for k, mono in enumerate(basis)}
        rows = []
        for gp, gd in zip(gen_polys, gen_degrees):
            for m in weighted_monomials(weights, d - gd):
                row = [0] * len(basis)
                for mono, coeff in gp.terms():
                    together = tuple(a + b for a, b in zip(mono, m))
                    row[index[together]] = coeff
                rows.append(row)
        rank = sympy.Matrix(rows).rank() if rows else 0
        dims[d] = len(basis) - rank
    return dims


def elementary_symmetric(roots: list[Fraction]) -> list[Fraction]:
    """[e_1, ..., e_r] of the given root multiset."""
    out = []
    for j in range(1, len(roots) + 1):
        total = Fraction(0)
        for combo in itertools.combinations(roots, j):
            term = Fraction(1)
            for x in combo:
                term *= x
            total += term
        out.append(total)
    return out


def power_sum(roots: list[Fraction], k: int) -> Fraction:
    """p_k of the given root multiset."""
    return sum((Fraction(x) ** k for x in roots), Fraction(0))


def eval_laurent(coeffs: dict[int, int], q: Fraction) -> Fraction:
    """Evaluate a {exponent: coefficient} Laurent polynomial at q."""
    return sum((Fraction(c) * q**e for e, c in coeffs.items()), Fraction(0))


def binomial(n: int, k: int) -> int:
    import math

    if k < 0 or k > n:
        return 0
    return math.comb(n, k)
