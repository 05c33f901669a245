"""Reduction calculus for Koszul row presentations.

Every operation here consumes and produces ``KoszulMF`` values and preserves
the potential exactly; the ``ReductionSession`` wrapper re-checks that after
each step and keeps an ordered log of (operation, parameters, check result).

The workhorse is variable exclusion: a row whose second entry is
c*y^e + p, with y internal, c a nonzero rational, and no monomial of p
divisible by y^e, can be dropped at the price of passing to the quotient by
that entry.  Two sound cases are distinguished:

* e = 1: a genuine change of variables; y is substituted away everywhere
  (rows, ideal generators) and leaves the ring.
* e >= 2: the entry joins the base ideal.  This is valid only while y is
  untouched by the existing ideal generators; once y is constrained, a
  further power of y is no longer a free monomial and the splitting argument
  behind the exclusion breaks, so the gate refuses (ConditionUnmet).

Rows with one zero side appear for closed diagrams only (potential 0).
They are not exclusions but homology absorptions: (a; 0) contributes the
quotient by a with a parity flip and a grading offset of
potential_degree/2 - deg a, while (0; b) contributes the quotient by b
on the spot.  Both require the zero-potential context and are logged as
``absorb``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .poly_core import (
    CutoffExceeded,
    DegreeMismatch,
    GradedVar,
    Mono,
    Poly,
    QuotientRing,
    mono_divides,
    mono_key,
)
from .qseries import QLaurent, poincare_regular_quotient
from .mf_core import (
    GradedFreeModule,
    InhomogeneousRow,
    KoszulMF,
    MatrixFactorization,
    SparseMat,
)
from .symfun import Alphabet, ColorMismatch

__all__ = [
    "ZeroScalar",
    "PotentialMismatch",
    "RegularityUnverified",
    "ConditionUnmet",
    "scalar_twist",
    "row_op",
    "transpose_row",
    "replace_second_sequence",
    "replace_first_sequence",
    "exclude_variable",
    "exclusion_candidate",
    "absorb_zero_row",
    "glue",
    "regularity_heuristic",
    "default_regularity_cutoff",
    "remove_contractible",
    "solve_first_column",
    "LogEntry",
    "ReductionSession",
]


class ZeroScalar(ValueError):
    """Scalar twist by zero."""


class PotentialMismatch(ValueError):
    """A replacement column does not reproduce the potential."""


class RegularityUnverified(RuntimeError):
    """The regularity heuristic failed and no override was given."""


class ConditionUnmet(ValueError):
    """An exclusion or absorption precondition failed; message says which."""


# ---------------------------------------------------------------------------
# Elementary operations
# ---------------------------------------------------------------------------


def scalar_twist(k: KoszulMF, row: int, c: Fraction | int) -> KoszulMF:
    """Row becomes (c*a; b/c); the product, hence the potential, is fixed."""
    c = Fraction(c)
    if not c:
        raise ZeroScalar("scalar twist requires a nonzero rational")
    a, b = k.rows[row]
    rows = list(k.rows)
    rows[row] = (a * c, b * (1 / c))
    return k.with_rows(rows)


def row_op(k: KoszulMF, i: int, j: int, lam: Poly, kind: str) -> KoszulMF:
    """Potential-preserving elementary transformation on rows i and j.

    kind="first_col":  a_j += lam*a_i and b_i -= lam*b_j
                       (deg lam = deg a_j - deg a_i).
    kind="second_col": a_i -= lam*b_j and a_j += lam*b_i
                       (deg lam = deg a_i - deg b_j).
    """
    if i == j:
        raise ValueError("row_op needs two distinct rows")
    if lam and not lam.is_homogeneous():
        raise DegreeMismatch("lambda must be homogeneous")
    ai, bi = k.rows[i]
    aj, bj = k.rows[j]
    dai, dbi = k.row_degrees(i)
    daj, dbj = k.row_degrees(j)
    rows = list(k.rows)
    if kind == "first_col":
        if lam and lam.homogeneous_degree() != daj - dai:
            raise DegreeMismatch(
                f"first_col lambda degree {lam.homogeneous_degree()}, "
                f"need {daj - dai}"
            )
        rows[i] = (ai, bi - lam * bj)
        rows[j] = (aj + lam * ai, bj)
    elif kind == "second_col":
        if lam and lam.homogeneous_degree() != dai - dbj:
            raise DegreeMismatch(
                f"second_col lambda degree {lam.homogeneous_degree()}, "
                f"need {dai - dbj}"
            )
        rows[i] = (ai - lam * bj, bi)
        rows[j] = (aj + lam * bi, bj)
    else:
        raise ValueError(f"unknown row_op kind: {kind!r}")
    return k.with_rows(rows)


def transpose_row(k: KoszulMF, row: int) -> KoszulMF:
    """Swap the two entries of one row.

    A rank-1 factor (a; b) agrees with (b; a) after a parity flip and a
    grading shift by (deg b - deg a)/2, so the swap is compensated globally;
    the underlying graded module and the potential are both unchanged.
    """
    h = k.row_shift(row)
    a, b = k.rows[row]
    rows = list(k.rows)
    rows[row] = (b, a)
    return KoszulMF(
        k.base,
        tuple(rows),
        k.global_grading_shift + h,
        (k.z2_shift + 1) % 2,
        k.potential_degree,
    )


def default_regularity_cutoff(base: QuotientRing, seq: Sequence[Poly]) -> int:
    """Two largest generator degrees plus twice the largest variable degree;
    floors at 8.  Deep enough to catch every failure seen in practice while
    keeping the degreewise computation quick."""
    degs = sorted(
        (p.homogeneous_degree() for p in seq if p), reverse=True
    ) or [0]
    top_two = sum(degs[:2])
    vmax = max((v.degree for v in base.vars), default=2)
    return max(8, top_two + 2 * vmax)


def regularity_heuristic(
    base: QuotientRing, seq: Sequence[Poly], cutoff: int | None = None
) -> str:
    """"verified" iff the quotient by seq has the Poincare series a regular
    sequence forces, degree by degree up to the cutoff; else "unverified"."""
    seq = [base.normal_form(p) for p in seq]
    if any(not p for p in seq):
        return "unverified"
    if cutoff is None:
        cutoff = default_regularity_cutoff(base, seq)
    predicted = base.dimension_series(cutoff)
    predicted = poincare_regular_quotient(
        [], [p.homogeneous_degree() for p in seq], cutoff
    ) * predicted
    predicted = predicted.truncate(cutoff)
    extended = QuotientRing(
        base.vars, base.ideal_gens + tuple(seq), max(base.cutoff, cutoff)
    )
    actual = extended.dimension_series(cutoff)
    return "verified" if actual == predicted else "unverified"


def _replace_column(
    k: KoszulMF,
    col: str,
    target: Sequence[Poly],
    rows: Sequence[int] | None,
    force: bool,
) -> tuple[KoszulMF, str]:
    idx = list(range(k.row_count)) if rows is None else list(rows)
    if len(target) != len(idx):
        raise ValueError("replacement column length must match the row subset")
    for m, p in zip(idx, target):
        da, db = k.row_degrees(m)
        want = db if col == "b" else da
        if p and (not p.is_homogeneous() or p.homogeneous_degree() != want):
            raise DegreeMismatch(f"replacement entry for row {m} must have degree {want}")
    new_rows = list(k.rows)
    for m, p in zip(idx, target):
        a, b = new_rows[m]
        new_rows[m] = (a, p) if col == "b" else (p, b)
    new_pot = Poly.zero()
    for a, b in new_rows:
        new_pot = new_pot + a * b
    if k.base.normal_form(new_pot - k.potential()):
        raise PotentialMismatch(f"target {col}-column changes the potential")
    fixed = [
        (k.rows[m][0] if col == "b" else k.rows[m][1]) for m in idx
    ]
    verdict = regularity_heuristic(k.base, fixed)
    if verdict != "verified" and not force:
        raise RegularityUnverified(
            f"the fixed column on rows {idx} is not verified regular; "
            "pass force to proceed"
        )
    return k.with_rows(new_rows), verdict


def replace_second_sequence(
    k: KoszulMF,
    target_b: Sequence[Poly],
    force: bool = False,
    rows: Sequence[int] | None = None,
) -> tuple[KoszulMF, str]:
    """Swap the b-column (on all rows, or a subset), keeping the a-column
    and the potential.  Sound when the kept a-entries form a regular
    sequence; the heuristic must say "verified" unless force is set.
    Returns (result, regularity verdict)."""
    return _replace_column(k, "b", target_b, rows, force)


def replace_first_sequence(
    k: KoszulMF,
    target_a: Sequence[Poly],
    force: bool = False,
    rows: Sequence[int] | None = None,
) -> tuple[KoszulMF, str]:
    """Mirror image of replace_second_sequence: swap a-entries when the
    kept b-entries are verified regular."""
    return _replace_column(k, "a", target_a, rows, force)


# ---------------------------------------------------------------------------
# Variable exclusion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Candidate:
    row: int
    var: GradedVar
    power: int
    coeff: Fraction
    # substitution candidates (power 1) are strictly preferred
    @property
    def priority(self) -> tuple[int, int]:
        return (0 if self.power == 1 else 1, self.row)


def exclusion_candidate(
    k: KoszulMF, row: int, external: frozenset[GradedVar]
) -> _Candidate | None:
    """Best admissible (variable, power) for excluding this row, or None."""
    _, b = k.rows[row]
    if not b:
        return None
    internal = sorted(
        (v for v in b.variables() if v not in external), key=lambda v: v.name
    )
    gen_vars = frozenset(v for g in k.base.ideal_gens for v in g.variables())
    best: _Candidate | None = None
    for y in internal:
        e = b.max_exponent(y)
        pure: Mono = ((y, e),)
        c = b.coefficient(pure)
        if not c:
            continue
        if any(m != pure and mono_divides(pure, m) for m in b.terms):
            continue
        if e > 1 and y in gen_vars:
            # y is already constrained; y^e is no longer a free monomial
            continue
        cand = _Candidate(row, y, e, c)
        # prefer substitutions, then the lexicographically smallest variable
        key = (0 if e == 1 else 1, y.name)
        if best is None or key < (0 if best.power == 1 else 1, best.var.name):
            best = cand
    return best


def _substituted_ring(base: QuotientRing, sigma: dict[GradedVar, Poly], drop: GradedVar) -> QuotientRing:
    gens = []
    for g in base.ideal_gens:
        g2 = g.substitute(sigma)
        if g2:
            gens.append(g2)
    return QuotientRing(
        tuple(v for v in base.vars if v != drop), tuple(gens), base.cutoff
    )


def exclude_variable(
    k: KoszulMF, row: int, external: Iterable[GradedVar] = ()
) -> KoszulMF:
    """Drop a row by quotienting the base by its second entry.

    Preconditions (ConditionUnmet otherwise): the potential only involves
    external variables; the entry decomposes as c*y^e + p with y internal,
    no monomial of p divisible by y^e, and (for e >= 2) y absent from the
    current ideal generators.
    """
    external = frozenset(external)
    pot = k.potential()
    bad = [v.name for v in pot.variables() if v not in external]
    if bad:
        raise ConditionUnmet(
            f"potential involves internal variable(s) {', '.join(sorted(bad))}"
        )
    cand = exclusion_candidate(k, row, external)
    if cand is None:
        a, b = k.rows[row]
        raise ConditionUnmet(
            f"row {row}: no admissible unit-coefficient pure power of an "
            f"internal variable in {b.render() if b else '0'}"
        )
    y, e, c = cand.var, cand.power, cand.coeff
    _, b = k.rows[row]
    if e == 1:
        rest = b - Poly({((y, 1),): c})
        sigma = {y: rest * (Fraction(-1) / c)}
        new_base = _substituted_ring(k.base, sigma, y)
        new_rows = []
        for m, (ra, rb) in enumerate(k.rows):
            if m == row:
                continue
            new_rows.append(
                (new_base.normal_form(ra.substitute(sigma)),
                 new_base.normal_form(rb.substitute(sigma)))
            )
    else:
        monic = b * (1 / c)
        new_base = k.base.with_generator(monic)
        new_rows = []
        for m, (ra, rb) in enumerate(k.rows):
            if m == row:
                continue
            new_rows.append((new_base.normal_form(ra), new_base.normal_form(rb)))
    for m, (ra, rb) in enumerate(new_rows):
        if not ra and not rb:
            raise ConditionUnmet(
                f"row collapsed to (0; 0) after excluding {y.name}; "
                "the remaining data is not a regular presentation"
            )
    return k.with_rows(new_rows, base=new_base)


def absorb_zero_row(k: KoszulMF, row: int, force: bool = False) -> KoszulMF:
    """Collapse one zero-sided row to the quotient by its other entry.

    A row (a; 0) or (0; b) contributes nothing to the potential; when its
    nonzero entry is regular over the current base, the factor it spans is
    homotopy equivalent to the quotient module, so the row can be absorbed
    into the base ring.  (a; 0) flips the parity and shifts the grading by
    potential_degree/2 - deg a; (0; b) changes neither.
    """
    a, b = k.rows[row]
    if a and b:
        raise ConditionUnmet(f"row {row} has no zero side")
    gen = a if a else b
    if regularity_heuristic(k.base, [gen]) != "verified" and not force:
        raise RegularityUnverified(
            f"row {row} entry not verified regular; pass force to absorb anyway"
        )
    lead = gen.terms[max(gen.terms, key=mono_key)]
    new_base = k.base.with_generator(gen * (1 / lead))
    new_rows = []
    for m, (ra, rb) in enumerate(k.rows):
        if m == row:
            continue
        nra, nrb = new_base.normal_form(ra), new_base.normal_form(rb)
        if not nra and not nrb:
            raise ConditionUnmet(
                f"row collapsed to (0; 0) while absorbing row {row}"
            )
        new_rows.append((nra, nrb))
    z2 = k.z2_shift
    shift = k.global_grading_shift
    if a:
        z2 = (z2 + 1) % 2
        shift += k.potential_degree // 2 - a.homogeneous_degree()
    return KoszulMF(new_base, tuple(new_rows), shift, z2, k.potential_degree)


# ---------------------------------------------------------------------------
# Gluing
# ---------------------------------------------------------------------------


def glue(
    x: KoszulMF, y: KoszulMF, pairs: Sequence[tuple[Alphabet, Alphabet]]
) -> KoszulMF:
    """Identify alphabet pairs (keep, replace) across the join of x and y.

    y may be x itself for self-gluing.  An empty pair list is the plain
    disjoint union (tensor product).
    """
    joined = x if y is x else x.join(y)
    sigma: dict[GradedVar, Poly] = {}
    for keep, repl in pairs:
        if keep.color != repl.color:
            raise ColorMismatch(
                f"glue pairs need equal colors: {keep.color} vs {repl.color}"
            )
        for j in range(1, keep.color + 1):
            sigma[repl.var(j)] = keep.poly(j)
    if not sigma:
        return joined
    replaced = set(sigma)
    for v in replaced:
        if v not in joined.base.vars:
            raise ValueError(f"glued variable {v.name} is not in the base ring")
    kept_vars = tuple(v for v in joined.base.vars if v not in replaced)
    missing = [
        v for pair in pairs for v in pair[0].vars if v not in kept_vars
    ]
    if missing:
        kept_vars = tuple(sorted(set(kept_vars) | set(missing), key=lambda v: v.name))
    gens = []
    for g in joined.base.ideal_gens:
        g2 = g.substitute(sigma)
        if g2:
            gens.append(g2)
    new_base = QuotientRing(kept_vars, tuple(gens), joined.base.cutoff)
    new_rows = [
        (new_base.normal_form(a.substitute(sigma)),
         new_base.normal_form(b.substitute(sigma)))
        for a, b in joined.rows
    ]
    return KoszulMF(
        new_base,
        tuple(new_rows),
        joined.global_grading_shift,
        joined.z2_shift,
        joined.potential_degree,
    )


# ---------------------------------------------------------------------------
# Contractible summands on expanded objects
# ---------------------------------------------------------------------------


def remove_contractible(x: MatrixFactorization) -> MatrixFactorization:
    """Split off unit entries until none remain (Gaussian elimination on the
    folded differential).  Unit means: normal form is a nonzero constant."""
    base = x.base
    while True:
        hit = None
        for name, mat in (("d0", x.d0), ("d1", x.d1)):
            for (i, j), p in sorted(mat.entries.items()):
                c = base.normal_form(p).constant_value()
                if c:
                    hit = (name, i, j, c)
                    break
            if hit:
                break
        if hit is None:
            return x
        name, i, j, u = hit
        if name == "d0":
            x = _eliminate(x, i, j, u, True)
        else:
            x = _eliminate(x, i, j, u, False)


def _eliminate(
    x: MatrixFactorization, i: int, j: int, u: Fraction, in_d0: bool
) -> MatrixFactorization:
    """Remove target generator i and source generator j around a unit entry."""
    base = x.base
    if in_d0:
        src, dst, mat, other = x.m0, x.m1, x.d0, x.d1
    else:
        src, dst, mat, other = x.m1, x.m0, x.d1, x.d0
    inv = Fraction(1) / u
    col = {r: p for (r, c), p in mat.entries.items() if c == j and r != i}
    rowe = {c: p for (r, c), p in mat.entries.items() if r == i and c != j}
    new_entries: dict[tuple[int, int], Poly] = {}
    for (r, c), p in mat.entries.items():
        if r == i or c == j:
            continue
        q = p
        if r in col and c in rowe:
            q = base.normal_form(p - col[r] * inv * rowe[c])
        if q:
            new_entries[(_drop(r, i), _drop(c, j))] = q
    new_mat = SparseMat(mat.nrows - 1, mat.ncols - 1, new_entries)
    other_entries = {
        (_drop(r, j), _drop(c, i)): p
        for (r, c), p in other.entries.items()
        if r != j and c != i
    }
    new_other = SparseMat(other.nrows - 1, other.ncols - 1, other_entries)
    new_src = GradedFreeModule(base, _drop_shift(src.generator_shifts, j))
    new_dst = GradedFreeModule(base, _drop_shift(dst.generator_shifts, i))
    if in_d0:
        return MatrixFactorization(
            new_src, new_dst, new_mat, new_other, x.potential, x.potential_degree
        )
    return MatrixFactorization(
        new_dst, new_src, new_other, new_mat, x.potential, x.potential_degree
    )


def _drop(idx: int, removed: int) -> int:
    return idx if idx < removed else idx - 1


def _drop_shift(shifts: tuple[int, ...], removed: int) -> tuple[int, ...]:
    return shifts[:removed] + shifts[removed + 1 :]


# ---------------------------------------------------------------------------
# Degreewise linear solving for replacement columns
# ---------------------------------------------------------------------------


def solve_first_column(
    base: QuotientRing,
    b_seq: Sequence[Poly],
    omega: Poly,
    potential_degree: int,
) -> list[Poly] | None:
    """Find homogeneous a_m with sum a_m b_m = omega modulo the base ideal.

    Degrees are forced: deg a_m = potential_degree - deg b_m.  Solved as one
    rational linear system on normal-form coordinates; returns None when the
    system is inconsistent.
    """
    want = base.normal_form(omega)
    if want and want.homogeneous_degree() != potential_degree:
        raise DegreeMismatch("omega degree does not match the potential degree")
    unknowns: list[tuple[int, Mono]] = []
    images: list[Poly] = []
    for m, b in enumerate(b_seq):
        if not b:
            continue
        d = potential_degree - b.homogeneous_degree()
        if d < 0:
            continue
        for mono in base.standard_monomials(d):
            unknowns.append((m, mono))
            images.append(base.normal_form(Poly({mono: Fraction(1)}) * b))
    targets = base.standard_monomials(potential_degree)
    t_index = {mono: r for r, mono in enumerate(targets)}
    rows = len(targets)
    cols = len(unknowns)
    mat = [[Fraction(0)] * (cols + 1) for _ in range(rows)]
    for c, img in enumerate(images):
        for mono, coef in img.terms.items():
            mat[t_index[mono]][c] = coef
    for mono, coef in want.terms.items():
        mat[t_index[mono]][cols] = coef
    sol = _solve_fraction_system(mat, cols)
    if sol is None:
        return None
    out = [Poly.zero() for _ in b_seq]
    for (m, mono), val in zip(unknowns, sol):
        if val:
            out[m] = out[m] + Poly({mono: val})
    return out


def _solve_fraction_system(
    mat: list[list[Fraction]], cols: int
) -> list[Fraction] | None:
    """Gaussian elimination on an augmented matrix; any solution or None."""
    rows = len(mat)
    pivot_of_col: dict[int, int] = {}
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if mat[i][c]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [v - f * w for v, w in zip(mat[i], mat[r])]
        pivot_of_col[c] = r
        r += 1
        if r == rows:
            break
    for i in range(rows):
        if mat[i][cols] and all(not mat[i][c] for c in range(cols)):
            return None
    sol = [Fraction(0)] * cols
    for c, pr in pivot_of_col.items():
        sol[c] = mat[pr][cols]
    return sol


# ---------------------------------------------------------------------------
# Sessions: ordered, potential-checked, logged reductions
# ---------------------------------------------------------------------------


@dataclass
class LogEntry:
    op: str
    params: dict
    potential_check: str

    def as_dict(self) -> dict:
        return {
            "op": self.op,
            "params": self.params,
            "potential_check": self.potential_check,
        }


@dataclass
class ReductionSession:
    """Mutable working copy plus the reduction log.

    ``external`` lists the boundary variables exclusion must preserve;
    ``force`` downgrades RegularityUnverified to a logged warning.
    """

    current: KoszulMF
    external: frozenset[GradedVar] = frozenset()
    force: bool = False
    log: list[LogEntry] = field(default_factory=list)

    def _step(self, op: str, params: dict, new: KoszulMF, check: str | None = None) -> None:
        if check is None:
            old_pot = self.current.potential()
            ok = not new.base.normal_form(new.potential() - old_pot)
            check = "ok" if ok else "FAILED"
            if not ok:
                raise PotentialMismatch(f"{op} changed the potential")
        self.log.append(LogEntry(op, params, check))
        self.current = new

    def scalar_twist(self, row: int, c: Fraction | int) -> None:
        self._step("scalar_twist", {"row": row, "c": str(c)}, scalar_twist(self.current, row, c))

    def row_op(self, i: int, j: int, lam: Poly, kind: str) -> None:
        self._step(
            "row_op",
            {"i": i, "j": j, "lambda": lam.render(), "kind": kind},
            row_op(self.current, i, j, lam, kind),
        )

    def transpose_row(self, row: int) -> None:
        self._step(
            "transpose_row",
            {"row": row, "shift": self.current.row_shift(row)},
            transpose_row(self.current, row),
        )

    def replace_second_sequence(
        self, target_b: Sequence[Poly], rows: Sequence[int] | None = None
    ) -> None:
        new, verdict = replace_second_sequence(self.current, target_b, self.force, rows)
        self._step(
            "replace_second_sequence",
            {"targets": [p.render() for p in target_b], "rows": rows,
             "regularity": verdict},
            new,
        )

    def replace_first_sequence(
        self, target_a: Sequence[Poly], rows: Sequence[int] | None = None
    ) -> None:
        new, verdict = replace_first_sequence(self.current, target_a, self.force, rows)
        self._step(
            "replace_first_sequence",
            {"targets": [p.render() for p in target_a], "rows": rows,
             "regularity": verdict},
            new,
        )

    def exclude_variable(self, row: int) -> None:
        cand = exclusion_candidate(self.current, row, self.external)
        new = exclude_variable(self.current, row, self.external)
        self._step(
            "exclude_variable",
            {
                "row": row,
                "variable": cand.var.name if cand else "?",
                "power": cand.power if cand else 0,
            },
            new,
        )

    def exclude_all(self) -> int:
        """Greedy exclusion: substitutions first, then quotient exclusions,
        ties by row index.  Returns the number of rows removed."""
        removed = 0
        while True:
            best: _Candidate | None = None
            for m in range(self.current.row_count):
                cand = exclusion_candidate(self.current, m, self.external)
                if cand is not None and (best is None or cand.priority < best.priority):
                    best = cand
            if best is None:
                return removed
            self.exclude_variable(best.row)
            removed += 1

    def absorb_zero_rows(self, skip_unverified: bool = False) -> int:
        """Absorb every zero-sided row whose entry passes the regularity
        gate; with skip_unverified, gate failures are left in place instead
        of raising."""
        absorbed = 0
        skipped: set[int] = set()
        while True:
            hit = next(
                (
                    m
                    for m, (a, b) in enumerate(self.current.rows)
                    if (not a or not b) and m not in skipped
                ),
                None,
            )
            if hit is None:
                return absorbed
            a, b = self.current.rows[hit]
            try:
                new = absorb_zero_row(self.current, hit, self.force)
            except RegularityUnverified:
                if not skip_unverified:
                    raise
                skipped.add(hit)
                continue
            self._step(
                "absorb",
                {"row": hit, "side": "a" if a else "b",
                 "generator": (a if a else b).render()},
                new,
            )
            absorbed += 1
            skipped = set()

    def reduce_fully(self) -> KoszulMF:
        """Exclusions to a fixed point, then regular zero-sided absorptions;
        alternates until neither makes progress."""
        while True:
            n = self.exclude_all()
            m = self.absorb_zero_rows(skip_unverified=True)
            if n == 0 and m == 0:
                return self.current

    def log_dicts(self) -> list[dict]:
        return [e.as_dict() for e in self.log]
