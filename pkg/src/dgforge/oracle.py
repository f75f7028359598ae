"""Brute-force ground truth, kept deliberately naive and separate.

Everything here recomputes from raw structure constants using its own
textbook Gaussian elimination on dense list-of-list matrices: no sparse
paths, no pivot heuristics, no code shared with the exact linear algebra
used by the main build, so a pivoting or sign bug there cannot hide here.
Scalars are plain ints mod p (inverses via Fermat) or Fractions.  Slow on
purpose; the caps keep it honest at desk scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .dgalgebra import OrdinaryAlgebraPresentation


class OracleCapExceeded(ValueError):
    pass


# -- naive scalar and matrix layer (list-of-lists, dense) -------------------


def _zero(p):
    return 0 if p else Fraction(0)


def _one(p):
    return 1 if p else Fraction(1)


def _norm(p, x):
    return x % p if p else Fraction(x)


def _inv(p, x):
    if p:
        return pow(x % p, p - 2, p)
    return Fraction(1) / Fraction(x)


def _mat_mul(p, a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[_zero(p)] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if x:
                row = b[t]
                for j in range(m):
                    out[i][j] = _norm(p, out[i][j] + x * row[j])
    return out


def _mat_eq(p, a, b):
    return all(_norm(p, x - y) == _zero(p) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def _row_reduce(p, rows):
    """In-place forward+back elimination; returns pivot column list."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    pivots = []
    r = 0
    for c in range(nc):
        sel = None
        for i in range(r, nr):
            if _norm(p, rows[i][c]) != _zero(p):
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = _inv(p, rows[r][c])
        rows[r] = [_norm(p, inv * x) for x in rows[r]]
        for i in range(nr):
            if i != r and _norm(p, rows[i][c]) != _zero(p):
                f = rows[i][c]
                rows[i] = [_norm(p, x - f * y) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return pivots


def naive_rank(p, rows):
    if not rows or not rows[0]:
        return 0
    work = [list(map(lambda x: _norm(p, x), row)) for row in rows]
    return len(_row_reduce(p, work))


def naive_kernel(p, rows, ncols=None):
    """Basis of the right kernel, as a list of coordinate lists."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        rows = [[_zero(p)] * ncols]
    work = [[_norm(p, x) for x in row] for row in rows]
    pivots = _row_reduce(p, work)
    pivset = set(pivots)
    basis = []
    for c in range(ncols):
        if c in pivset:
            continue
        v = [_zero(p)] * ncols
        v[c] = _one(p)
        for r, pc in enumerate(pivots):
            v[pc] = _norm(p, -work[r][c])
        basis.append(v)
    return basis


def naive_solve(p, rows, rhs):
    """One solution of rows * x = rhs, or None."""
    nc = len(rows[0]) if rows else 0
    work = [[_norm(p, x) for x in row] + [_norm(p, b)] for row, b in zip(rows, rhs)]
    if not work:
        return [_zero(p)] * nc
    pivots = _row_reduce(p, work)
    if nc in pivots:
        return None
    x = [_zero(p)] * nc
    for r, c in enumerate(pivots):
        x[c] = work[r][nc]
    return x


# -- classical module tables -------------------------------------------------


class FiniteModuleTable:
    """A right module over an ordinary F_p-algebra: one dense action matrix
    per algebra basis element, verified against the structure constants."""

    def __init__(self, pres: OrdinaryAlgebraPresentation, actions):
        p = pres.field.char
        if not p:
            raise ValueError("classical oracle works over prime fields only")
        self.p = p
        self.pres = pres
        self.dim = len(actions[0]) if actions else 0
        self.actions = [[[_norm(p, x) for x in row] for row in a] for a in actions]
        if len(self.actions) != pres.dim:
            raise ValueError("need one action matrix per algebra basis element")
        for a in self.actions:
            if len(a) != self.dim or any(len(row) != self.dim for row in a):
                raise ValueError("ragged action matrix")
        self._verify()

    def _verify(self):
        p = self.p
        n = self.pres.dim
        ident = [[_one(p) if i == j else _zero(p) for j in range(self.dim)] for i in range(self.dim)]
        unit_action = self._combo(self.pres.unit)
        if not _mat_eq(p, unit_action, ident):
            raise ValueError("unit does not act as the identity")
        for i in range(n):
            for j in range(n):
                # v.(a_i a_j) must equal (v.a_i).a_j
                lhs = self._combo(self.pres.mult.get((i, j), {}))
                rhs = _mat_mul(p, self.actions[j], self.actions[i])
                if not _mat_eq(p, lhs, rhs):
                    raise ValueError(
                        f"action incompatible with product {self.pres.names[i]}*{self.pres.names[j]}"
                    )

    def _combo(self, vec: dict):
        p = self.p
        out = [[_zero(p)] * self.dim for _ in range(self.dim)]
        for k, c in vec.items():
            a = self.actions[k]
            for i in range(self.dim):
                for j in range(self.dim):
                    out[i][j] = _norm(p, out[i][j] + c * a[i][j])
        return out

    @classmethod
    def regular(cls, pres: OrdinaryAlgebraPresentation) -> "FiniteModuleTable":
        """J = R as a right module over itself."""
        p = pres.field.char
        n = pres.dim
        actions = []
        for c in range(n):
            mat = [[_zero(p)] * n for _ in range(n)]
            for j in range(n):
                prod = pres.mult.get((j, c), {})
                for i, v in prod.items():
                    mat[i][j] = _norm(p, v)
            actions.append(mat)
        return cls(pres, actions)

    @classmethod
    def dual_regular(cls, pres: OrdinaryAlgebraPresentation) -> "FiniteModuleTable":
        """J = D(R), the linear dual with (f.a)(b) = f(ab)."""
        p = pres.field.char
        n = pres.dim
        actions = []
        for c in range(n):
            # component of f_j . a_c along f_i is f_j(a_c b_i)
            mat = [[_zero(p)] * n for _ in range(n)]
            for i in range(n):
                prod = pres.mult.get((c, i), {})
                for j, v in prod.items():
                    mat[i][j] = _norm(p, v)
            actions.append(mat)
        return cls(pres, actions)

    @classmethod
    def direct_sum(cls, *tables: "FiniteModuleTable") -> "FiniteModuleTable":
        pres = tables[0].pres
        p = tables[0].p
        if any(t.pres is not pres and t.pres != pres for t in tables):
            raise ValueError("summands over different algebras")
        total = sum(t.dim for t in tables)
        actions = []
        for c in range(pres.dim):
            mat = [[_zero(p)] * total for _ in range(total)]
            off = 0
            for t in tables:
                for i in range(t.dim):
                    for j in range(t.dim):
                        mat[off + i][off + j] = t.actions[c][i][j]
                off += t.dim
            actions.append(mat)
        return cls(pres, actions)


def _default_cap(p: int) -> int:
    # dim cap 8 at p = 2, shrinking with the field so brute checks stay quick
    cap = int(round(8 * (2 / p) ** 0.5))
    return max(3, cap)


def _commutant(p, mats, dim):
    """All dim x dim matrices commuting with every matrix in mats."""
    rows = []
    for a in mats:
        # X A - A X = 0, unknowns X vectorized row-major
        for i in range(dim):
            for j in range(dim):
                row = [_zero(p)] * (dim * dim)
                for t in range(dim):
                    row[i * dim + t] = _norm(p, row[i * dim + t] + a[t][j])
                    row[t * dim + j] = _norm(p, row[t * dim + j] - a[i][t])
                rows.append(row)
    if not rows:
        rows = [[_zero(p)] * (dim * dim)]
    basis = naive_kernel(p, rows, dim * dim)
    return [[v[i * dim:(i + 1) * dim] for i in range(dim)] for v in basis]


def _expand_in(p, basis_mats, mat, dim):
    cols = [[m[i][j] for m in basis_mats] for i in range(dim) for j in range(dim)]
    rhs = [mat[i][j] for i in range(dim) for j in range(dim)]
    sol = naive_solve(p, cols, rhs)
    if sol is None:
        raise ValueError("matrix outside the claimed span")
    return sol


def _opposite_composition_presentation(p, mats, dim, prefix, field):
    """Presentation of the span of mats under x*y := (y then x composed), i.e.
    the opposite of matrix composition, with structure constants solved
    against the given basis."""
    n = len(mats)
    mult = {}
    for a in range(n):
        for b in range(n):
            prod = _mat_mul(p, mats[b], mats[a])
            coeffs = _expand_in(p, mats, prod, dim)
            vec = {k: c for k, c in enumerate(coeffs) if c}
            if vec:
                mult[(a, b)] = vec
    ident = [[_one(p) if i == j else _zero(p) for j in range(dim)] for i in range(dim)]
    unit = {k: c for k, c in enumerate(_expand_in(p, mats, ident, dim)) if c}
    names = [f"{prefix}{k}" for k in range(n)]
    return OrdinaryAlgebraPresentation(field, names, mult, unit, name=prefix)


def classical_endomorphisms(j: FiniteModuleTable, cap: int | None = None):
    """E = End_R(J)^op: basis matrices of the commutant of the action, with
    opposite-composition structure constants.  Returns (presentation, mats)."""
    p = j.p
    if cap is None:
        cap = _default_cap(p)
    if j.dim > cap:
        raise OracleCapExceeded(f"module dimension {j.dim} exceeds cap {cap}")
    mats = _commutant(p, j.actions, j.dim)
    pres = _opposite_composition_presentation(p, mats, j.dim, "e", j.pres.field)
    return pres, mats


@dataclass
class ClassicalBicResult:
    endos: OrdinaryAlgebraPresentation
    endo_mats: list
    bic: OrdinaryAlgebraPresentation
    bic_mats: list
    unit_map: list  # columns = images of the R basis in Bic coordinates
    holds: bool


def classical_bicommutator(j: FiniteModuleTable, cap: int | None = None) -> ClassicalBicResult:
    """Bic_R(J) = End_E(J)^op together with the unit map R -> Bic sending r
    to its action on J; verdict 'holds' means the unit map is bijective."""
    p = j.p
    endos, endo_mats = classical_endomorphisms(j, cap)
    bic_mats = _commutant(p, endo_mats, j.dim)
    bic = _opposite_composition_presentation(p, bic_mats, j.dim, "y", j.pres.field)
    r_dim = j.pres.dim
    columns = []
    for i in range(r_dim):
        columns.append(_expand_in(p, bic_mats, j.actions[i], j.dim))
    # sanity: the unit map is an algebra homomorphism landing on the unit
    unit_img = [_zero(p)] * len(bic_mats)
    for k, c in j.pres.unit.items():
        for t in range(len(bic_mats)):
            unit_img[t] = _norm(p, unit_img[t] + c * columns[k][t])
    bic_unit = [_zero(p)] * len(bic_mats)
    for k, c in bic.unit.items():
        bic_unit[k] = _norm(p, c)
    if unit_img != bic_unit:
        raise AssertionError("unit map does not preserve the unit")
    for i in range(r_dim):
        ci = {t: v for t, v in enumerate(columns[i]) if v}
        for k in range(r_dim):
            prod_mat = j._combo(j.pres.mult.get((i, k), {}))
            lhs = _expand_in(p, bic_mats, prod_mat, j.dim)
            ck = {t: v for t, v in enumerate(columns[k]) if v}
            rhs = bic.mul(ci, ck)
            if {t: v for t, v in enumerate(lhs) if v} != rhs:
                raise AssertionError("unit map is not multiplicative")
    rows = [[columns[i][t] for i in range(r_dim)] for t in range(len(bic_mats))]
    bij = naive_rank(p, rows) == r_dim and r_dim == len(bic_mats)
    return ClassicalBicResult(endos, endo_mats, bic, bic_mats, rows, bij)


def enumerate_commutant(p: int, mats: list, dim: int, cap: int = 1 << 16):
    """All dim x dim matrices over F_p commuting with every matrix in mats,
    found by trying literally every candidate."""
    total = p ** (dim * dim)
    if total > cap:
        raise OracleCapExceeded(f"{total} candidate maps exceed cap {cap}")
    found = []
    for flat in itertools.product(range(p), repeat=dim * dim):
        x = [list(flat[i * dim:(i + 1) * dim]) for i in range(dim)]
        if all(_mat_eq(p, _mat_mul(p, x, a), _mat_mul(p, a, x)) for a in mats):
            found.append(x)
    return found


def enumerate_equivariant_maps(j: FiniteModuleTable, cap: int = 1 << 16):
    """Literally all R-linear endomorphisms of J, by exhaustive enumeration."""
    return enumerate_commutant(j.p, j.actions, j.dim, cap)


# -- direct cohomology --------------------------------------------------------


def direct_cohomology_oracle(c, cap: int = 64) -> dict:
    """Cohomology dimensions of a complex recomputed from its raw matrices
    with the naive rank routine.  Reads stored data only; certification is
    the caller's concern."""
    total = sum(c.dims.values())
    if total > cap:
        raise OracleCapExceeded(f"total dimension {total} exceeds cap {cap}")
    p = c.field.char
    ranks = {}
    for n in c.dims:
        for k in (n - 1, n):
            if k in ranks:
                continue
            d = c.d(k)
            rows = [[d[(i, j)] for j in range(d.ncols)] for i in range(d.nrows)]
            ranks[k] = naive_rank(p, rows)
    return {
        n: c.dims[n] - ranks.get(n, 0) - ranks.get(n - 1, 0)
        for n in sorted(c.dims)
    }
