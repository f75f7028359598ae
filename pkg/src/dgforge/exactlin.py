"""Exact linear algebra over Q and prime fields.

Everything downstream (cohomology, resolutions, duality verdicts) reduces to
rank / kernel / solve questions over an exact field, so this module avoids
floating point entirely: rationals are `fractions.Fraction`, residues mod p
are plain ints in [0, p).  Matrices are sparse dicts keyed by (row, col);
elimination switches to dense or bitset rows when that pays off.

Pivoting is deterministic (leftmost column, lowest row index), and every
derived object (RREF, kernel basis, particular solutions, complements) is
canonical for a given matrix, so repeated runs are byte-identical.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable


class FieldMismatchError(ValueError):
    """Raised when operands live over different fields."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin, sufficient for n < 3_317_044_064_679_887_385_961_981
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Base field tag.  Elements are plain values owned by the tag."""

    char: int

    def coerce(self, x):
        raise NotImplementedError

    def is_element(self, x) -> bool:
        raise NotImplementedError

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))


class RationalField(Field):
    """The rationals.  Fraction keeps lowest terms and positive denominator."""

    char = 0

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def is_element(self, x) -> bool:
        return isinstance(x, Fraction)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Field):
    """F_p for a prime p < 2**31.  Elements are ints in [0, p)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not 2 <= p < 2**31:
            raise ValueError(f"prime field order must be an int in [2, 2^31): {p!r}")
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        raise TypeError(f"cannot coerce {x!r} into GF({self.p})")

    def is_element(self, x) -> bool:
        return isinstance(x, int) and 0 <= x < self.p

    def add(self, a, b):
        c = a + b
        return c - self.p if c >= self.p else c

    def sub(self, a, b):
        c = a - b
        return c + self.p if c < 0 else c

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return self.p - a if a else 0

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def elements(self) -> Iterable[int]:
        return range(self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()
GF2 = PrimeField(2)

# density above which non-GF(2) elimination moves to dense list rows
_DENSE_CUTOFF = 0.25


def _check_same_field(a: "Matrix", b: "Matrix"):
    if a.field != b.field:
        raise FieldMismatchError(f"mixed field tags: {a.field!r} vs {b.field!r}")


class Matrix:
    """Sparse exact matrix: dict {(row, col): nonzero value} plus a field tag."""

    __slots__ = ("field", "nrows", "ncols", "entries")

    def __init__(self, field: Field, nrows: int, ncols: int, entries=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix dimensions")
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        clean = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise ValueError(f"entry ({i},{j}) outside {nrows}x{ncols}")
                v = field.coerce(v)
                if v != field.zero:
                    clean[(i, j)] = v
        self.entries = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                entries[(i, j)] = v
        return cls(field, nrows, ncols, entries)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, n, n, {(i, i): field.one for i in range(n)})

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, nrows, ncols)

    @classmethod
    def column(cls, field: Field, values) -> "Matrix":
        return cls(field, len(values), 1, {(i, 0): v for i, v in enumerate(values)})

    # -- basic queries -----------------------------------------------------

    def __getitem__(self, ij):
        return self.entries.get(ij, self.field.zero)

    def is_zero(self) -> bool:
        return not self.entries

    def density(self) -> float:
        cells = self.nrows * self.ncols
        return len(self.entries) / cells if cells else 0.0

    def to_rows(self):
        rows = [[self.field.zero] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def column_vector(self, j: int):
        return [self.entries.get((i, j), self.field.zero) for i in range(self.nrows)]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.entries == other.entries
        )

    def __hash__(self):
        raise TypeError("Matrix is not hashable")

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols}, nnz={len(self.entries)})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in add")
        f = self.field
        entries = dict(self.entries)
        for ij, v in other.entries.items():
            w = f.add(entries.get(ij, f.zero), v)
            if w == f.zero:
                entries.pop(ij, None)
            else:
                entries[ij] = w
        out = Matrix(f, self.nrows, self.ncols)
        out.entries = entries
        return out

    def __neg__(self) -> "Matrix":
        f = self.field
        out = Matrix(f, self.nrows, self.ncols)
        out.entries = {ij: f.neg(v) for ij, v in self.entries.items()}
        return out

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        out = Matrix(f, self.nrows, self.ncols)
        if c != f.zero:
            out.entries = {ij: f.mul(c, v) for ij, v in self.entries.items()}
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if self.ncols != other.nrows:
            raise ValueError(
                f"shape mismatch in mul: {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}"
            )
        f = self.field
        # group left entries by column to walk the sparse product
        by_col: dict[int, list] = {}
        for (i, k), v in self.entries.items():
            by_col.setdefault(k, []).append((i, v))
        acc: dict[tuple, object] = {}
        for (k, j), w in other.entries.items():
            for i, v in by_col.get(k, ()):
                ij = (i, j)
                s = f.add(acc.get(ij, f.zero), f.mul(v, w))
                if s == f.zero:
                    acc.pop(ij, None)
                else:
                    acc[ij] = s
        out = Matrix(f, self.nrows, other.ncols)
        out.entries = acc
        return out

    def transpose(self) -> "Matrix":
        out = Matrix(self.field, self.ncols, self.nrows)
        out.entries = {(j, i): v for (i, j), v in self.entries.items()}
        return out

    def hstack(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch in hstack")
        entries = dict(self.entries)
        for (i, j), v in other.entries.items():
            entries[(i, j + self.ncols)] = v
        out = Matrix(self.field, self.nrows, self.ncols + other.ncols)
        out.entries = entries
        return out

    def vstack(self, other: "Matrix") -> "Matrix":
        _check_same_field(self, other)
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch in vstack")
        entries = dict(self.entries)
        for (i, j), v in other.entries.items():
            entries[(i + self.nrows, j)] = v
        out = Matrix(self.field, self.nrows + other.nrows, self.ncols)
        out.entries = entries
        return out

    # -- elimination-backed queries ----------------------------------------

    def rank(self) -> int:
        return len(_reduce(self).pivots)

    def rref(self) -> "Matrix":
        red = _reduce(self)
        out = Matrix(self.field, self.nrows, self.ncols)
        for r, col in enumerate(red.pivots):
            for j, v in red.row_items(col):
                out.entries[(r, j)] = v
        return out

    def pivot_columns(self) -> list[int]:
        return list(_reduce(self).pivots)

    def kernel_basis(self) -> "Matrix":
        """Columns span ker(self); canonical basis read off the RREF."""
        red = _reduce(self)
        f = self.field
        pivset = dict((c, r) for r, c in enumerate(red.pivots))
        free = [j for j in range(self.ncols) if j not in pivset]
        out = Matrix(f, self.ncols, len(free))
        for k, j in enumerate(free):
            out.entries[(j, k)] = f.one
            for c in red.pivots:
                v = red.coef(c, j)
                if v != f.zero:
                    out.entries[(c, k)] = f.neg(v)
        return out

    def solve(self, b: "Matrix"):
        """Particular solution x with self @ x = b (free vars zero), or None."""
        _check_same_field(self, b)
        if b.nrows != self.nrows:
            raise ValueError("rhs row count mismatch")
        aug = self.hstack(b)
        red = _reduce(aug, pivot_limit=self.ncols)
        f = self.field
        # inconsistent iff some pivot landed in the appended block
        if red.has_inconsistency():
            return None
        out = Matrix(f, self.ncols, b.ncols)
        for r, c in enumerate(red.pivots):
            for j, v in red.row_items(c):
                if j >= self.ncols:
                    out.entries[(c, j - self.ncols)] = v
        return out

    def image_basis(self) -> "Matrix":
        """The pivot columns of self, in ascending column order."""
        cols = _reduce(self).pivots
        out = Matrix(self.field, self.nrows, len(cols))
        for k, j in enumerate(cols):
            for i in range(self.nrows):
                v = self.entries.get((i, j))
                if v is not None:
                    out.entries[(i, k)] = v
        return out


def complement_basis(sub: Matrix) -> Matrix:
    """Standard basis columns completing the columns of `sub` to a basis.

    `sub` must have independent columns; raises ValueError otherwise.  The
    choice is canonical: scan e_0, e_1, ... and keep those that enlarge the
    span.
    """
    f = sub.field
    elim = _Eliminator(f, use_bits=(f == GF2))
    for k in range(sub.ncols):
        row = {i: v for (i, j), v in sub.entries.items() if j == k}
        if elim.feed(row) is None:
            raise ValueError(f"column {k} of sub is dependent on earlier columns")
    kept = []
    for i in range(sub.nrows):
        if elim.feed({i: f.one}) is not None:
            kept.append(i)
    out = Matrix(f, sub.nrows, len(kept))
    for k, i in enumerate(kept):
        out.entries[(i, k)] = f.one
    return out


# ---------------------------------------------------------------------------
# elimination engine
# ---------------------------------------------------------------------------


class _Eliminator:
    """Incremental row elimination with canonical pivots.

    Rows are fed as {col: val} dicts; pivot rows are kept normalized (pivot
    coefficient 1) and fully interreduced, so the final state is the unique
    RREF of the row space regardless of feeding order of dependent rows.
    Over GF(2) rows are int bitmasks (bit j = column j), which keeps the
    hot XOR loop in C.
    """

    def __init__(self, field: Field, use_bits: bool):
        self.field = field
        self.use_bits = use_bits and field.char == 2
        self.pivrows: dict[int, object] = {}  # leading col -> row
        self.pivmask = 0  # bit mask of pivot columns (bits path only)

    # row helpers ---------------------------------------------------------

    def _to_bits(self, row: dict) -> int:
        m = 0
        for j, v in row.items():
            if v:
                m |= 1 << j
        return m

    def feed(self, row: dict):
        """Fully reduce `row` by current pivots; install if independent.

        Returns the leading column if the row was installed, else None.
        Pivot rows stay interreduced, so the state is always the RREF of
        the span of the rows fed so far.
        """
        f = self.field
        if self.use_bits:
            r = self._to_bits(row) if isinstance(row, dict) else row
            hits = r & self.pivmask
            while hits:
                lead = (hits & -hits).bit_length() - 1
                r ^= self.pivrows[lead]
                hits = r & self.pivmask
            if not r:
                return None
            lead = (r & -r).bit_length() - 1
            for c, old in self.pivrows.items():
                if (old >> lead) & 1:
                    self.pivrows[c] = old ^ r
            self.pivrows[lead] = r
            self.pivmask |= 1 << lead
            return lead
        r = {j: f.coerce(v) for j, v in row.items() if f.coerce(v) != f.zero}
        while True:
            hit = None
            for j in r:
                if j in self.pivrows:
                    hit = j
                    break
            if hit is None:
                break
            r = _row_axpy(f, r, f.neg(r[hit]), self.pivrows[hit])
        if not r:
            return None
        lead = min(r)
        c = f.inv(r[lead])
        r = {j: f.mul(c, v) for j, v in r.items()}
        for c0, old in list(self.pivrows.items()):
            w = old.get(lead)
            if w is not None:
                self.pivrows[c0] = _row_axpy(f, old, f.neg(w), r)
        self.pivrows[lead] = r
        return lead


def _row_axpy(f: Field, row: dict, c, other: dict) -> dict:
    out = dict(row)
    for j, v in other.items():
        w = f.add(out.get(j, f.zero), f.mul(c, v))
        if w == f.zero:
            out.pop(j, None)
        else:
            out[j] = w
    return out


class _DenseEliminator:
    """List-row elimination for matrices too dense for dict rows."""

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivrows: dict[int, list] = {}

    def feed(self, row: list):
        f = self.field
        z = f.zero
        row = list(row)
        # one left-to-right sweep clears every pivot column (pivot rows are
        # zero left of their own pivot, so earlier columns stay cleared)
        for j in range(self.ncols):
            if row[j] != z and j in self.pivrows:
                c = f.neg(row[j])
                piv = self.pivrows[j]
                row = [f.add(a, f.mul(c, b)) for a, b in zip(row, piv)]
        lead = next((j for j, v in enumerate(row) if v != z), None)
        if lead is None:
            return None
        c = f.inv(row[lead])
        row = [f.mul(c, v) for v in row]
        for c0, old in self.pivrows.items():
            w = old[lead]
            if w != z:
                nw = f.neg(w)
                self.pivrows[c0] = [f.add(a, f.mul(nw, b)) for a, b in zip(old, row)]
        self.pivrows[lead] = row
        return lead


class _Reduced:
    """Canonical RREF of a matrix, queried by pivot column."""

    def __init__(self, field: Field, pivrows: dict, ncols: int, pivot_limit=None):
        self.field = field
        self.ncols = ncols
        self._rows = pivrows
        limit = ncols if pivot_limit is None else pivot_limit
        self.pivots = sorted(c for c in pivrows if c < limit)
        self._bad = sorted(c for c in pivrows if c >= limit)

    def has_inconsistency(self) -> bool:
        return bool(self._bad)

    def coef(self, pivot_col: int, j: int):
        row = self._rows[pivot_col]
        if isinstance(row, int):
            return 1 if (row >> j) & 1 else 0
        return row.get(j, self.field.zero)

    def row_items(self, pivot_col: int):
        row = self._rows[pivot_col]
        if isinstance(row, int):
            out = []
            while row:
                j = (row & -row).bit_length() - 1
                out.append((j, 1))
                row &= row - 1
            return out
        return sorted(row.items())


def _reduce(m: Matrix, pivot_limit=None) -> _Reduced:
    f = m.field
    use_bits = f == GF2
    elim = _Eliminator(f, use_bits=use_bits)
    if use_bits:
        rows = [0] * m.nrows
        for (i, j), _ in m.entries.items():
            rows[i] |= 1 << j
        for i in range(m.nrows):
            if rows[i]:
                elim.feed(rows[i])
    elif m.density() > _DENSE_CUTOFF and m.ncols:
        delim = _DenseEliminator(f, m.ncols)
        dense_rows = m.to_rows()
        for row in dense_rows:
            delim.feed(row)
        z = f.zero
        piv = {
            c: {j: v for j, v in enumerate(row) if v != z} for c, row in delim.pivrows.items()
        }
        return _Reduced(f, piv, m.ncols, pivot_limit=pivot_limit)
    else:
        rows_d: list[dict] = [dict() for _ in range(m.nrows)]
        for (i, j), v in m.entries.items():
            rows_d[i][j] = v
        for i in range(m.nrows):
            if rows_d[i]:
                elim.feed(rows_d[i])
    return _Reduced(f, elim.pivrows, m.ncols, pivot_limit=pivot_limit)
