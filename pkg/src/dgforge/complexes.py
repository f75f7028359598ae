"""Z-graded cochain complexes with truncation-honest bookkeeping.

Conventions, fixed once for the whole package:

* differentials raise degree by one; d^n : C^n -> C^(n+1) is stored as a
  matrix with dims(n+1) rows and dims(n) columns acting on column vectors;
* shift: (C[s])^n = C^(n+s) with differential (-1)^s d;
* cone of a degree-0 chain map f : M -> N is N (+) M[1] with differential
  [[d_N, f], [0, -d_M]]; cocone is N[-1] (+) M with [[-d_N, f], [0, d_M]];
* Hom differential: d(f) = d_target o f - (-1)^t f o d_source for |f| = t.

Truncation is the one systematic source of silent wrongness here, so every
complex carries a certified degree interval (cert_lo, cert_hi), with None
meaning unbounded: inside it the stored pieces and differentials agree with
the untruncated object the complex stands for.  Operations intersect and
translate these intervals; Hom complexes shrink them using the support of
the other argument, since a truncated factor poisons Hom degrees that read
the missing pieces.  Cohomology refuses to certify a degree whose
neighbours are not certified.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactlin import Field, Matrix


@dataclass(frozen=True)
class Window:
    """Degree window: certified [lo, hi], data carried on the padded range."""

    lo: int
    hi: int
    margin: int = 2

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")
        if self.margin < 0:
            raise ValueError("negative margin")

    @property
    def padded_lo(self) -> int:
        return self.lo - self.margin

    @property
    def padded_hi(self) -> int:
        return self.hi + self.margin


def _cert_max(a, b):
    # max with None = -infinity on the lo side handled by caller; here None wins as unbounded
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _cert_min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class UncertifiedDegreeError(ValueError):
    """Raised when a certified answer is requested outside the trusted range."""


class Complex:
    """A finitely supported cochain complex over an exact field.

    `cert` is the data-truth interval: stored pieces in it equal the pieces
    of the (possibly unbounded) object this complex truncates.  When a
    Window is supplied instead, data is trusted on its padded range and the
    window records the reporting range.
    """

    def __init__(self, field: Field, dims: dict, diff: dict, cert=(None, None), window=None,
                 h_cert=None):
        self.field = field
        self.window = window
        # h_cert: optional interval where cohomology is certified even though
        # pieces are not, asserted by constructions (truncated resolutions)
        # that control their error at the level of cohomology.  Generic
        # operations drop it; shift translates it.
        self.h_cert = h_cert
        if window is not None and cert == (None, None):
            cert = (window.padded_lo, window.padded_hi)
        self.dims = {n: d for n, d in dims.items() if d}
        for n, d in self.dims.items():
            if not isinstance(n, int) or not isinstance(d, int) or d < 0:
                raise ValueError(f"bad graded piece {n}: {d}")
            if window is not None and not window.padded_lo <= n <= window.padded_hi:
                raise ValueError(f"piece at degree {n} outside padded window")
        self.diff = {}
        for n, m in diff.items():
            if m.field != field:
                raise ValueError("differential over wrong field")
            want = (self.dim(n + 1), self.dim(n))
            if (m.nrows, m.ncols) != want:
                raise ValueError(f"d^{n} has shape {(m.nrows, m.ncols)}, expected {want}")
            if not m.is_zero():
                self.diff[n] = m
        self.cert_lo, self.cert_hi = cert
        for n, m in self.diff.items():
            nxt = self.diff.get(n + 1)
            if nxt is not None and not (nxt @ m).is_zero():
                raise ValueError(f"d^{n+1} o d^{n} != 0")

    # -- shape -------------------------------------------------------------

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def support(self):
        """(min, max) degree with a nonzero piece, or None if zero."""
        if not self.dims:
            return None
        ds = self.degrees()
        return ds[0], ds[-1]

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def d(self, n: int) -> Matrix:
        m = self.diff.get(n)
        if m is None:
            return Matrix.zeros(self.field, self.dim(n + 1), self.dim(n))
        return m

    def certified(self, n: int) -> bool:
        """Is the piece C^n (and its place in the differential) trustworthy?"""
        if self.cert_lo is not None and n < self.cert_lo:
            return False
        if self.cert_hi is not None and n > self.cert_hi:
            return False
        return True

    def h_certified(self, n: int) -> bool:
        """H^n needs pieces n-1, n, n+1; certify only with both neighbours,
        unless a construction asserted an explicit h_cert interval."""
        if self.h_cert is not None:
            lo, hi = self.h_cert
            if (lo is None or n >= lo) and (hi is None or n <= hi):
                return True
        return self.certified(n - 1) and self.certified(n) and self.certified(n + 1)

    def __repr__(self):
        parts = ", ".join(f"{n}:{d}" for n, d in sorted(self.dims.items()))
        return f"Complex({self.field!r}, {{{parts}}})"

    def __eq__(self, other):
        return (
            isinstance(other, Complex)
            and self.field == other.field
            and self.dims == other.dims
            and self.diff == other.diff
        )


def single(field: Field, dim: int = 1, deg: int = 0) -> Complex:
    """A complex concentrated in one degree with zero differential."""
    return Complex(field, {deg: dim}, {})


def zero_complex(field: Field) -> Complex:
    return Complex(field, {}, {})


def shift(c: Complex, s: int) -> Complex:
    """(C[s])^n = C^(n+s), differential scaled by (-1)^s."""
    sign = c.field.one if s % 2 == 0 else c.field.neg(c.field.one)
    dims = {n - s: d for n, d in c.dims.items()}
    diff = {n - s: m.scale(sign) for n, m in c.diff.items()}
    cert = (
        None if c.cert_lo is None else c.cert_lo - s,
        None if c.cert_hi is None else c.cert_hi - s,
    )
    h_cert = None
    if c.h_cert is not None:
        lo, hi = c.h_cert
        h_cert = (None if lo is None else lo - s, None if hi is None else hi - s)
    return Complex(c.field, dims, diff, cert, h_cert=h_cert)


def direct_sum(*cs: Complex) -> Complex:
    field = cs[0].field
    for c in cs:
        if c.field != field:
            raise ValueError("direct sum over mixed fields")
    degrees = sorted({n for c in cs for n in c.dims})
    dims, diff = {}, {}
    for n in degrees:
        dims[n] = sum(c.dim(n) for c in cs)
    for n in degrees:
        if not dims.get(n) or not dims.get(n + 1):
            continue
        entries = {}
        ro = co = 0
        for c in cs:
            m = c.diff.get(n)
            if m is not None:
                for (i, j), v in m.entries.items():
                    entries[(ro + i, co + j)] = v
            ro += c.dim(n + 1)
            co += c.dim(n)
        diff[n] = Matrix(field, dims.get(n + 1, 0), dims[n], entries)
    lo = hi = None
    for c in cs:
        lo = _cert_max(lo, c.cert_lo)
        hi = _cert_min(hi, c.cert_hi)
    return Complex(field, dims, diff, (lo, hi))


class GradedMap:
    """A degree-t graded linear map of complexes; no chain condition imposed.

    Hom-complex elements live here: a general element of Hom^t is just a
    graded map, and being a cocycle is exactly the chain condition.
    """

    def __init__(self, source: Complex, target: Complex, components: dict, degree: int = 0):
        if source.field != target.field:
            raise ValueError("graded map over mixed fields")
        self.source = source
        self.target = target
        self.degree = degree
        self.components = {}
        for n, m in components.items():
            want = (target.dim(n + degree), source.dim(n))
            if (m.nrows, m.ncols) != want:
                raise ValueError(f"component {n} has shape {(m.nrows, m.ncols)}, expected {want}")
            if not m.is_zero():
                self.components[n] = m

    def component(self, n: int) -> Matrix:
        m = self.components.get(n)
        if m is None:
            return Matrix.zeros(
                self.source.field, self.target.dim(n + self.degree), self.source.dim(n)
            )
        return m

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self o other (apply other first); plain composition, no sign."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        deg = self.degree + other.degree
        comps = {}
        for n in other.source.degrees():
            m = self.component(n + other.degree) @ other.component(n)
            if not m.is_zero():
                comps[n] = m
        cls = ChainMap if isinstance(self, ChainMap) and isinstance(other, ChainMap) else GradedMap
        return cls(other.source, self.target, comps, deg)

    def scale(self, c):
        return type(self)(
            self.source,
            self.target,
            {n: m.scale(c) for n, m in self.components.items()},
            self.degree,
        )

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch in sum")
        comps = {}
        for n in set(self.components) | set(other.components):
            comps[n] = self.component(n) + other.component(n)
        cls = ChainMap if isinstance(self, ChainMap) and isinstance(other, ChainMap) else GradedMap
        return cls(self.source, self.target, comps, self.degree)

    def is_zero_map(self) -> bool:
        return not self.components

    def is_chain_map(self) -> bool:
        f = self.source.field
        sign = f.one if self.degree % 2 == 0 else f.neg(f.one)
        for n in sorted(set(self.source.dims) | set(self.components)):
            lhs = self.target.d(n + self.degree) @ self.component(n)
            rhs = (self.component(n + 1) @ self.source.d(n)).scale(sign)
            if lhs != rhs:
                return False
        return True

    def as_chain_map(self) -> "ChainMap":
        return ChainMap(self.source, self.target, self.components, self.degree)


class ChainMap(GradedMap):
    """A degree-t map of complexes with d o f = (-1)^t f o d enforced."""

    def __init__(self, source: Complex, target: Complex, components: dict, degree: int = 0):
        super().__init__(source, target, components, degree)
        if not self.is_chain_map():
            raise ValueError("not a chain map")

    @classmethod
    def identity(cls, c: Complex) -> "ChainMap":
        return cls(c, c, {n: Matrix.identity(c.field, d) for n, d in c.dims.items()})

    @classmethod
    def zero(cls, source: Complex, target: Complex, degree: int = 0) -> "ChainMap":
        return cls(source, target, {}, degree)


def cone(f: ChainMap) -> Complex:
    """cone(f) = N (+) M[1] with differential [[d_N, f], [0, -d_M]]."""
    if f.degree != 0:
        raise ValueError("cone needs a degree-0 map")
    m_c, n_c = f.source, f.target
    field = m_c.field
    neg1 = field.neg(field.one)
    dims, diff = {}, {}
    degs = sorted(set(n_c.dims) | {n - 1 for n in m_c.dims})
    for t in degs:
        dims[t] = n_c.dim(t) + m_c.dim(t + 1)
    for t in degs:
        rows = dims.get(t + 1, 0)
        cols = dims[t]
        if not rows or not cols:
            continue
        entries = {}
        for (i, j), v in n_c.d(t).entries.items():
            entries[(i, j)] = v
        for (i, j), v in f.component(t + 1).entries.items():
            entries[(i, j + n_c.dim(t))] = v
        for (i, j), v in m_c.d(t + 1).entries.items():
            entries[(i + n_c.dim(t + 1), j + n_c.dim(t))] = field.mul(neg1, v)
        diff[t] = Matrix(field, rows, cols, entries)
    lo = _cert_max(n_c.cert_lo, None if m_c.cert_lo is None else m_c.cert_lo - 1)
    hi = _cert_min(n_c.cert_hi, None if m_c.cert_hi is None else m_c.cert_hi - 1)
    return Complex(field, dims, diff, (lo, hi))


def cone_in(f: ChainMap, c: Complex | None = None) -> ChainMap:
    """The inclusion N -> cone(f)."""
    c = cone(f) if c is None else c
    n_c = f.target
    comps = {}
    for t, d in n_c.dims.items():
        comps[t] = Matrix(n_c.field, c.dim(t), d, {(i, i): n_c.field.one for i in range(d)})
    return ChainMap(n_c, c, comps)


def cone_out(f: ChainMap, c: Complex | None = None) -> ChainMap:
    """The projection cone(f) -> M[1]."""
    c = cone(f) if c is None else c
    m1 = shift(f.source, 1)
    comps = {}
    for t in c.degrees():
        rows, cols = m1.dim(t), c.dim(t)
        if rows and cols:
            off = f.target.dim(t)
            comps[t] = Matrix(
                c.field, rows, cols, {(i, off + i): c.field.one for i in range(rows)}
            )
    return ChainMap(c, m1, comps)


def cocone(f: ChainMap) -> Complex:
    """cocone(f) = N[-1] (+) M with differential [[-d_N, f], [0, d_M]]."""
    if f.degree != 0:
        raise ValueError("cocone needs a degree-0 map")
    m_c, n_c = f.source, f.target
    field = m_c.field
    neg1 = field.neg(field.one)
    degs = sorted({n + 1 for n in n_c.dims} | set(m_c.dims))
    dims, diff = {}, {}
    for t in degs:
        dims[t] = n_c.dim(t - 1) + m_c.dim(t)
    for t in degs:
        rows = dims.get(t + 1, 0)
        cols = dims[t]
        if not rows or not cols:
            continue
        entries = {}
        for (i, j), v in n_c.d(t - 1).entries.items():
            entries[(i, j)] = field.mul(neg1, v)
        for (i, j), v in f.component(t).entries.items():
            entries[(i, j + n_c.dim(t - 1))] = v
        for (i, j), v in m_c.d(t).entries.items():
            entries[(i + n_c.dim(t), j + n_c.dim(t - 1))] = v
        diff[t] = Matrix(field, rows, cols, entries)
    lo = _cert_max(m_c.cert_lo, None if n_c.cert_lo is None else n_c.cert_lo + 1)
    hi = _cert_min(m_c.cert_hi, None if n_c.cert_hi is None else n_c.cert_hi + 1)
    return Complex(field, dims, diff, (lo, hi))


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------


class Cohomology:
    """H^n of a complex with canonical cocycle representatives.

    `cycles` and `boundaries` are column matrices; `reps` extends the
    boundary basis to the cycles, so its columns represent a basis of H^n.
    """

    def __init__(self, c: Complex, n: int, require_certified: bool = True):
        self.complex = c
        self.n = n
        self.certified = c.h_certified(n)
        if require_certified and not self.certified:
            raise UncertifiedDegreeError(
                f"H^{n} reads degrees {n-1}..{n+1}, outside the trusted range "
                f"[{c.cert_lo}, {c.cert_hi}]"
            )
        self.cycles = c.d(n).kernel_basis()
        self.boundaries = c.d(n - 1).image_basis()
        f = c.field
        from .exactlin import _Eliminator

        elim = _Eliminator(f, use_bits=(f.char == 2))
        for k in range(self.boundaries.ncols):
            elim.feed({i: v for (i, j), v in self.boundaries.entries.items() if j == k})
        reps = []
        for k in range(self.cycles.ncols):
            col = {i: v for (i, j), v in self.cycles.entries.items() if j == k}
            if elim.feed(col) is not None:
                reps.append(k)
        self.reps = Matrix(f, c.dim(n), len(reps))
        for out_k, k in enumerate(reps):
            for i in range(c.dim(n)):
                v = self.cycles.entries.get((i, k))
                if v is not None:
                    self.reps.entries[(i, out_k)] = v
        self.dim = len(reps)

    def lift(self, v: Matrix) -> Matrix:
        """Coordinates of a cocycle's class in the representative basis.

        Accepts a dim(n) x k column block; raises if a column is not a
        cocycle.
        """
        c, n = self.complex, self.n
        if not (c.d(n) @ v).is_zero():
            raise ValueError("lift of a non-cocycle")
        sol = self.boundaries.hstack(self.reps).solve(v)
        if sol is None:
            raise ValueError("cocycle outside cycle space")
        out = Matrix(c.field, self.dim, v.ncols)
        for (i, j), val in sol.entries.items():
            if i >= self.boundaries.ncols:
                out.entries[(i - self.boundaries.ncols, j)] = val
        return out

    def decompose(self, v: Matrix):
        """Split a cocycle as coboundary + representative combination.

        Returns (b, h) with v = b + reps @ h and b a coboundary column
        block.
        """
        h = self.lift(v)
        b = v - self.reps @ h
        return b, h


def cohomology(c: Complex, n: int, require_certified: bool = True) -> Cohomology:
    return Cohomology(c, n, require_certified)


def h_dim(c: Complex, n: int) -> int:
    """dim H^n from the stored matrices, with no certification check."""
    return c.d(n).kernel_basis().ncols - c.d(n - 1).rank()


def h_map(f: ChainMap, n: int) -> Matrix:
    """The induced map H^n(source) -> H^(n+t)(target) of a degree-t map."""
    hs = Cohomology(f.source, n)
    ht = Cohomology(f.target, n + f.degree)
    if hs.dim == 0:
        return Matrix.zeros(f.source.field, ht.dim, 0)
    return ht.lift(f.component(n) @ hs.reps)


def euler_characteristic(c: Complex) -> int:
    return sum((-1) ** n * d for n, d in c.dims.items())


# ---------------------------------------------------------------------------
# Hom complexes of plain complexes
# ---------------------------------------------------------------------------


def hom_cert_range(m: Complex, n: Complex):
    """Certified piece interval for Hom(m, n), from truncation interactions.

    A degree-t piece gathers Hom(m^i, n^(i+t)) over all i.  It is spoiled
    when a stored m^i reads an uncertified piece of n, or when degrees
    outside m's certified range could contribute against a piece of n not
    known to vanish.  Returns (lo, hi) with None for unbounded; (1, 0) when
    nothing is certified.
    """
    sup_m = m.support()
    lo, hi = None, None
    if sup_m:
        lo_i, hi_i = sup_m
        if n.cert_lo is not None:
            lo = _cert_max(lo, n.cert_lo - lo_i)
        if n.cert_hi is not None:
            hi = _cert_min(hi, n.cert_hi - hi_i)
    if m.cert_lo is not None:
        # degrees below m.cert_lo are unknown; they must only meet known zeros of n
        if n.cert_lo is not None:
            return (1, 0)
        sup_n = n.support()
        if sup_n:
            hi = _cert_min(hi, sup_n[0] - m.cert_lo)
    if m.cert_hi is not None:
        if n.cert_hi is not None:
            return (1, 0)
        sup_n = n.support()
        if sup_n:
            lo = _cert_max(lo, sup_n[1] - m.cert_hi)
    return (lo, hi)


class HomComplex(Complex):
    """Hom(m, n) of complexes of vector spaces, with indexed basis blocks.

    Basis of the degree-t piece: triples (i, a, b) ordered by source degree
    i, then source basis index a, then target basis index b, standing for
    the map sending basis vector a of m^i to basis vector b of n^(i+t).
    """

    def __init__(self, m: Complex, n: Complex):
        if m.field != n.field:
            raise ValueError("hom over mixed fields")
        self.hom_source = m
        self.hom_target = n
        field = m.field
        blocks: dict[int, list] = {}
        for t in self._degree_range(m, n):
            basis = []
            for i in m.degrees():
                if n.dim(i + t):
                    for a in range(m.dim(i)):
                        for b in range(n.dim(i + t)):
                            basis.append((i, a, b))
            if basis:
                blocks[t] = basis
        self._basis = blocks
        self._index = {
            t: {key: k for k, key in enumerate(basis)} for t, basis in blocks.items()
        }
        dims = {t: len(b) for t, b in blocks.items()}
        diff = {}
        neg1 = field.neg(field.one)
        for t in dims:
            if t + 1 not in dims:
                continue
            entries = {}
            idx1 = self._index[t + 1]
            sgn = neg1 if t % 2 == 0 else field.one  # -(-1)^t
            for k, (i, a, b) in enumerate(blocks[t]):
                for (b2, b1), v in n.d(i + t).entries.items():
                    if b1 == b:
                        row = idx1.get((i, a, b2))
                        if row is not None:
                            entries[(row, k)] = field.add(
                                entries.get((row, k), field.zero), v
                            )
                for (a1, a2), v in m.d(i - 1).entries.items():
                    if a1 == a:
                        row = idx1.get((i - 1, a2, b))
                        if row is not None:
                            entries[(row, k)] = field.add(
                                entries.get((row, k), field.zero), field.mul(sgn, v)
                            )
            mtx = Matrix(field, dims[t + 1], dims[t], entries)
            diff[t] = mtx
        super().__init__(field, dims, diff, hom_cert_range(m, n))

    @staticmethod
    def _degree_range(m: Complex, n: Complex):
        sm, sn = m.support(), n.support()
        if not sm or not sn:
            return range(0)
        return range(sn[0] - sm[1], sn[1] - sm[0] + 1)

    def basis_at(self, t: int):
        return list(self._basis.get(t, []))

    def index_of(self, t: int, key) -> int:
        return self._index[t][key]

    def element_as_graded(self, t: int, vec: Matrix) -> GradedMap:
        """Interpret a degree-t coordinate vector as a graded map m -> n."""
        comps: dict[int, dict] = {}
        for (k, _), v in vec.entries.items():
            i, a, b = self._basis[t][k]
            comps.setdefault(i, {})[(b, a)] = v
        mats = {
            i: Matrix(self.field, self.hom_target.dim(i + t), self.hom_source.dim(i), e)
            for i, e in comps.items()
        }
        return GradedMap(self.hom_source, self.hom_target, mats, t)

    def element_as_map(self, t: int, vec: Matrix) -> ChainMap:
        """As element_as_graded, but enforces the cocycle/chain condition."""
        return self.element_as_graded(t, vec).as_chain_map()

    def map_as_element(self, f: GradedMap) -> Matrix:
        t = f.degree
        vec = Matrix(self.field, self.dim(t), 1)
        for i, m in f.components.items():
            for (b, a), v in m.entries.items():
                vec.entries[(self._index[t][(i, a, b)], 0)] = v
        return vec


def hom_complex(m: Complex, n: Complex) -> HomComplex:
    return HomComplex(m, n)


# ---------------------------------------------------------------------------
# totalization of a tower  J^0 -> J^1 -> ... -> J^m
# ---------------------------------------------------------------------------


class Totalization:
    """Totalization of a finite tower of chain maps, block-bookkept.

    For the tower J^n0 -> ... -> J^m (maps `deltas`, all degree 0) the
    underlying graded module is J^m[-(m-n0)] (+) ... (+) J^(n0+1)[-1] (+)
    J^n0, with differential (-1)^n0 times the upper-triangular matrix whose
    diagonal carries (-1)^(k-n0) d_(J^k) and whose superdiagonal carries the
    shifted deltas.  Summands are laid out left to right from J^m down to
    J^n0, so the inclusion of an augmentation lands in the last block.
    """

    def __init__(self, deltas: list[ChainMap], n0: int = 0, single: Complex | None = None):
        if not deltas and single is None:
            raise ValueError("empty tower")
        for d in deltas:
            if d.degree != 0:
                raise ValueError("tower maps must have degree 0")
        for k in range(len(deltas) - 1):
            if deltas[k + 1].source != deltas[k].target:
                raise ValueError(f"tower does not compose at step {k}")
            if not (deltas[k + 1].compose(deltas[k])).is_zero_map():
                raise ValueError(f"consecutive tower maps do not vanish at step {k}")
        if deltas:
            self.stages = [deltas[0].source] + [d.target for d in deltas]
        else:
            self.stages = [single]
        self.deltas = deltas
        self.n0 = n0
        self.m = n0 + len(self.stages) - 1
        field = self.stages[0].field
        self.field = field

        # block k (k = m .. n0, left to right) is J^k shifted by -(k - n0)
        self._order = list(range(self.m, self.n0 - 1, -1))
        dims: dict[int, int] = {}
        offs: dict[int, dict[int, int]] = {}
        for t in self._degree_set():
            off = 0
            offs[t] = {}
            for k in self._order:
                offs[t][k] = off
                off += self._stage(k).dim(t - (k - n0))
            if off:
                dims[t] = off
        self._offsets = offs
        diff: dict[int, Matrix] = {}
        pref = field.one if n0 % 2 == 0 else field.neg(field.one)
        for t in dims:
            rows, cols = dims.get(t + 1, 0), dims[t]
            if not rows or not cols:
                continue
            entries = {}
            for k in self._order:
                s = k - n0
                blk = self._stage(k)
                sgn = field.one if s % 2 == 0 else field.neg(field.one)
                dmat = blk.d(t - s)
                for (i, j), v in dmat.entries.items():
                    entries[(offs[t + 1][k] + i, offs[t][k] + j)] = field.mul(
                        pref, field.mul(sgn, v)
                    )
                if k > n0:
                    delta = deltas[k - 1 - n0]  # J^(k-1) -> J^k
                    comp = delta.component(t - (s - 1))
                    for (i, j), v in comp.entries.items():
                        entries[(offs[t + 1][k] + i, offs[t][k - 1] + j)] = field.mul(
                            pref, v
                        )
            diff[t] = Matrix(field, rows, cols, entries)
        lo = hi = None
        for k in self._order:
            s = k - n0
            c = self._stage(k)
            lo = _cert_max(lo, None if c.cert_lo is None else c.cert_lo + s)
            hi = _cert_min(hi, None if c.cert_hi is None else c.cert_hi + s)
        self.complex = Complex(field, dims, diff, (lo, hi))

    def _stage(self, k: int) -> Complex:
        return self.stages[k - self.n0]

    def _degree_set(self):
        degs = set()
        for k in self._order:
            s = k - self.n0
            for n in self._stage(k).dims:
                degs.add(n + s)
        return sorted(degs)

    def block_offset(self, t: int, k: int) -> int:
        return self._offsets[t][k]

    def include_augmentation(self, lam: ChainMap) -> ChainMap:
        """For lam : M -> J^n0, the map M -> Tot hitting only the J^n0 block."""
        if lam.target != self._stage(self.n0):
            raise ValueError("augmentation must land in the bottom stage")
        comps = {}
        for t, mat in lam.components.items():
            rows = self.complex.dim(t)
            entries = {}
            off = self._offsets.get(t, {}).get(self.n0)
            if off is None:
                if not mat.is_zero():
                    raise ValueError("augmentation hits a missing degree")
                continue
            for (i, j), v in mat.entries.items():
                entries[(off + i, j)] = v
            comps[t] = Matrix(self.field, rows, mat.ncols, entries)
        return ChainMap(lam.source, self.complex, comps)

    def projection_to(self, other: "Totalization") -> ChainMap:
        """The projection Tot^[n0, m] -> Tot^[n0, l] for l <= m: identity on
        shared blocks, zero on the rest."""
        if other.n0 != self.n0 or other.m > self.m:
            raise ValueError("projection target must be a shorter tower with same base")
        for k in range(other.n0, other.m + 1):
            if other._stage(k) != self._stage(k):
                raise ValueError("towers disagree on shared stages")
        f = self.field
        comps = {}
        for t in self.complex.degrees():
            rows = other.complex.dim(t)
            cols = self.complex.dim(t)
            if not rows or not cols:
                continue
            entries = {}
            for k in range(other.n0, other.m + 1):
                s = k - self.n0
                d = self._stage(k).dim(t - s)
                for i in range(d):
                    entries[
                        (other._offsets[t][k] + i, self._offsets[t][k] + i)
                    ] = f.one
            comps[t] = Matrix(f, rows, cols, entries)
        return ChainMap(self.complex, other.complex, comps)


def totalize(tower, n0: int = 0) -> Totalization:
    """Totalize a tower: a list of composable degree-0 maps, or one Complex."""
    if isinstance(tower, Complex):
        return Totalization([], n0, single=tower)
    return Totalization(list(tower), n0)
