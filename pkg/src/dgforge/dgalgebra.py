"""Finitely presented dg-algebras and dg-modules with verified axioms.

Algebras and modules are given by total structure-constant tables over a
finite graded basis; every constructor verifies associativity, unitality,
the Leibniz rule and d^2 = 0, so any object that exists is lawful.  Desk
scale keeps the cubic verification affordable.

Homogeneous elements are sparse {index: coefficient} dicts over the basis
list of their degree.  Modules are right modules throughout; a left
module is a right module over the opposite algebra.

Module Hom complexes come in two independent flavors: the equivariance
kernel inside the plain Hom complex of underlying complexes (the defining
computation), and the generator-indexed form for sources that are free or
semi-free over the algebra.  The second is much smaller and is the form
whose certified range survives truncated resolutions; tests hold the two
routes equal wherever both apply.

The opposite multiplication carries the Koszul sign,
a *op b = (-1)^(|a||b|) b * a, the unique choice under which opposite
endomorphism algebras of complexes with odd-degree pieces stay
associative and Leibniz-compatible.
"""

from __future__ import annotations

from .complexes import Complex, GradedMap, hom_complex, hom_cert_range
from .exactlin import Field, Matrix


def _vec_scale(field, c, vec):
    if c == field.zero:
        return {}
    return {i: field.mul(c, v) for i, v in vec.items()}


def _vec_add_into(field, acc, vec):
    for i, v in vec.items():
        s = field.add(acc.get(i, field.zero), v)
        if s == field.zero:
            acc.pop(i, None)
        else:
            acc[i] = s


def _vec_eq(field, a, b):
    return {i: v for i, v in a.items() if v != field.zero} == {
        i: v for i, v in b.items() if v != field.zero
    }


def _col_to_vec(m: Matrix, j: int = 0) -> dict:
    return {i: v for (i, jj), v in m.entries.items() if jj == j}


def _vec_to_col(field, dim: int, vec: dict) -> Matrix:
    return Matrix(field, dim, 1, {(i, 0): v for i, v in vec.items()})


class DgAlgebra:
    """A dg-algebra on a finite graded basis with total multiplication tables.

    basis: {degree: [names]}; mult maps ((d1, i1), (d2, i2)) to a sparse
    element dict at degree d1 + d2 (missing key = zero product); unit is an
    element dict at degree 0; diff gives the degree-d matrix of the
    differential where nonzero.
    """

    def __init__(self, field: Field, basis: dict, mult: dict, unit: dict, diff=None, name=""):
        self.field = field
        self.basis = {d: list(names) for d, names in basis.items() if names}
        self.mult = {}
        for ((d1, i1), (d2, i2)), vec in mult.items():
            if i1 >= len(self.basis.get(d1, ())) or i2 >= len(self.basis.get(d2, ())):
                raise ValueError(f"multiplication key out of range: {(d1, i1)},{(d2, i2)}")
            clean = {
                k: field.coerce(v) for k, v in vec.items() if field.coerce(v) != field.zero
            }
            for k in clean:
                if k >= len(self.basis.get(d1 + d2, ())):
                    raise ValueError(f"product of {(d1, i1)},{(d2, i2)} out of range")
            if clean:
                self.mult[((d1, i1), (d2, i2))] = clean
        self.unit = {i: field.coerce(v) for i, v in unit.items() if field.coerce(v) != field.zero}
        self.diff = dict(diff or {})
        self.name = name
        dims = {d: len(names) for d, names in self.basis.items()}
        self.underlying = Complex(field, dims, self.diff)
        self._verify()

    # -- element arithmetic -------------------------------------------------

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def degrees(self):
        return sorted(self.basis)

    def mul_basis(self, d1: int, i1: int, d2: int, i2: int) -> dict:
        return self.mult.get(((d1, i1), (d2, i2)), {})

    def mul(self, d1: int, a: dict, d2: int, b: dict) -> dict:
        out: dict = {}
        f = self.field
        for i1, c1 in a.items():
            for i2, c2 in b.items():
                c = f.mul(c1, c2)
                if c != f.zero:
                    _vec_add_into(f, out, _vec_scale(f, c, self.mul_basis(d1, i1, d2, i2)))
        return out

    def d_elem(self, deg: int, a: dict) -> dict:
        m = self.diff.get(deg)
        if m is None:
            return {}
        f = self.field
        out: dict = {}
        for i, c in a.items():
            for (r, j), v in m.entries.items():
                if j == i:
                    _vec_add_into(f, out, {r: f.mul(c, v)})
        return out

    def right_mult_matrix(self, on_deg: int, e_deg: int, e: dict) -> Matrix:
        """Matrix of x -> x*e from degree on_deg to on_deg + e_deg."""
        rows, cols = self.dim(on_deg + e_deg), self.dim(on_deg)
        entries = {}
        for j in range(cols):
            prod = self.mul(on_deg, {j: self.field.one}, e_deg, e)
            for i, v in prod.items():
                entries[(i, j)] = v
        return Matrix(self.field, rows, cols, entries)

    def left_mult_matrix(self, on_deg: int, e_deg: int, e: dict) -> Matrix:
        """Matrix of x -> e*x from degree on_deg to on_deg + e_deg."""
        rows, cols = self.dim(on_deg + e_deg), self.dim(on_deg)
        entries = {}
        for j in range(cols):
            prod = self.mul(e_deg, e, on_deg, {j: self.field.one})
            for i, v in prod.items():
                entries[(i, j)] = v
        return Matrix(self.field, rows, cols, entries)

    def is_commutative(self) -> bool:
        for d1 in self.degrees():
            for d2 in self.degrees():
                sign = self.field.one
                if d1 % 2 and d2 % 2:
                    sign = self.field.neg(self.field.one)
                for i1 in range(self.dim(d1)):
                    for i2 in range(self.dim(d2)):
                        ab = self.mul_basis(d1, i1, d2, i2)
                        ba = _vec_scale(self.field, sign, self.mul_basis(d2, i2, d1, i1))
                        if not _vec_eq(self.field, ab, ba):
                            return False
        return True

    # -- verification -------------------------------------------------------

    def _verify(self):
        f = self.field
        if any(i >= self.dim(0) for i in self.unit):
            raise ValueError("unit out of range")
        for d in self.degrees():
            for i in range(self.dim(d)):
                b = {i: f.one}
                if not _vec_eq(f, self.mul(0, self.unit, d, b), b):
                    raise ValueError(f"unit fails on the left of {self.basis[d][i]}")
                if not _vec_eq(f, self.mul(d, b, 0, self.unit), b):
                    raise ValueError(f"unit fails on the right of {self.basis[d][i]}")
        if self.d_elem(0, self.unit):
            raise ValueError("differential of the unit is nonzero")
        degs = self.degrees()
        for d1 in degs:
            for d2 in degs:
                for d3 in degs:
                    if not (self.dim(d1 + d2 + d3)):
                        continue
                    for i1 in range(self.dim(d1)):
                        for i2 in range(self.dim(d2)):
                            ab = self.mul_basis(d1, i1, d2, i2)
                            for i3 in range(self.dim(d3)):
                                bc = self.mul_basis(d2, i2, d3, i3)
                                lhs = self.mul(d1 + d2, ab, d3, {i3: f.one})
                                rhs = self.mul(d1, {i1: f.one}, d2 + d3, bc)
                                if not _vec_eq(f, lhs, rhs):
                                    raise ValueError(
                                        "associativity fails on "
                                        f"({self.basis[d1][i1]}, {self.basis[d2][i2]}, "
                                        f"{self.basis[d3][i3]})"
                                    )
        for d1 in degs:
            for d2 in degs:
                sign = f.one if d1 % 2 == 0 else f.neg(f.one)
                for i1 in range(self.dim(d1)):
                    da = self.d_elem(d1, {i1: f.one})
                    for i2 in range(self.dim(d2)):
                        ab = self.mul_basis(d1, i1, d2, i2)
                        lhs = self.d_elem(d1 + d2, ab)
                        rhs = self.mul(d1 + 1, da, d2, {i2: f.one})
                        db = self.d_elem(d2, {i2: f.one})
                        _vec_add_into(
                            f, rhs, _vec_scale(f, sign, self.mul(d1, {i1: f.one}, d2 + 1, db))
                        )
                        if not _vec_eq(f, lhs, rhs):
                            raise ValueError(
                                f"Leibniz fails on ({self.basis[d1][i1]}, {self.basis[d2][i2]})"
                            )

    def __eq__(self, other):
        return (
            isinstance(other, DgAlgebra)
            and self.field == other.field
            and self.basis == other.basis
            and self.mult == other.mult
            and self.unit == other.unit
            and self.diff == other.diff
        )

    def __repr__(self):
        dims = {d: len(b) for d, b in self.basis.items()}
        return f"DgAlgebra({self.name or dims!r})"


def opposite(a: DgAlgebra) -> DgAlgebra:
    """The Koszul-sign opposite: a *op b = (-1)^(|a||b|) b a."""
    f = a.field
    mult = {}
    for ((d1, i1), (d2, i2)), vec in a.mult.items():
        if d1 % 2 and d2 % 2:
            vec = _vec_scale(f, f.neg(f.one), vec)
        mult[((d2, i2), (d1, i1))] = vec
    return DgAlgebra(f, a.basis, mult, a.unit, a.diff, name=a.name + "^op" if a.name else "")


class OrdinaryAlgebraPresentation:
    """An associative unital algebra concentrated in degree 0, with an
    optional two-sided ideal given by a spanning set of element dicts."""

    def __init__(self, field: Field, names: list, mult: dict, unit: dict, ideal=None, name=""):
        self.field = field
        self.names = list(names)
        self.mult = {}
        for (i, j), vec in mult.items():
            clean = {
                k: field.coerce(v) for k, v in vec.items() if field.coerce(v) != field.zero
            }
            if max(clean, default=0) >= len(names) or i >= len(names) or j >= len(names):
                raise ValueError(f"multiplication entry out of range at ({i}, {j})")
            if clean:
                self.mult[(i, j)] = clean
        self.unit = {
            i: field.coerce(v) for i, v in unit.items() if field.coerce(v) != field.zero
        }
        self.ideal = [dict(v) for v in ideal] if ideal else None
        self.name = name
        self._verify()

    @property
    def dim(self) -> int:
        return len(self.names)

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        f = self.field
        for i, c1 in a.items():
            for j, c2 in b.items():
                c = f.mul(c1, c2)
                if c != f.zero:
                    _vec_add_into(f, out, _vec_scale(f, c, self.mult.get((i, j), {})))
        return out

    def _verify(self):
        f = self.field
        n = self.dim
        for i in range(n):
            b = {i: f.one}
            if not _vec_eq(f, self.mul(self.unit, b), b) or not _vec_eq(
                f, self.mul(b, self.unit), b
            ):
                raise ValueError(f"unit fails on {self.names[i]}")
        for i in range(n):
            for j in range(n):
                ab = self.mult.get((i, j), {})
                for k in range(n):
                    lhs = self.mul(ab, {k: f.one})
                    rhs = self.mul({i: f.one}, self.mult.get((j, k), {}))
                    if not _vec_eq(f, lhs, rhs):
                        raise ValueError(
                            "associativity fails on "
                            f"({self.names[i]}, {self.names[j]}, {self.names[k]})"
                        )
        if self.ideal is not None:
            span = Matrix(
                f,
                n,
                len(self.ideal),
                {
                    (i, j): v
                    for j, vec in enumerate(self.ideal)
                    for i, v in vec.items()
                },
            )
            for vec in self.ideal:
                for i in range(n):
                    for prod in (self.mul({i: f.one}, vec), self.mul(vec, {i: f.one})):
                        col = _vec_to_col(f, n, prod)
                        if span.solve(col) is None:
                            raise ValueError(
                                f"ideal not closed under multiplication by {self.names[i]}"
                            )

    def ideal_matrix(self) -> Matrix:
        """Ideal spanning set as a column matrix (empty if no ideal given)."""
        vecs = self.ideal or []
        return Matrix(
            self.field,
            self.dim,
            len(vecs),
            {(i, j): v for j, vec in enumerate(vecs) for i, v in vec.items()},
        )


def embed_ordinary(p: OrdinaryAlgebraPresentation) -> DgAlgebra:
    """View an ordinary algebra as a dg-algebra in degree 0."""
    mult = {((0, i), (0, j)): vec for (i, j), vec in p.mult.items()}
    a = DgAlgebra(p.field, {0: p.names}, mult, p.unit, {}, name=p.name)
    a.ordinary = p
    return a


class DgModule:
    """A right dg-module on a finite graded basis with total action tables.

    action maps ((m_deg, m_idx), (a_deg, a_idx)) to a sparse element dict
    at degree m_deg + a_deg.
    """

    def __init__(self, algebra: DgAlgebra, basis: dict, action: dict, diff=None,
                 cert=(None, None), name=""):
        self.algebra = algebra
        self.field = algebra.field
        f = self.field
        self.basis = {d: list(names) for d, names in basis.items() if names}
        self.action = {}
        for ((dm, im), (da, ia)), vec in action.items():
            clean = {k: f.coerce(v) for k, v in vec.items() if f.coerce(v) != f.zero}
            if clean:
                self.action[((dm, im), (da, ia))] = clean
        self.diff = dict(diff or {})
        self.name = name
        dims = {d: len(names) for d, names in self.basis.items()}
        self.underlying = Complex(f, dims, self.diff, cert)
        self._verify()

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def degrees(self):
        return sorted(self.basis)

    def act_basis(self, dm: int, im: int, da: int, ia: int) -> dict:
        return self.action.get(((dm, im), (da, ia)), {})

    def act(self, dm: int, m: dict, da: int, a: dict) -> dict:
        out: dict = {}
        f = self.field
        for im, c1 in m.items():
            for ia, c2 in a.items():
                c = f.mul(c1, c2)
                if c != f.zero:
                    _vec_add_into(f, out, _vec_scale(f, c, self.act_basis(dm, im, da, ia)))
        return out

    def d_elem(self, deg: int, m: dict) -> dict:
        mtx = self.diff.get(deg)
        if mtx is None:
            return {}
        f = self.field
        out: dict = {}
        for i, c in m.items():
            for (r, j), v in mtx.entries.items():
                if j == i:
                    _vec_add_into(f, out, {r: f.mul(c, v)})
        return out

    def action_matrix(self, m_deg: int, a_deg: int, a: dict) -> Matrix:
        """Matrix of m -> m*a from degree m_deg to m_deg + a_deg."""
        rows, cols = self.dim(m_deg + a_deg), self.dim(m_deg)
        entries = {}
        for j in range(cols):
            prod = self.act(m_deg, {j: self.field.one}, a_deg, a)
            for i, v in prod.items():
                entries[(i, j)] = v
        return Matrix(self.field, rows, cols, entries)

    def _verify(self):
        f = self.field
        alg = self.algebra
        for dm in self.degrees():
            for im in range(self.dim(dm)):
                m = {im: f.one}
                if not _vec_eq(f, self.act(dm, m, 0, alg.unit), m):
                    raise ValueError(f"unit fails on module element {self.basis[dm][im]}")
        for dm in self.degrees():
            for da in alg.degrees():
                for db in alg.degrees():
                    if not self.dim(dm + da + db):
                        continue
                    for im in range(self.dim(dm)):
                        for ia in range(alg.dim(da)):
                            ma = self.act_basis(dm, im, da, ia)
                            for ib in range(alg.dim(db)):
                                lhs = self.act(dm + da, ma, db, {ib: f.one})
                                ab = alg.mul_basis(da, ia, db, ib)
                                rhs = self.act(dm, {im: f.one}, da + db, ab)
                                if not _vec_eq(f, lhs, rhs):
                                    raise ValueError(
                                        "module associativity fails on "
                                        f"({self.basis[dm][im]}, {alg.basis[da][ia]}, "
                                        f"{alg.basis[db][ib]})"
                                    )
        for dm in self.degrees():
            for da in alg.degrees():
                sign = f.one if dm % 2 == 0 else f.neg(f.one)
                for im in range(self.dim(dm)):
                    dmv = self.d_elem(dm, {im: f.one})
                    for ia in range(alg.dim(da)):
                        lhs = self.d_elem(dm + da, self.act_basis(dm, im, da, ia))
                        rhs = self.act(dm + 1, dmv, da, {ia: f.one})
                        dav = alg.d_elem(da, {ia: f.one})
                        _vec_add_into(
                            f, rhs, _vec_scale(f, sign, self.act(dm, {im: f.one}, da + 1, dav))
                        )
                        if not _vec_eq(f, lhs, rhs):
                            raise ValueError(
                                "module Leibniz fails on "
                                f"({self.basis[dm][im]}, {alg.basis[da][ia]})"
                            )

    def __eq__(self, other):
        return (
            isinstance(other, DgModule)
            and self.algebra == other.algebra
            and self.basis == other.basis
            and self.action == other.action
            and self.diff == other.diff
        )

    def __repr__(self):
        dims = {d: len(b) for d, b in self.basis.items()}
        return f"DgModule({self.name or dims!r})"


def semifree_module(algebra: DgAlgebra, generators: list, gen_diff: dict | None = None,
                    cert=(None, None), name="") -> DgModule:
    """The module with underlying graded basis {z_i * b} for generators z_i.

    generators: list of (name, degree).  gen_diff maps a generator index i
    to {j: algebra element dict}, meaning d(z_i) = sum_j z_j * a_ji with
    a_ji of degree |z_i| + 1 - |z_j|.  Free module = empty gen_diff.
    """
    f = algebra.field
    gen_diff = gen_diff or {}
    gdegs = [g for _, g in generators]
    # layout: basis of degree n is [(gen i, algebra index at n - g_i)] gen-major
    layout: dict[int, list] = {}
    names: dict[int, list] = {}
    for gi, (gname, g) in enumerate(generators):
        for da in algebra.degrees():
            n = g + da
            for ia in range(algebra.dim(da)):
                layout.setdefault(n, []).append((gi, da, ia))
                names.setdefault(n, []).append(f"{gname}*{algebra.basis[da][ia]}")
    index = {
        n: {key: k for k, key in enumerate(entries)} for n, entries in layout.items()
    }

    def gen_block(n, gi):
        # positions of generator gi's block in degree n
        return [k for k, (g2, _, _) in enumerate(layout.get(n, ())) if g2 == gi]

    action = {}
    for n, entries in layout.items():
        for k, (gi, da, ia) in enumerate(entries):
            for db in algebra.degrees():
                for ib in range(algebra.dim(db)):
                    prod = algebra.mul_basis(da, ia, db, ib)
                    vec = {}
                    for ic, c in prod.items():
                        vec[index[n + db][(gi, da + db, ic)]] = c
                    if vec:
                        action[((n, k), (db, ib))] = vec
    diff: dict[int, Matrix] = {}
    for n, entries in layout.items():
        rows = len(layout.get(n + 1, ()))
        if not rows:
            continue
        dmtx_entries: dict = {}
        for k, (gi, da, ia) in enumerate(entries):
            g = gdegs[gi]
            # (-1)^|z_i| z_i * d(b)
            db = algebra.d_elem(da, {ia: f.one})
            sgn = f.one if g % 2 == 0 else f.neg(f.one)
            for ic, c in db.items():
                r = index[n + 1][(gi, da + 1, ic)]
                dmtx_entries[(r, k)] = f.add(
                    dmtx_entries.get((r, k), f.zero), f.mul(sgn, c)
                )
            # d(z_i) * b
            for gj, avec in gen_diff.get(gi, {}).items():
                adeg = g + 1 - gdegs[gj]
                prod = algebra.mul(adeg, avec, da, {ia: f.one})
                for ic, c in prod.items():
                    r = index[n + 1][(gj, adeg + da, ic)]
                    dmtx_entries[(r, k)] = f.add(
                        dmtx_entries.get((r, k), f.zero), c
                    )
        m = Matrix(f, rows, len(entries), dmtx_entries)
        if not m.is_zero():
            diff[n] = m
    mod = DgModule(algebra, names, action, diff, cert, name=name)
    mod.generators = list(generators)
    mod.gen_diff = {i: dict(v) for i, v in gen_diff.items()}
    mod.layout = layout
    mod.layout_index = index
    # the element z_i = z_i * 1 in underlying coordinates
    mod.gen_elements = {}
    for gi, (gname, g) in enumerate(generators):
        vec = {index[g][(gi, 0, iu)]: c for iu, c in algebra.unit.items()}
        mod.gen_elements[gi] = vec
    return mod


def free_module(algebra: DgAlgebra, generators: list, name="") -> DgModule:
    """Free right module on (name, degree) generators; generators are cycles."""
    return semifree_module(algebra, generators, {}, name=name)


# ---------------------------------------------------------------------------
# module Hom complexes
# ---------------------------------------------------------------------------


class ModuleHomComplex(Complex):
    """Hom over the algebra, computed as the equivariance kernel inside the
    plain Hom complex of underlying complexes.  The defining route: slow,
    but independent of any freeness bookkeeping."""

    def __init__(self, m: DgModule, n: DgModule, cert=None, h_cert=None):
        if m.algebra != n.algebra:
            raise ValueError("modules over different algebras")
        self.hom_source = m
        self.hom_target = n
        f = m.field
        base = hom_complex(m.underlying, n.underlying)
        self.base = base
        alg = m.algebra
        inclusion: dict[int, Matrix] = {}
        dims: dict[int, int] = {}
        for t in base.degrees():
            cols = base.dim(t)
            entries: dict = {}
            rowc = 0
            for da in alg.degrees():
                for ia in range(alg.dim(da)):
                    for dm in m.degrees():
                        tgt = n.dim(dm + da + t)
                        if not tgt:
                            continue
                        for x in range(m.dim(dm)):
                            xa = m.act_basis(dm, x, da, ia)
                            for r in range(tgt):
                                row: dict = {}
                                for a2, c in xa.items():
                                    col = base._index[t].get((dm + da, a2, r))
                                    if col is not None:
                                        row[col] = f.add(row.get(col, f.zero), c)
                                for b in range(n.dim(dm + t)):
                                    v = n.act_basis(dm + t, b, da, ia).get(r)
                                    if v is not None:
                                        col = base._index[t].get((dm, x, b))
                                        if col is not None:
                                            row[col] = f.sub(
                                                row.get(col, f.zero), v
                                            )
                                for col, v in row.items():
                                    if v != f.zero:
                                        entries[(rowc, col)] = v
                                rowc += 1
            ker = Matrix(f, rowc, cols, entries).kernel_basis()
            inclusion[t] = ker
            dims[t] = ker.ncols
        diff: dict[int, Matrix] = {}
        for t in sorted(dims):
            if not dims.get(t):
                continue
            image = base.d(t) @ inclusion[t]
            if not dims.get(t + 1):
                if not image.is_zero():
                    raise ValueError("differential leaves the equivariant subspace")
                continue
            sol = inclusion[t + 1].solve(image)
            if sol is None:
                raise ValueError("differential leaves the equivariant subspace")
            if not sol.is_zero():
                diff[t] = sol
        self.inclusion = inclusion
        if cert is None:
            cert = hom_cert_range(m.underlying, n.underlying)
        super().__init__(f, dims, diff, cert, h_cert=h_cert)

    def element_as_graded(self, t: int, vec: Matrix) -> GradedMap:
        inc = self.inclusion.get(t)
        if inc is None:
            return GradedMap(self.hom_source.underlying, self.hom_target.underlying, {}, t)
        return self.base.element_as_graded(t, inc @ vec)

    def map_as_element(self, g: GradedMap) -> Matrix:
        t = g.degree
        full = self.base.map_as_element(g)
        inc = self.inclusion.get(t)
        if inc is None or inc.ncols == 0:
            if full.is_zero():
                return Matrix.zeros(self.field, self.dim(t), full.ncols)
            raise ValueError("map is not equivariant")
        sol = inc.solve(full)
        if sol is None:
            raise ValueError("map is not equivariant")
        return sol


class FreeHomComplex(Complex):
    """Hom out of a (semi)free module, indexed by generator values.

    A degree-t element is the tuple of its values on the generators,
    v_i in target^(|z_i| + t); the basis at degree t is (generator i,
    target basis element) in generator-major order.  The differential is
    d(v)_i = d_target(v_i) - (-1)^t sum_j v_j * a_ji  where
    d(z_i) = sum_j z_j a_ji in the source.
    """

    def __init__(self, m: DgModule, n: DgModule, cert=None, h_cert=None):
        if m.algebra != n.algebra:
            raise ValueError("modules over different algebras")
        if not hasattr(m, "generators"):
            raise ValueError("source is not generator-presented")
        self.hom_source = m
        self.hom_target = n
        f = m.field
        gens = m.generators
        gdegs = [g for _, g in gens]
        blocks: dict[int, list] = {}
        tset = set()
        for g in gdegs:
            for dn in n.degrees():
                tset.add(dn - g)
        for t in sorted(tset):
            basis = []
            for gi, g in enumerate(gdegs):
                for b in range(n.dim(g + t)):
                    basis.append((gi, b))
            if basis:
                blocks[t] = basis
        self._basis = blocks
        self._index = {
            t: {key: k for k, key in enumerate(basis)} for t, basis in blocks.items()
        }
        dims = {t: len(b) for t, b in blocks.items()}
        diff: dict[int, Matrix] = {}
        act_cache: dict = {}
        for t in sorted(dims):
            if not dims.get(t + 1):
                continue
            entries: dict = {}
            idx1 = self._index[t + 1]
            sgn = f.neg(f.one) if t % 2 == 0 else f.one  # -(-1)^t
            for k, (gi, b) in enumerate(blocks[t]):
                g = gdegs[gi]
                dmtx = n.underlying.d(g + t)
                for (r, bb), v in dmtx.entries.items():
                    if bb == b:
                        row = idx1.get((gi, r))
                        if row is not None:
                            entries[(row, k)] = f.add(
                                entries.get((row, k), f.zero), v
                            )
                # v_j appears in d(v)_i for every i with d(z_i) ∋ z_j a_ji
                for i2, terms in m.gen_diff.items():
                    avec = terms.get(gi)
                    if not avec:
                        continue
                    adeg = gdegs[i2] + 1 - g
                    key = (g + t, adeg, tuple(sorted(avec.items())))
                    amat = act_cache.get(key)
                    if amat is None:
                        amat = n.action_matrix(g + t, adeg, avec)
                        act_cache[key] = amat
                    for (r, bb), v in amat.entries.items():
                        if bb == b:
                            row = idx1.get((i2, r))
                            if row is not None:
                                entries[(row, k)] = f.add(
                                    entries.get((row, k), f.zero), f.mul(sgn, v)
                                )
            mtx = Matrix(f, dims[t + 1], dims[t], entries)
            if not mtx.is_zero():
                diff[t] = mtx
        if cert is None:
            cert = hom_cert_range(m.underlying, n.underlying)
        super().__init__(f, dims, diff, cert, h_cert=h_cert)

    def basis_at(self, t: int):
        return list(self._basis.get(t, []))

    def gen_value(self, t: int, vec: Matrix, gi: int) -> Matrix:
        """The value v_gi on generator gi, as a column in target coordinates."""
        g = self.hom_source.generators[gi][1]
        n = self.hom_target
        out = Matrix.zeros(self.field, n.dim(g + t), vec.ncols)
        idx = self._index.get(t, {})
        for (k, j), v in vec.entries.items():
            gi2, b = self._basis[t][k]
            if gi2 == gi:
                out.entries[(b, j)] = v
        return out

    def element_as_graded(self, t: int, vec: Matrix) -> GradedMap:
        m, n = self.hom_source, self.hom_target
        f = self.field
        values = {gi: _col_to_vec(self.gen_value(t, vec, gi)) for gi in range(len(m.generators))}
        comps: dict[int, Matrix] = {}
        for dm, entries in m.layout.items():
            rows = n.dim(dm + t)
            if not rows or not m.dim(dm):
                continue
            mat_entries: dict = {}
            for k, (gi, da, ia) in enumerate(entries):
                g = m.generators[gi][1]
                # f(z_i * b) = v_i * b
                out = n.act(g + t, values.get(gi, {}), da, {ia: f.one})
                for r, v in out.items():
                    mat_entries[(r, k)] = v
            mtx = Matrix(f, rows, m.dim(dm), mat_entries)
            if not mtx.is_zero():
                comps[dm] = mtx
        return GradedMap(m.underlying, n.underlying, comps, t)

    def map_as_element(self, g: GradedMap) -> Matrix:
        m = self.hom_source
        t = g.degree
        vec = Matrix.zeros(self.field, self.dim(t), 1)
        for gi, (gname, gd) in enumerate(m.generators):
            col = g.component(gd) @ _vec_to_col(self.field, m.dim(gd), m.gen_elements[gi])
            for (b, _), v in col.entries.items():
                vec.entries[(self._index[t][(gi, b)], 0)] = v
        return vec


def module_hom_complex(m: DgModule, n: DgModule, method: str = "auto", cert=None, h_cert=None):
    """Hom over the algebra; 'equivariance' (defining) or 'generators'
    (free/semi-free fast path), 'auto' picks generators when available."""
    if method == "auto":
        method = "generators" if hasattr(m, "generators") else "equivariance"
    if method == "generators":
        return FreeHomComplex(m, n, cert, h_cert)
    if method == "equivariance":
        return ModuleHomComplex(m, n, cert, h_cert)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# endomorphism dg-algebra
# ---------------------------------------------------------------------------


def end_dga(p: DgModule, method: str = "auto"):
    """The opposite endomorphism dg-algebra of p, and p as a module over it.

    Multiplication: e *op f = (-1)^(|e||f|) f o e.  The returned module
    action is p.e := (-1)^(|e||p|) e(p), which makes p a lawful right
    module over the opposite algebra (both verified at construction).
    """
    hom = module_hom_complex(p, p, method)
    f = p.field
    basis = {t: [f"e{t}_{k}" for k in range(hom.dim(t))] for t in hom.degrees()}
    maps: dict = {}
    for t in hom.degrees():
        for k in range(hom.dim(t)):
            e = Matrix(f, hom.dim(t), 1, {(k, 0): f.one})
            maps[(t, k)] = hom.element_as_graded(t, e)
    mult = {}
    for (t1, k1), e1 in maps.items():
        for (t2, k2), e2 in maps.items():
            if hom.dim(t1 + t2) == 0:
                continue
            comp = e2.compose(e1)  # f o e, apply e first
            vec = hom.map_as_element(comp)
            if t1 % 2 and t2 % 2:
                vec = vec.scale(f.neg(f.one))
            out = _col_to_vec(vec)
            if out:
                mult[((t1, k1), (t2, k2))] = out
    ident = GradedMap(
        p.underlying,
        p.underlying,
        {d: Matrix.identity(f, p.dim(d)) for d in p.degrees()},
        0,
    )
    unit = _col_to_vec(hom.map_as_element(ident))
    algebra = DgAlgebra(f, basis, mult, unit, hom.diff, name=f"End({p.name})^op" if p.name else "")
    action = {}
    for (t, k), e in maps.items():
        for dm in p.degrees():
            comp = e.component(dm)
            sign = f.neg(f.one) if (t % 2 and dm % 2) else f.one
            for im in range(p.dim(dm)):
                vec = {
                    r: f.mul(sign, v)
                    for (r, j), v in comp.entries.items()
                    if j == im
                }
                if vec:
                    action[((dm, im), (t, k))] = vec
    as_module = DgModule(
        algebra, p.basis, action, p.diff, name=f"{p.name} over End^op" if p.name else ""
    )
    return algebra, as_module
