"""Tests for verified dg-algebras, dg-modules, and the two Hom routes.

The sign-heavy cases run over F_5 so a dropped (-1) cannot hide behind
characteristic 2; route agreement is asserted as an explicit isomorphism
of complexes, since the two constructions choose different bases.
"""

import pytest

from dgforge import corpus
from dgforge.complexes import Complex, GradedMap, h_dim, hom_cert_range, shift
from dgforge.dgalgebra import (
    DgAlgebra,
    DgModule,
    OrdinaryAlgebraPresentation,
    embed_ordinary,
    end_dga,
    free_module,
    module_hom_complex,
    opposite,
    semifree_module,
)
from dgforge.exactlin import GF2, Matrix, PrimeField
from tests.util import truncated_k_resolution

F5 = PrimeField(5)


def koszul_line_dga(field=F5) -> DgAlgebra:
    """Two-step commutative dg-algebra on y (degree 0, y^2 = 0) and e
    (degree -1, e^2 = 0, ey = ye) with d(e) = y.  The smallest algebra
    with both a nonzero differential and odd-degree elements."""
    basis = {0: ["1", "y"], -1: ["e", "ye"]}
    one = field.one
    mult = {
        ((0, 0), (0, 0)): {0: one},
        ((0, 0), (0, 1)): {1: one},
        ((0, 1), (0, 0)): {1: one},
        ((0, 0), (-1, 0)): {0: one},
        ((-1, 0), (0, 0)): {0: one},
        ((0, 0), (-1, 1)): {1: one},
        ((-1, 1), (0, 0)): {1: one},
        ((0, 1), (-1, 0)): {1: one},
        ((-1, 0), (0, 1)): {1: one},
    }
    diff = {-1: Matrix(field, 2, 2, {(1, 0): one})}
    return DgAlgebra(field, basis, mult, {0: one}, diff, name="K(y)")


def odd_coeff_module(algebra: DgAlgebra) -> DgModule:
    """Semi-free with d(w1) = w0 * ye: odd-degree structure coefficient."""
    return semifree_module(algebra, [("w0", 0), ("w1", -2)], {1: {0: {1: algebra.field.one}}})


def odd_gen_module(algebra: DgAlgebra) -> DgModule:
    """Semi-free with odd-degree generators: v0 in degree 1, d(v1) = v0 * ye."""
    return semifree_module(algebra, [("v0", 1), ("v1", -1)], {1: {0: {1: algebra.field.one}}})


class TestDgAlgebraConstruction:
    def test_koszul_line_builds(self):
        a = koszul_line_dga()
        assert a.dim(0) == 2 and a.dim(-1) == 2
        assert a.is_commutative()

    def test_unit_law_enforced(self):
        with pytest.raises(ValueError, match="unit"):
            DgAlgebra(GF2, {0: ["1", "y"]}, {
                ((0, 0), (0, 0)): {0: 1},
                ((0, 0), (0, 1)): {1: 1},
                # (0,1),(0,0) missing: y*1 = 0
            }, {0: 1})

    def test_associativity_enforced(self):
        # a*(a*a) = a*b = 1 but (a*a)*a = b*a = 0
        with pytest.raises(ValueError, match="associativity"):
            DgAlgebra(GF2, {0: ["1", "a", "b"]}, {
                ((0, 0), (0, 0)): {0: 1},
                ((0, 0), (0, 1)): {1: 1},
                ((0, 1), (0, 0)): {1: 1},
                ((0, 0), (0, 2)): {2: 1},
                ((0, 2), (0, 0)): {2: 1},
                ((0, 1), (0, 1)): {2: 1},
                ((0, 1), (0, 2)): {0: 1},
            }, {0: 1})

    def test_leibniz_enforced(self):
        a = koszul_line_dga()
        # d(e) = 1 instead of y breaks d(y e) = y d(e)
        bad_diff = {-1: Matrix(F5, 2, 2, {(0, 0): 1})}
        with pytest.raises(ValueError, match="Leibniz"):
            DgAlgebra(F5, a.basis, a.mult, a.unit, bad_diff)

    def test_unit_differential_zero(self):
        with pytest.raises(ValueError, match="unit"):
            DgAlgebra(
                GF2,
                {0: ["1"], 1: ["t"]},
                {((0, 0), (0, 0)): {0: 1}, ((0, 0), (1, 0)): {0: 1},
                 ((1, 0), (0, 0)): {0: 1}},
                {0: 1},
                {0: Matrix(GF2, 1, 1, {(0, 0): 1})},
            )

    def test_opposite_is_lawful_and_involutive(self):
        for a in (koszul_line_dga(), embed_ordinary(corpus.upper_triangular2(2))):
            aop = opposite(a)  # constructor re-verifies all axioms
            assert opposite(aop) == a

    def test_opposite_detects_noncommutativity(self):
        ut = embed_ordinary(corpus.upper_triangular2(2))
        assert not ut.is_commutative()
        assert opposite(ut).mult != ut.mult
        assert opposite(koszul_line_dga()).mult == koszul_line_dga().mult

    def test_right_left_mult_matrices(self):
        a = koszul_line_dga()
        y = {1: a.field.one}
        m = a.right_mult_matrix(-1, 0, y)  # e -> ey = ye, ye -> 0
        assert m.to_rows() == [[0, 0], [1, 0]]
        assert a.left_mult_matrix(-1, 0, y).to_rows() == [[0, 0], [1, 0]]


class TestOrdinaryPresentation:
    def test_bundled_all_construct(self):
        for pres in corpus.bundled_artinian() + [corpus.matrix2(2)]:
            assert pres.dim >= 2

    def test_associativity_error_names_triple(self):
        # a*(a*a) = a*b = 1 but (a*a)*a = b*a = 0
        with pytest.raises(ValueError, match=r"\(a, a, a\)"):
            OrdinaryAlgebraPresentation(
                GF2,
                ["1", "a", "b"],
                {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1},
                 (0, 2): {2: 1}, (2, 0): {2: 1},
                 (1, 1): {2: 1}, (1, 2): {0: 1}},
                {0: 1},
            )

    def test_ideal_closure_checked(self):
        # span{e11} is not an ideal: e11*e12 = e12 falls outside
        with pytest.raises(ValueError, match="ideal"):
            OrdinaryAlgebraPresentation(
                GF2,
                ["e11", "e12", "e22"],
                {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}},
                {0: 1, 2: 1},
                ideal=[{0: 1}],
            )

    def test_mult_out_of_range(self):
        with pytest.raises(ValueError, match="range"):
            OrdinaryAlgebraPresentation(GF2, ["1"], {(0, 1): {0: 1}}, {0: 1})


class TestDgModule:
    def test_corpus_modules_lawful(self):
        for pres in corpus.bundled_artinian():
            corpus.regular_module(pres)
            corpus.dual_regular_module(pres)
            corpus.residue_module(pres)
        corpus.column_module(2)

    def test_unit_action_enforced(self):
        a = embed_ordinary(corpus.dual_numbers(2))
        with pytest.raises(ValueError, match="unit"):
            DgModule(a, {0: ["m"]}, {})  # unit acts as zero

    def test_action_associativity_enforced(self):
        a = embed_ordinary(corpus.dual_numbers(2))
        # x acts as identity: m*(x*x) = 0 but (m*x)*x = m
        with pytest.raises(ValueError, match="associativity"):
            DgModule(a, {0: ["m"]}, {((0, 0), (0, 0)): {0: 1}, ((0, 0), (0, 1)): {0: 1}})

    def test_module_leibniz_enforced(self):
        a = koszul_line_dga()
        m = odd_coeff_module(a)
        bad_diff = dict(m.diff)
        bad_diff[-3] = bad_diff[-3].scale(2)
        with pytest.raises(ValueError, match="Leibniz"):
            DgModule(a, m.basis, m.action, bad_diff)

    def test_free_module_shape(self):
        a = koszul_line_dga()
        fm = free_module(a, [("u", 0), ("v", 2)])
        # each generator spans a shifted copy of the algebra
        assert {d: fm.dim(d) for d in fm.degrees()} == {-1: 2, 0: 2, 1: 2, 2: 2}
        assert fm.gen_elements[0] and fm.gen_elements[1]

    def test_semifree_passes_d_squared(self):
        a = koszul_line_dga()
        m = odd_coeff_module(a)  # Complex constructor enforces d^2 = 0
        assert m.underlying.total_dim() == 8

    def test_semifree_generator_parity_sign(self):
        a = koszul_line_dga()
        m = odd_gen_module(a)
        # v0 has odd degree: d(v0 * e) = -v0 * d(e) = -v0 * y
        f = a.field
        col = m.layout_index[0][(0, -1, 0)]   # v0*e sits in degree 0
        row = m.layout_index[1][(0, 0, 1)]    # v0*y sits in degree 1
        assert m.diff[0][(row, col)] == f.neg(f.one)


def hom_routes_isomorphic(m, n):
    """Build both Hom routes and check the canonical comparison map is an
    isomorphism of complexes; returns the two complexes."""
    hg = module_hom_complex(m, n, "generators")
    he = module_hom_complex(m, n, "equivariance")
    assert dict(hg.dims) == dict(he.dims)
    field = m.field
    phi = {}
    for t in hg.degrees():
        mat = Matrix(field, he.dim(t), hg.dim(t))
        for j in range(hg.dim(t)):
            e = Matrix(field, hg.dim(t), 1, {(j, 0): field.one})
            col = he.map_as_element(hg.element_as_graded(t, e))
            for (i, _), v in col.entries.items():
                mat.entries[(i, j)] = v
        assert mat.rank() == hg.dim(t), f"comparison not invertible at degree {t}"
        phi[t] = mat
    for t in hg.degrees():
        if not hg.dim(t + 1):
            continue
        assert phi[t + 1] @ hg.d(t) == he.d(t) @ phi[t], (
            f"comparison not a chain map at degree {t}"
        )
    return hg, he


class TestHomRoutes:
    def test_agreement_degree_zero_algebra(self):
        _, p2, k = truncated_k_resolution(2, 2, 2)
        _, p1, _ = truncated_k_resolution(2, 2, 1)
        hom_routes_isomorphic(p2, k)
        hom_routes_isomorphic(p2, p1)

    def test_agreement_noncommutative(self):
        a = embed_ordinary(corpus.upper_triangular2(2))
        # d(z1) = z0 * e12 (radical coefficient, squares to zero)
        m = semifree_module(a, [("z0", 0), ("z1", -1)], {1: {0: {1: 1}}})
        n = free_module(a, [("w", 0)])
        hom_routes_isomorphic(m, n)
        hom_routes_isomorphic(m, m)

    def test_agreement_with_signs(self):
        a = koszul_line_dga()
        m = odd_coeff_module(a)
        n = odd_gen_module(a)
        for src, tgt in [(m, n), (n, m), (m, m), (n, n)]:
            hg, he = hom_routes_isomorphic(src, tgt)
            for t in hg.degrees():
                assert h_dim(hg, t) == h_dim(he, t)

    def test_identity_is_a_cocycle(self):
        a = koszul_line_dga()
        m = odd_coeff_module(a)
        hg = module_hom_complex(m, m, "generators")
        f = a.field
        ident = GradedMap(
            m.underlying, m.underlying,
            {d: Matrix.identity(f, m.dim(d)) for d in m.degrees()}, 0,
        )
        v = hg.map_as_element(ident)
        assert (hg.d(0) @ v).is_zero()
        back = hg.element_as_graded(0, v)
        for d in m.degrees():
            assert back.component(d) == ident.component(d)

    def test_equivariance_rejects_non_linear_map(self):
        r = corpus.regular_module(corpus.dual_numbers(2))
        he = module_hom_complex(r, r, "equivariance")
        # 1 -> 1, x -> 0 is not linear over the dual numbers
        g = GradedMap(r.underlying, r.underlying,
                      {0: Matrix(GF2, 2, 2, {(0, 0): 1})}, 0)
        with pytest.raises(ValueError, match="equivariant"):
            he.map_as_element(g)

    def test_method_validation(self):
        r = corpus.regular_module(corpus.dual_numbers(2))
        with pytest.raises(ValueError, match="generator"):
            module_hom_complex(r, r, "generators")  # not generator-presented
        with pytest.raises(ValueError, match="unknown method"):
            module_hom_complex(r, r, "fast")
        k3 = corpus.residue_module(corpus.dual_numbers(3))
        with pytest.raises(ValueError, match="different algebras"):
            module_hom_complex(r, k3)


class TestFreeSourceReduction:
    def test_rank_one_degree_zero_gives_target_back(self):
        # Hom(A, n) over A is literally n
        a = embed_ordinary(corpus.upper_triangular2(2))
        fm = free_module(a, [("g", 0)])
        m = semifree_module(a, [("z0", 0), ("z1", -1)], {1: {0: {1: 1}}})
        hom = module_hom_complex(fm, m, "generators")
        assert dict(hom.dims) == dict(m.underlying.dims)
        assert all(hom.d(t) == m.underlying.d(t) for t in hom.dims)

    def test_rank_one_shifted_generator(self):
        a = koszul_line_dga()
        n = odd_coeff_module(a)
        hom = module_hom_complex(free_module(a, [("g", 2)]), n, "generators")
        sh = shift(n.underlying, 2)
        assert dict(hom.dims) == dict(sh.dims)
        for t in hom.degrees():
            assert h_dim(hom, t) == h_dim(sh, t)


class TestEndDga:
    def test_end_of_regular_is_opposite_algebra(self):
        for pres in (corpus.dual_numbers(2), corpus.upper_triangular2(2)):
            r = corpus.regular_module(pres)
            e, _ = end_dga(r)
            assert {d: e.dim(d) for d in e.degrees()} == {0: pres.dim}
            hom = module_hom_complex(r, r, "equivariance")
            f = pres.field
            unit_col = Matrix(f, pres.dim, 1,
                              {(i, 0): v for i, v in pres.unit.items()})
            iota = []  # iota(e_k) = e_k(1) as a dict over the algebra basis
            for k in range(pres.dim):
                g = hom.element_as_graded(
                    0, Matrix(f, hom.dim(0), 1, {(k, 0): f.one}))
                col = g.component(0) @ unit_col
                iota.append({i: v for (i, _), v in col.entries.items()})
            mat = Matrix(f, pres.dim, pres.dim,
                         {(i, k): v for k, vec in enumerate(iota)
                          for i, v in vec.items()})
            assert mat.rank() == pres.dim  # evaluation at 1 is bijective
            # and it turns the end product into the opposite multiplication
            for i in range(pres.dim):
                for j in range(pres.dim):
                    prod = e.mul_basis(0, i, 0, j)
                    lhs: dict = {}
                    for k, c in prod.items():
                        for r2, v in iota[k].items():
                            s = f.add(lhs.get(r2, f.zero), f.mul(c, v))
                            if s == f.zero:
                                lhs.pop(r2, None)
                            else:
                                lhs[r2] = s
                    assert lhs == pres.mul(iota[j], iota[i]), (pres.name, i, j)

    def test_end_of_field_over_itself(self):
        pres = OrdinaryAlgebraPresentation(GF2, ["1"], {(0, 0): {0: 1}}, {0: 1})
        e, _ = end_dga(corpus.regular_module(pres))
        assert {d: e.dim(d) for d in e.degrees()} == {0: 1}
        assert e.mul_basis(0, 0, 0, 0) == {0: 1}

    def test_signed_composition_survives_verification(self):
        # the constructor checks associativity and Leibniz of the signed
        # opposite composition; odd-degree pieces make the signs load-bearing
        a = koszul_line_dga()
        p = odd_gen_module(a)
        e, _ = end_dga(p)
        hom = module_hom_complex(p, p)
        assert {d: e.dim(d) for d in e.degrees()} == dict(hom.dims)
        assert any(d % 2 for d in e.degrees())

    def test_underlying_complex_is_hom_complex(self):
        _, p2, _ = truncated_k_resolution(2, 2, 2)
        e, _ = end_dga(p2)
        assert e.underlying == module_hom_complex(p2, p2)

    def test_module_action_is_signed_evaluation(self):
        a = koszul_line_dga()
        p = odd_gen_module(a)
        e, p_as_e = end_dga(p)
        hom = module_hom_complex(p, p)
        f = a.field
        for t in e.degrees():
            for k in range(e.dim(t)):
                g = hom.element_as_graded(
                    t, Matrix(f, hom.dim(t), 1, {(k, 0): f.one}))
                for dm in p.degrees():
                    comp = g.component(dm)
                    sign = f.neg(f.one) if (t % 2 and dm % 2) else f.one
                    for im in range(p.dim(dm)):
                        want = {
                            r: f.mul(sign, v)
                            for (r, j), v in comp.entries.items() if j == im
                        }
                        assert p_as_e.act_basis(dm, im, t, k) == want

    def test_truncated_resolution_ext_table(self):
        # raw cohomology of the symmetric end complex at depth 8: the size
        # of the minimal resolution shows up as dim 1 in degrees 1..8, the
        # degree-0 piece carries one extra class from the truncation, and
        # each negative degree down to -8 carries one truncation class
        _, p8, _ = truncated_k_resolution(2, 2, 8)
        end8 = module_hom_complex(p8, p8)
        raw = {t: h_dim(end8, t) for t in range(-8, 9)}
        assert raw[0] == 2
        assert all(raw[t] == 1 for t in range(1, 9))
        assert all(raw[t] == 1 for t in range(-8, 0))
        # mapping to the one-deeper truncation clears degrees 0..8
        _, p9, _ = truncated_k_resolution(2, 2, 9)
        stab = module_hom_complex(p8, p9)
        assert all(h_dim(stab, t) == 1 for t in range(0, 9))


class TestCertPlumbing:
    def test_hom_cert_passthrough(self):
        _, p4, k = truncated_k_resolution(2, 2, 4)
        hom = module_hom_complex(p4, k)
        assert (hom.cert_lo, hom.cert_hi) == hom_cert_range(p4.underlying, k.underlying)
        assert (hom.cert_lo, hom.cert_hi) == (None, 4)
        assert hom.h_certified(3) and not hom.h_certified(4)

    def test_h_cert_override(self):
        _, p4, k = truncated_k_resolution(2, 2, 4)
        hom = module_hom_complex(p4, k, h_cert=(0, 8))
        assert hom.h_certified(8)        # asserted by the override
        assert not hom.h_certified(9)    # outside it, pieces not certified

    def test_h_cert_translates_under_shift(self):
        c = Complex(GF2, {0: 1}, {}, cert=(1, 0), h_cert=(0, 2))
        assert c.h_certified(2) and not c.h_certified(3)
        s = shift(c, 2)
        assert s.h_certified(0) and not s.h_certified(1)
