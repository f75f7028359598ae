"""Bundled desk-scale algebras and modules used across tests and the CLI.

Every object here is tiny and artinian on purpose: small enough for the
brute-force oracle to check, rich enough to separate the derived
bi-commutator from the classical one.  All builders are deterministic.
"""

from __future__ import annotations

from .dgalgebra import DgModule, OrdinaryAlgebraPresentation, embed_ordinary
from .exactlin import Matrix, PrimeField, complement_basis


def truncated_poly(p: int, n: int) -> OrdinaryAlgebraPresentation:
    """F_p[x]/(x^n), basis 1, x, ..., x^(n-1); radical ideal (x)."""
    field = PrimeField(p)
    names = ["1"] + [f"x{'^' + str(i) if i > 1 else ''}" for i in range(1, n)]
    mult = {}
    for i in range(n):
        for j in range(n):
            if i + j < n:
                mult[(i, j)] = {i + j: 1}
    ideal = [{i: 1} for i in range(1, n)]
    return OrdinaryAlgebraPresentation(
        field, names, mult, {0: 1}, ideal=ideal, name=f"F{p}[x]/(x^{n})"
    )


def dual_numbers(p: int = 2) -> OrdinaryAlgebraPresentation:
    return truncated_poly(p, 2)


def square_zero_pair(p: int = 2) -> OrdinaryAlgebraPresentation:
    """F_p[x,y]/(x^2, xy, yx, y^2): 3-dimensional, radical squared = 0."""
    field = PrimeField(p)
    names = ["1", "x", "y"]
    mult = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}}
    ideal = [{1: 1}, {2: 1}]
    return OrdinaryAlgebraPresentation(
        field, names, mult, {0: 1}, ideal=ideal, name=f"F{p}[x,y]/(x,y)^2"
    )


def upper_triangular2(p: int = 2) -> OrdinaryAlgebraPresentation:
    """Upper triangular 2x2 matrices; noncommutative, radical = (e12)."""
    field = PrimeField(p)
    names = ["e11", "e12", "e22"]
    mult = {
        (0, 0): {0: 1},
        (0, 1): {1: 1},
        (1, 2): {1: 1},
        (2, 2): {2: 1},
    }
    ideal = [{1: 1}]
    return OrdinaryAlgebraPresentation(
        field, names, mult, {0: 1, 2: 1}, ideal=ideal, name=f"UT2(F{p})"
    )


def matrix2(p: int = 2) -> OrdinaryAlgebraPresentation:
    """Full 2x2 matrix algebra, basis e11, e12, e21, e22."""
    field = PrimeField(p)
    names = ["e11", "e12", "e21", "e22"]

    def idx(i, j):
        return 2 * i + j

    mult = {}
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    if j == k:
                        mult[(idx(i, j), idx(k, l))] = {idx(i, l): 1}
    return OrdinaryAlgebraPresentation(
        field, names, mult, {idx(0, 0): 1, idx(1, 1): 1}, name=f"M2(F{p})"
    )


def bundled_artinian() -> list:
    """The four artinian test algebras, each with its radical as the ideal."""
    return [
        dual_numbers(2),
        truncated_poly(3, 3),
        square_zero_pair(2),
        upper_triangular2(2),
    ]


def quotient_module(pres: OrdinaryAlgebraPresentation, ideal=None, name="") -> DgModule:
    """R/I as a right dg-module over R in degree 0, basis = canonical
    complement of the ideal, action by multiply-then-reduce."""
    if ideal is None:
        ideal = pres.ideal
    if ideal is None:
        raise ValueError("no ideal given")
    field = pres.field
    n = pres.dim
    span = Matrix(
        field, n, len(ideal), {(i, j): v for j, vec in enumerate(ideal) for i, v in vec.items()}
    )
    comp = complement_basis(span)
    k = comp.ncols
    both = span.hstack(comp)
    reps = [comp.column_vector(j) for j in range(k)]
    algebra = embed_ordinary(pres)
    action = {}
    for im in range(k):
        rep = {r: v for r, v in enumerate(reps[im]) if v != field.zero}
        for ia in range(n):
            prod = pres.mul(rep, {ia: field.one})
            col = Matrix(field, n, 1, {(r, 0): v for r, v in prod.items()})
            sol = both.solve(col)
            if sol is None:
                raise ValueError("reduction failed; is the span a right ideal?")
            vec = {
                r - span.ncols: v
                for (r, _), v in sol.entries.items()
                if r >= span.ncols
            }
            if vec:
                action[((0, im), (0, ia))] = vec
    names = {0: [f"q{i}" for i in range(k)]}
    return DgModule(algebra, names, action, name=name or f"{pres.name}/ideal")


def residue_module(pres: OrdinaryAlgebraPresentation, name="") -> DgModule:
    """R modulo its bundled radical ideal."""
    return quotient_module(pres, pres.ideal, name=name or "residue")


def regular_module(pres: OrdinaryAlgebraPresentation, name="") -> DgModule:
    """R as a right module over itself, in degree 0."""
    algebra = embed_ordinary(pres)
    action = {((0, i), (0, j)): dict(vec) for (i, j), vec in pres.mult.items()}
    return DgModule(algebra, {0: list(pres.names)}, action, name=name or pres.name)


def dual_regular_module(pres: OrdinaryAlgebraPresentation, name="") -> DgModule:
    """D(R) = linear dual of R with right action (f.a)(b) = f(ab), degree 0."""
    algebra = embed_ordinary(pres)
    field = pres.field
    n = pres.dim
    action = {}
    for j in range(n):       # dual basis f_j
        for c in range(n):   # acting element a_c
            vec = {}
            for i in range(n):
                # component along f_i is f_j(a_c b_i)
                v = pres.mult.get((c, i), {}).get(j)
                if v:
                    vec[i] = v
            if vec:
                action[((0, j), (0, c))] = vec
    names = {0: [f"d{nm}" for nm in pres.names]}
    return DgModule(algebra, names, action, name=name or f"D({pres.name})")


def column_module(p: int = 2, name="") -> DgModule:
    """Row vectors F_p^2 as a right module over M2(F_p)."""
    pres = matrix2(p)
    algebra = embed_ordinary(pres)
    action = {}
    for i in range(2):
        for j in range(2):
            # e_k . E_ij = delta(k, i) e_j
            action[((0, i), (0, 2 * i + j))] = {j: 1}
    return DgModule(algebra, {0: ["v0", "v1"]}, action, name=name or f"F{p}^2")
