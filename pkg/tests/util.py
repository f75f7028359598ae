"""Shared test helpers: an independent naive rank oracle, seeded
random-complex generators whose cohomology is known by construction, and
the truncated minimal resolutions used across the module tests."""

import random

from dgforge import corpus
from dgforge.complexes import ChainMap, Complex, hom_complex
from dgforge.dgalgebra import DgModule, embed_ordinary, semifree_module
from dgforge.exactlin import QQ, Matrix


def truncated_k_resolution(p, n, depth):
    """Minimal semi-free resolution of the residue field over F_p[x]/(x^n),
    truncated at generator depth `depth` (generators z_0..z_depth, with
    d(z_i) alternating x and x^(n-1) so consecutive differentials vanish).
    Pieces are data-true in degrees >= -depth."""
    pres = corpus.truncated_poly(p, n)
    algebra = embed_ordinary(pres)
    gens = [(f"z{i}", -i) for i in range(depth + 1)]
    gen_diff = {}
    for i in range(1, depth + 1):
        e = 1 if i % 2 == 1 else n - 1
        gen_diff[i] = {i - 1: {e: 1}}
    mod = semifree_module(algebra, gens, gen_diff, cert=(-depth, None))
    k = DgModule(algebra, {0: ["k"]}, {((0, 0), (0, 0)): {0: 1}}, name="k")
    return algebra, mod, k

# ---------------------------------------------------------------------------
# independent oracle: textbook dense elimination over the same field tags
# ---------------------------------------------------------------------------


def naive_rank(m: Matrix) -> int:
    f = m.field
    rows = [[m[(i, j)] for j in range(m.ncols)] for i in range(m.nrows)]
    rank = 0
    for col in range(m.ncols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col] != f.zero:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = f.inv(rows[rank][col])
        rows[rank] = [f.mul(inv, x) for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != f.zero:
                c = rows[r][col]
                rows[r] = [f.sub(x, f.mul(c, y)) for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def naive_h_dim(c: Complex, n: int) -> int:
    return c.dim(n) - naive_rank(c.d(n)) - naive_rank(c.d(n - 1))


def mat(field, rows):
    return Matrix.from_rows(field, rows)


# ---------------------------------------------------------------------------
# seeded generators: disk/sphere sums conjugated by random invertibles,
# so the true cohomology is known by construction
# ---------------------------------------------------------------------------


def rand_scalar(rng, field):
    if field is QQ:
        return rng.randrange(-3, 4)
    return rng.randrange(field.char)


def rand_invertible(rng, field, n):
    if n == 0:
        return Matrix.identity(field, 0)
    lo = Matrix.identity(field, n)
    up = Matrix.identity(field, n)
    for i in range(n):
        for j in range(n):
            v = field.coerce(rand_scalar(rng, field))
            if v == field.zero:
                continue
            if i > j:
                lo.entries[(i, j)] = v
            elif i < j:
                up.entries[(i, j)] = v
    return lo @ up


def invert(g: Matrix) -> Matrix:
    return g.solve(Matrix.identity(g.field, g.nrows))


def rand_complex(rng, field, degree_lo=-2, degree_hi=2):
    """Random complex with known cohomology: conjugated disks and spheres."""
    dims: dict[int, int] = {}
    expected = {n: 0 for n in range(degree_lo, degree_hi + 2)}
    disk_slots: dict[int, list] = {}
    for _ in range(rng.randrange(4)):
        n = rng.randrange(degree_lo, degree_hi)  # disk: k -> k in degrees n, n+1
        a = dims[n] = dims.get(n, 0) + 1
        b = dims[n + 1] = dims.get(n + 1, 0) + 1
        disk_slots.setdefault(n, []).append((a - 1, b - 1))
    for _ in range(rng.randrange(3)):
        n = rng.randrange(degree_lo, degree_hi + 1)  # sphere in degree n
        dims[n] = dims.get(n, 0) + 1
        expected[n] += 1
    diff = {}
    for n, pairs in disk_slots.items():
        entries = {(b, a): field.one for a, b in pairs}
        diff[n] = Matrix(field, dims.get(n + 1, 0), dims.get(n, 0), entries)
    c = Complex(field, dims, diff)
    g = {n: rand_invertible(rng, field, d) for n, d in dims.items()}
    new_diff = {}
    for n in dims:
        if dims.get(n) and dims.get(n + 1):
            new = g[n + 1] @ c.d(n) @ invert(g[n])
            if not new.is_zero():
                new_diff[n] = new
    return Complex(field, dims, new_diff), expected


def rand_chain_map(rng, m: Complex, n: Complex):
    """Random degree-0 chain map, sampled from the cocycles of Hom(m, n)."""
    hom = hom_complex(m, n)
    if hom.dim(0) == 0:
        return ChainMap.zero(m, n)
    ker = hom.d(0).kernel_basis()
    if ker.ncols == 0:
        return ChainMap.zero(m, n)
    field = m.field
    coeffs = Matrix(
        field,
        ker.ncols,
        1,
        {(i, 0): field.coerce(rand_scalar(rng, field)) for i in range(ker.ncols)},
    )
    return hom.element_as_map(0, ker @ coeffs)
