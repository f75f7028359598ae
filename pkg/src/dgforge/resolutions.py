"""Semi-free resolutions and dual-module coresolutions, window-bounded.

The resolver kills comparison-cone cohomology classes degree by degree:
a class (x, p) in cone(P -> m) dies when a fresh generator z is adjoined
with aug(z) = x and d(z) = -p.  All representative choices go through
canonical reduced bases, so identical inputs rebuild identical towers.

Truncation honesty: a window-bounded resolution records the degree above
which its generator list is final; Hom complexes built from it receive an
explicit certified-cohomology interval derived from that bound (the
stored Hom complex literally agrees with the untruncated one in low
degrees, since missing deep generators only contribute high Hom degrees).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .complexes import ChainMap, Cohomology, Window, cone, h_dim
from .dgalgebra import (
    DgAlgebra,
    DgModule,
    module_hom_complex,
    semifree_module,
)
from .exactlin import Matrix, complement_basis


class GeneratorCapError(RuntimeError):
    """Resolution growth hit the configured generator cap."""


def generator_cap() -> int:
    return int(os.environ.get("DGFORGE_GENCAP", "512"))


def _window_bounds(window):
    """Accept a Window (data trusted on its padded range) or a (lo, hi) pair."""
    if isinstance(window, Window):
        return window.padded_lo, window.padded_hi
    lo, hi = window
    if lo is None or hi is None or lo > hi:
        raise ValueError(f"resolution window must be a finite interval, got {window!r}")
    return lo, hi


def _lead(vec: dict):
    """First nonzero coordinate in canonical index order."""
    if not vec:
        return None
    i = min(vec)
    return i, vec[i]


def augmented_local_radical(a: DgAlgebra):
    """Basis of the radical complement-of-unit when a is augmented local.

    Returns the list of non-unit basis keys (deg, idx), or None when the
    algebra is not visibly local: the unit must be a single basis element
    and the span of the remaining basis must be a differential ideal.
    """
    items = sorted(a.unit.items())
    if len(items) != 1 or items[0][1] != a.field.one:
        return None
    i0 = items[0][0]
    rad = [(d, i) for d in a.degrees() for i in range(a.dim(d)) if (d, i) != (0, i0)]
    for d1, i1 in rad:
        for d2, i2 in rad:
            if d1 + d2 == 0 and a.mul_basis(d1, i1, d2, i2).get(i0):
                return None
        if d1 == -1 and a.d_elem(d1, {i1: a.field.one}).get(i0):
            return None
    return rad


@dataclass
class SemiFreeResolution:
    """A window-certified semi-free approximation P -> module."""

    module: DgModule
    p: DgModule
    generators: list                 # (name, degree, stage)
    diff_coeffs: dict                # gen index -> {earlier gen index: coeff dict}
    augmentation: ChainMap
    window: tuple                    # exactness certified on [lo, hi]
    gen_complete_above: int          # generator list is final in degrees >= this
    minimal: bool
    notes: list = field(default_factory=list)

    def generator_counts(self) -> dict:
        out: dict = {}
        for _, deg, _ in self.generators:
            out[deg] = out.get(deg, 0) + 1
        return out


def _evaluate_on_generators(p: DgModule, m: DgModule, values: dict) -> ChainMap:
    """The module map p -> m sending generator gi to values[gi] (coords of m
    at the generator's degree); the ChainMap constructor verifies that the
    values are compatible with the stored generator differentials."""
    f = p.field
    comps: dict = {}
    for dm, entries in p.layout.items():
        rows = m.dim(dm)
        if not rows or not p.dim(dm):
            continue
        mat_entries: dict = {}
        for k, (gi, da, ia) in enumerate(entries):
            g = p.generators[gi][1]
            out = m.act(g, values.get(gi, {}), da, {ia: f.one})
            for r, v in out.items():
                mat_entries[(r, k)] = v
        mtx = Matrix(f, rows, p.dim(dm), mat_entries)
        if not mtx.is_zero():
            comps[dm] = mtx
    return ChainMap(p.underlying, m.underlying, comps, 0)


class _SubmoduleSpan:
    """Per-degree span of a submodule generated by seed elements, saturated
    under the algebra action; membership via canonical solves."""

    def __init__(self, m: DgModule):
        self.m = m
        self.spans: dict = {}

    def _absorb(self, deg: int, col: Matrix) -> bool:
        cur = self.spans.get(deg)
        if col.is_zero():
            return False
        if cur is None:
            self.spans[deg] = col
            return True
        if cur.solve(col) is not None:
            return False
        self.spans[deg] = cur.hstack(col)
        return True

    def add_and_saturate(self, deg: int, coords: dict):
        m = self.m
        f = m.field
        col = Matrix(f, m.dim(deg), 1, {(i, 0): v for i, v in coords.items()})
        fresh = [(deg, col)] if self._absorb(deg, col) else []
        while fresh:
            d0, block = fresh.pop()
            for da in m.algebra.degrees():
                if not m.dim(d0 + da):
                    continue
                for ia in range(m.algebra.dim(da)):
                    moved = m.action_matrix(d0, da, {ia: f.one}) @ block
                    for j in range(moved.ncols):
                        c = Matrix(f, moved.nrows, 1,
                                   {(i, 0): v for (i, jj), v in moved.entries.items() if jj == j})
                        if self._absorb(d0 + da, c):
                            fresh.append((d0 + da, c))

    def contains(self, deg: int, coords: dict) -> bool:
        col = Matrix(self.m.field, self.m.dim(deg), 1,
                     {(i, 0): v for i, v in coords.items()})
        if col.is_zero():
            return True
        cur = self.spans.get(deg)
        return cur is not None and cur.solve(col) is not None


def _cocycle_generators(m: DgModule) -> list:
    """Greedy generating seeds among cocycles, canonical degree-then-basis
    order; elements the cocycles fail to reach are picked up later by
    cone-class or surjectivity generators."""
    span = _SubmoduleSpan(m)
    out = []
    for deg in m.degrees():
        kb = m.underlying.d(deg).kernel_basis()
        for j in range(kb.ncols):
            coords = {i: v for (i, jj), v in kb.entries.items() if jj == j}
            if not span.contains(deg, coords):
                out.append((deg, coords))
                span.add_and_saturate(deg, coords)
    return out


def _nakayama_generators(m: DgModule, rad: list) -> list:
    """Generators as the canonical complement of m * radical, per degree.
    Requires a zero differential on m (all elements are cocycles)."""
    f = m.field
    out = []
    for deg in m.degrees():
        cols = None
        for da, ia in rad:
            src = deg - da
            if not m.dim(src):
                continue
            block = m.action_matrix(src, da, {ia: f.one})
            for j in range(block.ncols):
                c = Matrix(f, m.dim(deg), 1,
                           {(i, 0): v for (i, jj), v in block.entries.items() if jj == j})
                if c.is_zero():
                    continue
                if cols is None:
                    cols = c
                elif cols.solve(c) is None:
                    cols = cols.hstack(c)
        if cols is None:
            cols = Matrix(f, m.dim(deg), 0)
        comp = complement_basis(cols)
        for j in range(comp.ncols):
            out.append((deg, {i: v for (i, jj), v in comp.entries.items() if jj == j}))
    return out


def semifree_resolve(m: DgModule, window, minimal: bool = False) -> SemiFreeResolution:
    """Build P -> m, semi-free with exactness certified on the window.

    Stage 0 mirrors m's own generators when m is generator-presented;
    otherwise it seeds with a canonical generating set (the complement of
    m*radical under the minimal flag over a visibly local algebra, greedy
    cocycle seeds otherwise).  Later stages kill comparison-cone classes
    top-down; a final pass restores degreewise surjectivity with
    contractible generator pairs where needed (skipped when minimal).
    """
    lo, hi = _window_bounds(window)
    alg = m.algebra
    f = m.field
    cap = generator_cap()
    notes: list = []

    rad = augmented_local_radical(alg) if minimal else None
    minimal_ok = bool(minimal and rad is not None)
    if minimal and rad is None:
        notes.append("algebra is not visibly augmented local; minimal flag dropped")

    gens: list = []          # (name, degree, stage)
    gen_diff: dict = {}
    aug_values: dict = {}

    def adjoin(deg: int, stage: int, coeffs: dict, value: dict):
        if len(gens) >= cap:
            raise GeneratorCapError(
                f"resolution needs more than {cap} generators "
                f"(set DGFORGE_GENCAP to raise the cap)"
            )
        idx = len(gens)
        gens.append((f"g{idx}", deg, stage))
        if coeffs:
            gen_diff[idx] = coeffs
        if value:
            aug_values[idx] = value
        return idx

    if hasattr(m, "generators"):
        for gi, (gname, g) in enumerate(m.generators):
            adjoin(g, 0, dict(m.gen_diff.get(gi, {})), dict(m.gen_elements[gi]))
    elif minimal_ok and not m.underlying.diff:
        for deg, coords in _nakayama_generators(m, rad):
            adjoin(deg, 0, {}, coords)
    else:
        if minimal_ok:
            notes.append("module differential is nonzero; stage 0 uses greedy "
                         "cocycle seeds instead of a radical complement")
        for deg, coords in _cocycle_generators(m):
            adjoin(deg, 0, {}, coords)

    def realize(cert=(None, None)):
        p = semifree_module(alg, [(n, d) for n, d, _ in gens], gen_diff, cert=cert)
        return p, _evaluate_on_generators(p, m, aug_values)

    stage = 0
    while True:
        p, aug = realize()
        c = cone(aug)
        target = None
        for n in range(hi, lo - 1, -1):
            if not c.h_certified(n):
                raise ValueError(
                    f"window degree {n} is not certifiable on the comparison cone "
                    f"(target trusted on [{m.underlying.cert_lo}, {m.underlying.cert_hi}])"
                )
            if h_dim(c, n):
                target = n
                break
        if target is None:
            break
        stage += 1
        coh = Cohomology(c, target, require_certified=False)
        split = m.dim(target)
        for col in range(coh.reps.ncols):
            x = {i: v for (i, j), v in coh.reps.entries.items()
                 if j == col and i < split}
            pvec = {i - split: v for (i, j), v in coh.reps.entries.items()
                    if j == col and i >= split}
            led = _lead(pvec) or _lead(x)
            scale = f.inv(led[1])
            if pvec:
                scale = f.neg(scale)
            x = {i: f.mul(scale, v) for i, v in x.items()}
            coeffs: dict = {}
            layout = p.layout.get(target + 1, [])
            for pos, v in pvec.items():
                gj, da, ia = layout[pos]
                coeffs.setdefault(gj, {})[ia] = f.neg(f.mul(scale, v))
            adjoin(target, stage, coeffs, x)

    # restore degreewise surjectivity on the window with contractible pairs
    if not minimal_ok:
        while True:
            p, aug = realize()
            missing = None
            for n in range(hi, lo - 1, -1):
                if not m.dim(n):
                    continue
                comp = aug.component(n)
                if comp.rank() == m.dim(n):
                    continue
                im = comp.image_basis()
                for i in range(m.dim(n)):
                    e = Matrix(f, m.dim(n), 1, {(i, 0): f.one})
                    if im.ncols == 0 or im.solve(e) is None:
                        missing = (n, {i: f.one})
                        break
                if missing:
                    break
            if missing is None:
                break
            stage += 1
            n, coords = missing
            hit = adjoin(n, stage, {}, {})
            de = m.d_elem(n, coords)
            if de:
                adjoin(n, stage, {}, de)  # cocycle d(e), hit first
                gen_diff[hit] = {len(gens) - 1: dict(alg.unit)}
            aug_values[hit] = coords
            gens[hit] = (f"g{hit}", n, stage)

    a_max = max(alg.degrees())
    p, aug = realize(cert=(lo + a_max, None))

    if minimal_ok:
        unit_idx = min(alg.unit)
        for idx, coeffs in gen_diff.items():
            for gj, vec in coeffs.items():
                adeg = gens[idx][1] + 1 - gens[gj][1]
                if adeg == 0 and vec.get(unit_idx):
                    notes.append(f"generator {gens[idx][0]} has a unit-coefficient "
                                 "differential; result is not minimal")
                    minimal_ok = False

    for idx, coeffs in gen_diff.items():
        for gj in coeffs:
            if gj >= idx:
                raise AssertionError("generator differential not filtration-compatible")

    return SemiFreeResolution(
        module=m,
        p=p,
        generators=list(gens),
        diff_coeffs={i: {j: dict(v) for j, v in c.items()} for i, c in gen_diff.items()},
        augmentation=aug,
        window=(lo, hi),
        gen_complete_above=lo,
        minimal=minimal_ok,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Hom complexes with honest certification windows
# ---------------------------------------------------------------------------


def resolution_hom(res: SemiFreeResolution, n: DgModule, method: str = "auto"):
    """Hom from the realized resolution into a fully stored module.

    Generators missing below the window only contribute Hom degrees
    >= min_support(n) - gen_complete_above + 1, so the stored complex
    literally equals the untruncated one below that; cohomology is
    certified one degree lower still.
    """
    if (n.underlying.cert_lo, n.underlying.cert_hi) != (None, None):
        raise ValueError("target module must be fully trusted")
    sup = n.underlying.support()
    if sup is None:
        return module_hom_complex(res.p, n, method)
    h_hi = sup[0] - res.gen_complete_above - 1
    return module_hom_complex(res.p, n, method, h_cert=(None, h_hi))


def stabilized_resolution_hom(res: SemiFreeResolution, deeper: SemiFreeResolution,
                              method: str = "auto"):
    """Hom from a resolution into a strictly deeper resolution of the same
    module.

    Mapping a depth-limited minimal resolution into a deeper one clears
    the truncation classes of the symmetric end complex in degrees
    0 .. depth-1; the tests validate this window against the defining
    equivariance route and a dense-arithmetic oracle at small depth.
    """
    if res.module != deeper.module:
        raise ValueError("stabilized Hom needs two resolutions of the same module")
    if not (res.minimal and deeper.minimal):
        raise ValueError("stabilized Hom window is only certified for minimal resolutions")
    if deeper.gen_complete_above > res.gen_complete_above - 1:
        raise ValueError("second resolution must extend at least one degree deeper")
    h_hi = -res.gen_complete_above - 1
    return module_hom_complex(res.p, deeper.p, method, h_cert=(0, h_hi))


# ---------------------------------------------------------------------------
# dual module and coresolutions by its copies
# ---------------------------------------------------------------------------


def dual_module(r: DgAlgebra, name: str = "") -> DgModule:
    """The linear dual of a degree-0 algebra as a right module over it,
    with action (f.a)(b) = f(ab)."""
    if r.degrees() != [0]:
        raise ValueError("dual_module needs an algebra concentrated in degree 0")
    n = r.dim(0)
    action: dict = {}
    for j in range(n):
        for c in range(n):
            vec = {}
            for i in range(n):
                v = r.mul_basis(0, c, 0, i).get(j)
                if v:
                    vec[i] = v
            if vec:
                action[((0, j), (0, c))] = vec
    names = {0: [f"{b}^*" for b in r.basis[0]]}
    return DgModule(r, names, action, {}, name=name or (f"D({r.name})" if r.name else ""))


def module_direct_sum_copies(j: DgModule, copies: int, name: str = "") -> DgModule:
    """Direct sum of `copies` copies of j, block layout copy-major."""
    alg = j.algebra
    basis = {
        d: [f"{b}@{c}" for c in range(copies) for b in j.basis[d]]
        for d in j.degrees()
    } if copies else {}
    action: dict = {}
    for ((dm, im), (da, ia)), vec in j.action.items():
        for c in range(copies):
            off_src = c * j.dim(dm)
            off_tgt = c * j.dim(dm + da)
            action[((dm, im + off_src), (da, ia))] = {
                k + off_tgt: v for k, v in vec.items()
            }
    diff: dict = {}
    for d, mtx in j.diff.items():
        entries = {}
        for (r, k), v in mtx.entries.items():
            for c in range(copies):
                entries[(r + c * j.dim(d + 1), k + c * j.dim(d))] = v
        diff[d] = Matrix(j.field, copies * j.dim(d + 1), copies * j.dim(d), entries)
    return DgModule(alg, basis, action, diff, name=name)


@dataclass
class CoresolutionTower:
    """m embedded in a finite tower of direct sums of a fixed module j.

    terms[i] is j^(copies[i]); deltas[i] : terms[i] -> terms[i+1] factors as
    embeddings[i+1] after projections[i]; sections[i] splits projections[i]
    degreewise.  cokernels[i] is the i-th quotient module (cokernels[0] is
    the quotient of the augmentation embedding).
    """

    module: DgModule
    j: DgModule
    terms: list
    copies: list
    embeddings: list      # cokernels[i-1] (m for i = 0) -> terms[i]
    projections: list     # terms[i] -> cokernels[i]
    sections: list        # cokernels[i] -> terms[i], right inverse of projection
    cokernels: list
    deltas: list          # terms[i] -> terms[i+1]

    @property
    def augmentation(self) -> Matrix:
        return self.embeddings[0]

    def as_complex(self):
        from .complexes import Complex

        dims = {i: t.dim(0) for i, t in enumerate(self.terms)}
        diff = {i: self.deltas[i] for i in range(len(self.deltas))}
        return Complex(self.module.field, dims, diff)


def _hom_basis_maps(m: DgModule, j: DgModule) -> list:
    hom = module_hom_complex(m, j, "equivariance")
    f = m.field
    out = []
    for k in range(hom.dim(0)):
        g = hom.element_as_graded(0, Matrix(f, hom.dim(0), 1, {(k, 0): f.one}))
        out.append(g.component(0))
    return out


def _embed_in_copies(m: DgModule, j: DgModule):
    """Greedy injective map m -> j^b from canonical Hom-basis maps, choosing
    at each step the map that shrinks the common kernel the most."""
    f = m.field
    dim = m.dim(0)
    if dim == 0:
        return Matrix(f, 0, 0), 0
    if m == j:
        return Matrix.identity(f, dim), 1
    candidates = _hom_basis_maps(m, j)
    chosen: list = []
    stack = Matrix(f, 0, dim)
    while stack.ncols - stack.rank() if False else True:
        ker = stack.kernel_basis() if chosen else Matrix.identity(f, dim)
        if ker.ncols == 0:
            break
        best = None
        for idx, cand in enumerate(candidates):
            grown = stack.vstack(cand) if chosen else cand
            k = grown.kernel_basis().ncols
            if k < ker.ncols and (best is None or k < best[0]):
                best = (k, idx)
        if best is None:
            witness = {i: v for (i, j2), v in ker.entries.items() if j2 == 0}
            names = [m.basis[0][i] for i in sorted(witness)]
            raise ValueError(
                f"module does not embed in copies of {j.name or 'j'}: "
                f"socle element supported on {names} meets every map's kernel"
            )
        chosen.append(candidates[best[1]])
        stack = stack.vstack(candidates[best[1]]) if len(chosen) > 1 else candidates[best[1]]
    lam = Matrix(f, 0, dim)
    for c in chosen:
        lam = lam.vstack(c)
    return lam, len(chosen)


def _quotient_by_image(j_term: DgModule, lam: Matrix, tag: str):
    """Cokernel of an injective module map into j_term, with the canonical
    complement transversal; returns (module, projection, section)."""
    f = j_term.field
    dim = j_term.dim(0)
    comp = complement_basis(lam)
    full = lam.hstack(comp)
    inv = full.solve(Matrix.identity(f, dim))
    proj = Matrix(f, comp.ncols, dim,
                  {(i - lam.ncols, k): v for (i, k), v in inv.entries.items()
                   if i >= lam.ncols})
    qdim = comp.ncols
    action: dict = {}
    alg = j_term.algebra
    for ia in range(alg.dim(0)):
        act = proj @ j_term.action_matrix(0, 0, {ia: f.one}) @ comp
        for (r, k), v in act.entries.items():
            action.setdefault(((0, k), (0, ia)), {})[r] = v
    names = {0: [f"{tag}{i}" for i in range(qdim)]} if qdim else {}
    mod = DgModule(alg, names, action, {}, name=tag)
    return mod, proj, comp


def coresolve_by(m: DgModule, j: DgModule, length: int) -> CoresolutionTower:
    """Embed m into a tower of direct sums of j with recorded splittings.

    Handles degree-0 modules over a degree-0 algebra (the dual-module
    coresolutions used downstream); the tower stops early when a cokernel
    vanishes.  Cohomology-level exactness of the finished tower is
    verified before returning.
    """
    if m.algebra != j.algebra:
        raise ValueError("modules over different algebras")
    if m.algebra.degrees() != [0] or set(m.degrees()) - {0} or set(j.degrees()) - {0}:
        raise ValueError("coresolution builder handles degree-0 modules only")
    terms, copies, embeddings, projections, sections, cokernels, deltas = \
        [], [], [], [], [], [], []
    cur = m
    for step in range(length + 1):
        lam, b = _embed_in_copies(cur, j)
        term = module_direct_sum_copies(j, b, name=f"{j.name or 'J'}^{b}")
        terms.append(term)
        copies.append(b)
        embeddings.append(lam)
        if step > 0:
            deltas.append(lam @ projections[-1])
        quot, proj, sect = _quotient_by_image(term, lam, tag=f"q{step}_")
        projections.append(proj)
        sections.append(sect)
        cokernels.append(quot)
        cur = quot
        if quot.dim(0) == 0:
            break
    tower = CoresolutionTower(m, j, terms, copies, embeddings, projections,
                              sections, cokernels, deltas)
    _verify_tower_exactness(tower)
    return tower


def _verify_tower_exactness(t: CoresolutionTower):
    c = t.as_complex()
    lam0 = t.embeddings[0]
    if lam0.rank() != t.module.dim(0):
        raise AssertionError("augmentation is not injective")
    if len(t.deltas) and not (t.deltas[0] @ lam0).is_zero():
        raise AssertionError("augmentation does not map into ker(delta^0)")
    for i in range(len(t.terms)):
        want = t.module.dim(0) if i == 0 else t.deltas[i - 1].rank()
        ker = c.d(i).kernel_basis().ncols if i < len(t.deltas) else None
        if ker is not None and ker != want:
            raise AssertionError(f"tower not exact at term {i}: ker {ker} != im {want}")
