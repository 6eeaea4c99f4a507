"""Cohomology of resolving algebras, derivation complexes and cotangent complexes.

Every complex here is a bounded window of free modules over a presented
ring with ring-linear differentials (:class:`ChainComplexF`).  Cohomology
modules are returned in cokernel form over ``h^0`` together with the cycles
representing their generators, so classes of explicit cocycles can be
computed (:meth:`HModule.class_of`).
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra.constructions import is_free_extension, new_generators
from .algebra.graded import AlgebraError, Element, FreeGradedAlgebra, Mono
from .algebra.morphisms import DgMorphism
from .algebra.strands import (basis, d_images, degree0_presented, degree0_ring, from_vector,
                              require_resolving, to_vector)
from .commalg import ModuleMap, ModulePresentation, Poly, PolyRing, PresentedRing, RingMap
from .commalg.groebner import ONE, ZERO, Vector, add_into
from .report import Report


# -- complexes ------------------------------------------------------------

class ChainComplexF:
    """Bounded cochain complex of free modules ``ring^{ranks[n]}``.

    ``maps[n]`` lists the images of the basis of degree ``n`` in degree
    ``n+1``.  Degrees outside ``[lo, hi]`` are zero.
    """

    def __init__(self, ring: PresentedRing, ranks: Dict[int, int], maps: Dict[int, List[Vector]],
                 labels: Dict[int, List[str]] | None = None, window: Tuple[int, int] | None = None):
        self.ring = ring
        self.ranks = dict(ranks)
        self.maps = dict(maps)
        self.labels = labels or {}
        if window is None:
            degs = [n for n, r in ranks.items() if r] or [0]
            window = (min(degs), max(degs))
        self.window = window
        self._dmaps: Dict[int, ModuleMap] = {}
        self._hcache: Dict[tuple, "HModule"] = {}

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def differential(self, n: int) -> ModuleMap:
        m = self._dmaps.get(n)
        if m is None:
            src = ModulePresentation.free(self.ring, self.rank(n))
            tgt = ModulePresentation.free(self.ring, self.rank(n + 1))
            imgs = self.maps.get(n) or [{} for _ in range(self.rank(n))]
            m = ModuleMap(src, tgt, imgs)
            self._dmaps[n] = m
        return m

    def matrix(self, n: int) -> List[List[Poly]]:
        """Rows indexed by degree ``n+1`` basis, columns by degree ``n`` basis."""
        rows = [[self.ring.ambient.zero() for _ in range(self.rank(n))] for _ in range(self.rank(n + 1))]
        for j, v in enumerate(self.maps.get(n) or []):
            for (p, e), c in v.items():
                rows[p][j] = rows[p][j] + Poly(self.ring.ambient, {e: c})
        return [[self.ring.reduce(x) for x in row] for row in rows]

    def check(self) -> bool:
        """``d o d = 0`` on every basis element of the window."""
        lo, hi = self.window
        for n in range(lo, hi):
            dn1 = self.differential(n + 1)
            for v in self.maps.get(n) or []:
                w = dn1.apply(v) if v else {}
                if not dn1.target.element_is_zero(w):
                    return False
        return True

    def cohomology(self, n: int, over: PresentedRing | None = None) -> "HModule":
        """``ker d_n / im d_{n-1}`` in cokernel form over ``over`` (default: the complex ring).

        ``over`` must share the ambient polynomial ring and annihilate the
        cohomology (true for ``h^0`` acting on the strands of a resolving
        algebra).
        """
        over = over or self.ring
        key = (n, over.relations)
        hit = self._hcache.get(key)
        if hit is not None:
            return hit
        r = self.rank(n)
        if r == 0:
            h = HModule(over, [], [], self, n, None)
            self._hcache[key] = h
            return h
        dn = self.differential(n)
        cycles = [dict(v) for v in dn.kernel().gens] if self.rank(n + 1) else [
            {(p, self.ring.ambient.zero_exp): ONE} for p in range(r)]
        cycles = [c for c in cycles if c]
        prev = self.maps.get(n - 1) or []
        boundaries = ModulePresentation(self.ring, r, None, list(prev))
        if not cycles:
            h = HModule(over, [], [], self, n, None)
            self._hcache[key] = h
            return h
        phi = ModuleMap(ModulePresentation.free(self.ring, len(cycles)), boundaries, cycles)
        rels = phi.kernel_coefficients()
        h = HModule(over, rels, cycles, self, n, phi)
        self._hcache[key] = h
        return h

    def is_acyclic(self) -> bool:
        lo, hi = self.window
        return all(self.cohomology(n).is_zero() for n in range(lo, hi + 1))

    def to_dict(self) -> dict:
        lo, hi = self.window
        return {
            "window": [lo, hi],
            "ranks": {str(n): self.rank(n) for n in range(lo, hi + 1)},
            "differentials": {str(n): [[str(x) for x in row] for row in self.matrix(n)]
                              for n in range(lo, hi) if self.rank(n) and self.rank(n + 1)},
            "labels": {str(n): v for n, v in self.labels.items()},
        }


class HModule(ModulePresentation):
    """Cohomology module in cokernel form plus representing cycles."""

    def __init__(self, ring: PresentedRing, relations, cycles, complex_: ChainComplexF, degree: int,
                 phi: Optional[ModuleMap]):
        super().__init__(ring, len(cycles), None, relations)
        self.cycles = cycles
        self.complex = complex_
        self.degree = degree
        self._phi = phi

    def class_of(self, v: Vector) -> Optional[Vector]:
        """Coefficients of the class of cycle ``v`` over the generators, ``None`` if not a cycle."""
        if not v:
            return {}
        if self._phi is None:
            return None
        return self._phi.preimage(v)

    def is_boundary(self, v: Vector) -> bool:
        c = self.class_of(v)
        return c is not None and self.element_is_zero(c)


# -- resolving algebras ---------------------------------------------------

def default_window(A: FreeGradedAlgebra) -> Tuple[int, int]:
    return (-len(A.negative_names()) - 1, 0)


def strand_complex(A: FreeGradedAlgebra, window: Tuple[int, int] | None = None) -> ChainComplexF:
    """Degreewise pieces ``A^n`` over the degree-0 polynomial ring."""
    require_resolving(A)
    lo, hi = window or default_window(A)
    hi = min(hi, 0)
    ranks, maps, labels = {}, {}, {}
    for n in range(lo - 1, hi + 1):
        b = basis(A, n)
        ranks[n] = len(b)
        labels[n] = [_mono_label(A, m) for m in b]
        if n < hi or n < 0:
            maps[n] = d_images(A, n)
    ranks[hi + 1] = len(basis(A, hi + 1)) if hi < 0 else 0
    return ChainComplexF(degree0_presented(A), ranks, maps, labels, (lo, hi))


def _mono_label(A: FreeGradedAlgebra, m: Mono) -> str:
    from .algebra.graded import format_monomial
    return format_monomial(A, m) or "1"


def element_to_poly(x: Element) -> Poly:
    """Degree-0 element as a polynomial in the degree-0 generators."""
    A = x.algebra
    P = degree0_ring(A)
    v = to_vector(x, 0) if not x.is_zero() else {}
    return Poly(P, {e: c for (_, e), c in v.items()})


def poly_to_element(A: FreeGradedAlgebra, p: Poly) -> Element:
    return from_vector(A, {(0, e): c for e, c in degree0_ring(A)(p).terms.items()}, 0)


def h0_ring(A: FreeGradedAlgebra) -> PresentedRing:
    """``Q[degree-0 generators] / (d of degree -1 generators)``."""
    cache = A.__dict__.setdefault("_strand_cache", {})
    if "h0" not in cache:
        require_resolving(A)
        rels = [element_to_poly(A.differential_of(g.name)) for g in A.generators if g.degree == -1]
        cache["h0"] = PresentedRing(degree0_ring(A), [r for r in rels if r])
    return cache["h0"]


def _strands(A: FreeGradedAlgebra) -> ChainComplexF:
    cache = A.__dict__.setdefault("_strand_cache", {})
    cx = cache.get("cx")
    if cx is None:
        cx = ChainComplexF(degree0_presented(A), {}, {})
        cache["cx"] = cx
    return cx


def _ensure_degree(A: FreeGradedAlgebra, n: int) -> ChainComplexF:
    cx = _strands(A)
    for k in (n - 1, n, n + 1):
        if k not in cx.ranks:
            cx.ranks[k] = len(basis(A, k)) if k <= 0 else 0
        if k not in cx.maps and k <= 0:
            cx.maps[k] = d_images(A, k) if k < 0 else [{} for _ in basis(A, 0)]
    lo = min(cx.ranks)
    cx.window = (lo, 0)
    return cx


def hn_module(A: FreeGradedAlgebra, n: int) -> HModule:
    """``h^n(A)`` as a module over ``h0_ring(A)``."""
    R = h0_ring(A)
    if n > 0:
        return HModule(R, [], [], _strands(A), n, None)
    cx = _ensure_degree(A, n)
    return cx.cohomology(n, over=R)


def cocycle_class(A: FreeGradedAlgebra, c: Element) -> Optional[Vector]:
    n = c.degree() if not c.is_zero() else 0
    h = hn_module(A, n)
    return h.class_of(to_vector(c, n) if not c.is_zero() else {})


def is_exact(c: Element) -> bool:
    """Cocycle ``c`` is a coboundary."""
    if c.is_zero():
        return True
    n = c.degree()
    if n > 0:
        return False
    h = hn_module(c.algebra, n)
    return h.is_boundary(to_vector(c, n))


def h0_map(phi: DgMorphism) -> RingMap:
    """Ring map ``h^0(B) -> h^0(A)`` induced by ``phi: B -> A``."""
    B, A = phi.source, phi.target
    imgs = {}
    for x in B.degree_zero_names():
        imgs[x] = element_to_poly(phi.images[x])
    return RingMap(h0_ring(B), h0_ring(A), imgs)


def hn_map(phi: DgMorphism, n: int) -> ModuleMap:
    """Induced map ``h^n(B) -> h^n(A)``, semilinear over :func:`h0_map`."""
    B, A = phi.source, phi.target
    hb, ha = hn_module(B, n), hn_module(A, n)
    images = []
    for cyc in hb.cycles:
        img = phi(from_vector(B, cyc, n))
        cls = ha.class_of(to_vector(img, n) if not img.is_zero() else {})
        if cls is None:
            raise AlgebraError("morphism does not send cycles to cycles")
        images.append(cls)
    return ModuleMap(hb, ha, images, h0_map(phi))


# -- derivations ----------------------------------------------------------

def _relative(C: FreeGradedAlgebra, B: FreeGradedAlgebra):
    if not is_free_extension(C, B):
        raise AlgebraError("B is not a free extension of C")
    return new_generators(C, B)


def apply_derivation(f: DgMorphism, values: Dict[str, Element], n: int, x: Element) -> Element:
    """``D(x)`` for the degree-``n`` ``f``-derivation with ``D(g) = values.get(g, 0)``."""
    B, A = f.source, f.target
    memo: Dict[Mono, Element] = {}

    def dm(m: Mono) -> Element:
        hit = memo.get(m)
        if hit is not None:
            return hit
        first = next((i for i, k in enumerate(m) if k), None)
        if first is None:
            res = A.zero()
        else:
            rest = list(m)
            rest[first] -= 1
            rest = tuple(rest)
            g = B.generators[first]
            dg = values.get(g.name)
            res = A.zero()
            if dg is not None and not dg.is_zero():
                res = dg * f(B.monomial(rest))
            tail = dm(rest)
            if not tail.is_zero():
                sign = -1 if (n * g.degree) % 2 else 1
                res = res + f.images[g.name] * tail * sign
        memo[m] = res
        return res

    out = A.zero()
    for m, c in x.terms.items():
        out = out + dm(m) * c
    return out


class DerComplex(ChainComplexF):
    """``Der_C(B, A)`` along ``f``: degree ``n`` is ``sum_x A^{deg x + n}``."""

    def __init__(self, C: FreeGradedAlgebra, B: FreeGradedAlgebra, f: DgMorphism,
                 window: Tuple[int, int]):
        self.C, self.B, self.f = C, B, f
        A = f.target
        require_resolving(A)
        self.A = A
        self.gens = _relative(C, B)
        lo, hi = window
        ranks, maps, labels = {}, {}, {}
        self.offsets: Dict[int, Dict[str, int]] = {}
        for n in range(lo - 1, hi + 2):
            off, tot = {}, 0
            labs = []
            for x in self.gens:
                off[x.name] = tot
                b = basis(A, x.degree + n) if x.degree + n <= 0 else []
                tot += len(b)
                labs += [f"{x.name}:{_mono_label(A, m)}" for m in b]
            self.offsets[n] = off
            ranks[n] = tot
            labels[n] = labs
        for n in range(lo - 1, hi + 1):
            maps[n] = [self._delta_column(n, x, m) for x in self.gens
                       for m in (basis(A, x.degree + n) if x.degree + n <= 0 else [])]
        super().__init__(degree0_presented(A), ranks, maps, labels, (lo, hi))

    def values_to_vector(self, values: Dict[str, Element], n: int) -> Vector:
        out: Vector = {}
        for x in self.gens:
            v = values.get(x.name)
            if v is None or v.is_zero():
                continue
            off = self.offsets[n][x.name]
            for (p, e), c in to_vector(v, x.degree + n).items():
                out[(p + off, e)] = c
        return out

    def vector_to_values(self, v: Vector, n: int) -> Dict[str, Element]:
        A = self.A
        out = {}
        for x in self.gens:
            off = self.offsets[n][x.name]
            size = len(basis(A, x.degree + n)) if x.degree + n <= 0 else 0
            part = {(p - off, e): c for (p, e), c in v.items() if off <= p < off + size}
            out[x.name] = from_vector(A, part, x.degree + n) if part else A.zero()
        return out

    def delta(self, values: Dict[str, Element], n: int) -> Dict[str, Element]:
        """``(delta D)(y) = d_A D(y) - (-1)^n D(d_B y)``."""
        A, B = self.A, self.B
        out = {}
        sign = -1 if n % 2 else 1
        for y in self.gens:
            dy = apply_derivation(self.f, values, n, B.differential_of(y.name))
            v = values.get(y.name)
            dv = A.d(v) if v is not None else A.zero()
            out[y.name] = dv - dy * sign
        return out

    def _delta_column(self, n: int, x, m: Mono) -> Vector:
        vals = {x.name: self.A.monomial(m)}
        return self.values_to_vector(self.delta(vals, n), n + 1)


def der_complex(C: FreeGradedAlgebra, B: FreeGradedAlgebra, f: DgMorphism,
                window: Tuple[int, int] | None = None) -> DerComplex:
    if f.source != B:
        raise AlgebraError("f must start at B")
    if window is None:
        gens = _relative(C, B)
        if not gens:
            window = (0, 0)
        else:
            amin = f.target.min_degree()
            depth = len(f.target.negative_names()) + 1
            lo = min(-g.degree for g in gens) - depth - max(1, -amin)
            hi = max(-g.degree for g in gens)
            window = (lo, hi)
    return DerComplex(C, B, f, window)


def h_theta(C: FreeGradedAlgebra, B: FreeGradedAlgebra, f: DgMorphism, level: int,
            window: Tuple[int, int] | None = None) -> HModule:
    """``h_level Der_C(B, A) = h^{-level}`` of the derivation complex, over ``h^0(A)``."""
    n = -level
    cx = der_complex(C, B, f, window or (n - 1, n + 1))
    return cx.cohomology(n, over=h0_ring(f.target))


# -- cotangent complex ----------------------------------------------------

class CotangentData(ChainComplexF):
    """``Omega_{B/C} (x)_B h^0(B)``: free on ``dx`` for the new generators ``x``."""

    def __init__(self, C: FreeGradedAlgebra, B: FreeGradedAlgebra):
        self.C, self.B = C, B
        self.gens = _relative(C, B)
        R = h0_ring(B)
        P = degree0_ring(B)
        by_deg: Dict[int, List[str]] = {}
        for x in self.gens:
            by_deg.setdefault(x.degree, []).append(x.name)
        self.by_degree = by_deg
        ranks = {n: len(v) for n, v in by_deg.items()}
        maps: Dict[int, List[Vector]] = {}
        self.jacobian: Dict[str, Dict[str, Poly]] = {}
        for n, names in by_deg.items():
            cols = []
            tgt = by_deg.get(n + 1, [])
            for x in names:
                row = _jacobian_row(B, B.differential_of(x), tgt, P)
                self.jacobian[x] = row
                vec: Vector = {}
                for j, y in enumerate(tgt):
                    p = R.reduce(row[y])
                    for e, c in p.terms.items():
                        vec[(j, e)] = c
                cols.append(vec)
            maps[n] = cols
        labels = {n: [f"d{x}" for x in v] for n, v in by_deg.items()}
        degs = list(by_deg) or [0]
        super().__init__(R, ranks, maps, labels, (min(degs + [0]), 0))

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["ring"] = {"variables": list(self.ring.variables),
                     "relations": [str(r) for r in self.ring.relations]}
        return d


def _jacobian_row(B: FreeGradedAlgebra, dx: Element, targets: Sequence[str], P: PolyRing) -> Dict[str, Poly]:
    """Left partials of ``dx`` w.r.t. ``targets`` with negative generators then set to zero."""
    out = {y: P.zero() for y in targets}
    zero_pos = [i for i, d in enumerate(B.degrees) if d == 0]
    for y in targets:
        j = B.index[y]
        acc: Dict = {}
        for m, c in dx.terms.items():
            if not m[j]:
                continue
            neg = [i for i, k in enumerate(m) if k and B.degrees[i] < 0]
            if B.degrees[j] < 0:
                # surviving terms are (degree-0 part) * y
                if neg != [j] or m[j] != 1:
                    continue
                coeff = c
                e = tuple(m[i] for i in zero_pos)
            else:
                if neg:
                    continue
                coeff = c * m[j]
                e = tuple(m[i] - (1 if i == j else 0) for i in zero_pos)
            acc[e] = acc.get(e, ZERO) + coeff
        out[y] = Poly(P, acc)
    return out


def cotangent_bar(C: FreeGradedAlgebra, B: FreeGradedAlgebra) -> CotangentData:
    return CotangentData(C, B)


def graph_resolution(phi: DgMorphism, suffix: str = "'"):
    """Factor ``phi: C -> B`` as a free extension followed by a quasi-isomorphism.

    Only polynomial sources (degree-0 generators) are supported: the middle
    algebra is ``B`` with ``C``'s variables adjoined and ``d eta_x = x - phi(x)``.
    Returns ``(B', C -> B' inclusion, B' -> B)``.
    """
    C, B = phi.source, phi.target
    if any(g.degree != 0 for g in C.generators):
        raise AlgebraError("graph resolution needs a polynomial source")
    taken = set(C.index)
    ren = {}
    for g in B.insertion:
        nm = g.name
        while nm in taken:
            nm += suffix
        ren[g.name] = nm
        taken.add(nm)
    etas = {}
    for g in C.generators:
        nm = "eta_" + g.name
        while nm in taken:
            nm += suffix
        etas[g.name] = nm
        taken.add(nm)
    gens = list(C.insertion) + [(ren[g.name], g.degree) for g in B.insertion] + [(etas[g.name], -1) for g in C.generators]
    Bren = FreeGradedAlgebra(gens, {}, check=False)
    rename = DgMorphism(B, Bren, {g.name: Bren.gen(ren[g.name]) for g in B.generators})
    diff = {ren[g.name]: str(rename(B.differential_of(g.name))) for g in B.generators}
    for g in C.generators:
        diff[etas[g.name]] = f"{g.name} - ({rename(phi.images[g.name])})"
    Bp = FreeGradedAlgebra(gens, diff)
    images = {g.name: phi.images[g.name] for g in C.generators}
    images.update({ren[g.name]: B.gen(g.name) for g in B.generators})
    images.update({etas[g.name]: 0 for g in C.generators})
    q = DgMorphism(Bp, B, images)
    return Bp, DgMorphism(C, Bp, {}), q


def _as_extension(C: FreeGradedAlgebra, B: FreeGradedAlgebra, factorization=None):
    if factorization is not None:
        Bp = factorization[0]
        if not is_free_extension(C, Bp):
            raise AlgebraError("factorization is not a free extension")
        return C, Bp
    if not is_free_extension(C, B):
        raise AlgebraError("map is not a free extension and no free factorization was provided")
    return C, B


def is_etale(C: FreeGradedAlgebra, B: FreeGradedAlgebra, factorization=None) -> bool:
    """``C -> B`` is etale iff the reduced cotangent complex is acyclic."""
    C, B = _as_extension(C, B, factorization)
    return cotangent_bar(C, B).is_acyclic()


def is_etale_map(phi: DgMorphism) -> bool:
    """Etale test for a general map, through its graph resolution if needed."""
    if is_free_extension(phi.source, phi.target) and all(
            phi.images[g.name] == phi.target.gen(g.name) for g in phi.source.generators):
        return is_etale(phi.source, phi.target)
    fac = graph_resolution(phi)
    return is_etale(phi.source, fac[0], fac)


def invert_in(R: PresentedRing, p: Poly) -> Optional[Poly]:
    """Inverse of ``p`` in ``R`` or ``None``."""
    one = ModulePresentation.free(R, 1)
    mp = ModuleMap(one, one, [p.vector()])
    sol = mp.preimage(R.ambient.one().vector())
    if sol is None:
        return None
    return Poly(R.ambient, {e: c for (_, e), c in sol.items()})


def is_open_immersion(C: FreeGradedAlgebra, B: FreeGradedAlgebra, witness, factorization=None) -> Tuple[bool, dict]:
    """Etale and ``h^0(C)_g -> h^0(B)`` an isomorphism for the witness ``g``."""
    if witness is None:
        raise AlgebraError("open immersion test needs a witness g")
    cert: dict = {}
    etale = is_etale(C, B, factorization)
    cert["etale"] = etale
    RC, RB = h0_ring(C), h0_ring(B)
    g = degree0_ring(C)(witness) if not isinstance(witness, Element) else element_to_poly(witness)
    u = "u_g"
    while u in RC.variables or u in RB.variables:
        u += "'"
    P = PolyRing(list(RC.variables) + [u])
    loc = PresentedRing(P, [r.rename_into(P) for r in RC.relations] + [P.var(u) * g.rename_into(P) - 1])
    gB = g.rename_into(RB.ambient) if set(RC.variables) <= set(RB.variables) else None
    if gB is None:
        raise AlgebraError("witness variables must exist in B")
    inv = invert_in(RB, gB)
    cert["witness_unit"] = inv is not None
    if inv is None:
        return False, cert
    imgs = {v: v for v in RC.variables}
    imgs[u] = inv
    rm = RingMap(loc, RB, imgs)
    iso = rm.check() and rm.is_isomorphism()
    cert["h0_isomorphism"] = iso
    return etale and iso, cert


# -- amplitude, dimension, obstruction theory -----------------------------

def _det(M: List[List[Poly]], R: PresentedRing) -> Poly:
    n = len(M)
    if n == 0:
        return R.ambient.one()
    if n == 1:
        return M[0][0]
    out = R.ambient.zero()
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor, R)
        out = out + term if j % 2 == 0 else out - term
    return R.reduce(out)


def _minors_unit(M: List[List[Poly]], size: int, R: PresentedRing) -> bool:
    """Do the ``size``-minors of ``M`` generate the unit ideal of ``R``?"""
    if size == 0:
        return True
    rows, cols = len(M), len(M[0]) if M else 0
    if size > min(rows, cols):
        return False
    minors = []
    for rs in combinations(range(rows), size):
        for cs in combinations(range(cols), size):
            d = _det([[M[r][c] for c in cs] for r in rs], R)
            if d.constant_value() not in (None, 0) and not d.is_zero():
                return True
            if not d.is_zero():
                minors.append(d)
    return bool(minors) and R.quotient(minors).is_trivial()


def amplitude(C: FreeGradedAlgebra, B: FreeGradedAlgebra, factorization=None) -> int:
    """Smallest ``N`` with the reduced cotangent complex of Tor-amplitude in ``[-N, 0]``.

    Works bottom up.  If the differential leaving degree ``n`` has pointwise
    rank ``rank_n - s`` everywhere (``s`` the rank entering), every fibre has
    vanishing cohomology in degree ``n`` and that end can be stripped.
    """
    C, B = _as_extension(C, B, factorization)
    om = cotangent_bar(C, B)
    s = 0
    for n in range(om.window[0], 1):
        need = om.rank(n) - s
        if need <= 0:
            # the pointwise rank of d_n is at most rank_n - s, so it is zero here
            s = 0
            continue
        if not om.rank(n + 1) or not _minors_unit(om.matrix(n), need, om.ring):
            return -n
        s = need
    return 0


def relative_dimension(C: FreeGradedAlgebra, B: FreeGradedAlgebra, factorization=None) -> int:
    C, B = _as_extension(C, B, factorization)
    return sum((-1 if x.degree % 2 else 1) for x in new_generators(C, B))


def obstruction_data(C: FreeGradedAlgebra, B: FreeGradedAlgebra) -> dict:
    """Two-term complex ``Omega-bar`` in degrees ``[-1, 0]`` plus the virtual dimension."""
    N = amplitude(C, B)
    if N > 1:
        raise AlgebraError(f"amplitude {N} > 1: no two-term obstruction theory")
    om = cotangent_bar(C, B)
    return {
        "ranks": [om.rank(-1), om.rank(0)],
        "differential": [[str(x) for x in row] for row in om.matrix(-1)] if om.rank(-1) and om.rank(0) else [],
        "labels": {"-1": om.labels.get(-1, []), "0": om.labels.get(0, [])},
        "virtual_dimension": relative_dimension(C, B),
        "ring": {"variables": list(om.ring.variables), "relations": [str(r) for r in om.ring.relations]},
        "amplitude": N,
        "extra_degrees": sorted(n for n in om.ranks if n < -1 and om.rank(n)),
    }


# -- long exact sequence and E2 ------------------------------------------

def les_theta(C: FreeGradedAlgebra, B: FreeGradedAlgebra, B2: FreeGradedAlgebra,
              window: Tuple[int, int] = (-3, 0), f: DgMorphism | None = None) -> Report:
    """Exactness of the long exact sequence of ``C -> B -> B2`` (targets ``A = B2``).

    ``... -> h^n Der_B(B2,A) -> h^n Der_C(B2,A) -> h^n Der_C(B,A) -> h^{n+1} Der_B(B2,A) -> ...``

    Each map is realised on cycles; exactness is checked as ``im = ker`` of
    submodules of the middle cohomology module.
    """
    rep = Report()
    f = f or DgMorphism(B2, B2, {})
    fB = DgMorphism(B, f.target, {g.name: f.images[g.name] for g in B.generators})
    lo, hi = window
    wide = (lo - 1, hi + 1)
    X = der_complex(B, B2, f, wide)      # Der_B(B2, A)
    Y = der_complex(C, B2, f, wide)      # Der_C(B2, A)
    Z = der_complex(C, B, fB, wide)      # Der_C(B, A)
    R = h0_ring(f.target)
    new_in_B2 = {g.name for g in X.gens}

    def hx(n): return X.cohomology(n, over=R)
    def hy(n): return Y.cohomology(n, over=R)
    def hz(n): return Z.cohomology(n, over=R)

    def inc(n):  # X -> Y: extend by zero on generators of B over C
        hX, hY = hx(n), hy(n)
        imgs = []
        for cyc in hX.cycles:
            vals = X.vector_to_values(cyc, n)
            imgs.append(_class_or_fail(hY, Y.values_to_vector(vals, n)))
        return ModuleMap(hX, hY, imgs)

    def res(n):  # Y -> Z: restrict to B
        hY, hZ = hy(n), hz(n)
        imgs = []
        for cyc in hY.cycles:
            vals = Y.vector_to_values(cyc, n)
            vals = {k: v for k, v in vals.items() if k not in new_in_B2}
            imgs.append(_class_or_fail(hZ, Z.values_to_vector(vals, n)))
        return ModuleMap(hY, hZ, imgs)

    def conn(n):  # Z^n -> X^{n+1}: lift by zero and apply delta
        hZ, hX = hz(n), hx(n + 1)
        imgs = []
        for cyc in hZ.cycles:
            vals = Z.vector_to_values(cyc, n)
            dv = Y.delta(vals, n)
            dv = {k: v for k, v in dv.items() if k in new_in_B2}
            imgs.append(_class_or_fail(hX, X.values_to_vector(dv, n + 1)))
        return ModuleMap(hZ, hX, imgs)

    seq = []
    for n in range(lo, hi + 1):
        seq += [("X", n, inc(n)), ("Y", n, res(n)), ("Z", n, conn(n))]
    for k in range(1, len(seq)):
        _, n_prev, before = seq[k - 1]
        name, n, after = seq[k]
        ok = _exact_at(before, after)
        label = f"{name}^{n}"
        rep.details[label] = ok
        if not ok:
            rep.fail(position=label, message=f"image != kernel at {label}")
    return rep


def _class_or_fail(h: HModule, v: Vector) -> Vector:
    c = h.class_of(v)
    if c is None:
        raise AlgebraError("long exact sequence map does not send cycles to cycles")
    return c


def _exact_at(before: ModuleMap, after: ModuleMap) -> bool:
    """``im(before) == ker(after)`` inside the common module (both in generator coordinates)."""
    M = after.source
    # composition is zero
    for img in before.images:
        if not after.target.element_is_zero(after.apply(img)):
            return False
    # kernel inside image
    im = ModulePresentation(M.ring, M.ambient_rank, before.images, M.rels)
    for k in after.kernel().gens:
        if not im.contains(k):
            return False
    return True


def spectral_e2(C: FreeGradedAlgebra, B: FreeGradedAlgebra, f: DgMorphism,
                window: Tuple[int, int] = (-2, 0)) -> Dict[Tuple[int, int], ModulePresentation]:
    """``E_2^{p,q} = h^q(A) (x)_{h^0} h^p(Theta-bar_{B/C})`` on the window, no differentials.

    ``Theta-bar`` is the dual of the reduced cotangent complex pulled back to
    ``h^0(A)`` along ``f``: degree ``p`` is free on the generators of degree
    ``-p``.
    """
    A = f.target
    R = h0_ring(A)
    om = cotangent_bar(C, B)
    rmap = h0_map(f)
    lo, hi = window
    top = -om.window[0]
    # Theta^p is dual to Omega^{-p}; its differential is the transpose
    ranks = {p: om.rank(-p) for p in range(-1, top + 2)}
    maps = {}
    for p in range(-1, top + 1):
        Mt = om.matrix(-p - 1) if ranks[p] and ranks[p + 1] else None
        cols = []
        for i in range(ranks[p]):
            v: Vector = {}
            for j in range(ranks[p + 1] if Mt else 0):
                for e, c in R.reduce(rmap(Mt[i][j])).terms.items():
                    v[(j, e)] = c
            cols.append(v)
        maps[p] = cols
    theta = ChainComplexF(R, ranks, maps, None, (0, top))
    out = {}
    for p in range(0, top + 1):
        hp = theta.cohomology(p)
        for q in range(lo, hi + 1):
            out[(p, q)] = tensor_modules(hn_module(A, q), hp)
    return out


def tensor_modules(M: ModulePresentation, N: ModulePresentation) -> ModulePresentation:
    """``M (x)_R N`` for cokernel presentations over the same ring."""
    M, N = M.presentation(), N.presentation()
    R = M.ring
    a, b = M.n_generators, N.n_generators
    rels = []
    for r in M.relations:
        for j in range(b):
            rels.append({(i * b + j, e): c for (i, e), c in r.items()})
    for r in N.relations:
        for i in range(a):
            rels.append({(i * b + j, e): c for (j, e), c in r.items()})
    return ModulePresentation(R, a * b, None, rels)
