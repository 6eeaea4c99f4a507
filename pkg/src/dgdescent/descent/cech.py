"""Localization covers, Cech complexes and gluing of modules.

A cover of a resolving algebra ``A`` is a list of degree-0 elements
``g_1..g_k`` generating the unit ideal of ``h^0(A)``.  The chart
``A_I`` for a strictly increasing multi-index ``I`` adjoins ``u_i, eps_i``
with ``d eps_i = u_i g_i - 1`` for every ``i`` in ``I``; so ``A_I`` is
literally ``A_{i_0} (x)_A ... (x)_A A_{i_p}`` and ``A_I`` is contained in
``A_J`` whenever ``I`` is contained in ``J``.

Cech cochains are alternating and indexed by increasing multi-indices.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..algebra.constructions import _fresh
from ..algebra.graded import AlgebraError, Element, FreeGradedAlgebra
from ..algebra.morphisms import DgMorphism
from ..cohomology import element_to_poly, h0_ring, hn_map, hn_module
from ..commalg import ModuleMap, ModulePresentation, Poly, PresentedRing, RingMap, intersect
from ..commalg.groebner import ONE, Vector, add_into
from ..report import Report

Index = Tuple[int, ...]


class CoverError(ValueError):
    pass


class Cover:
    """Localization cover of ``base`` by ``elements`` (charts numbered from 1)."""

    def __init__(self, base: FreeGradedAlgebra, elements: Sequence, name: str | None = None):
        self.base = base
        self.name = name
        self.elements: List[Element] = []
        for g in elements:
            e = base.element(g)
            if not e.is_zero() and (not e.is_homogeneous() or e.degree() != 0):
                raise CoverError(f"cover element {e} is not of degree 0")
            self.elements.append(e)
        if not self.elements:
            raise CoverError("a cover needs at least one element")
        self.k = len(self.elements)
        self.indices = tuple(range(1, self.k + 1))
        self.R = h0_ring(base)
        self.polys = [element_to_poly(g) for g in self.elements]
        taken = set(base.index)
        self.u_names, self.eps_names = {}, {}
        for i in self.indices:
            u = _fresh(f"u{i}", taken)
            taken.add(u)
            e = _fresh(f"eps{i}", taken)
            taken.add(e)
            self.u_names[i], self.eps_names[i] = u, e
        self._charts: Dict[Index, FreeGradedAlgebra] = {}
        self.unit_certificate = self._unit_certificate()

    # -- certificates ----------------------------------------------------
    def partition(self, power: int = 1) -> Optional[List[Poly]]:
        """``b_l`` with ``sum b_l g_l^power == 1`` in ``h^0(A)``, or ``None``."""
        R = self.R
        gens = [(p ** power).vector() for p in self.polys]
        mp = ModuleMap(ModulePresentation.free(R, self.k), ModulePresentation.free(R, 1), gens)
        sol = mp.preimage(R.ambient.one().vector())
        if sol is None:
            return None
        out = [R.ambient.zero() for _ in range(self.k)]
        for (p, e), c in sol.items():
            out[p] = out[p] + Poly(R.ambient, {e: c})
        return out

    def _unit_certificate(self) -> List[Poly]:
        cert = self.partition(1)
        if cert is None:
            raise CoverError("cover elements do not generate the unit ideal of h^0")
        total = sum((b * g for b, g in zip(cert, self.polys)), self.R.ambient.zero())
        assert self.R.reduce(total - 1).is_zero()
        return cert

    # -- charts ----------------------------------------------------------
    def multi_indices(self, size: int) -> List[Index]:
        return list(combinations(self.indices, size))

    def chart(self, I: Sequence[int]) -> FreeGradedAlgebra:
        I = tuple(I)
        if I not in self._charts:
            if not I:
                return self.base
            gens, diff = [], {}
            for i in I:
                u, e = self.u_names[i], self.eps_names[i]
                gens += [(u, 0), (e, -1)]
                diff[e] = f"{u}*({self.elements[i - 1]}) - 1"
            label = "".join(str(i) for i in I)
            self._charts[I] = self.base.extend(gens, diff, name=f"{self.base.name or 'A'}_{label}")
        return self._charts[I]

    def inclusion(self, I: Sequence[int], J: Sequence[int]) -> DgMorphism:
        return DgMorphism(self.chart(I), self.chart(J), {})

    def g(self, i: int) -> Poly:
        return self.polys[i - 1]

    def to_dict(self) -> dict:
        return {"elements": [str(g) for g in self.elements],
                "unit_certificate": [str(b) for b in self.unit_certificate]}


def _sign_insert(l: int, I: Index) -> Tuple[int, Index]:
    J = tuple(sorted(I + (l,)))
    return (-1 if J.index(l) % 2 else 1), J


def scale(M: ModulePresentation, v: Vector, p: Poly) -> Vector:
    """``p * v`` for a polynomial over a subring of ``M``'s ring (variables by name)."""
    q = p.rename_into(M.ring.ambient) if p.ring != M.ring.ambient else p
    out: Vector = {}
    for e, c in q.terms.items():
        add_into(out, v, c, e)
    return out


class ModuleAssignment:
    """Modules ``M_I`` over the charts with restriction maps for ``I`` in ``J``, ``|J| = |I|+1``."""

    def __init__(self, cover: Cover, module_fn: Callable[[Index], ModulePresentation],
                 restriction_fn: Callable[[Index, Index], ModuleMap], label: str = ""):
        self.cover = cover
        self._module_fn = module_fn
        self._restriction_fn = restriction_fn
        self._modules: Dict[Index, ModulePresentation] = {}
        self._maps: Dict[Tuple[Index, Index], ModuleMap] = {}
        self.label = label

    def module(self, I: Index) -> ModulePresentation:
        I = tuple(I)
        if I not in self._modules:
            self._modules[I] = self._module_fn(I)
        return self._modules[I]

    def restriction(self, I: Index, J: Index) -> ModuleMap:
        key = (tuple(I), tuple(J))
        if key not in self._maps:
            self._maps[key] = self._restriction_fn(*key)
        return self._maps[key]

    def restrict(self, v: Vector, I: Index, J: Index) -> Vector:
        """Restrict an ambient vector of ``M_I`` along ``I <= J`` (any codimension)."""
        I, J = tuple(I), tuple(J)
        cur = I
        for j in J:
            if j in cur:
                continue
            nxt = tuple(sorted(cur + (j,)))
            v = self._apply(self.restriction(cur, nxt), v)
            cur = nxt
        return v

    @staticmethod
    def _apply(mp: ModuleMap, v: Vector) -> Vector:
        src = mp.source
        if not v:
            return {}
        if src.is_cokernel_form:
            return mp.apply(v)
        coeffs = src.express(v)
        if coeffs is None:
            raise AlgebraError("vector is not in the module")
        return mp.apply(coeffs)

    # -- standard assignments ------------------------------------------
    @classmethod
    def from_module(cls, cover: Cover, M: ModulePresentation, label: str = "M") -> "ModuleAssignment":
        """Restrictions of a single ``h^0(A)``-module."""
        pres = M.presentation()

        def ring(I):
            return h0_ring(cover.chart(I))

        def module(I):
            if not I:
                return pres
            return pres.base_change(RingMap(pres.ring, ring(I), {}))

        def restriction(I, J):
            src, tgt = module(I), module(J)
            n = src.n_generators
            z = tgt.ring.ambient.zero_exp
            return ModuleMap(src, tgt, [{(a, z): ONE} for a in range(n)],
                             RingMap(src.ring, tgt.ring, {}))

        return cls(cover, module, restriction, label)

    @classmethod
    def cohomology(cls, cover: Cover, algebras: Callable[[Index], FreeGradedAlgebra],
                   maps: Callable[[Index, Index], DgMorphism], degree: int,
                   label: str = "") -> "ModuleAssignment":
        """``h^degree(B_I)`` with the maps induced by the structure morphisms."""
        return cls(cover, lambda I: hn_module(algebras(I), degree),
                   lambda I, J: hn_map(maps(I, J), degree), label or f"h^{degree}")


# -- Cech complex ---------------------------------------------------------

Cochain = Dict[Index, Vector]


def coboundary(assign: ModuleAssignment, c: Cochain, p: int) -> Cochain:
    """``(d c)_J = sum_m (-1)^m c_{J - j_m}|_J`` for ``|J| = p + 2``."""
    out: Cochain = {}
    for J in assign.cover.multi_indices(p + 2):
        acc: Vector = {}
        for m in range(len(J)):
            I = J[:m] + J[m + 1:]
            v = c.get(I)
            if not v:
                continue
            add_into(acc, assign.restrict(v, I, J), -ONE if m % 2 else ONE)
        out[J] = acc
    return out


def cochain_is_zero(assign: ModuleAssignment, c: Cochain) -> bool:
    return all(assign.module(I).element_is_zero(v) for I, v in c.items() if v)


def cochains_equal(assign: ModuleAssignment, a: Cochain, b: Cochain) -> bool:
    keys = set(a) | set(b)
    for I in keys:
        d = dict(a.get(I, {}))
        add_into(d, b.get(I, {}), -ONE)
        if d and not assign.module(I).element_is_zero(d):
            return False
    return True


class CechComplex:
    def __init__(self, assign: ModuleAssignment):
        self.assign = assign
        self.cover = assign.cover

    def module(self, p: int) -> List[Tuple[Index, ModulePresentation]]:
        return [(I, self.assign.module(I)) for I in self.cover.multi_indices(p + 1)]

    def d(self, c: Cochain, p: int) -> Cochain:
        return coboundary(self.assign, c, p)

    def generator_cochains(self, p: int) -> List[Cochain]:
        out = []
        for I, M in self.module(p):
            for g in M.gens:
                out.append({I: dict(g)})
        return out

    def check_dd(self, p: int) -> bool:
        """``d o d = 0`` on all generator cochains of degree ``p``."""
        for c in self.generator_cochains(p):
            if not cochain_is_zero(self.assign, self.d(self.d(c, p), p + 1)):
                return False
        return True


# -- trivialization -------------------------------------------------------

class TrivializationError(RuntimeError):
    pass


def _lift(assign: ModuleAssignment, I: Index, J: Index, v: Vector) -> Optional[Vector]:
    mp = assign.restriction(I, J)
    coeffs = mp.preimage(v)
    if coeffs is None:
        return None
    return mp.source.combination(coeffs)


def trivialize(assign: ModuleAssignment, alpha: Cochain, p: int, max_power: int = 12) -> Cochain:
    """Cochain ``beta`` of degree ``p-1`` with ``d beta = alpha`` (``p >= 1``).

    Uses the contracting homotopy ``(k a)_I = sum_l h_l a_{lI}`` for a
    partition of unity ``h_l = b_l g_l^N``; the lifts ``g_l^m a_{lI}`` from
    ``M_{lI}`` back to ``M_I`` are found by module preimages and ``N`` is
    raised until ``d beta = alpha`` holds exactly.
    """
    cover = assign.cover
    if not cochain_is_zero(assign, coboundary(assign, alpha, p)):
        raise TrivializationError("input is not a cocycle")
    targets = cover.multi_indices(p)
    # find a power m0 for which all lifts exist
    lifts: Dict[Tuple[int, Index], Vector] = {}
    m0 = None
    for m in range(0, max_power + 1):
        ok = True
        lifts.clear()
        for I in targets:
            for l in cover.indices:
                if l in I:
                    continue
                sign, J = _sign_insert(l, I)
                a = alpha.get(J)
                if not a:
                    continue
                MJ = assign.module(J)
                w = scale(MJ, a, cover.g(l) ** m)
                if sign < 0:
                    w = {t: -c for t, c in w.items()}
                lv = _lift(assign, I, J, w)
                if lv is None:
                    ok = False
                    break
                lifts[(l, I)] = lv
            if not ok:
                break
        if ok:
            m0 = m
            break
    if m0 is None:
        raise TrivializationError(f"no lift found up to power {max_power}")
    for extra in range(0, max_power + 1):
        b = cover.partition(m0 + extra)
        if b is None:
            continue
        beta: Cochain = {}
        for I in targets:
            MI = assign.module(I)
            acc: Vector = {}
            for l in cover.indices:
                lv = lifts.get((l, I))
                if lv is not None:
                    add_into(acc, scale(MI, lv, (cover.g(l) ** extra) * b[l - 1]))
            beta[I] = acc
        if cochains_equal(assign, coboundary(assign, beta, p - 1), alpha):
            return beta
    raise TrivializationError(f"trivialization did not verify up to power {m0 + max_power}")


# -- gluing ---------------------------------------------------------------

class GluedModule:
    """Global sections of a cartesian module assignment.

    ``module`` is an ``h^0(A)``-module ``R^r / relations`` whose ``a``-th
    generator is the compatible family ``sections[a]``; ``chart_maps[i]``
    sends it to its ``i``-th component.
    """

    def __init__(self, assign: ModuleAssignment, module: ModulePresentation,
                 sections: List[Dict[int, Vector]], chart_maps: Dict[int, ModuleMap],
                 report: Report):
        self.assign = assign
        self.module = module
        self.sections = sections
        self.chart_maps = chart_maps
        self.report = report

    def chart_image(self, coeffs: Vector, i: int) -> Vector:
        return self.chart_maps[i].apply(coeffs)


def _extend_section(assign: ModuleAssignment, i: int, v: Vector, max_power: int) -> Dict[int, Vector]:
    cover = assign.cover
    others = [j for j in cover.indices if j != i]
    Mi = assign.module((i,))
    base = None
    for m in range(max_power + 1):
        w = scale(Mi, v, cover.g(i) ** m)
        sec = {i: w}
        ok = True
        for j in others:
            J = tuple(sorted((i, j)))
            t = assign.restrict(w, (i,), J)
            s = _lift(assign, (j,), J, t)
            if s is None:
                ok = False
                break
            sec[j] = s
        if ok:
            base = sec
            break
    if base is None:
        raise TrivializationError(f"cannot extend a section from chart {i}")
    for extra in range(max_power + 1):
        gi = cover.g(i) ** extra
        sec = {j: scale(assign.module((j,)), s, gi) for j, s in base.items()}
        if _compatible(assign, sec):
            return sec
    raise TrivializationError(f"sections from chart {i} never become compatible")


def _compatible(assign: ModuleAssignment, sec: Dict[int, Vector]) -> bool:
    for J in assign.cover.multi_indices(2):
        a = assign.restrict(sec[J[0]], (J[0],), J)
        b = assign.restrict(sec[J[1]], (J[1],), J)
        d = dict(a)
        add_into(d, b, -ONE)
        if d and not assign.module(J).element_is_zero(d):
            return False
    return True


def glue_modules(assign: ModuleAssignment, max_power: int = 12, certify: bool = True) -> GluedModule:
    """Module of compatible families (``H^0`` of the Cech complex).

    Candidate sections are ``g_i^N e`` for the generators ``e`` of each
    ``M_i``, extended to the other charts.  The glued module is the
    quotient of ``h^0(A)^r`` by the intersection of the kernels to every
    chart; each chart map is certified to become an isomorphism after base
    change, which identifies the result with the glued module.
    """
    cover = assign.cover
    R = cover.R
    rep = Report()
    sections: List[Dict[int, Vector]] = []
    for i in cover.indices:
        Mi = assign.module((i,))
        for v in Mi.gens:
            if Mi.element_is_zero(v):
                continue
            sections.append(_extend_section(assign, i, v, max_power))
    r = len(sections)
    chart_maps: Dict[int, ModuleMap] = {}
    kernel = None
    free = ModulePresentation.free(R, r)
    for i in cover.indices:
        Mi = assign.module((i,))
        mp = ModuleMap(free, Mi, [s[i] for s in sections], RingMap(R, Mi.ring, {}))
        ker = mp.kernel_coefficients()
        kernel = ker if kernel is None else intersect(R, r, kernel, ker)
    M = ModulePresentation.cokernel(R, r, kernel or [])
    for i in cover.indices:
        Mi = assign.module((i,))
        chart_maps[i] = ModuleMap(M, Mi, [s[i] for s in sections], RingMap(R, Mi.ring, {}))
    if certify:
        for i in cover.indices:
            ok, cert = chart_maps[i].is_isomorphism()
            if ok:
                rep.certify(kind="chart_isomorphism", chart=i, **cert)
            else:
                rep.fail(kind="chart_isomorphism", chart=i, **cert)
    return GluedModule(assign, M, sections, chart_maps, rep)


def glue_from_transitions(cover: Cover, modules: Dict[int, ModulePresentation],
                          transitions: Dict[Tuple[int, int], Sequence]) -> ModuleAssignment:
    """Assignment from chart modules and transition matrices.

    ``modules[i]`` is a module over ``h^0(A_i)`` (modules over ``h^0(A)``
    are base changed to the chart).  For ``i < j``,
    ``transitions[(i, j)]`` lists, for each generator of ``M_i``, its image
    in ``M_j|_{ij}`` as a list of polynomials (one per generator of
    ``M_j``).  ``M_I`` is ``M_{max I}`` restricted to ``I``.  Cocycle
    conditions on triple overlaps are the caller's responsibility and are
    visible through :func:`coboundary` checks.
    """
    pres = {i: M.presentation() for i, M in modules.items()}

    def module(I):
        M = pres[I[-1]]
        R = h0_ring(cover.chart(I))
        if len(I) == 1 and M.ring.ambient == R.ambient:
            return M
        return M.base_change(RingMap(M.ring, R, {}))

    def restriction(I, J):
        src, tgt = module(I), module(J)
        a, b = I[-1], J[-1]
        if a == b:
            z = tgt.ring.ambient.zero_exp
            imgs = [{(k, z): ONE} for k in range(src.n_generators)]
        else:
            imgs = [_as_vector(row, tgt) for row in transitions[(a, b)]]
        return ModuleMap(src, tgt, imgs, RingMap(src.ring, tgt.ring, {}))

    return ModuleAssignment(cover, module, restriction, "transitions")


def _as_vector(row: Sequence, M: ModulePresentation) -> Vector:
    out: Vector = {}
    amb = M.ring.ambient
    for p, x in enumerate(row):
        q = x.rename_into(amb) if isinstance(x, Poly) else amb(x)
        for e, c in q.terms.items():
            out[(p, e)] = c
    return out
