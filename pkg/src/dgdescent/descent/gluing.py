"""Gluing data over a cover, homotopy squares and gluing of algebras.

A gluing datum assigns to every chart ``A_I`` (``|I| <= 3``) a free
extension ``B_I`` and to every inclusion ``I < J`` with ``|J| = |I| + 1`` a
DG morphism ``B_I -> B_J`` extending ``A_I -> A_J``.  The diagram must
commute strictly and be cartesian on cohomology.  Only closed data are
handled: ``B_I`` has no degree-0 generators beyond those of ``A_I``, so
``h^0(B_I)`` is a quotient of ``h^0(A_I)``.

A homotopy square over a gluing datum is a source ``B`` with maps
``f_i: B -> B_i`` and homotopies ``f_ij`` between the two composites
``B -> B_ij``; its augmentation is a choice of 2-simplices on triple
overlaps bounded by the three restricted homotopies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..algebra.constructions import is_free_extension
from ..algebra.forms import embed, evaluate, solve_basic, with_forms
from ..algebra.graded import AlgebraError, Element, FreeGradedAlgebra
from ..algebra.homotopies import Homotopy, Simplex2
from ..algebra.morphisms import DgMorphism, check_morphism
from ..algebra.strands import from_vector, solve_coboundary, to_vector
from ..cohomology import h0_ring, hn_map, hn_module, poly_to_element
from ..commalg import ModuleMap, ModulePresentation, Poly, RingMap, intersect
from ..commalg.groebner import ONE, Vector, add_into
from ..homotopy import triangle_obstructions, verify_homotopy, verify_simplex
from ..report import Report
from .cech import (Cover, ModuleAssignment, TrivializationError, glue_modules, trivialize)

Index = Tuple[int, ...]


class GluingError(RuntimeError):
    pass


def cycle_of(A: FreeGradedAlgebra, n: int, coeffs: Vector) -> Element:
    """Representing cycle in ``A^n`` of the class with ``coeffs`` over ``h^n(A)``'s generators."""
    H = hn_module(A, n)
    v: Vector = {}
    for (j, e), c in coeffs.items():
        add_into(v, H.cycles[j], c, e)
    return from_vector(A, v, n) if v else A.zero()


def class_of(A: FreeGradedAlgebra, c: Element, n: int) -> Vector:
    H = hn_module(A, n)
    if c.is_zero():
        return {}
    cls = H.class_of(to_vector(c, n))
    if cls is None:
        raise GluingError(f"{c} is not a cycle")
    return cls


class GluingData:
    """Algebras ``B_I`` over the charts of ``cover`` with strict restriction maps."""

    def __init__(self, cover: Cover, algebras: Mapping[Index, FreeGradedAlgebra],
                 maps: Mapping[Tuple[Index, Index], DgMorphism] | None = None, name: str = ""):
        self.cover = cover
        self.name = name
        self.algebras: Dict[Index, FreeGradedAlgebra] = {}
        for size in (1, 2, 3):
            for I in cover.multi_indices(size):
                B = algebras.get(I)
                self.algebras[I] = B if B is not None else cover.chart(I)
        self.maps: Dict[Tuple[Index, Index], DgMorphism] = {}
        given = dict(maps or {})
        for (I, J) in self.adjacent_pairs():
            m = given.get((I, J))
            self.maps[(I, J)] = m if m is not None else DgMorphism(self.algebras[I], self.algebras[J], {})

    @classmethod
    def trivial(cls, cover: Cover) -> "GluingData":
        return cls(cover, {}, name="trivial")

    def adjacent_pairs(self) -> List[Tuple[Index, Index]]:
        out = []
        for size in (1, 2):
            for I in self.cover.multi_indices(size):
                for j in self.cover.indices:
                    if j not in I:
                        out.append((I, tuple(sorted(I + (j,)))))
        return out

    def algebra(self, I: Index) -> FreeGradedAlgebra:
        return self.algebras[tuple(I)]

    def map(self, I: Index, J: Index) -> DgMorphism:
        """Structure map ``B_I -> B_J`` (composed along the sorted path)."""
        I, J = tuple(I), tuple(J)
        if I == J:
            B = self.algebras[I]
            return DgMorphism(B, B, {})
        out = None
        cur = I
        for j in J:
            if j in cur:
                continue
            nxt = tuple(sorted(cur + (j,)))
            step = self.maps[(cur, nxt)]
            out = step if out is None else step.compose(out)
            cur = nxt
        return out

    def assignment(self, degree: int) -> ModuleAssignment:
        return ModuleAssignment.cohomology(self.cover, self.algebra, self.map, degree, f"h^{degree}(B)")

    def to_dict(self) -> dict:
        return {
            "cover": self.cover.to_dict(),
            "algebras": {"".join(map(str, I)): [f"{g.name}:{g.degree}" for g in B.insertion
                                                 if g.name not in self.cover.chart(I).index]
                         for I, B in self.algebras.items()},
        }


def validate_gluing(G: GluingData, levels: Sequence[int] = (0, -1)) -> Report:
    """Free extensions, closedness, DG maps, strict commutativity, cartesian squares."""
    rep = Report()
    cover = G.cover
    for I, B in G.algebras.items():
        A_I = cover.chart(I)
        if not is_free_extension(A_I, B):
            rep.fail(kind="not_free_extension", chart=list(I))
            continue
        extra0 = [n for n in B.degree_zero_names() if n not in A_I.index]
        if extra0:
            rep.fail(kind="not_closed", chart=list(I), generators=extra0)
    for (I, J), m in G.maps.items():
        r = check_morphism(m)
        if not r.ok:
            rep.fail(kind="map", source=list(I), target=list(J), detail=r.first_failure)
            continue
        for g in cover.chart(I).generators:
            if m.images[g.name] != m.target.gen(g.name):
                rep.fail(kind="not_over_chart", source=list(I), target=list(J), generator=g.name)
    if not rep.ok:
        return rep
    for K in cover.multi_indices(3) + cover.multi_indices(2):
        for a in K:
            for b in K:
                if a >= b:
                    continue
                # two paths from the singleton a (through different middles)
                p1 = G.map((a,), K)
                mid = tuple(sorted((a, b)))
                p2 = G.map(mid, K).compose(G.map((a,), mid))
                diff = p1.differs_at(p2)
                if diff is not None:
                    rep.fail(kind="not_strict", chart=list(K), via=list(mid), generator=diff)
    for lvl in levels:
        for (I, J) in G.adjacent_pairs():
            ok, cert = hn_map(G.map(I, J), lvl).is_isomorphism()
            entry = dict(kind="cartesian", degree=lvl, source=list(I), target=list(J), **cert)
            rep.certify(**entry) if ok else rep.fail(**entry)
    return rep


# -- homotopy squares -----------------------------------------------------

@dataclass
class HomotopySquare:
    """``f_i: B -> B_i`` and homotopies ``f_ij`` from ``B_i``'s to ``B_j``'s composite."""

    gluing: GluingData
    source: FreeGradedAlgebra
    maps: Dict[int, DgMorphism]
    homotopies: Dict[Tuple[int, int], Homotopy]
    simplices: Dict[Tuple[int, int, int], Simplex2] = field(default_factory=dict)

    def restricted(self, pair: Tuple[int, int], K: Index) -> Homotopy:
        return self.homotopies[pair].pushforward(self.gluing.map(pair, K))

    @classmethod
    def base(cls, G: GluingData) -> "HomotopySquare":
        """The square on ``A`` itself: chart inclusions and constant homotopies."""
        A = G.cover.base
        maps = {i: DgMorphism(A, G.algebra((i,)), {}) for i in G.cover.indices}
        hom = {}
        for I in G.cover.multi_indices(2):
            hom[I] = Homotopy.constant(DgMorphism(A, G.algebra(I), {}))
        return cls(G, A, maps, hom)


def verify_homotopy_square(sq: HomotopySquare) -> Report:
    rep = Report()
    G = sq.gluing
    for i, f in sq.maps.items():
        rep.merge(check_morphism(f), f"f_{i}")
    for (i, j), h in sq.homotopies.items():
        rep.merge(verify_homotopy(h), f"f_{i}{j}")
        for t, k in ((0, i), (1, j)):
            want = G.map((k,), (i, j)).compose(sq.maps[k])
            diff = h.at(t).differs_at(want)
            if diff is not None:
                rep.fail(stage=f"f_{i}{j}", generator=diff,
                         message=f"endpoint {t} is not the composite through chart {k}")
    return rep


def verify_augmentation(sq: HomotopySquare, store: bool = True) -> Tuple[Report, Dict]:
    """Fill every triple overlap; returns the report and the obstructions found."""
    rep = Report()
    obstructions: Dict[Index, list] = {}
    for K in sq.gluing.cover.multi_indices(3):
        i, j, k = K
        ij, ik, jk = (sq.restricted((i, j), K), sq.restricted((i, k), K), sq.restricted((j, k), K))
        body, obs = triangle_obstructions(ij, ik, jk)
        if obs:
            obstructions[K] = obs
            rep.fail(kind="augmentation", chart=list(K), generator=obs[0].generator,
                     cocycle=str(obs[0].cocycle))
            continue
        sigma = Simplex2(body)
        chk = verify_simplex(sigma, ij, ik, jk)
        if not chk.ok:
            rep.merge(chk, f"simplex {K}")
            continue
        rep.certify(kind="augmentation", chart=list(K))
        if store:
            sq.simplices[K] = sigma
    return rep, obstructions


def repair_augmentation(sq: HomotopySquare, obstructions: Dict[Index, list]) -> Report:
    """Modify the edge homotopies by Cech-trivialized loops so that triangles fill.

    Each obstruction at a generator ``x`` gives a class ``eta_ijk`` in
    ``h^{|x|-1}(B_ijk)``.  Trivializing ``eta`` as a Cech 2-cocycle yields
    classes ``theta_ij`` and ``f_ij(x)`` is replaced by
    ``f_ij(x) + s * theta_ij dt``; the sign ``s`` is fixed by re-verifying.
    The affected generators must not appear in differentials of others.
    """
    rep = Report()
    G = sq.gluing
    by_gen: Dict[str, Dict[Index, Element]] = {}
    for K, obs in obstructions.items():
        for o in obs:
            by_gen.setdefault(o.generator, {})[K] = o.cocycle
    for name, cocycles in by_gen.items():
        deg = sq.source.generator(name).degree - 1
        assign = G.assignment(deg)
        eta = {K: class_of(G.algebra(K), c, deg) for K, c in cocycles.items()}
        try:
            theta = trivialize(assign, eta, 2)
        except TrivializationError as exc:
            rep.fail(kind="repair", generator=name, message=str(exc))
            return rep
        reps = {I: cycle_of(G.algebra(I), deg, v) for I, v in theta.items()}
        original = dict(sq.homotopies)
        maps_before = dict(sq.maps)
        for s in (1, -1):
            for I, h in original.items():
                F1 = h.body.target
                dt = F1.gen("_dt")
                imgs = dict(h.body.images)
                imgs[name] = imgs[name] + embed(reps[I], 1) * dt * s
                sq.homotopies[I] = Homotopy(h.source_map, h.target_map, DgMorphism(h.body.source, F1, imgs))
            aug, obs = verify_augmentation(sq, store=False)
            if not any(o.generator == name for lst in obs.values() for o in lst):
                rep.certify(kind="repair", generator=name, sign=s,
                            theta={"".join(map(str, I)): str(v) for I, v in reps.items()})
                break
        else:
            sq.homotopies = original
            rep.fail(kind="repair", generator=name, message="neither sign removes the obstruction")
            continue
        if any(sq.maps[i] is not maps_before[i] for i in sq.maps):
            rep.fail(kind="repair", generator=name, message="chart maps changed")
        for I, h in sq.homotopies.items():
            for g in sq.source.generators:
                if g.name != name and h.body.images[g.name] != original[I].body.images[g.name]:
                    rep.fail(kind="repair", generator=name, message=f"f_{I} changed at {g.name}")
    return rep


# -- gluing algebras ------------------------------------------------------

@dataclass
class Stage:
    degree: int
    kill: List[str]
    module_gens: List[str]
    report: Report


@dataclass
class GluedAlgebra:
    square: HomotopySquare
    stages: List[Stage]
    report: Report
    modules: Dict[int, object] = field(default_factory=dict)

    @property
    def algebra(self) -> FreeGradedAlgebra:
        return self.square.source


def _fresh(base: str, taken) -> str:
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def _kernel_ideal(G: GluingData) -> List:
    """``ker(h^0(A) -> prod h^0(B_i))`` as polynomials."""
    R = G.cover.R
    free = ModulePresentation.free(R, 1)
    ker = None
    for i in G.cover.indices:
        Ri = h0_ring(G.algebra((i,)))
        mp = ModuleMap(free, ModulePresentation.free(Ri, 1),
                       [{(0, Ri.ambient.zero_exp): ONE}], RingMap(R, Ri, {}))
        k = mp.kernel_coefficients()
        ker = k if ker is None else intersect(R, 1, ker, k)
    out = []
    for v in ker or []:
        p = Poly(R.ambient, {e: c for (_, e), c in v.items()})
        if not R.contains(p):
            out.append(p)
    return out


def _kernel_classes(sq: HomotopySquare, n: int) -> List[Element]:
    """Cycles generating ``ker(h^n(B) -> prod_i h^n(B_i))``."""
    B = sq.source
    H = hn_module(B, n)
    if H.n_generators == 0:
        return []
    rels = list(H.rels)
    ker = None
    for i, f in sq.maps.items():
        k = hn_map(f, n).kernel_coefficients() + rels
        ker = k if ker is None else intersect(H.ring, H.n_generators, ker, k)
    out = []
    for v in ker or []:
        if not H.element_is_zero(v):
            c = cycle_of(B, n, v)
            if not c.is_zero():
                out.append(c)
    return out


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _edge_body(sq: HomotopySquare, pair, value_i: Element, value_j: Element, beta: Element | None,
               theta: Element, n: int) -> Element:
    """``(1-t) v_i + t (v_j - beta(1)) + beta + (-1)^n theta dt`` in ``B_ij (x) Omega_1``."""
    F1 = with_forms(sq.gluing.algebra(pair), 1)
    t, dt = F1.gen("_t"), F1.gen("_dt")
    vi, vj = embed(value_i, 1), embed(value_j, 1)
    out = vi * (1 - t) + vj * t + embed(theta, 1) * dt * _sign(n)
    if beta is not None:
        out = out - embed(evaluate(beta, 1), 1) * t + beta
    return out


def _extend_square(sq: HomotopySquare, gens: List[Tuple[str, int]], diffs: Dict[str, Element],
                   values: Dict[str, Dict[int, Element]], edges: Dict[str, Dict[Tuple[int, int], Element]]):
    B = sq.source.extend(gens, {k: str(v) for k, v in diffs.items()})
    maps = {}
    for i, f in sq.maps.items():
        imgs = dict(f.images)
        for name, _ in gens:
            imgs[name] = values[name][i]
        maps[i] = DgMorphism(B, f.target, imgs)
    hom = {}
    for I, h in sq.homotopies.items():
        imgs = dict(h.body.images)
        for name, _ in gens:
            imgs[name] = edges[name][I]
        G = sq.gluing
        hom[I] = Homotopy(G.map((I[0],), I).compose(maps[I[0]]), G.map((I[1],), I).compose(maps[I[1]]),
                          DgMorphism(B, h.body.target, imgs))
    return HomotopySquare(sq.gluing, B, maps, hom)


def _glue_stage(sq: HomotopySquare, n: int, names: set) -> Tuple[HomotopySquare, Stage, object]:
    """Add generators of degree ``-n-1``: killers for ``h^{-n}`` and lifts of ``M^{-n-1}``."""
    G = sq.gluing
    cover = G.cover
    r = -n - 1
    rep = Report()
    pairs = cover.multi_indices(2)
    B = sq.source
    gens: List[Tuple[str, int]] = []
    diffs: Dict[str, Element] = {}
    values: Dict[str, Dict[int, Element]] = {}
    edges: Dict[str, Dict[Tuple[int, int], Element]] = {}

    # killers
    if n == 0:
        targets = [poly_to_element(B, p) for p in _kernel_ideal(G)]
    else:
        targets = _kernel_classes(sq, -n)
    assign = G.assignment(r)
    kill_names = []
    for b in targets:
        name = _fresh(f"k{n + 1}_", names)
        names.add(name)
        kill_names.append(name)
        beta: Dict[int, Element] = {}
        for i, f in sq.maps.items():
            bi = f(b)
            sol = solve_coboundary(bi, r + 1)
            if sol is None:
                raise GluingError(f"killer {name}: image in chart {i} is not exact")
            beta[i] = sol
        beta_ij: Dict[Tuple[int, int], Element] = {}
        for I in pairs:
            omega = sq.homotopies[I].body(b) - embed(G.map((I[0],), I)(sq.maps[I[0]](b)), 1)
            beta_ij[I] = solve_basic(omega) if not omega.is_zero() else with_forms(G.algebra(I), 1).zero()

        def mismatch(I):
            i, j = I
            return (G.map((j,), I)(beta[j]) - G.map((i,), I)(beta[i]) - evaluate(beta_ij[I], 1))

        if pairs:
            cochain = {I: class_of(G.algebra(I), mismatch(I), r) for I in pairs}
            neg = {I: {k: -c for k, c in v.items()} for I, v in cochain.items()}
            if any(not assign.module(I).element_is_zero(v) for I, v in cochain.items() if v):
                tau = trivialize(assign, neg, 1)
                for i in cover.indices:
                    if tau.get((i,)):
                        beta[i] = beta[i] + cycle_of(G.algebra((i,)), r, tau[(i,)])
        edge_vals = {}
        for I in pairs:
            c = mismatch(I)
            theta = solve_coboundary(c, r) if not c.is_zero() else G.algebra(I).zero()
            if theta is None:
                raise GluingError(f"killer {name}: Cech correction failed on {I}")
            i, j = I
            edge_vals[I] = _edge_body(sq, I, G.map((i,), I)(beta[i]), G.map((j,), I)(beta[j]),
                                      beta_ij[I], theta, n)
        gens.append((name, r))
        diffs[name] = b
        values[name] = beta
        edges[name] = edge_vals

    # lifts of the glued module
    glued = glue_modules(assign)
    rep.merge(glued.report, f"M^{r}")
    module_names = []
    M = glued.module
    for a in range(M.n_generators):
        if M.element_is_zero(M.gens[a]):
            continue
        name = _fresh(f"m{n + 1}_", names)
        names.add(name)
        module_names.append(name)
        sec = glued.sections[a]
        gam = {i: cycle_of(G.algebra((i,)), r, sec[i]) for i in cover.indices}
        edge_vals = {}
        for I in pairs:
            i, j = I
            gi, gj = G.map((i,), I)(gam[i]), G.map((j,), I)(gam[j])
            diff = gj - gi
            theta = solve_coboundary(diff, r) if not diff.is_zero() else G.algebra(I).zero()
            if theta is None:
                raise GluingError(f"module generator {name}: sections disagree on {I}")
            edge_vals[I] = _edge_body(sq, I, gi, gj, None, theta, n)
        gens.append((name, r))
        diffs[name] = B.zero()
        values[name] = gam
        edges[name] = edge_vals

    if not gens:
        return sq, Stage(r, [], [], rep), glued
    new = _extend_square(sq, gens, diffs, values, edges)
    chk = verify_homotopy_square(new)
    rep.merge(chk, f"stage {n}")
    aug, obs = verify_augmentation(new)
    if obs:
        rep.merge(repair_augmentation(new, obs), "repair")
        aug, obs = verify_augmentation(new)
    rep.merge(aug, "augmentation")
    return new, Stage(r, kill_names, module_names, rep), glued


def comparison_report(sq: HomotopySquare, degrees: Sequence[int], surjective_at: Optional[int]) -> Report:
    """Local certificates that ``h^l(B) -> M^l`` is an isomorphism (or onto).

    ``M^l`` restricts to ``h^l(B_i)`` on each chart, so the comparison is
    checked after base change to every chart.
    """
    rep = Report()
    for lvl in degrees:
        for i, f in sq.maps.items():
            m = hn_map(f, lvl)
            if lvl == surjective_at:
                ok = m.is_surjective()
                entry = dict(kind="surjective", degree=lvl, chart=i, cokernel_zero=ok)
            else:
                ok, cert = m.is_isomorphism()
                entry = dict(kind="isomorphism", degree=lvl, chart=i, **cert)
            rep.certify(**entry) if ok else rep.fail(**entry)
    return rep


def glue_algebras(G: GluingData, N: int, validate: bool = True) -> GluedAlgebra:
    """Glue to ``B_(N)`` whose ``h^l`` matches the glued modules for ``l > -N``.

    Stage ``n`` (``0 <= n < N``) adds generators in degree ``-n-1``: ``k``
    generators killing the kernel of ``h^{-n}`` towards the charts (for
    ``n = 0`` the kernel of ``h^0(A) -> h^0(B_i)``) and ``m`` generators
    lifting generators of the glued module of ``h^{-n-1}(B_i)``.  Maps to
    the charts and homotopies on overlaps are built alongside; every stage
    re-verifies the square and fills triple overlaps.
    """
    rep = Report()
    if validate:
        v = validate_gluing(G, levels=tuple(range(0, -N - 2, -1)))
        rep.merge(v, "gluing data")
        if not v.ok:
            return GluedAlgebra(HomotopySquare.base(G), [], rep)
    sq = HomotopySquare.base(G)
    names = set(sq.source.index)
    for B in G.algebras.values():
        names |= set(B.index)
    stages = []
    modules = {}
    for n in range(N):
        sq, stage, glued = _glue_stage(sq, n, names)
        modules[-n - 1] = glued
        stage.report.merge(comparison_report(sq, list(range(0, -n - 1, -1)), -n - 1), "invariant")
        stages.append(stage)
        rep.merge(stage.report, f"stage {n}")
        if not stage.report.ok:
            break
    return GluedAlgebra(sq, stages, rep, modules)
