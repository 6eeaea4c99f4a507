"""Cech cohomology of module assignments and descent for morphisms."""

from __future__ import annotations

import random
from typing import Sequence

from ..algebra.graded import FreeGradedAlgebra
from ..algebra.morphisms import DgMorphism
from ..cohomology import HModule, h_theta
from ..commalg import ModuleMap, ModulePresentation, RingMap
from ..commalg.groebner import Vector, add_into
from ..report import Report
from .cech import (CechComplex, Cochain, Cover, ModuleAssignment, TrivializationError, coboundary,
                   glue_modules, trivialize)


def der_assignment(cover: Cover, C: FreeGradedAlgebra, B: FreeGradedAlgebra, f: DgMorphism,
                   level: int) -> ModuleAssignment:
    """``h^{-level} Der_C(B, A_I)`` along ``f`` followed by the chart inclusions."""
    n = -level

    def along(I):
        return DgMorphism(f.target, cover.chart(I), {}).compose(f) if I else f

    def module(I) -> HModule:
        return h_theta(C, B, along(I), level)

    def restriction(I, J):
        src, tgt = module(I), module(J)
        AJ = cover.chart(J)
        images = []
        for cyc in src.cycles:
            vals = src.complex.vector_to_values(cyc, n)
            moved = {k: AJ.element(v) for k, v in vals.items()}
            w = tgt.complex.values_to_vector(moved, n)
            cls = tgt.class_of(w) if w else {}
            if cls is None:
                raise ValueError("restriction does not preserve cycles")
            images.append(cls)
        return ModuleMap(src, tgt, images, RingMap(src.ring, tgt.ring, {}))

    return ModuleAssignment(cover, module, restriction, f"h^{n}Der")


def check_assignment(assign: ModuleAssignment) -> Report:
    """Restriction maps are well defined and compose independently of the path."""
    rep = Report()
    cover = assign.cover
    for size in (1, 2):
        for I in cover.multi_indices(size):
            for j in cover.indices:
                if j in I:
                    continue
                J = tuple(sorted(I + (j,)))
                if not assign.restriction(I, J).check():
                    rep.fail(kind="restriction", source=list(I), target=list(J))
    for K in cover.multi_indices(3):
        for a in K:
            M = assign.module((a,))
            others = [b for b in K if b != a]
            for g in M.gens:
                paths = []
                for b in others:
                    mid = tuple(sorted((a, b)))
                    paths.append(assign.restrict(assign.restrict(g, (a,), mid), mid, K))
                diff = dict(paths[0])
                add_into(diff, paths[1], -1)
                if diff and not assign.module(K).element_is_zero(diff):
                    rep.fail(kind="cocycle", chart=list(K), start=a)
                    break
    return rep


def cartesian_report(assign: ModuleAssignment) -> Report:
    """``M_I (x) R_J -> M_J`` is an isomorphism for every adjacent ``I < J``."""
    rep = Report()
    cover = assign.cover
    for size in range(1, cover.k):
        for I in cover.multi_indices(size):
            for j in cover.indices:
                if j in I:
                    continue
                J = tuple(sorted(I + (j,)))
                ok, cert = assign.restriction(I, J).is_isomorphism()
                entry = dict(kind="cartesian", source=list(I), target=list(J), **cert)
                rep.certify(**entry) if ok else rep.fail(**entry)
    return rep


def vanishing_report(assign: ModuleAssignment, p: int, samples: int = 3, seed: int = 0) -> Report:
    """Certificate that ``H^p = 0`` for ``p >= 1``.

    Localized at ``g_l`` the Cech complex becomes that of the cover of
    ``U_l`` containing ``U_l`` itself, which is contractible; so ``H^p``
    vanishes once the assignment is cartesian and the ``g_l`` generate the
    unit ideal.  Both facts are checked, and a few coboundaries of random
    cochains are trivialized explicitly as a consistency check.
    """
    rep = Report()
    cover = assign.cover
    rep.certify(kind="unit_ideal", partition=[str(b) for b in cover.unit_certificate])
    rep.merge(cartesian_report(assign), "cartesian")
    if cover.k <= p:
        rep.details["cochains"] = "none in degree p"
        return rep
    rng = random.Random(seed)
    for s in range(samples):
        gamma: Cochain = {}
        for I in cover.multi_indices(p):
            M = assign.module(I)
            acc: Vector = {}
            for g in M.gens:
                add_into(acc, g, rng.randint(-3, 3))
            gamma[I] = acc
        alpha = coboundary(assign, gamma, p - 1)
        try:
            trivialize(assign, alpha, p)
        except TrivializationError as exc:
            rep.fail(kind="trivialize", sample=s, message=str(exc))
            continue
        rep.certify(kind="trivialize", sample=s, p=p)
    return rep


def cech(assign: ModuleAssignment, p: int):
    """``H^p`` of the Cech complex: the glued module for ``p = 0``.

    For ``p >= 1`` returns ``(zero module, report)`` when vanishing is
    certified, ``(None, report)`` otherwise.
    """
    if p < 0:
        raise ValueError("Cech degree must be >= 0")
    chk = check_assignment(assign)
    if not chk.ok:
        return None, chk
    if p == 0:
        glued = glue_modules(assign)
        glued.report.merge(chk)
        return glued, glued.report
    rep = vanishing_report(assign, p)
    rep.merge(chk)
    if assign.cover.k > p and not CechComplex(assign).check_dd(p - 1):
        rep.fail(kind="dd", p=p - 1)
    if rep.ok:
        return ModulePresentation.zero(assign.cover.R), rep
    return None, rep


def descent_morphisms_check(C: FreeGradedAlgebra, B: FreeGradedAlgebra, f: DgMorphism, cover: Cover,
                            levels: Sequence[int] = (1, 2)) -> Report:
    """``H^0`` of ``h^{-l} Der_C(B, A_.)`` is ``h^{-l} Der_C(B, A)`` and ``H^1`` vanishes.

    ``H^0`` is glued and compared with the global module through chart
    isomorphisms: the global module maps to each chart compatibly and the
    induced maps become isomorphisms after base change, so it is the module
    of compatible families.
    """
    rep = Report()
    for lvl in levels:
        assign = der_assignment(cover, C, B, f, lvl)
        glued, r0 = cech(assign, 0)
        rep.merge(r0, f"H0 level {lvl}")
        glob = h_theta(C, B, f, lvl)
        for i in cover.indices:
            Mi = assign.module((i,))
            images = []
            Ai = cover.chart((i,))
            n = -lvl
            for cyc in glob.cycles:
                vals = glob.complex.vector_to_values(cyc, n)
                w = Mi.complex.values_to_vector({k: Ai.element(v) for k, v in vals.items()}, n)
                images.append(Mi.class_of(w) if w else {})
            mp = ModuleMap(glob, Mi, images, RingMap(glob.ring, Mi.ring, {}))
            ok, cert = mp.is_isomorphism()
            entry = dict(kind="global_to_chart", level=lvl, chart=i, **cert)
            rep.certify(**entry) if ok else rep.fail(**entry)
        if glued is not None:
            rep.details[f"H0_level_{lvl}"] = glued.module.to_dict()
            rep.details[f"global_level_{lvl}"] = glob.to_dict()
        _, r1 = cech(assign, 1)
        rep.merge(r1, f"H1 level {lvl}")
    return rep
