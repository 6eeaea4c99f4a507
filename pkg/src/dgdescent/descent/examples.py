"""Worked gluing data used by the tests and the command line.

``twisted_datum`` glues the line bundle of the point ``(0, 0)`` on the
affine elliptic curve ``y^2 = 4(x^3 - x)``: charts ``x != 0`` and
``x^2 != 1``, ``B_i = A_i{eta}`` with ``d eta = 0`` and the transition
``eta -> y u1 eta`` from chart 2 to the overlap.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from ..algebra.constructions import koszul
from ..algebra.forms import with_forms
from ..algebra.graded import FreeGradedAlgebra
from ..algebra.homotopies import Homotopy
from ..algebra.morphisms import DgMorphism
from ..commalg import ModuleMap, ModulePresentation, PresentedRing
from ..commalg.groebner import ONE, Vector
from ..report import Report
from .cech import Cover
from .gluing import GluingData, HomotopySquare

ELLIPTIC = "y^2 - 4*(x^3 - x)"


def elliptic() -> FreeGradedAlgebra:
    return koszul(["x", "y"], [ELLIPTIC], names=["xi"], name="E")


def twisted_datum(A: FreeGradedAlgebra | None = None) -> GluingData:
    A = A or elliptic()
    cover = Cover(A, ["x", "x^2 - 1"])
    algebras = {}
    for I in [(1,), (2,), (1, 2)]:
        algebras[I] = cover.chart(I).extend([("eta", -1)], {"eta": "0"})
    u1 = cover.u_names[1]
    maps = {((2,), (1, 2)): DgMorphism(algebras[(2,)], algebras[(1, 2)], {"eta": f"y*{u1}*eta"})}
    return GluingData(cover, algebras, maps, name="twisted")


def weight_gap_certificate(R: PresentedRing, L: ModulePresentation, weights: Dict[str, int],
                           bound: int = 40) -> Report:
    """Certificate that a rank-1 module ``L`` with ``dim_Q R/L`` known is not free.

    ``L`` is given as an ideal (generators in ``R^1``).  The normal-form
    monomials of ``R`` are assumed to carry a valuation by ``weights``
    (pole order at infinity for an affine curve): their weights must be
    pairwise distinct, and they form a numerical semigroup ``S``.  For
    ``f != 0`` one then has ``dim R/(f) = w(f)`` in ``S``, so ``L`` cannot
    be principal when ``dim R/L`` is a gap of ``S``.
    """
    rep = Report()
    quot = ModulePresentation(R, 1, None, list(L.gens))
    d = quot.dim_q()
    rep.details["colength"] = d
    if d is None:
        rep.fail(kind="weight_gap", message="R/L is not finite dimensional")
        return rep
    names = R.ambient.variables
    seen = {}
    ok_distinct = True
    for e in _standard_monomials_up_to(R, bound, weights):
        w = sum(weights[n] * k for n, k in zip(names, e))
        if w in seen:
            ok_distinct = False
        seen[w] = e
    semigroup = sorted(w for w in seen if w <= bound)
    gaps = [w for w in range(0, bound + 1) if w not in seen]
    rep.details.update(semigroup_prefix=semigroup[:12], gaps=[g for g in gaps if g < bound // 2])
    if not ok_distinct:
        rep.fail(kind="weight_gap", message="normal-form monomials have repeated weights")
    elif d == 0:
        rep.fail(kind="weight_gap", message="L = R is free")
    elif d in seen:
        rep.fail(kind="weight_gap", message=f"colength {d} is a weight; no obstruction")
    else:
        rep.certify(kind="weight_gap", colength=d, gap=d)
    return rep


def module_as_ideal(M: ModulePresentation) -> Optional[ModulePresentation]:
    """Embed a module into ``R`` as an ideal, if some element of ``Hom(M, R)`` is injective.

    ``Hom(M, R)`` is the kernel of the transposed relation matrix; its
    generators are tried in turn.  Returns the image ideal as a submodule
    of ``R^1`` or ``None``.
    """
    pres = M.presentation()
    R = pres.ring
    k = pres.n_generators
    rels = [r for r in pres.relations if r]
    z = R.ambient.zero_exp
    one = ModulePresentation.free(R, 1)
    if not rels:
        cands = [{(0, z): ONE}] if k == 1 else []
        cands = [[c] for c in cands]
    else:
        cols = []
        for j in range(k):
            col: Vector = {}
            for q, r in enumerate(rels):
                for (p, e), c in r.items():
                    if p == j:
                        col[(q, e)] = col.get((q, e), 0) + c
            cols.append({t: c for t, c in col.items() if c})
        hom = ModuleMap(ModulePresentation.free(R, k), ModulePresentation.free(R, len(rels)), cols)
        cands = []
        for phi in hom.kernel_coefficients():
            cands.append([{(0, e): c for (p, e), c in phi.items() if p == j} for j in range(k)])
    for imgs in cands:
        mp = ModuleMap(pres, one, imgs)
        if all(not v for v in imgs) or not mp.check():
            continue
        if mp.is_injective():
            return ModulePresentation(R, 1, [v for v in imgs if v], [])
    return None


def _standard_monomials_up_to(R: PresentedRing, bound: int, weights: Dict[str, int]):
    """Monomials not divisible by a leading monomial of the ideal, weight <= bound."""
    from ..commalg.groebner import lead
    names = R.ambient.variables
    leads = [lead(g, R.ambient.order)[1] for g in R.gb_vectors]
    out = []

    def rec(i, e, w):
        if i == len(names):
            if not any(all(a >= b for a, b in zip(e, l)) for l in leads):
                out.append(tuple(e))
            return
        k = 0
        while w + k * weights[names[i]] <= bound:
            rec(i + 1, e + [k], w + k * weights[names[i]])
            k += 1
            if weights[names[i]] <= 0:
                break

    rec(0, [], 0)
    return out


def obstructed_square(charts: int = 3) -> HomotopySquare:
    """Square with a nonzero augmentation obstruction that Cech repair removes.

    ``A = Q[x]{e}`` with ``d e = 0``; cover ``x, 1 - x, 1 + x``; trivial
    gluing.  The source adds ``z`` in degree 0 with ``d z = 0`` and
    ``f_i(z) = 0``; the homotopy on overlap ``12`` sends ``z`` to
    ``e dt`` so the loop around ``123`` is the class of ``e``.
    """
    A = FreeGradedAlgebra([("x", 0), ("e", -1)], {"e": "0"}, name="A")
    cover = Cover(A, ["x", "1 - x", "1 + x"][:charts])
    G = GluingData.trivial(cover)
    base = HomotopySquare.base(G)
    B = A.extend([("z", 0)], {"z": "0"}, name="Bz")
    maps = {i: DgMorphism(B, G.algebra((i,)), {"z": 0}) for i in cover.indices}
    hom = {}
    for I, h in base.homotopies.items():
        F1 = with_forms(G.algebra(I), 1)
        imgs = dict(h.body.images)
        imgs["z"] = F1.gen("e") * F1.gen("_dt") if I == (1, 2) else F1.zero()
        src = DgMorphism(B, G.algebra(I), {"z": 0})
        hom[I] = Homotopy(src, src, DgMorphism(B, F1, imgs))
    return HomotopySquare(G, B, maps, hom)
