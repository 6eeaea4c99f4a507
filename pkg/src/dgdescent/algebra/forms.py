"""Polynomial differential forms on the 1- and 2-simplex.

``A (x) Omega_n`` is modelled as ``A`` with extra free generators: the
coordinates ``_t`` (and ``_s``) in degree 0 and their differentials ``_dt``
(``_ds``) in degree 1.  The leading underscore keeps them apart from user
generators.

Conventions on the 2-simplex with coordinates ``(t, s)``:

* edge ``ij`` is ``(t, 0)``, edge ``ik`` is ``(0, t)`` and edge ``jk`` is
  ``(1-t, t)``;
* vertices are ``i = (0,0)``, ``j = (1,0)``, ``k = (0,1)``.
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Tuple

from ..commalg.groebner import QQ
from .graded import AlgebraError, Element, FreeGradedAlgebra, Mono
from .morphisms import DgMorphism

COORDS = {1: ("_t",), 2: ("_t", "_s")}
DIFFS = {1: ("_dt",), 2: ("_dt", "_ds")}

_FORMS_CACHE: Dict[tuple, FreeGradedAlgebra] = {}


def with_forms(A: FreeGradedAlgebra, level: int) -> FreeGradedAlgebra:
    """``A (x) Omega_level`` (level 0 returns ``A`` itself)."""
    if level == 0:
        return A
    if level not in COORDS:
        raise ValueError("only Omega_0, Omega_1 and Omega_2 are supported")
    if getattr(A, "forms_level", 0):
        raise AlgebraError("algebra already carries forms")
    cache = A.__dict__.setdefault("_forms_cache", {})
    if level in cache:
        return cache[level]
    gens = list(A.insertion)
    gens += [(c, 0) for c in COORDS[level]] + [(dc, 1) for dc in DIFFS[level]]
    diff = {g.name: A.differential_of(g.name) for g in A.generators}
    diff.update({c: dc for c, dc in zip(COORDS[level], DIFFS[level])})
    F = FreeGradedAlgebra(gens, {k: str(v) for k, v in diff.items()},
                          name=f"{A.name or 'A'}*Omega{level}",
                          allow_positive=True, allow_reserved=True, check=False)
    F.base = A
    F.forms_level = level
    F.form_positions = frozenset(F.index[n] for n in COORDS[level] + DIFFS[level])
    F.coord_positions = tuple(F.index[n] for n in COORDS[level])
    F.diff_positions = tuple(F.index[n] for n in DIFFS[level])
    cache[level] = F
    return F


def simplex_forms(level: int) -> FreeGradedAlgebra:
    """The DG algebra ``Omega_level`` itself."""
    return with_forms(_unit_algebra(), level) if level else _unit_algebra()


_UNIT = None


def _unit_algebra() -> FreeGradedAlgebra:
    global _UNIT
    if _UNIT is None:
        _UNIT = FreeGradedAlgebra([], name="Q")
    return _UNIT


def level_of(F: FreeGradedAlgebra) -> int:
    return getattr(F, "forms_level", 0)


def base_of(F: FreeGradedAlgebra) -> FreeGradedAlgebra:
    return getattr(F, "base", F)


def _affine_map(F: FreeGradedAlgebra, target: FreeGradedAlgebra, coords: Sequence[str],
                diffs: Sequence[str]) -> DgMorphism:
    """Pullback along an affine map; ``coords``/``diffs`` are images (strings) of the coordinates."""
    lvl = level_of(F)
    images = {}
    for name, img in zip(COORDS[lvl], coords):
        images[name] = target.parse(img)
    for name, img in zip(DIFFS[lvl], diffs):
        images[name] = target.parse(img)
    return DgMorphism(F, target, images)


def _morph(F: FreeGradedAlgebra, key, target_level: int, coords, diffs) -> DgMorphism:
    cache = F.__dict__.setdefault("_maps", {})
    if key not in cache:
        target = with_forms(base_of(F), target_level)
        cache[key] = _affine_map(F, target, coords, diffs)
    return cache[key]


def embed(x: Element, level: int) -> Element:
    """Constant forms: ``A -> A (x) Omega_level``."""
    return with_forms(x.algebra, level).element(x)


def evaluate(x: Element, point) -> Element:
    """Restrict a form to a point of the simplex (a number, or a pair on Omega_2)."""
    F = x.algebra
    lvl = level_of(F)
    if lvl == 0:
        return x
    pt = (point,) if lvl == 1 and not isinstance(point, (tuple, list)) else tuple(point)
    key = ("pt", tuple(QQ(p) for p in pt))
    f = _morph(F, key, 0, [_fmt(QQ(p)) for p in pt], ["0"] * lvl)
    return f(x)


def _fmt(c) -> str:
    c = QQ(c)
    return f"({c.numerator}/{c.denominator})"


EDGES = {
    "ij": (["_t", "0"], ["_dt", "0"]),
    "ik": (["0", "_t"], ["0", "_dt"]),
    "jk": (["1 - _t", "_t"], ["-_dt", "_dt"]),
}

VERTICES = {"i": (0, 0), "j": (1, 0), "k": (0, 1)}


def edge(x: Element, which: str) -> Element:
    """Restrict a form on the 2-simplex to one of its edges."""
    F = x.algebra
    if level_of(F) != 2:
        raise AlgebraError("edge restriction needs a form on the 2-simplex")
    coords, diffs = EDGES[which]
    return _morph(F, ("edge", which), 1, coords, diffs)(x)


def reverse(x: Element) -> Element:
    """Pull back along ``t -> 1 - t`` on the interval."""
    F = x.algebra
    if level_of(F) != 1:
        raise AlgebraError("reverse needs a form on the interval")
    return _morph(F, ("rev",), 1, ["1 - _t"], ["-_dt"])(x)


def pull_interval(x: Element, coord: str, diff: str) -> Element:
    """Pull back an interval form along an affine map ``Delta^2 -> Delta^1``."""
    F = x.algebra
    if level_of(F) != 1:
        raise AlgebraError("needs a form on the interval")
    return _morph(F, ("pull", coord, diff), 2, [coord], [diff])(x)


# -- decomposition into (A part) (x) (form part) ----------------------------

def split_terms(x: Element):
    """Yield ``(coeff, b_mono, form_mono)`` with ``x = sum coeff * b * form``.

    The sign relating the canonical monomial to the product ``b * form`` is
    folded into ``coeff``.
    """
    F = x.algebra
    fp = F.form_positions
    zero = F._zero_mono
    for m, c in x.terms.items():
        b = tuple(0 if i in fp else k for i, k in enumerate(m))
        f = tuple(k if i in fp else 0 for i, k in enumerate(m))
        sign, prod = F.mono_mul(b, f)
        yield (c if sign > 0 else -c), b, f


def _combine(F: FreeGradedAlgebra, pieces) -> Element:
    """Sum of ``coeff * b * form`` for ``(coeff, b, form_terms)``."""
    out: Dict[Mono, object] = {}
    for c, b, form_terms in pieces:
        prod = F.mul_terms({b: c}, form_terms)
        for m, v in prod.items():
            nv = out.get(m, 0) + v
            if nv:
                out[m] = nv
            else:
                out.pop(m, None)
    return Element(F, out)


def _translate(x: Element, center, back: bool = False) -> Element:
    F = x.algebra
    lvl = level_of(F)
    if all(QQ(p) == 0 for p in center):
        return x
    sgn = -1 if back else 1
    coords = [f"{c} + {sgn}*{_fmt(p)}" for c, p in zip(COORDS[lvl], center)]
    key = ("translate", tuple(QQ(p) * sgn for p in center))
    return _morph(F, key, lvl, coords, list(DIFFS[lvl]))(x)


def radial_homotopy(x: Element, center=None) -> Element:
    """Radial (Poincare) homotopy operator ``K`` centred at a point.

    ``d K + K d = id - ev_center`` where ``ev_center`` evaluates at the centre
    and re-embeds as constant forms.  ``K`` vanishes on every line through the
    centre where its input does.
    """
    F = x.algebra
    lvl = level_of(F)
    if lvl == 0:
        raise AlgebraError("radial homotopy needs forms")
    center = tuple(center) if center is not None else (0,) * lvl
    y = _translate(x, center)
    cpos = F.coord_positions
    dpos = F.diff_positions
    pieces = []
    for c, b, f in split_terms(y):
        I = [j for j, p in enumerate(dpos) if f[p]]
        if not I:
            continue
        a = sum(f[p] for p in cpos)
        weight = QQ(1) / (a + len(I))
        bdeg = F.mono_degree(b)
        coeff = c * weight * (-1 if bdeg % 2 else 1)
        terms = {}
        for pos_in_I, j in enumerate(I):
            m = list(f)
            m[dpos[j]] = 0
            m[cpos[j]] += 1
            terms[tuple(m)] = QQ(-1 if pos_in_I % 2 else 1)
        pieces.append((coeff, b, terms))
    return _translate(_combine(F, pieces), center, back=True)


def solve_basic(omega: Element) -> Element:
    """``beta`` with ``d beta = omega`` and ``beta(0) = 0``.

    ``omega`` lives in ``A (x) Omega_1``, must be closed and vanish at ``t=0``.
    """
    F = omega.algebra
    if level_of(F) != 1:
        raise AlgebraError("solve_basic expects an element of A (x) Omega_1")
    if not F.d(omega).is_zero():
        raise AlgebraError("solve_basic: input is not closed")
    if not evaluate(omega, 0).is_zero():
        raise AlgebraError("solve_basic: input does not vanish at t=0")
    beta = radial_homotopy(omega, (0,))
    return beta


# -- relative problems ------------------------------------------------------

def interval_relative(w: Element, exact_solver) -> Tuple[Optional[Element], Optional[Element]]:
    """Solve ``d beta = w`` with ``beta(0) = beta(1) = 0``.

    ``w`` is closed and vanishes at both ends.  ``exact_solver(c)`` returns a
    primitive of a cocycle of the base algebra or ``None``.  Returns
    ``(beta, None)`` on success and ``(None, obstruction)`` otherwise; the
    obstruction is the cocycle ``beta0(1)`` whose class is nonzero.
    """
    F = w.algebra
    beta0 = solve_basic(w)
    c = evaluate(beta0, 1)
    if c.is_zero():
        return beta0, None
    tau = exact_solver(c)
    if tau is None:
        return None, c
    t = F.gen("_t")
    dt = F.gen("_dt")
    cf = embed(c, 1)
    tf = embed(tau, 1)
    sign = -1 if (c.degree() % 2) else 1
    beta = beta0 - t * cf + tf * dt * sign
    return beta, None


def horn_extension(edges: Dict[str, Element], vertex: str) -> Element:
    """Extend forms on two edges meeting at ``vertex`` to the 2-simplex.

    ``edges`` maps edge names to interval forms that agree at ``vertex``.
    """
    if vertex == "i":
        g1, g2 = edges["ij"], edges["ik"]
        # r1 = t, r2 = s; both collapse the other edge onto vertex i
        e = pull_interval(g1, "_t", "_dt") + pull_interval(g2, "_s", "_ds")
        return e - embed(evaluate(g1, 0), 2)
    if vertex == "j":
        g1, g3 = edges["ij"], edges["jk"]
        # edge ij runs from i to j, edge jk from j to k
        e = pull_interval(g1, "_t + _s", "_dt + _ds") + pull_interval(g3, "_s", "_ds")
        return e - embed(evaluate(g1, 1), 2)
    raise ValueError("horn extension implemented at vertices i and j")


def edge_bump(sigma: Element) -> Element:
    """Extend a form on edge ``jk`` vanishing at its ends to the 2-simplex,
    vanishing on the edges ``ij`` and ``ik``.

    With ``sigma = p(t) + q(t) dt`` and ``p = t(1-t) r(t)`` the extension is
    ``t s r(s) + q(s) (t ds - s dt)``.
    """
    F1 = sigma.algebra
    base = base_of(F1)
    F2 = with_forms(base, 2)
    tpos = F1.index["_t"]
    dtpos = F1.index["_dt"]
    groups: Dict[Tuple[Mono, bool], Dict[int, object]] = {}
    for c, b, f in split_terms(sigma):
        key = (b, bool(f[dtpos]))
        poly = groups.setdefault(key, {})
        k = f[tpos]
        poly[k] = poly.get(k, 0) + c
    t2, s2 = F2.gen("_t"), F2.gen("_s")
    dt2, ds2 = F2.gen("_dt"), F2.gen("_ds")
    out = F2.zero()
    for (b, has_dt), poly in groups.items():
        bel = F2.element(Element(F1, {b: QQ(1)}))
        poly = {k: v for k, v in poly.items() if v}
        if not poly:
            continue
        if has_dt:
            q = _univariate(F2, poly, s2)
            out = out + bel * q * (t2 * ds2 - s2 * dt2)
        else:
            r = _divide_t_one_minus_t(poly)
            out = out + bel * t2 * s2 * _univariate(F2, r, s2)
    return out


def _univariate(F: FreeGradedAlgebra, poly: Dict[int, object], var: Element) -> Element:
    out = F.zero()
    for k, c in poly.items():
        out = out + (var ** k) * c
    return out


def _divide_t_one_minus_t(poly: Dict[int, object]) -> Dict[int, object]:
    """Exact division of a univariate polynomial by ``t(1-t) = t - t^2``."""
    if poly.get(0, 0):
        raise AlgebraError("edge form does not vanish at t=0")
    coeffs = [QQ(poly.get(k, 0)) for k in range(max(poly) + 1)]
    # divide by t
    coeffs = coeffs[1:]
    # divide by (1 - t): synthetic division at t = 1
    if sum(coeffs) != 0:
        raise AlgebraError("edge form does not vanish at t=1")
    # p(t) = (1-t) r(t)  =>  r_k = sum_{j<=k} p_j
    out = {}
    acc = QQ(0)
    for k in range(len(coeffs) - 1):
        acc += coeffs[k]
        if acc:
            out[k] = acc
    return out
