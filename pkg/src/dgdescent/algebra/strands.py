"""Degreewise linear algebra for resolving algebras.

For a resolving algebra ``A`` the differential kills degree-0 generators,
so each ``A^n`` is a free module over the polynomial ring ``P0`` on the
degree-0 generators, with basis the monomials in negative generators of
total degree ``n``, and ``d: A^n -> A^{n+1}`` is ``P0``-linear.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from ..commalg import ModuleMap, ModulePresentation, PolyRing, PresentedRing
from ..commalg.groebner import Vector
from .graded import AlgebraError, Element, FreeGradedAlgebra, Mono


def _cache(A: FreeGradedAlgebra) -> dict:
    c = A.__dict__.get("_strand_cache")
    if c is None:
        c = {}
        A.__dict__["_strand_cache"] = c
    return c


def require_resolving(A: FreeGradedAlgebra) -> None:
    if any(d > 0 for d in A.degrees):
        raise AlgebraError("strand computations need generators in degrees <= 0")


def degree0_ring(A: FreeGradedAlgebra) -> PolyRing:
    c = _cache(A)
    if "P0" not in c:
        c["P0"] = PolyRing(A.degree_zero_names())
    return c["P0"]


def degree0_presented(A: FreeGradedAlgebra) -> PresentedRing:
    c = _cache(A)
    if "P0p" not in c:
        c["P0p"] = PresentedRing(degree0_ring(A), [])
    return c["P0p"]


def _split_positions(A: FreeGradedAlgebra):
    c = _cache(A)
    if "split" not in c:
        zero = [i for i, d in enumerate(A.degrees) if d == 0]
        neg = [i for i, d in enumerate(A.degrees) if d < 0]
        c["split"] = (zero, neg)
    return c["split"]


def basis(A: FreeGradedAlgebra, n: int) -> List[Mono]:
    """Monomials in negative generators of degree ``n`` (canonical order)."""
    c = _cache(A)
    key = ("basis", n)
    if key not in c:
        require_resolving(A)
        c[key] = A.negative_monomials(n)
        c[("bindex", n)] = {m: i for i, m in enumerate(c[key])}
    return c[key]


def to_vector(x: Element, n: int) -> Vector:
    """Coordinates of ``x in A^n`` over ``P0``."""
    A = x.algebra
    basis(A, n)
    idx = _cache(A)[("bindex", n)]
    zero, _ = _split_positions(A)
    zset = set(zero)
    out: Vector = {}
    for m, c in x.terms.items():
        neg = tuple(0 if i in zset else k for i, k in enumerate(m))
        try:
            p = idx[neg]
        except KeyError:
            raise AlgebraError(f"element {x} is not homogeneous of degree {n}") from None
        out[(p, tuple(m[i] for i in zero))] = c
    return out


def from_vector(A: FreeGradedAlgebra, v: Vector, n: int) -> Element:
    b = basis(A, n)
    zero, _ = _split_positions(A)
    terms: Dict[Mono, object] = {}
    for (p, e), c in v.items():
        m = list(b[p])
        for i, k in zip(zero, e):
            m[i] = k
        terms[tuple(m)] = c
    return Element(A, terms)


def d_images(A: FreeGradedAlgebra, n: int) -> List[Vector]:
    """Images of the basis of ``A^n`` under ``d`` as vectors in ``A^{n+1}``."""
    c = _cache(A)
    key = ("dimg", n)
    if key not in c:
        imgs = []
        for m in basis(A, n):
            imgs.append(to_vector(A.d(A.monomial(m)), n + 1) if n < 0 else {})
        c[key] = imgs
    return c[key]


def d_map(A: FreeGradedAlgebra, n: int) -> ModuleMap:
    """``d: A^n -> A^{n+1}`` as a map of free ``P0``-modules."""
    c = _cache(A)
    key = ("dmap", n)
    if key not in c:
        R = degree0_presented(A)
        src = ModulePresentation.free(R, len(basis(A, n)))
        tgt = ModulePresentation.free(R, len(basis(A, n + 1)) if n < 0 else 0)
        c[key] = ModuleMap(src, tgt, d_images(A, n))
    return c[key]


def solve_coboundary(c: Element, degree: Optional[int] = None) -> Optional[Element]:
    """Some ``tau`` with ``d tau == c`` in a resolving algebra, or ``None``."""
    A = c.algebra
    require_resolving(A)
    n = degree if degree is not None else c.degree()
    if c.is_zero():
        return A.zero()
    if n > 0:
        return None
    if not basis(A, n - 1):
        return None
    sol = d_map(A, n - 1).preimage(to_vector(c, n))
    if sol is None:
        return None
    tau = from_vector(A, sol, n - 1)
    assert A.d(tau) == c
    return tau


def is_cocycle(c: Element) -> bool:
    return c.algebra.d(c).is_zero()
