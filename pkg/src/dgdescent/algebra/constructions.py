"""Standard constructions: Koszul algebras, localizations, base change."""

from __future__ import annotations

from typing import Mapping, Sequence, Tuple

from .graded import AlgebraError, Element, FreeGradedAlgebra
from .morphisms import DgMorphism


def koszul(poly_gens: Sequence[str], sequence: Sequence, *, names: Sequence[str] | None = None,
           name: str | None = None) -> FreeGradedAlgebra:
    """``Q[poly_gens]{xi_1..xi_r}`` with ``d xi_i = f_i``."""
    names = list(names) if names is not None else (
        ["xi"] if len(sequence) == 1 else [f"xi{i + 1}" for i in range(len(sequence))])
    if len(names) != len(sequence):
        raise AlgebraError("one name per sequence element required")
    P = FreeGradedAlgebra([(g, 0) for g in poly_gens])
    diff = {}
    for n, f in zip(names, sequence):
        v = P.element(f)
        if not v.is_zero() and v.degree() != 0:
            raise AlgebraError(f"Koszul sequence element {f} is not of degree 0")
        diff[n] = str(v)
    return FreeGradedAlgebra([(g, 0) for g in poly_gens] + [(n, -1) for n in names], diff,
                             name=name)


def is_free_extension(A: FreeGradedAlgebra, B: FreeGradedAlgebra) -> bool:
    """Generators of ``A`` are generators of ``B`` with the same degree and differential."""
    for g in A.generators:
        if g.name not in B.index or B.generator(g.name).degree != g.degree:
            return False
        if B.element(A.differential_of(g.name)) != B.differential_of(g.name):
            return False
    return True


def new_generators(A: FreeGradedAlgebra, B: FreeGradedAlgebra):
    return [g for g in B.insertion if g.name not in A.index]


def _fresh(name: str, taken) -> str:
    if name not in taken:
        return name
    k = 1
    while f"{name}{k}" in taken:
        k += 1
    return f"{name}{k}"


def localize(B: FreeGradedAlgebra, g, *, u: str = "u", eps: str = "eps",
             name: str | None = None) -> Tuple[FreeGradedAlgebra, DgMorphism]:
    """Adjoin ``u`` (degree 0) and ``eps`` (degree -1) with ``d eps = u g - 1``.

    Fresh names are chosen if ``u``/``eps`` are taken.  Returns the new
    algebra and the inclusion ``B -> B_g``.
    """
    g = B.element(g)
    if not g.is_zero() and (not g.is_homogeneous() or g.degree() != 0):
        raise AlgebraError("localization element must have degree 0")
    taken = set(B.index)
    u = _fresh(u, taken)
    taken.add(u)
    eps = _fresh(eps, taken)
    Bg = B.extend([(u, 0), (eps, -1)], {eps: f"{u}*({g}) - 1"}, name=name)
    return Bg, DgMorphism(B, Bg, {})


def tensor_product(B: FreeGradedAlgebra, C: FreeGradedAlgebra, base: FreeGradedAlgebra,
                   to_C: DgMorphism | None = None, *, name: str | None = None,
                   rename: Mapping[str, str] | None = None) -> Tuple[FreeGradedAlgebra, DgMorphism, DgMorphism]:
    """``B (x)_A C`` for ``B`` a free extension of ``A = base``.

    ``to_C`` is the structure map ``A -> C`` (default: inclusion by name).
    The result is ``C`` with the new generators of ``B`` adjoined, their
    differentials pushed along ``A -> C``.  Clashing names are renamed
    (``rename`` overrides).  Returns ``(T, B -> T, C -> T)``.
    """
    if not is_free_extension(base, B):
        if to_C is None and is_free_extension(base, C):
            T, j_C, j_B = tensor_product(C, B, base, name=name, rename=rename)
            return T, j_B, j_C
        raise AlgebraError("neither factor is a free extension of the base")
    to_C = to_C or DgMorphism(base, C, {})
    extra = new_generators(base, B)
    taken = set(C.index)
    rename = dict(rename or {})
    names = {}
    for gdef in extra:
        nm = rename.get(gdef.name) or _fresh(gdef.name, taken)
        taken.add(nm)
        names[gdef.name] = nm
    # first build T without differentials for the new generators, then push d_B
    T0 = C.extend([(names[g.name], g.degree) for g in extra], {}, check=False)
    images = {g.name: T0.gen(names[g.name]) for g in extra}
    for g in base.generators:
        images[g.name] = T0.element(to_C.images[g.name])
    phi = DgMorphism(B, T0, images)
    diff = {names[g.name]: str(phi(B.differential_of(g.name))) for g in extra}
    T = C.extend([(names[g.name], g.degree) for g in extra], diff, name=name)
    j_B = DgMorphism(B, T, {k: T.element(v) for k, v in images.items()})
    j_C = DgMorphism(C, T, {})
    return T, j_B, j_C
