"""DG algebra morphisms."""

from __future__ import annotations

from typing import Dict, Mapping

from ..report import Report
from .graded import AlgebraError, Element, FreeGradedAlgebra


class DgMorphism:
    """Algebra map determined by generator images.

    Generators without an explicit image are sent to the target generator of
    the same name, so inclusions need no images at all.
    """

    def __init__(self, source: FreeGradedAlgebra, target: FreeGradedAlgebra,
                 images: Mapping | None = None, name: str | None = None):
        self.source = source
        self.target = target
        self.name = name
        images = dict(images or {})
        for k in images:
            if k not in source.index:
                raise AlgebraError(f"image given for unknown generator {k!r}")
        self.images: Dict[str, Element] = {}
        for g in source.generators:
            if g.name in images:
                self.images[g.name] = target.element(images[g.name])
            elif g.name in target.index:
                self.images[g.name] = target.gen(g.name)
            else:
                raise AlgebraError(f"no image for generator {g.name!r}")
        self._img = [self.images[g.name] for g in source.generators]
        self._powers: Dict[tuple, Element] = {}

    def image(self, name: str) -> Element:
        return self.images[name]

    def _power(self, i: int, k: int) -> Element:
        key = (i, k)
        p = self._powers.get(key)
        if p is None:
            p = self._img[i] ** k
            self._powers[key] = p
        return p

    def __call__(self, x) -> Element:
        x = self.source.element(x)
        tgt = self.target
        acc: dict = {}
        for m, c in x.terms.items():
            term = {tgt._zero_mono: c}
            for i, k in enumerate(m):
                if k:
                    term = tgt.mul_terms(term, self._power(i, k).terms)
                    if not term:
                        break
            for mm, cc in term.items():
                nc = acc.get(mm, 0) + cc
                if nc:
                    acc[mm] = nc
                else:
                    acc.pop(mm, None)
        return Element(tgt, acc)

    apply = __call__

    def compose(self, first: "DgMorphism") -> "DgMorphism":
        """``self o first``."""
        if first.target != self.source:
            raise AlgebraError("cannot compose: target/source mismatch")
        return DgMorphism(first.source, self.target,
                          {k: self(v) for k, v in first.images.items()})

    def then(self, second: "DgMorphism") -> "DgMorphism":
        return second.compose(self)

    def check(self) -> Report:
        return check_morphism(self)

    def is_valid(self) -> bool:
        return check_morphism(self).ok

    def equals(self, other: "DgMorphism") -> bool:
        return all(self.images[k] == other.target.element(other.images[k])
                   for k in self.images)

    def differs_at(self, other: "DgMorphism"):
        for g in self.source.generators:
            if self.images[g.name] != self.target.element(other.images[g.name]):
                return g.name
        return None

    def __repr__(self):
        imgs = ", ".join(f"{k}->{v}" for k, v in self.images.items())
        return f"<DgMorphism {self.name or ''} {imgs}>"


def identity(A: FreeGradedAlgebra) -> DgMorphism:
    return DgMorphism(A, A, {})


def inclusion(A: FreeGradedAlgebra, B: FreeGradedAlgebra) -> DgMorphism:
    return DgMorphism(A, B, {})


def check_morphism(f: DgMorphism) -> Report:
    """Degree-0 and d-compatibility on every generator."""
    rep = Report()
    for g in f.source.generators:
        img = f.images[g.name]
        if not img.is_zero():
            if not img.is_homogeneous():
                rep.fail(generator=g.name, kind="degree",
                         message=f"image of {g.name} is not homogeneous: {img}")
                continue
            if img.degree() != g.degree:
                rep.fail(generator=g.name, kind="degree",
                         message=f"image of {g.name} has degree {img.degree()}, expected {g.degree}")
                continue
    if rep.ok:
        for g in f.source.generators:
            lhs = f(f.source.differential_of(g.name))
            rhs = f.target.d(f.images[g.name])
            if lhs != rhs:
                rep.fail(generator=g.name, kind="differential",
                         message=f"f(d {g.name}) = {lhs} but d f({g.name}) = {rhs}")
    return rep
