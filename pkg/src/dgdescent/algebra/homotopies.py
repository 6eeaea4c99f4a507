"""Homotopies and 2-simplices between DG morphisms."""

from __future__ import annotations

from typing import Mapping

from .forms import edge, embed, evaluate, level_of, reverse, with_forms
from .graded import AlgebraError, FreeGradedAlgebra
from .morphisms import DgMorphism


class Homotopy:
    """``body: B -> A (x) Omega_1`` with ``body(0) = source`` and ``body(1) = target``.

    Endpoints are recomputed from the body; the stored ``source_map`` and
    ``target_map`` are what the caller claims, and
    :func:`dgdescent.homotopy.verify_homotopy` compares the two.
    """

    def __init__(self, source_map: DgMorphism, target_map: DgMorphism, body: DgMorphism):
        if level_of(body.target) != 1:
            raise AlgebraError("homotopy body must land in A (x) Omega_1")
        self.source_map = source_map
        self.target_map = target_map
        self.body = body

    @property
    def domain(self) -> FreeGradedAlgebra:
        return self.body.source

    @property
    def codomain(self) -> FreeGradedAlgebra:
        return self.body.target.base

    @classmethod
    def from_images(cls, f: DgMorphism, g: DgMorphism, images: Mapping) -> "Homotopy":
        F = with_forms(f.target, 1)
        return cls(f, g, DgMorphism(f.source, F, images))

    @classmethod
    def constant(cls, f: DgMorphism) -> "Homotopy":
        F = with_forms(f.target, 1)
        return cls(f, f, DgMorphism(f.source, F, {k: embed(v, 1) for k, v in f.images.items()}))

    def at(self, t) -> DgMorphism:
        """Evaluate the body at ``t`` (a DG morphism ``B -> A``)."""
        return DgMorphism(self.domain, self.codomain,
                          {k: evaluate(v, t) for k, v in self.body.images.items()})

    def __call__(self, x):
        return self.body(x)

    def reversed(self) -> "Homotopy":
        return Homotopy(self.target_map, self.source_map,
                        DgMorphism(self.domain, self.body.target,
                                   {k: reverse(v) for k, v in self.body.images.items()}))

    def pushforward(self, phi: DgMorphism) -> "Homotopy":
        """Compose with ``phi: A -> A'`` (applied coefficientwise, forms untouched)."""
        F2 = with_forms(phi.target, 1)
        imgs = {k: v for k, v in phi.images.items()}
        psi = DgMorphism(self.body.target, F2, imgs)
        return Homotopy(phi.compose(self.source_map), phi.compose(self.target_map),
                        psi.compose(self.body))

    def precompose(self, h: DgMorphism) -> "Homotopy":
        """Restrict along ``h: B' -> B``."""
        return Homotopy(self.source_map.compose(h), self.target_map.compose(h),
                        self.body.compose(h))

    def __repr__(self):
        return f"<Homotopy {self.body.images}>"


class Simplex2:
    """``body: B -> A (x) Omega_2``; its edges are homotopies."""

    def __init__(self, body: DgMorphism):
        if level_of(body.target) != 2:
            raise AlgebraError("2-simplex body must land in A (x) Omega_2")
        self.body = body

    def edge(self, which: str) -> DgMorphism:
        F1 = with_forms(self.body.target.base, 1)
        return DgMorphism(self.body.source, F1,
                          {k: edge(v, which) for k, v in self.body.images.items()})

    def vertex(self, which: str) -> DgMorphism:
        from .forms import VERTICES
        pt = VERTICES[which]
        return DgMorphism(self.body.source, self.body.target.base,
                          {k: evaluate(v, pt) for k, v in self.body.images.items()})
