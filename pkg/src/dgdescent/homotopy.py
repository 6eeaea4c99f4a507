"""Homotopies between DG morphisms: verification, composition, search.

All constructions run generator by generator in the canonical order
(degree descending).  For a resolving source the differential of a
generator only involves earlier generators, so each step is a linear
problem solved with the radial homotopy operator of the forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from .algebra.forms import (edge, edge_bump, embed, evaluate, horn_extension, interval_relative,
                            radial_homotopy, solve_basic, with_forms)
from .algebra.graded import AlgebraError, Element, FreeGradedAlgebra
from .algebra.homotopies import Homotopy, Simplex2
from .algebra.morphisms import DgMorphism, check_morphism
from .algebra.strands import solve_coboundary
from .report import Report


class BudgetExhausted(RuntimeError):
    pass


class FillingError(RuntimeError):
    """A filling step failed although its inputs were valid (internal bug)."""


@dataclass
class Obstruction:
    """Nonvanishing class met while building a homotopy or filler.

    ``cocycle`` lives in the target algebra; its class in the cohomology of
    degree ``degree`` is nonzero.
    """

    generator: str
    degree: int
    cocycle: Element
    info: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"generator": self.generator, "degree": self.degree,
                "cocycle": str(self.cocycle), **self.info}


def _partial_map(source: FreeGradedAlgebra, target: FreeGradedAlgebra, images: Dict) -> DgMorphism:
    imgs = {g.name: images.get(g.name, 0) for g in source.generators}
    return DgMorphism(source, target, imgs)


def verify_homotopy(theta: Homotopy) -> Report:
    """Body is a DG morphism and its endpoints are the stored maps."""
    rep = Report()
    body_rep = check_morphism(theta.body)
    rep.merge(body_rep, "body")
    for t, ref, label in ((0, theta.source_map, "source"), (1, theta.target_map, "target")):
        end = theta.at(t)
        for g in theta.domain.generators:
            want = end.target.element(ref.images[g.name])
            if end.images[g.name] != want:
                rep.fail(stage=label, generator=g.name,
                         message=f"theta({g.name})({t}) = {end.images[g.name]}, expected {want}")
    return rep


def constant_homotopy(f: DgMorphism) -> Homotopy:
    return Homotopy.constant(f)


def inverse(theta: Homotopy) -> Homotopy:
    return theta.reversed()


# -- 2-simplices ---------------------------------------------------------

def fill_horn(theta1: Homotopy, theta2: Homotopy) -> Simplex2:
    """2-simplex with edge ``ij = theta1`` and edge ``jk = theta2``."""
    B = theta1.domain
    A = theta1.codomain
    F2 = with_forms(A, 2)
    images: Dict[str, Element] = {}
    for g in B.generators:
        E = horn_extension({"ij": theta1.body.images[g.name], "jk": theta2.body.images[g.name]}, "j")
        E = F2.element(E)
        F = _partial_map(B, F2, images)
        w = F(B.differential_of(g.name)) - F2.d(E)
        beta = radial_homotopy(w, (1, 0)) if not w.is_zero() else F2.zero()
        images[g.name] = E + beta
    return Simplex2(DgMorphism(B, F2, images))


def compose_homotopies(theta1: Homotopy, theta2: Homotopy, check: bool = True) -> Homotopy:
    """``theta1: f => g`` then ``theta2: g => h`` gives ``f => h`` (third edge of a horn filler)."""
    if not theta1.target_map.equals(theta2.source_map):
        if theta1.at(1).differs_at(theta2.at(0)) is not None:
            raise AlgebraError("homotopies are not composable: endpoints differ")
    sigma = fill_horn(theta1, theta2)
    out = Homotopy(theta1.source_map, theta2.target_map, sigma.edge("ik"))
    if check:
        rep = verify_homotopy(out)
        if not rep.ok:
            raise FillingError(f"composite failed verification: {rep.first_failure}")
    return out


def _fill_triangle(ij: Homotopy, ik: Homotopy, jk: Homotopy, solver, collect: bool):
    B = ij.domain
    A = ij.codomain
    F2 = with_forms(A, 2)
    images: Dict[str, Element] = {}
    obstructions = []
    for g in B.generators:
        a, b, c = (ij.body.images[g.name], ik.body.images[g.name], jk.body.images[g.name])
        E = F2.element(horn_extension({"ij": a, "ik": b}, "i"))
        delta = c - edge(E, "jk")
        if not delta.is_zero():
            E = E + edge_bump(delta)
        F = _partial_map(B, F2, images)
        w = F(B.differential_of(g.name)) - F2.d(E)
        if w.is_zero():
            images[g.name] = E
            continue
        beta0 = radial_homotopy(w, (0, 0))
        gamma = edge(beta0, "jk")
        if gamma.is_zero():
            images[g.name] = E + beta0
            continue
        sigma, obstruction = interval_relative(gamma, solver)
        if sigma is None:
            obstructions.append(Obstruction(g.name, obstruction.degree(), obstruction,
                                            {"stage": "triangle"}))
            if not collect:
                break
            images[g.name] = E + beta0
            continue
        images[g.name] = E + beta0 - F2.d(edge_bump(sigma))
    return DgMorphism(B, F2, {g.name: images.get(g.name, F2.zero()) for g in B.generators}), obstructions


def fill_triangle(ij: Homotopy, ik: Homotopy, jk: Homotopy, exact_solver=None):
    """Fill a triangle with prescribed boundary.

    Returns ``(Simplex2, None)`` or ``(None, Obstruction)``.  The search is
    greedy: an obstruction at generator ``x`` is the class of ``sigma(1)``
    in ``h^{|x|-1}`` of the target given the choices made on earlier
    generators.
    """
    body, obs = _fill_triangle(ij, ik, jk, exact_solver or solve_coboundary, False)
    if obs:
        return None, obs[0]
    return Simplex2(body), None


def triangle_obstructions(ij: Homotopy, ik: Homotopy, jk: Homotopy, exact_solver=None):
    """All obstructions met when filling, continuing past each one.

    Only meaningful for generators whose differentials avoid the obstructed
    ones (e.g. the new generators of a single degree); returns the body and
    the list of obstructions.
    """
    return _fill_triangle(ij, ik, jk, exact_solver or solve_coboundary, True)


def verify_simplex(sigma: Simplex2, ij: Homotopy, ik: Homotopy, jk: Homotopy) -> Report:
    rep = Report()
    rep.merge(check_morphism(sigma.body), "body")
    for name, h in (("ij", ij), ("ik", ik), ("jk", jk)):
        e = sigma.edge(name)
        for g in sigma.body.source.generators:
            if e.images[g.name] != h.body.images[g.name]:
                rep.fail(stage=f"edge {name}", generator=g.name,
                         message=f"edge {name} at {g.name} differs")
    return rep


def homotopic_rel_endpoints(theta: Homotopy, other: Homotopy):
    """Try to fill ``(theta, other, constant)``; ``(True, None)`` when it fills."""
    const = Homotopy.constant(theta.target_map)
    sigma, obs = fill_triangle(theta, other, const)
    return sigma is not None, obs


def loop_class(loop: Homotopy):
    """``None`` if the loop bounds a disc rel base point, else the obstruction."""
    const = Homotopy.constant(loop.source_map)
    sigma, obs = fill_triangle(loop, const, const)
    return obs


# -- greedy homotopy search ----------------------------------------------

def try_build_homotopy(f: DgMorphism, g: DgMorphism, budget: Optional[int] = None):
    """Homotopy ``f => g`` or the first obstruction.

    ``budget`` bounds ``|degree|`` of the generators that may be processed;
    generators beyond it raise :class:`BudgetExhausted`.  Sound but not
    complete: there is no backtracking over earlier choices.
    """
    B, A = f.source, f.target
    if g.source != B or g.target != A:
        raise AlgebraError("morphisms must share source and target")
    F1 = with_forms(A, 1)
    t = F1.gen("_t")
    images: Dict[str, Element] = {}
    for x in B.generators:
        if budget is not None and -x.degree > budget:
            raise BudgetExhausted(f"generator {x.name} of degree {x.degree} beyond budget {budget}")
        fx, gx = embed(f.images[x.name], 1), embed(g.images[x.name], 1)
        E = fx * (1 - t) + gx * t
        H = _partial_map(B, F1, images)
        w = H(B.differential_of(x.name)) - F1.d(E)
        if w.is_zero():
            images[x.name] = E
            continue
        beta, obstruction = interval_relative(w, solve_coboundary)
        if beta is None:
            return Obstruction(x.name, obstruction.degree(), obstruction, {"stage": "interval"})
        images[x.name] = E + beta
    theta = Homotopy(f, g, DgMorphism(B, F1, images))
    rep = verify_homotopy(theta)
    if not rep.ok:
        raise FillingError(f"constructed homotopy failed verification: {rep.first_failure}")
    return theta


def induced_maps_agree(theta: Homotopy) -> bool:
    """Endpoints of a homotopy induce the same map on ``h^0`` (degree-0 generators)."""
    from .cohomology import h0_ring
    from .algebra.strands import degree0_ring
    A = theta.codomain
    R = h0_ring(A)
    P = degree0_ring(A)
    f, g = theta.at(0), theta.at(1)
    for x in theta.domain.degree_zero_names():
        diff = f.images[x] - g.images[x]
        if diff.is_zero():
            continue
        if not R.contains(P(str(diff))):
            return False
    return True


# -- homotopy modules ----------------------------------------------------

@dataclass
class PiModule:
    """``pi_level`` of the mapping space at ``base_point``, presented as ``h^{-level} Der_C(B, A)``.

    The identification with homotopy groups is a labeling: for ``level >= 2``
    the module is the abelian group itself; for ``level = 1`` it carries the
    group structure transported along the linearization.
    """

    level: int
    module: object
    base_point: DgMorphism
    base: FreeGradedAlgebra

    def is_trivial(self) -> bool:
        return self.module.is_zero()

    def to_dict(self) -> dict:
        return {"level": self.level, "base_point": {k: str(v) for k, v in self.base_point.images.items()},
                "module": self.module.to_dict()}


def pi_module(C: FreeGradedAlgebra, B: FreeGradedAlgebra, P: DgMorphism, level: int, window=None) -> PiModule:
    from .cohomology import h_theta
    if level < 1:
        raise ValueError("homotopy modules are defined for level >= 1")
    rep = check_morphism(P)
    if not rep.ok:
        raise AlgebraError(f"base point is not a DG morphism: {rep.first_failure}")
    return PiModule(level, h_theta(C, B, P, level, window), P, C)
