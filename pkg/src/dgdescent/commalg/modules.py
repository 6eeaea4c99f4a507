"""Finitely generated modules over presented rings.

A module is stored as a subquotient ``(<generators> + N) / N`` of a free
module ``R^m``; ``N`` is the relation submodule.  A cokernel presentation is
the special case where the generators are the standard basis.  Every
question (zero test, membership, kernels, preimages) is answered with one
Groebner basis computation over the ambient polynomial ring, with the ring
relations added on every coordinate.

Maps may go between modules over different rings along a :class:`RingMap`
(for example restriction to a localization).  Kernels and preimages are then
computed by eliminating the target-only variables.
"""

from __future__ import annotations

from functools import cached_property
from typing import Dict, List, Optional, Sequence

from .groebner import ONE, QQ, ZERO, TermOrder, Vector, add_into, groebner, lead, normal_form
from .rings import Poly, PolyRing, PresentedRing, RingMap, format_poly

__all__ = ["ModulePresentation", "ModuleMap", "vector", "entries", "intersect"]


def vector(ring: PresentedRing, entries_: Sequence) -> Vector:
    """Raw vector from a list of polynomials (or strings/numbers)."""
    out: Vector = {}
    for p, x in enumerate(entries_):
        for e, c in ring.ambient(x).terms.items():
            out[(p, e)] = c
    return out


def entries(ring: PresentedRing, v: Vector, rank: int) -> List[Poly]:
    rows: List[Dict] = [dict() for _ in range(rank)]
    for (p, e), c in v.items():
        rows[p][e] = c
    return [Poly(ring.ambient, r) for r in rows]


def _ideal_on(ring: PresentedRing, positions) -> List[Vector]:
    out = []
    for p in positions:
        for g in ring.gb_vectors:
            out.append({(p, e): c for (_, e), c in g.items()})
    return out


def _shift_pos(v: Vector, k: int) -> Vector:
    return {(p + k, e): c for (p, e), c in v.items()}


def _poly_times_vector(poly_terms: Dict, v: Vector) -> Vector:
    out: Vector = {}
    for e1, c1 in poly_terms.items():
        add_into(out, v, c1, e1)
    return out


class _System:
    """Linear systems ``sum_j a_j * image_j == rhs  (mod relations)``.

    The images live in a module over the target ring; the unknowns ``a_j``
    are required to lie in the source ring, which maps to the target ring by
    ``ring_map`` (``None`` = same ring).
    """

    def __init__(self, target_ring: PresentedRing, target_rank: int, target_rels: Sequence[Vector],
                 images: Sequence[Vector], source_ring: PresentedRing | None = None,
                 ring_map: RingMap | None = None):
        self.m = target_rank
        self.n = len(images)
        self.target_ring = target_ring
        self.source_ring = source_ring or target_ring
        tvars = target_ring.variables
        renaming = None
        if ring_map is not None and not ring_map.is_identity():
            renaming = ring_map.renaming()
            if renaming is None:
                self.mode = "graph"
            else:
                self.mode = "rename"
        else:
            self.mode = "same"
        if self.mode == "graph":
            svars = ["src:" + v for v in self.source_ring.variables]
            big = PolyRing(list(tvars) + svars)
            k = len(tvars)
            self.nvars = big.nvars
            self._t_embed = lambda e: e + (0,) * len(svars)
            self._s_embed = lambda e: (0,) * k + e
            self._s_extract = lambda e: e[k:] if not any(e[:k]) else None
            elim = range(k)
            extra = []
            for v in self.source_ring.variables:
                g = (big.var("src:" + v) - ring_map.images[v].rename_into(big))
                for p in range(self.m):
                    extra.append(g.vector(p))
        else:
            self.nvars = len(tvars)
            self._t_embed = lambda e: e
            if self.mode == "rename":
                idx = [renaming[i] for i in range(len(self.source_ring.variables))]
                nt = len(tvars)

                def s_embed(e, idx=idx, nt=nt):
                    out = [0] * nt
                    for i, x in enumerate(e):
                        if x:
                            out[idx[i]] = x
                    return tuple(out)

                def s_extract(e, idx=idx):
                    if any(x for i, x in enumerate(e) if i not in idxset):
                        return None
                    return tuple(e[j] for j in idx)

                idxset = set(idx)
                self._s_embed = s_embed
                self._s_extract = s_extract
                elim = [i for i in range(nt) if i not in idxset]
            else:
                self._s_embed = lambda e: e
                self._s_extract = lambda e: e
                elim = ()
            extra = []
        self.order = TermOrder(self.nvars, elim_vars=elim, elim_positions=self.m)
        base: List[Vector] = []
        for r in list(target_rels) + _ideal_on(target_ring, range(self.m)):
            base.append(self._embed_t(r))
        base.extend(extra)
        for j, img in enumerate(images):
            w = self._embed_t(img)
            w[(self.m + j, self._s_embed(self.source_ring.ambient.zero_exp))] = ONE
            base.append(w)
        self.gb = groebner(base, self.order)

    def _embed_t(self, v: Vector) -> Vector:
        return {(p, self._t_embed(e)): c for (p, e), c in v.items()}

    def _extract_source(self, v: Vector) -> Optional[Vector]:
        out = {}
        for (p, e), c in v.items():
            if p < self.m:
                return None
            se = self._s_extract(e)
            if se is None:
                return None
            out[(p - self.m, se)] = c
        return out

    def syzygies(self) -> List[Vector]:
        out = []
        for g in self.gb:
            if lead(g, self.order)[0] < self.m:
                continue
            s = self._extract_source(g)
            if s is not None:
                out.append(s)
        return out

    def solve(self, rhs: Vector) -> Optional[Vector]:
        """Coefficients ``a`` (source ring) with ``sum a_j image_j == rhs``; None if unsolvable."""
        r = normal_form(self._embed_t(rhs), self.gb, self.order)
        s = self._extract_source(r)
        if s is None:
            return None
        return {t: -c for t, c in s.items()}


class ModulePresentation:
    """Subquotient ``(span(generators) + relations) / relations`` of ``R^ambient_rank``."""

    def __init__(self, ring: PresentedRing, ambient_rank: int,
                 generators: Optional[Sequence[Vector]] = None,
                 relations: Sequence[Vector] = ()):
        self.ring = ring
        self.ambient_rank = ambient_rank
        if generators is None:
            generators = [{(p, ring.ambient.zero_exp): ONE} for p in range(ambient_rank)]
        self.gens = [dict(g) for g in generators]
        self.rels = [dict(r) for r in relations if r]

    # -- constructors -------------------------------------------------
    @classmethod
    def free(cls, ring: PresentedRing, rank: int) -> "ModulePresentation":
        return cls(ring, rank)

    @classmethod
    def cokernel(cls, ring: PresentedRing, rank: int, relations: Sequence) -> "ModulePresentation":
        """``R^rank / (relations)``; relations are lists of polynomials or raw vectors."""
        rels = [r if isinstance(r, dict) else vector(ring, r) for r in relations]
        return cls(ring, rank, None, rels)

    @classmethod
    def subquotient(cls, ring: PresentedRing, rank: int, generators: Sequence, relations: Sequence = ()):
        gens = [g if isinstance(g, dict) else vector(ring, g) for g in generators]
        rels = [r if isinstance(r, dict) else vector(ring, r) for r in relations]
        return cls(ring, rank, gens, rels)

    @classmethod
    def zero(cls, ring: PresentedRing) -> "ModulePresentation":
        return cls(ring, 0, [], [])

    # -- basic data ----------------------------------------------------
    @property
    def n_generators(self) -> int:
        return len(self.gens)

    @cached_property
    def rel_gb(self) -> List[Vector]:
        vecs = list(self.rels) + _ideal_on(self.ring, range(self.ambient_rank))
        return groebner(vecs, self.ring.ambient.order)

    @cached_property
    def span_gb(self) -> List[Vector]:
        vecs = list(self.gens) + list(self.rels) + _ideal_on(self.ring, range(self.ambient_rank))
        return groebner(vecs, self.ring.ambient.order)

    def reduce(self, v: Vector) -> Vector:
        return normal_form(v, self.rel_gb, self.ring.ambient.order)

    def element_is_zero(self, v: Vector) -> bool:
        return not self.reduce(v)

    def contains(self, v: Vector) -> bool:
        """Is ``v`` (ambient vector) in span(generators) + relations?"""
        return not normal_form(v, self.span_gb, self.ring.ambient.order)

    def is_zero(self) -> bool:
        return all(self.element_is_zero(g) for g in self.gens)

    def combination(self, coeffs: Vector) -> Vector:
        """Ambient vector ``sum_j coeffs_j * generator_j`` (coeffs indexed by generator)."""
        out: Vector = {}
        for (j, e), c in coeffs.items():
            add_into(out, self.gens[j], c, e)
        return out

    @cached_property
    def syzygies(self) -> List[Vector]:
        sys_ = _System(self.ring, self.ambient_rank, self.rels, self.gens)
        return sys_.syzygies()

    @cached_property
    def is_cokernel_form(self) -> bool:
        zero = self.ring.ambient.zero_exp
        return len(self.gens) == self.ambient_rank and all(
            g == {(p, zero): ONE} for p, g in enumerate(self.gens))

    @property
    def relations(self) -> List[Vector]:
        """Relations among the generators (cokernel presentation, ring relations implicit)."""
        return self.rels if self.is_cokernel_form else self.syzygies

    def presentation(self) -> "ModulePresentation":
        if self.is_cokernel_form:
            return self
        return ModulePresentation(self.ring, self.n_generators, None, self.syzygies)

    def express(self, v: Vector) -> Optional[Vector]:
        """Coefficients expressing ``v`` in terms of the generators (mod relations)."""
        sys_ = _System(self.ring, self.ambient_rank, self.rels, self.gens)
        return sys_.solve(v)

    def base_change(self, ring_map: RingMap) -> "ModulePresentation":
        """``M (x)_R R'`` presented by the mapped relations."""
        if ring_map.source.ambient != self.ring.ambient:
            raise ValueError("ring map does not start at the module's ring")
        if not ring_map.check():
            raise ValueError("ring map does not respect the relations")
        rels = []
        for s in self.relations:
            w: Vector = {}
            for (p, e), c in s.items():
                img = ring_map(Poly(self.ring.ambient, {e: c}))
                for e2, c2 in img.terms.items():
                    t = (p, e2)
                    nc = w.get(t, ZERO) + c2
                    if nc:
                        w[t] = nc
                    else:
                        w.pop(t, None)
            rels.append(w)
        return ModulePresentation(ring_map.target, self.n_generators, None, rels)

    def dim_q(self) -> Optional[int]:
        """Dimension over Q when finite, else None."""
        pres = self.presentation()
        leads = [lead(g, self.ring.ambient.order) for g in pres.rel_gb]
        total = 0
        for p in range(pres.ambient_rank):
            lp = [e for q, e in leads if q == p]
            sub = PresentedRing(self.ring.ambient, [Poly(self.ring.ambient, {e: ONE}) for e in lp])
            sm = sub.standard_monomials()
            if sm is None:
                return None
            total += len(sm)
        return total

    def direct_sum(self, other: "ModulePresentation") -> "ModulePresentation":
        if other.ring.ambient != self.ring.ambient:
            raise ValueError("direct sum over different rings")
        m = self.ambient_rank
        gens = list(self.gens) + [_shift_pos(g, m) for g in other.gens]
        rels = list(self.rels) + [_shift_pos(r, m) for r in other.rels]
        return ModulePresentation(self.ring, m + other.ambient_rank, gens, rels)

    def describe(self) -> str:
        return (f"module over {self.ring}: {self.n_generators} generators in rank "
                f"{self.ambient_rank}, {len(self.relations)} relations")

    def format_vector(self, v: Vector) -> str:
        ents = entries(self.ring, v, self.ambient_rank)
        return "(" + ", ".join(str(x) for x in ents) + ")"

    def to_dict(self) -> dict:
        pres_rels = [[str(x) for x in entries(self.ring, s, self.n_generators)] for s in self.relations]
        return {
            "ring": {"variables": list(self.ring.variables),
                     "relations": [str(r) for r in self.ring.relations]},
            "generators": [[str(x) for x in entries(self.ring, g, self.ambient_rank)] for g in self.gens],
            "presentation_relations": pres_rels,
            "is_zero": self.is_zero(),
        }

    def __repr__(self):
        return f"<ModulePresentation {self.describe()}>"


class ModuleMap:
    """Map ``source -> target`` sending generator j of ``source`` to ``images[j]``.

    Images are ambient vectors of ``target``.  If ``ring_map`` is given the
    map is semilinear over it (the target is a module over ``ring_map.target``).
    """

    def __init__(self, source: ModulePresentation, target: ModulePresentation,
                 images: Sequence[Vector], ring_map: RingMap | None = None):
        if len(images) != source.n_generators:
            raise ValueError("one image per source generator required")
        if ring_map is None and source.ring.ambient != target.ring.ambient:
            raise ValueError("modules over different rings need a ring map")
        self.source = source
        self.target = target
        self.images = [dict(v) for v in images]
        self.ring_map = ring_map

    @cached_property
    def _system(self) -> _System:
        return _System(self.target.ring, self.target.ambient_rank, self.target.rels, self.images,
                       self.source.ring, self.ring_map)

    def _map_coeffs(self, coeffs: Vector) -> Vector:
        """Apply to a coefficient vector over the source generators."""
        out: Vector = {}
        for (j, e), c in coeffs.items():
            p = Poly(self.source.ring.ambient, {e: c})
            if self.ring_map is not None:
                p = self.ring_map(p)
            add_into(out, _poly_times_vector(p.terms, self.images[j]))
        return out

    def apply(self, coeffs: Vector) -> Vector:
        return self._map_coeffs(coeffs)

    def check(self) -> bool:
        """Well-definedness: relations among source generators map into target relations."""
        return all(self.target.element_is_zero(self._map_coeffs(s)) for s in self.source.syzygies)

    def kernel(self) -> ModulePresentation:
        syz = self._system.syzygies()
        gens = [self.source.combination(s) for s in syz]
        return ModulePresentation(self.source.ring, self.source.ambient_rank, gens, self.source.rels)

    def kernel_coefficients(self) -> List[Vector]:
        return self._system.syzygies()

    def preimage(self, v: Vector) -> Optional[Vector]:
        """Coefficients ``a`` over the source ring with ``map(a) == v``; None if none exist."""
        return self._system.solve(v)

    def base_changed(self) -> "ModuleMap":
        if self.ring_map is None or self.ring_map.is_identity():
            return self
        src = self.source.base_change(self.ring_map)
        return ModuleMap(src, self.target, self.images)

    def image(self) -> ModulePresentation:
        m = self.base_changed()
        return ModulePresentation(m.target.ring, m.target.ambient_rank, m.images, m.target.rels)

    def cokernel(self) -> ModulePresentation:
        m = self.base_changed()
        return ModulePresentation(m.target.ring, m.target.ambient_rank, m.target.gens,
                                  list(m.target.rels) + list(m.images))

    def is_injective(self) -> bool:
        return self.kernel().is_zero()

    def is_surjective(self) -> bool:
        return self.cokernel().is_zero()

    def is_isomorphism(self):
        """(bool, certificate); the certificate records kernel and cokernel checks."""
        m = self.base_changed()
        ker = m.kernel()
        cok = m.cokernel()
        ker_zero = ker.is_zero()
        cok_zero = cok.is_zero()
        cert = {
            "well_defined": m.check(),
            "kernel_generators": ker.n_generators,
            "kernel_zero": ker_zero,
            "cokernel_zero": cok_zero,
        }
        return (ker_zero and cok_zero and cert["well_defined"]), cert


def intersect(ring: PresentedRing, rank: int, first: Sequence[Vector], second: Sequence[Vector]) -> List[Vector]:
    """Generators of ``span(first) ∩ span(second)`` inside ``R^rank``."""
    src = ModulePresentation(ring, rank, list(first), [])
    tgt = ModulePresentation(ring, rank, None, list(second))
    mp = ModuleMap(ModulePresentation(ring, len(first)), tgt, list(first))
    return [src.combination(s) for s in mp.kernel_coefficients()]
