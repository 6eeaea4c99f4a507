"""Polynomial rings over Q, their quotients, and ring maps."""

from __future__ import annotations

from functools import cached_property
from typing import Dict, Iterable, Mapping, Sequence

from .groebner import ONE, QQ, ZERO, TermOrder, groebner, lead, normal_form

__all__ = ["PolyRing", "Poly", "PresentedRing", "RingMap", "QQ"]


class PolyRing:
    """Q[x_1..x_n] with the graded reverse lexicographic order (x_1 > x_2 > ...)."""

    def __init__(self, variables: Sequence[str]):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        self.index = {v: i for i, v in enumerate(self.variables)}
        self.nvars = len(self.variables)
        self.order = TermOrder(self.nvars)

    def __repr__(self):
        return f"PolyRing({', '.join(self.variables)})"

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    @property
    def zero_exp(self):
        return (0,) * self.nvars

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {self.zero_exp: ONE})

    def const(self, c) -> "Poly":
        c = QQ(c)
        return Poly(self, {self.zero_exp: c} if c else {})

    def var(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Poly(self, {tuple(e): ONE})

    def gens(self):
        return [self.var(v) for v in self.variables]

    def parse(self, text: str) -> "Poly":
        from .._expr import ExprError, parse_expression

        def lookup(name, col):
            if name not in self.index:
                raise ExprError(f"unknown variable {name!r}", col)
            return self.var(name)

        return parse_expression(text, lookup, self.one())

    def __call__(self, x) -> "Poly":
        if isinstance(x, Poly):
            if x.ring == self:
                return x
            return x.rename_into(self)
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)


class Poly:
    """Immutable polynomial with rational coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials over different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, ZERO) + c
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t: Dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, ZERO) + c1 * c2
        return Poly(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self):
        if not self.terms:
            return ZERO
        if list(self.terms) == [self.ring.zero_exp]:
            return self.terms[self.ring.zero_exp]
        return None

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables_used(self):
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return {self.ring.variables[i] for i in used}

    def subs(self, images: Mapping[str, "Poly"], target: PolyRing | None = None) -> "Poly":
        """Substitute variables by polynomials (over ``target``)."""
        target = target or self.ring
        cache: Dict = {}
        out = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    name = self.ring.variables[i]
                    key = (name, k)
                    if key not in cache:
                        img = images.get(name)
                        if img is None:
                            img = target.var(name)
                        cache[key] = target(img) ** k
                    term = term * cache[key]
            out = out + term
        return out

    def rename_into(self, ring: PolyRing) -> "Poly":
        idx = [ring.index[v] if v in ring.index else None for v in self.ring.variables]
        t = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    if idx[i] is None:
                        raise ValueError(f"variable {self.ring.variables[i]!r} not in {ring}")
                    ne[idx[i]] = k
            t[tuple(ne)] = c
        return Poly(ring, t)

    def diff(self, name: str) -> "Poly":
        i = self.ring.index[name]
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return Poly(self.ring, t)

    def sorted_terms(self):
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda ec: key((0, ec[0])), reverse=True)

    def leading_exp(self):
        return lead(self.vector(), self.ring.order)[1]

    def vector(self, pos: int = 0):
        return {(pos, e): c for e, c in self.terms.items()}

    def __str__(self):
        return format_poly(self.ring.variables, self.sorted_terms())

    def __repr__(self):
        return f"Poly({self})"


def format_monomial(names, e) -> str:
    parts = []
    for n, k in zip(names, e):
        if k == 1:
            parts.append(n)
        elif k:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def format_coeff(c) -> str:
    c = QQ(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(names, items) -> str:
    """Render ``[(exp, coeff), ...]`` in the DSL syntax."""
    if not items:
        return "0"
    out = ""
    for k, (e, c) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(names, e)
        if not mono:
            body = format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_coeff(a)}*{mono}"
        if k == 0:
            out = f"-{body}" if neg else body
        else:
            out += f" - {body}" if neg else f" + {body}"
    return out


class PresentedRing:
    """Q[vars]/(relations), with a cached reduced Groebner basis."""

    def __init__(self, ambient: PolyRing | Sequence[str], relations: Iterable = ()):
        if not isinstance(ambient, PolyRing):
            ambient = PolyRing(ambient)
        self.ambient = ambient
        self.relations = tuple(ambient(r) for r in relations)

    def __repr__(self):
        rels = ", ".join(str(r) for r in self.relations)
        return f"Q[{', '.join(self.ambient.variables)}]/({rels})"

    @property
    def variables(self):
        return self.ambient.variables

    @cached_property
    def gb_vectors(self):
        return groebner([r.vector() for r in self.relations if r], self.ambient.order)

    @property
    def gb(self):
        return [Poly(self.ambient, {e: c for (_, e), c in v.items()}) for v in self.gb_vectors]

    def reduce(self, p) -> Poly:
        p = self.ambient(p)
        r = normal_form(p.vector(), self.gb_vectors, self.ambient.order)
        return Poly(self.ambient, {e: c for (_, e), c in r.items()})

    def contains(self, p) -> bool:
        return self.reduce(p).is_zero()

    def is_trivial(self) -> bool:
        return any(self.ambient.zero_exp == lead(v, self.ambient.order)[1] for v in self.gb_vectors)

    def is_unit(self, p) -> bool:
        """True iff ``p`` is invertible in this ring."""
        gens = list(self.gb_vectors) + [self.ambient(p).vector()]
        g = groebner(gens, self.ambient.order)
        return any(lead(v, self.ambient.order)[1] == self.ambient.zero_exp for v in g)

    def same_ideal(self, other: "PresentedRing") -> bool:
        if other.ambient != self.ambient:
            return False
        return self.gb_vectors == other.gb_vectors

    def quotient(self, extra: Iterable) -> "PresentedRing":
        return PresentedRing(self.ambient, list(self.relations) + [self.ambient(p) for p in extra])

    def standard_monomials(self, limit: int = 10000):
        """Q-basis of a finite-dimensional quotient; None if infinite (or over ``limit``)."""
        leads = [lead(v, self.ambient.order)[1] for v in self.gb_vectors]
        n = self.ambient.nvars
        if self.ambient.zero_exp in leads:
            return []
        for i in range(n):
            if not any(le[i] > 0 and sum(le) == le[i] for le in leads):
                return None
        out = []
        stack = [self.ambient.zero_exp]
        seen = set(stack)
        while stack:
            e = stack.pop()
            if any(all(a <= b for a, b in zip(le, e)) for le in leads):
                continue
            out.append(e)
            if len(out) > limit:
                return None
            for i in range(n):
                ne = list(e)
                ne[i] += 1
                ne = tuple(ne)
                if ne not in seen:
                    seen.add(ne)
                    stack.append(ne)
        key = self.ambient.order.key
        out.sort(key=lambda e: key((0, e)))
        return out


class RingMap:
    """Q-algebra map ``source -> target`` given by images of the variables."""

    def __init__(self, source: PresentedRing, target: PresentedRing,
                 images: Mapping[str, object] | None = None):
        self.source = source
        self.target = target
        images = dict(images or {})
        self.images = {}
        for v in source.variables:
            img = images.get(v, v if v in target.ambient.index else None)
            if img is None:
                raise ValueError(f"no image given for variable {v!r}")
            self.images[v] = target.ambient(img)

    @classmethod
    def identity(cls, ring: PresentedRing) -> "RingMap":
        return cls(ring, ring, {})

    def __call__(self, p) -> Poly:
        p = self.source.ambient(p)
        return p.subs(self.images, self.target.ambient)

    def renaming(self):
        """Map source variable index -> target variable index, when every image is a distinct variable."""
        out = {}
        for v, img in self.images.items():
            if len(img.terms) != 1:
                return None
            (e, c), = img.terms.items()
            if c != 1 or sum(e) != 1:
                return None
            out[self.source.ambient.index[v]] = e.index(1)
        if len(set(out.values())) != len(out):
            return None
        return out

    def is_identity(self) -> bool:
        return (self.source.ambient == self.target.ambient
                and all(self.images[v] == self.target.ambient.var(v) for v in self.source.variables)
                and self.source.same_ideal(self.target))

    def check(self) -> bool:
        """Relations of the source map into the target ideal."""
        return all(self.target.contains(self(r)) for r in self.source.relations)

    def compose(self, after: "RingMap") -> "RingMap":
        """``after o self``."""
        return RingMap(self.source, after.target, {v: after(img) for v, img in self.images.items()})

    def _graph(self):
        """Graph ring Q[target vars, src vars] with the graph ideal, eliminating target vars."""
        tv = list(self.target.variables)
        sv = ["src:" + v for v in self.source.variables]
        big = PolyRing(tv + sv)
        rels = [r.rename_into(big) for r in self.target.relations]
        for v in self.source.variables:
            rels.append(big.var("src:" + v) - self.images[v].rename_into(big))
        order = TermOrder(big.nvars, elim_vars=range(len(tv)))
        gb = groebner([r.vector() for r in rels if r], order)
        return big, order, gb, len(tv)

    def kernel(self) -> list:
        """Generators of ker(Q[src vars] -> target)."""
        big, order, gb, k = self._graph()
        out = []
        for v in gb:
            if all(not any(e[:k]) for (_, e) in v):
                out.append(Poly(self.source.ambient, {e[k:]: c for (_, e), c in v.items()}))
        return out

    def is_injective(self) -> bool:
        return all(self.source.contains(p) for p in self.kernel())

    def is_surjective(self) -> bool:
        big, order, gb, k = self._graph()
        for v in self.target.variables:
            r = normal_form(big.var(v).vector(), gb, order)
            if any(any(e[:k]) for (_, e) in r):
                return False
        return True

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()
