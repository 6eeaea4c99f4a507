"""Free graded-commutative DG algebras over Q.

Generators are kept in a canonical order: degree descending, ties broken by
insertion order.  A monomial is an exponent tuple over that order; odd
generators have exponent 0 or 1.  The monomial ``e`` stands for the ordered
product ``g_0^{e_0} g_1^{e_1} ...``, which fixes the sign convention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..commalg.groebner import QQ
from .._expr import ExprError, parse_expression

Mono = Tuple[int, ...]

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")
RESERVED_PREFIX = "_"


class AlgebraError(ValueError):
    """Raised for malformed algebras, elements or maps."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 != 0


def _as_generator(g) -> Generator:
    if isinstance(g, Generator):
        return g
    if isinstance(g, str):
        name, _, deg = g.partition(":")
        return Generator(name.strip(), int(deg))
    name, deg = g
    return Generator(str(name), int(deg))


class FreeGradedAlgebra:
    """Semi-free graded-commutative DG algebra ``Q[gens]`` with differential.

    ``differential`` maps generator names to anything :meth:`element`
    accepts.  Generators missing from it are cocycles.  Names beginning with
    an underscore are reserved for internal use (polynomial forms), and
    positive degrees are only allowed with ``allow_positive``.
    """

    def __init__(self, generators: Iterable = (), differential: Mapping | None = None, *,
                 name: str | None = None, allow_positive: bool = False,
                 allow_reserved: bool = False, check: bool = True):
        gens = [_as_generator(g) for g in generators]
        seen = set()
        for g in gens:
            if not _NAME.match(g.name):
                raise AlgebraError(f"invalid generator name {g.name!r}")
            if g.name in seen:
                raise AlgebraError(f"duplicate generator {g.name!r}")
            if g.name.startswith(RESERVED_PREFIX) and not allow_reserved:
                raise AlgebraError(f"generator names may not start with '_': {g.name!r}")
            if g.degree > 0 and not allow_positive:
                raise AlgebraError(f"generator {g.name!r} has positive degree {g.degree}")
            seen.add(g.name)
        order = sorted(range(len(gens)), key=lambda i: (-gens[i].degree, i))
        self.generators: Tuple[Generator, ...] = tuple(gens[i] for i in order)
        self.insertion: Tuple[Generator, ...] = tuple(gens)
        self.name = name
        self.allow_positive = allow_positive
        self.allow_reserved = allow_reserved
        self.index: Dict[str, int] = {g.name: i for i, g in enumerate(self.generators)}
        self.degrees = tuple(g.degree for g in self.generators)
        self.odd = tuple(g.odd for g in self.generators)
        self._odd_pos = tuple(i for i, o in enumerate(self.odd) if o)
        self.n = len(self.generators)
        self._zero_mono = (0,) * self.n
        self._dmemo: Dict[Mono, Dict[Mono, object]] = {}
        diff = dict(differential or {})
        for k in diff:
            if k not in self.index:
                raise AlgebraError(f"differential given for unknown generator {k!r}")
        self._d: List[Element] = []
        for g in self.generators:
            v = diff.get(g.name, 0)
            try:
                e = self.element(v)
            except ExprError as exc:
                raise AlgebraError(f"d {g.name}: {exc}") from exc
            self._d.append(e)
        if check:
            self.validate()

    # -- structure -------------------------------------------------------
    def validate(self) -> None:
        """Check degrees of differentials and d^2 = 0 on generators."""
        for i, g in enumerate(self.generators):
            dv = self._d[i]
            if dv.is_zero():
                continue
            if not dv.is_homogeneous() or dv.degree() != g.degree + 1:
                raise AlgebraError(
                    f"d {g.name} must be homogeneous of degree {g.degree + 1}, got {dv}"
                    + (f" (degree {dv.degree()})" if dv.is_homogeneous() else " (inhomogeneous)"))
        for i, g in enumerate(self.generators):
            dd = self.d(self._d[i])
            if not dd.is_zero():
                raise AlgebraError(f"d^2 {g.name} = {dd} is not zero")

    def differential_of(self, name: str) -> "Element":
        return self._d[self.index[name]]

    def differential_map(self) -> Dict[str, "Element"]:
        return {g.name: self._d[i] for i, g in enumerate(self.generators)}

    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def generator(self, name: str) -> Generator:
        return self.generators[self.index[name]]

    def degree_zero_names(self) -> List[str]:
        return [g.name for g in self.generators if g.degree == 0]

    def negative_names(self) -> List[str]:
        return [g.name for g in self.generators if g.degree < 0]

    def min_degree(self) -> int:
        return min(self.degrees, default=0)

    def signature(self) -> tuple:
        """Structural identity: generators in insertion order and differentials."""
        return (tuple((g.name, g.degree) for g in self.insertion),
                tuple(sorted((g.name, str(self._d[i])) for i, g in enumerate(self.generators))))

    def __eq__(self, other):
        return isinstance(other, FreeGradedAlgebra) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        label = self.name or "FreeGradedAlgebra"
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.insertion)
        return f"<{label} [{gens}]>"

    def extend(self, generators: Iterable, differential: Mapping | None = None, *,
               name: str | None = None, **kw) -> "FreeGradedAlgebra":
        """Free extension by new generators (existing differentials kept)."""
        diff = {g.name: str(self._d[i]) for i, g in enumerate(self.generators)}
        diff.update({k: (str(v) if isinstance(v, Element) else v)
                     for k, v in (differential or {}).items()})
        opts = dict(allow_positive=self.allow_positive, allow_reserved=self.allow_reserved)
        opts.update(kw)
        return FreeGradedAlgebra(list(self.insertion) + [_as_generator(g) for g in generators],
                                 diff, name=name, **opts)

    # -- elements --------------------------------------------------------
    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {self._zero_mono: QQ(1)})

    def const(self, c) -> "Element":
        c = QQ(c)
        return Element(self, {self._zero_mono: c} if c else {})

    def gen(self, name: str) -> "Element":
        try:
            i = self.index[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r}") from None
        e = [0] * self.n
        e[i] = 1
        return Element(self, {tuple(e): QQ(1)})

    def monomial(self, mono: Sequence[int], coeff=1) -> "Element":
        mono = tuple(mono)
        for i in self._odd_pos:
            if mono[i] > 1:
                return self.zero()
        return Element(self, {mono: QQ(coeff)} if coeff else {})

    def parse(self, text: str) -> "Element":
        def lookup(name, col):
            if name not in self.index:
                raise ExprError(f"unknown generator {name!r}", col)
            return self.gen(name)
        return parse_expression(text, lookup, self.one())

    def element(self, value) -> "Element":
        """Coerce ``value`` (Element, string, number) into this algebra.

        Elements of other algebras are transported by generator name.
        """
        if isinstance(value, Element):
            if value.algebra is self:
                return value
            return self._transport(value)
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def __call__(self, value) -> "Element":
        return self.element(value)

    def _transport(self, x: "Element") -> "Element":
        src = x.algebra
        try:
            pos = [self.index[g.name] for g in src.generators]
        except KeyError as exc:
            raise AlgebraError(f"generator {exc.args[0]!r} not in target algebra") from None
        for g in src.generators:
            if self.generators[self.index[g.name]].degree != g.degree:
                raise AlgebraError(f"generator {g.name!r} has different degrees")
        if pos == sorted(pos):
            # order preserving embedding: monomials carry over verbatim
            out = {}
            for m, c in x.terms.items():
                e = [0] * self.n
                for i, k in enumerate(m):
                    if k:
                        e[pos[i]] = k
                out[tuple(e)] = c
            return Element(self, out)
        acc = self.zero()
        gens = [self.gen(g.name) for g in src.generators]
        for m, c in x.terms.items():
            term = self.const(c)
            for i, k in enumerate(m):
                if k:
                    term = term * gens[i] ** k
            acc = acc + term
        return acc

    # -- arithmetic kernels ---------------------------------------------
    def mono_degree(self, m: Mono) -> int:
        return sum(k * d for k, d in zip(m, self.degrees) if k)

    def mono_mul(self, a: Mono, b: Mono):
        """Return ``(sign, a*b)`` or ``None`` when the product vanishes."""
        odd = self._odd_pos
        swaps = 0
        if odd:
            later = 0
            # walk odd positions from the right, counting odd factors of a
            # that b's odd factors must move past
            for i in reversed(odd):
                if b[i]:
                    if a[i]:
                        return None
                    swaps += later
                if a[i]:
                    later += 1
        return (-1 if swaps & 1 else 1), tuple(x + y for x, y in zip(a, b))

    def mul_terms(self, x: Dict[Mono, object], y: Dict[Mono, object]) -> Dict[Mono, object]:
        out: Dict[Mono, object] = {}
        for ma, ca in x.items():
            for mb, cb in y.items():
                r = self.mono_mul(ma, mb)
                if r is None:
                    continue
                s, m = r
                c = out.get(m, 0) + (ca * cb if s > 0 else -(ca * cb))
                if c:
                    out[m] = c
                else:
                    out.pop(m, None)
        return out

    def d_mono(self, m: Mono) -> Dict[Mono, object]:
        """Differential of a monomial via Leibniz, memoized."""
        hit = self._dmemo.get(m)
        if hit is not None:
            return hit
        first = next((i for i, k in enumerate(m) if k), None)
        if first is None:
            res: Dict[Mono, object] = {}
        else:
            rest = list(m)
            rest[first] -= 1
            rest = tuple(rest)
            g = [0] * self.n
            g[first] = 1
            g = tuple(g)
            # d(g * rest) = d(g) rest + (-1)^{|g|} g d(rest); g sits first so g*rest has sign +
            res = self.mul_terms(self._d[first].terms, {rest: QQ(1)})
            tail = self.d_mono(rest)
            if tail:
                sign = -1 if self.odd[first] else 1
                prod = self.mul_terms({g: QQ(sign)}, tail)
                for mm, c in prod.items():
                    nc = res.get(mm, 0) + c
                    if nc:
                        res[mm] = nc
                    else:
                        res.pop(mm, None)
        self._dmemo[m] = res
        return res

    def d(self, x: "Element") -> "Element":
        out: Dict[Mono, object] = {}
        for m, c in x.terms.items():
            for mm, cc in self.d_mono(m).items():
                nc = out.get(mm, 0) + c * cc
                if nc:
                    out[mm] = nc
                else:
                    out.pop(mm, None)
        return Element(self, out)

    # -- enumeration -----------------------------------------------------
    def negative_monomials(self, degree: int) -> List[Mono]:
        """Monomials in the negative-degree generators of total ``degree``.

        Sorted deterministically (by the canonical term order).
        """
        neg = [i for i, dg in enumerate(self.degrees) if dg < 0]
        out: List[Mono] = []
        if degree > 0:
            return out

        def rec(idx, remaining, cur):
            if idx == len(neg):
                if remaining == 0:
                    out.append(tuple(cur))
                return
            i = neg[idx]
            dg = self.degrees[i]
            kmax = remaining // dg if dg else 0
            if self.odd[i]:
                kmax = min(kmax, 1)
            for k in range(kmax, -1, -1):
                cur[i] = k
                rec(idx + 1, remaining - k * dg, cur)
            cur[i] = 0

        rec(0, degree, [0] * self.n)
        out.sort(key=mono_sort_key, reverse=True)
        return out


def mono_sort_key(m: Mono):
    return tuple(m)


class Element:
    """Immutable element of a :class:`FreeGradedAlgebra`."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: FreeGradedAlgebra, terms: Dict[Mono, object]):
        self.algebra = algebra
        self.terms = terms
        self._hash = None

    # -- queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set:
        return {self.algebra.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> Optional[int]:
        """Degree of a homogeneous element (``None`` for zero)."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError(f"element {self} is not homogeneous")
        return next(iter(degs))

    def constant_value(self):
        if not self.terms:
            return QQ(0)
        if len(self.terms) == 1 and self.algebra._zero_mono in self.terms:
            return self.terms[self.algebra._zero_mono]
        return None

    def coefficient(self, mono) -> object:
        return self.terms.get(tuple(mono), QQ(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _print_key(self.algebra, mc[0]),
                      reverse=True)

    def support(self) -> set:
        return {i for m in self.terms for i, k in enumerate(m) if k}

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.algebra is not self.algebra:
                if other.algebra == self.algebra:
                    return Element(self.algebra, other.terms)
                raise AlgebraError("elements belong to different algebras")
            return other
        if isinstance(other, str):
            raise TypeError("strings must be parsed explicitly")
        return self.algebra.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, 0) + c
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
        return Element(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Element":
        c = QQ(c)
        if not c:
            return self.algebra.zero()
        return Element(self.algebra, {m: x * c for m, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            if isinstance(other, str):
                raise TypeError("strings must be parsed explicitly")
            return self.scale(other)
        other = self._coerce(other)
        return Element(self.algebra, self.algebra.mul_terms(self.terms, other.terms))

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        out = self.algebra.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def d(self) -> "Element":
        return self.algebra.d(self)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra == other.algebra and self.terms == other.terms
        try:
            return self.terms == self.algebra.const(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"Element({self})"


def _print_key(alg: FreeGradedAlgebra, m: Mono):
    # degree-0 polynomial degree first, then lexicographic
    return (sum(m), tuple(m))


def format_monomial(alg: FreeGradedAlgebra, m: Mono) -> str:
    parts = []
    for i, k in enumerate(m):
        if k:
            name = alg.generators[i].name
            parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def format_coeff(c) -> str:
    c = QQ(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_element(x: Element) -> str:
    if not x.terms:
        return "0"
    out = []
    for m, c in x.sorted_terms():
        mono = format_monomial(x.algebra, m)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_coeff(a)}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
