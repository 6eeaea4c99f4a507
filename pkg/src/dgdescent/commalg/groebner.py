"""Buchberger's algorithm for submodules of free modules over Q[x_1..x_n].

Vectors are dicts mapping a term ``(position, exponent_tuple)`` to a
rational coefficient.  An ideal is a submodule of the rank one free module,
so every term of an ideal generator sits at position 0.

Term orders are position-over-term with grevlex inside a position.  A
:class:`TermOrder` can additionally be made an elimination order, either for
a block of variables (every term involving them beats every term that does
not) or for a block of leading positions.  Both are needed to compute
kernels, preimages and intersections by elimination.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Tuple

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ

Exp = Tuple[int, ...]
Term = Tuple[int, Exp]
Vector = Dict[Term, object]

ZERO = QQ(0)
ONE = QQ(1)


class TermOrder:
    """Module term order; larger keys mean larger terms.

    ``elim_vars`` are compared first (grevlex on that block), so any term
    containing one of them beats any term free of them.  ``elim_positions``
    positions ``< elim_positions`` beat all other positions outright.
    """

    def __init__(self, nvars: int, elim_vars: Iterable[int] = (), elim_positions: int = 0):
        self.nvars = nvars
        self.elim = tuple(sorted(set(elim_vars)))
        eset = set(self.elim)
        self.rest = tuple(i for i in range(nvars) if i not in eset)
        self.elim_positions = elim_positions
        self._cache: Dict[Term, tuple] = {}

    def key(self, term: Term) -> tuple:
        k = self._cache.get(term)
        if k is None:
            pos, e = term
            if self.elim:
                ee = [e[i] for i in self.elim]
                re = [e[i] for i in self.rest]
                k = (pos < self.elim_positions, sum(ee), tuple(-x for x in reversed(ee)),
                     -pos, sum(re), tuple(-x for x in reversed(re)))
            else:
                k = (pos < self.elim_positions, -pos, sum(e), tuple(-x for x in reversed(e)))
            self._cache[term] = k
        return k

    def signature(self) -> tuple:
        return (self.nvars, self.elim, self.elim_positions)


def lead(v: Vector, order: TermOrder) -> Term:
    return max(v, key=order.key)


def _divides(a: Exp, b: Exp) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _sub_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(x if x > y else y for x, y in zip(a, b))


def shift(v: Vector, mono: Exp, coeff=ONE) -> Vector:
    """Return ``coeff * x^mono * v``."""
    out = {}
    for (p, e), c in v.items():
        out[(p, tuple(x + y for x, y in zip(e, mono)))] = c * coeff
    return out


def add_into(acc: Vector, v: Vector, coeff=ONE, mono: Exp | None = None) -> None:
    """In place ``acc += coeff * x^mono * v``."""
    for (p, e), c in v.items():
        t = (p, e) if mono is None else (p, tuple(x + y for x, y in zip(e, mono)))
        nc = acc.get(t, ZERO) + c * coeff
        if nc:
            acc[t] = nc
        else:
            acc.pop(t, None)


def monic(v: Vector, order: TermOrder) -> Vector:
    if not v:
        return v
    c = v[lead(v, order)]
    if c == ONE:
        return dict(v)
    inv = ONE / c
    return {t: x * inv for t, x in v.items()}


class _Basis:
    """Monic reducers indexed by their leading term."""

    def __init__(self, order: TermOrder):
        self.order = order
        self.polys: List[Vector] = []
        self.leads: List[Term] = []

    def append(self, v: Vector) -> None:
        self.polys.append(v)
        self.leads.append(lead(v, self.order))

    def find(self, t: Term, skip: int = -1):
        p, e = t
        for idx, (lp, le) in enumerate(self.leads):
            if idx != skip and lp == p and _divides(le, e):
                return idx
        return None


def normal_form(v: Vector, reducers: Sequence[Vector], order: TermOrder) -> Vector:
    """Fully reduce ``v`` by monic ``reducers``."""
    basis = reducers if isinstance(reducers, _Basis) else _as_basis(reducers, order)
    v = dict(v)
    rem: Vector = {}
    key = order.key
    while v:
        t = max(v, key=key)
        c = v[t]
        idx = basis.find(t)
        if idx is None:
            rem[t] = c
            del v[t]
            continue
        g = basis.polys[idx]
        add_into(v, g, -c, _sub_exp(t[1], basis.leads[idx][1]))
    return rem


def _as_basis(polys: Sequence[Vector], order: TermOrder) -> _Basis:
    b = _Basis(order)
    for g in polys:
        b.append(monic(g, order))
    return b


def _top_reduce(v: Vector, basis: _Basis, order: TermOrder) -> Vector:
    v = dict(v)
    key = order.key
    while v:
        t = max(v, key=key)
        idx = basis.find(t)
        if idx is None:
            return v
        add_into(v, basis.polys[idx], -v[t], _sub_exp(t[1], basis.leads[idx][1]))
    return v


def groebner(gens: Iterable[Vector], order: TermOrder) -> List[Vector]:
    """Reduced Groebner basis of the submodule generated by ``gens``.

    The result is deterministic: monic, inter-reduced and sorted by
    decreasing leading term.
    """
    basis = _Basis(order)
    for g in gens:
        if g:
            r = _top_reduce(monic(g, order), basis, order)
            if r:
                basis.append(monic(r, order))
    pairs = set()
    for j in range(len(basis.polys)):
        for i in range(j):
            if basis.leads[i][0] == basis.leads[j][0]:
                pairs.add((i, j))
    # the coprime-leads criterion only holds for ideals, not for vectors
    rank_one = all(p == 0 for g in basis.polys for p, _ in g)

    def pair_key(ij):
        i, j = ij
        lc = _lcm(basis.leads[i][1], basis.leads[j][1])
        return (sum(lc), order.key((basis.leads[i][0], lc)), i, j)

    while pairs:
        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        li, lj = basis.leads[i], basis.leads[j]
        lc = _lcm(li[1], lj[1])
        if rank_one and all(a == 0 or b == 0 for a, b in zip(li[1], lj[1])):
            continue
        if _chain_skip(i, j, lc, li[0], basis, pairs):
            continue
        s: Vector = {}
        add_into(s, basis.polys[i], ONE, _sub_exp(lc, li[1]))
        add_into(s, basis.polys[j], -ONE, _sub_exp(lc, lj[1]))
        r = _top_reduce(s, basis, order)
        if r:
            basis.append(monic(r, order))
            n = len(basis.polys) - 1
            pos = basis.leads[n][0]
            if any(p != 0 for p, _ in r):
                rank_one = False
            for k in range(n):
                if basis.leads[k][0] == pos:
                    pairs.add((k, n))
    return _interreduce(basis.polys, order)


def _chain_skip(i, j, lc, pos, basis: _Basis, pairs) -> bool:
    for k, (lp, le) in enumerate(basis.leads):
        if k in (i, j) or lp != pos or not _divides(le, lc):
            continue
        a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
        if a not in pairs and b not in pairs:
            return True
    return False


def _interreduce(polys: List[Vector], order: TermOrder) -> List[Vector]:
    items = [monic(p, order) for p in polys if p]
    items.sort(key=lambda p: order.key(lead(p, order)))
    kept: List[Vector] = []
    kept_leads: List[Term] = []
    for p in items:
        lp = lead(p, order)
        if any(q[0] == lp[0] and _divides(q[1], lp[1]) for q in kept_leads):
            continue
        kept.append(p)
        kept_leads.append(lp)
    # drop elements whose lead is divisible by a later, smaller lead
    final = []
    for idx, p in enumerate(kept):
        lp = kept_leads[idx]
        if any(k != idx and kept_leads[k][0] == lp[0] and _divides(kept_leads[k][1], lp[1])
               for k in range(len(kept))):
            continue
        final.append(p)
    out = []
    for idx, p in enumerate(final):
        others = _as_basis(final[:idx] + final[idx + 1:], order)
        lp = lead(p, order)
        tail = {t: c for t, c in p.items() if t != lp}
        r = normal_form(tail, others, order)
        r[lp] = ONE
        out.append(r)
    out.sort(key=lambda p: order.key(lead(p, order)), reverse=True)
    return out


def s_vector(f: Vector, g: Vector, order: TermOrder) -> Vector:
    lf, lg = lead(f, order), lead(g, order)
    if lf[0] != lg[0]:
        return {}
    lc = _lcm(lf[1], lg[1])
    s: Vector = {}
    add_into(s, f, ONE / f[lf], _sub_exp(lc, lf[1]))
    add_into(s, g, -ONE / g[lg], _sub_exp(lc, lg[1]))
    return s


def is_groebner(basis: Sequence[Vector], order: TermOrder) -> bool:
    """Buchberger criterion: every S-vector reduces to zero."""
    b = _as_basis(basis, order)
    for j in range(len(basis)):
        for i in range(j):
            s = s_vector(basis[i], basis[j], order)
            if s and normal_form(s, b, order):
                return False
    return True
