"""Brute-force Q-linear oracles, independent of the package's Groebner engine.

Algebras here are small semi-free algebras with even generators in degree 0
and odd generators in degree -1.  Everything is weight graded (d has weight
0), so each (degree, weight) piece is a finite dimensional Q-vector space and
cohomology is plain rank arithmetic with Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


class Alg:
    """Q[x_1..x_k] with exterior generators e_1..e_m; d e_j = f_j."""

    def __init__(self, evens, weights, odds, odd_weights, diffs):
        self.evens, self.odds = list(evens), list(odds)
        self.w_even, self.w_odd = list(weights), list(odd_weights)
        self.k, self.m = len(evens), len(odds)
        # diffs: odd name -> polynomial string in the evens
        self.diff = [self.parse(diffs[e]) for e in self.odds]

    # elements: {(exp tuple, odd tuple sorted): Fraction}
    def parse(self, text: str):
        env = {n: _P({(tuple(int(i == j) for i in range(self.k)), ()): Fraction(1)}) for j, n in enumerate(self.evens)}
        val = eval(text.replace("^", "**"), {"__builtins__": {}}, env)
        return val.t if isinstance(val, _P) else ({(tuple([0] * self.k), ()): Fraction(val)} if val else {})

    def weight(self, key):
        e, o = key
        return sum(a * w for a, w in zip(e, self.w_even)) + sum(self.w_odd[j] for j in o)

    def basis(self, degree, weight):
        """Monomials with ``-degree`` odd factors and the given weight."""
        out = []
        if degree > 0:
            return out
        for odd in combinations(range(self.m), -degree):
            rest = weight - sum(self.w_odd[j] for j in odd)
            if rest < 0:
                continue
            for e in _exps(self.w_even, rest):
                out.append((e, odd))
        return out

    def mul(self, a, b):
        out = {}
        for (ea, oa), ca in a.items():
            for (eb, ob), cb in b.items():
                if set(oa) & set(ob):
                    continue
                sign = _perm_sign(list(oa) + list(ob))
                key = (tuple(x + y for x, y in zip(ea, eb)), tuple(sorted(oa + ob)))
                out[key] = out.get(key, 0) + sign * ca * cb
        return {k: v for k, v in out.items() if v}

    def d(self, a):
        out = {}
        for (e, o), c in a.items():
            for pos, j in enumerate(o):
                rest = o[:pos] + o[pos + 1:]
                term = self.mul({(e, ()): (-1) ** pos * c}, self.mul(self.diff[j], {(tuple([0] * self.k), rest): 1}))
                for kk, v in term.items():
                    out[kk] = out.get(kk, 0) + v
        return {k: v for k, v in out.items() if v}

    def cohomology_dim(self, degree, weight):
        here = self.basis(degree, weight)
        below = self.basis(degree - 1, weight)
        above = self.basis(degree + 1, weight)
        r_out = rank([self.d({b: 1}) for b in here], above)
        r_in = rank([self.d({b: 1}) for b in below], here)
        return len(here) - r_out - r_in


class _P:
    def __init__(self, t):
        self.t = {k: v for k, v in t.items() if v}

    def _c(self, o):
        if isinstance(o, _P):
            return o
        k = len(next(iter(self.t))[0]) if self.t else 0
        return _P({(tuple([0] * k), ()): Fraction(o)})

    def __add__(self, o):
        o = self._c(o)
        t = dict(self.t)
        for k, v in o.t.items():
            t[k] = t.get(k, 0) + v
        return _P(t)

    __radd__ = __add__

    def __neg__(self):
        return _P({k: -v for k, v in self.t.items()})

    def __sub__(self, o):
        return self + (-self._c(o))

    def __rsub__(self, o):
        return self._c(o) - self

    def __mul__(self, o):
        o = self._c(o)
        t = {}
        for (ea, _), ca in self.t.items():
            for (eb, _), cb in o.t.items():
                k = (tuple(x + y for x, y in zip(ea, eb)), ())
                t[k] = t.get(k, 0) + ca * cb
        return _P(t)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = self._c(1)
        for _ in range(n):
            out = out * self
        return out


def _exps(weights, total):
    if not weights:
        if total == 0:
            yield ()
        return
    w = weights[0]
    for a in range(total // w + 1):
        for rest in _exps(weights[1:], total - a * w):
            yield (a,) + rest


def _perm_sign(seq):
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def rank(vectors, basis) -> int:
    """Rank of the given sparse vectors, expressed on ``basis``."""
    index = {b: i for i, b in enumerate(basis)}
    rows = []
    for v in vectors:
        row = [Fraction(0)] * len(basis)
        for k, c in v.items():
            row[index[k]] += c
        rows.append(row)
    r = 0
    ncol = len(basis)
    for col in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / p
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def koszul_oracle(variables, weights, sequence, max_weight=6):
    """``{degree: [dim h^degree in weight w for w <= max_weight]}`` for a homogeneous sequence."""
    odds = [f"e{j}" for j in range(len(sequence))]
    A = Alg(variables, weights, odds, [_poly_weight(variables, weights, f) for f in sequence],
            dict(zip(odds, sequence)))
    return {n: [A.cohomology_dim(n, w) for w in range(max_weight + 1)] for n in range(0, -len(sequence) - 1, -1)}


def _poly_weight(variables, weights, f):
    A = Alg(variables, weights, [], [], {})
    ws = {A.weight(k) for k in A.parse(f)}
    if len(ws) != 1:
        raise ValueError(f"{f} is not weight homogeneous")
    return ws.pop()


def quotient_hilbert(variables, weights, gb_leads, max_weight=6):
    """Count of monomials per weight not divisible by any of ``gb_leads``."""
    out = []
    for w in range(max_weight + 1):
        n = 0
        for e in _exps(weights, w):
            if not any(all(a >= b for a, b in zip(e, l)) for l in gb_leads):
                n += 1
        out.append(n)
    return out


def der_oracle(src: Alg, tgt: Alg, images, level: int, weights=range(-8, 13)) -> int:
    """Total dimension of ``h^{-level} Der(src, tgt)`` along ``images`` (weight graded).

    ``images`` maps each source generator to a target element (dict form).
    Source generators are the evens (degree 0) then odds (degree -1).
    """
    gens = [(i, 0, src.w_even[i]) for i in range(src.k)] + [(src.k + j, -1, src.w_odd[j]) for j in range(src.m)]

    def apply(values, n, x):
        # derivation of degree n on a source element, Leibniz rule with signs
        out = {}
        for (e, o), c in x.items():
            factors = []
            for i, a in enumerate(e):
                factors += [("even", i)] * a
            factors += [("odd", j) for j in o]
            for pos, f in enumerate(factors):
                before = factors[:pos]
                sign = (-1) ** (n * sum(1 for t, _ in before if t == "odd"))
                left = _prod(tgt, [images[_name(src, t, i)] for t, i in before])
                right = _prod(tgt, [images[_name(src, t, i)] for t, i in factors[pos + 1:]])
                gi = f[1] if f[0] == "even" else src.k + f[1]
                term = tgt.mul(tgt.mul(left, values[gi]), right)
                for kk, v in term.items():
                    out[kk] = out.get(kk, 0) + sign * c * v
        return {k: v for k, v in out.items() if v}

    def src_d(gi):
        if gi < src.k:
            return {}
        return src.diff[gi - src.k]

    def delta(values, n):
        out = {}
        for gi, deg, _ in gens:
            a = tgt.d(values[gi])
            b = apply(values, n, src_d(gi))
            v = dict(a)
            for k, c in b.items():
                v[k] = v.get(k, 0) - (-1) ** n * c
            out[gi] = {k: c for k, c in v.items() if c}
        return out

    def space(n, w):
        cells = []
        for gi, deg, wt in gens:
            for b in tgt.basis(deg + n, wt + w) if deg + n <= 0 else []:
                cells.append((gi, b))
        return cells

    def vec(values):
        return {(gi, k): c for gi, el in values.items() for k, c in el.items()}

    def column(cell, n):
        values = {gi: {} for gi, _, _ in gens}
        values[cell[0]] = {cell[1]: Fraction(1)}
        return vec(delta(values, n))

    n = -level
    total = 0
    for w in weights:
        here, below, above = space(n, w), space(n - 1, w), space(n + 1, w)
        r_out = rank([column(c, n) for c in here], above)
        r_in = rank([column(c, n - 1) for c in below], here)
        total += len(here) - r_out - r_in
    return total


def _name(alg, t, i):
    return i if t == "even" else alg.k + i


def _prod(alg, elements):
    out = {(tuple([0] * alg.k), ()): Fraction(1)}
    for x in elements:
        out = alg.mul(out, x)
    return out
