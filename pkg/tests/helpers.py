"""Random resolving algebras and elements for property tests."""

from __future__ import annotations

import random

from dgdescent.algebra import FreeGradedAlgebra
from dgdescent.algebra.strands import basis


def random_poly(rng: random.Random, names, max_deg=2, terms=3) -> str:
    out = []
    for _ in range(rng.randint(1, terms)):
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        mono = "*".join(rng.choice(names) for _ in range(rng.randint(0, max_deg))) if names else ""
        out.append(f"({c})" + (f"*{mono}" if mono else ""))
    return " + ".join(out)


def random_algebra(rng: random.Random, max_gens: int = 6, min_degree: int = -3) -> FreeGradedAlgebra:
    """Degree-0 variables, then generators in degrees -1..min_degree with d a cycle.

    Differentials of new generators are boundaries of random elements or
    random multiples of Koszul syzygies, so ``d^2 = 0`` holds by
    construction.
    """
    k0 = rng.randint(1, 2)
    names0 = ["x", "y"][:k0]
    A = FreeGradedAlgebra([(n, 0) for n in names0], {})
    n_neg = rng.randint(1, max_gens - k0)
    count = 0
    for deg in range(-1, min_degree - 1, -1):
        for _ in range(rng.randint(0, 2) if deg < -1 else rng.randint(1, 2)):
            if count == n_neg:
                break
            name = f"g{count}"
            count += 1
            if deg == -1:
                dx = random_poly(rng, names0)
            else:
                cyc = _random_cycle(A, deg + 1, rng)
                dx = str(cyc)
            A = A.extend([(name, deg)], {name: dx})
    return A


def _random_cycle(A: FreeGradedAlgebra, degree: int, rng: random.Random):
    elt = random_element(A, degree - 1, rng)
    cyc = elt.d() if not elt.is_zero() else A.zero()
    if cyc.is_zero() or rng.random() < 0.3:
        # Koszul syzygy between two degree -1 generators, when there are some
        odd = [g.name for g in A.insertion if g.degree == -1]
        if degree == -1 and len(odd) >= 2:
            a, b = rng.sample(odd, 2)
            cyc = cyc + A.differential_of(b) * A.gen(a) - A.differential_of(a) * A.gen(b)
    return cyc


def random_element(A: FreeGradedAlgebra, degree: int, rng: random.Random, terms: int = 3):
    monos = basis(A, degree) if degree <= 0 else []
    out = A.zero()
    if not monos:
        return out
    zero_names = A.degree_zero_names()
    for _ in range(rng.randint(1, terms)):
        m = A.monomial(rng.choice(monos))
        out = out + A.element(random_poly(rng, zero_names, max_deg=2, terms=2)) * m
    return out
