import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dgdescent.commalg import (ModuleMap, ModulePresentation, PolyRing, PresentedRing, QQ, RingMap,
                               TermOrder, groebner, intersect, is_groebner, normal_form, vector)

P = PolyRing(["x", "y"])


def test_groebner_of_twisted_cubic_is_reduced_and_closed():
    P3 = PolyRing(["x", "y", "z", "w"])
    R = PresentedRing(P3, ["x*z - y^2", "y*w - z^2", "x*w - y*z"])
    order = TermOrder(4)
    assert is_groebner(R.gb_vectors, order)
    # every generator reduces to zero, and nothing outside the ideal does
    for g in ["x*z - y^2", "y*w - z^2", "x*w - y*z", "x*(x*w - y*z) + w^3*(y*w - z^2)"]:
        assert R.contains(g)
    assert not R.contains("x*w")


def test_standard_monomials_count_quotient():
    R = PresentedRing(P, ["x^2 - y", "x*y"])
    # Q[x,y]/(x^2 - y, x y) = span(1, x, y); y^2 = x^2 y = x (xy) = 0
    assert sorted(R.standard_monomials()) == [(0, 0), (0, 1), (1, 0)]
    assert R.reduce(P("y^2")).is_zero()
    assert R.is_unit("1 + x")
    assert not R.is_unit("x")


def test_units_and_trivial_ring():
    assert PresentedRing(P, ["x", "1 - x"]).is_trivial()
    assert not PresentedRing(P, ["x", "y"]).is_trivial()


def test_module_dimension_and_zero():
    R = PresentedRing(P, [])
    M = ModulePresentation.cokernel(R, 1, [["x"], ["y"]])
    assert M.dim_q() == 1
    N = ModulePresentation.cokernel(R, 2, [["x", "y"], ["1", "0"]])
    # R^2 / ((x,y),(1,0)) = R/(y)
    assert N.dim_q() is None
    assert not N.is_zero()
    assert ModulePresentation.cokernel(R, 1, [["1 + x*y - x*y"]]).is_zero()


def test_kernel_of_koszul_map_is_syzygy():
    R = PresentedRing(P, [])
    src = ModulePresentation.free(R, 2)
    tgt = ModulePresentation.free(R, 1)
    mp = ModuleMap(src, tgt, [vector(R, ["x"]), vector(R, ["y"])])
    ker = mp.kernel()
    # kernel of (x, y) is generated by (y, -x)
    assert len(ker.gens) == 1
    assert src.contains(vector(R, ["y", "-x"]))
    assert ModulePresentation(R, 2, ker.gens, []).contains(vector(R, ["y", "-x"]))
    assert not mp.is_injective()
    assert not mp.is_surjective()


def test_preimage_solves_linear_system():
    R = PresentedRing(P, [])
    one = ModulePresentation.free(R, 1)
    mp = ModuleMap(ModulePresentation.free(R, 2), one, [vector(R, ["x"]), vector(R, ["1 - x"])])
    sol = mp.preimage(vector(R, ["1"]))
    assert sol is not None
    assert mp.apply(sol) == vector(R, ["1"])


def test_intersection_of_ideals():
    R = PresentedRing(P, [])
    gens = intersect(R, 1, [vector(R, ["x"])], [vector(R, ["y"])])
    I = ModulePresentation(R, 1, gens, [])
    assert I.contains(vector(R, ["x*y"]))
    assert not I.contains(vector(R, ["x"]))


def test_ring_map_swap_is_isomorphism():
    R = PresentedRing(P, [])
    f = RingMap(R, R, {"x": P("y"), "y": P("x")})
    assert f.check() and f.is_isomorphism()
    g = RingMap(R, R, {"x": P("x^2"), "y": P("y")})
    assert g.check() and not g.is_surjective()


def test_module_iso_after_base_change():
    # R^1 -> R_x^1, multiplication by x, is an isomorphism over R_x
    A = PresentedRing(P, [])
    Q = PolyRing(["x", "y", "u"])
    B = PresentedRing(Q, ["u*x - 1"])
    mp = ModuleMap(ModulePresentation.free(A, 1), ModulePresentation.free(B, 1), [vector(B, ["x"])],
                   RingMap(A, B, {}))
    ok, cert = mp.is_isomorphism()
    assert ok and cert["cokernel_zero"]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4),
       st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4))
def test_normal_form_is_well_defined_modulo_the_ideal(a, b):
    order = TermOrder(2)
    gens = [vector(PresentedRing(P, []), ["x^2 - y"]), vector(PresentedRing(P, []), ["x*y - 1"])]
    gb = groebner(gens, order)

    def poly(terms):
        out = {}
        for c, i, j in terms:
            if c:
                out[(0, (i, j))] = out.get((0, (i, j)), 0) + QQ(c)
        return {k: v for k, v in out.items() if v}

    f, g = poly(a), poly(b)
    # f and f + g*(x^2 - y) have the same normal form
    shifted = dict(f)
    for (_, (i, j)), c in g.items():
        for (_, (k, l)), d in gens[0].items():
            key = (0, (i + k, j + l))
            shifted[key] = shifted.get(key, 0) + c * d
    shifted = {k: v for k, v in shifted.items() if v}
    assert normal_form(f, gb, order) == normal_form(shifted, gb, order)


@pytest.mark.parametrize("rels", [["x"], ["x^2", "y^3"], ["x*y", "x^2 - y"], ["x - 1"]])
def test_quotient_dimension_matches_monomial_count(rels):
    R = PresentedRing(P, rels)
    M = ModulePresentation.cokernel(PresentedRing(P, []), 1, [[r] for r in rels])
    std = R.standard_monomials() if M.dim_q() is not None else None
    if std is not None:
        assert len(std) == M.dim_q()
