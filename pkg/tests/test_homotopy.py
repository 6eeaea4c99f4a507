import pytest

from dgdescent.algebra import DgMorphism, FreeGradedAlgebra, Homotopy, koszul, with_forms
from dgdescent.homotopy import (BudgetExhausted, compose_homotopies, constant_homotopy, fill_horn, fill_triangle,
                                induced_maps_agree, inverse, loop_class, try_build_homotopy, verify_homotopy,
                                verify_simplex)

Z = FreeGradedAlgebra([("z", 0)], {})


def _contractible_target():
    return koszul(["x"], ["x"], names=["e"])


def test_homotopy_between_maps_differing_by_a_boundary():
    A = _contractible_target()
    f = DgMorphism(Z, A, {"z": 0})
    g = DgMorphism(Z, A, {"z": "x"})
    theta = try_build_homotopy(f, g)
    assert isinstance(theta, Homotopy)
    assert verify_homotopy(theta).ok
    assert induced_maps_agree(theta)


def test_no_homotopy_when_h0_classes_differ():
    A = FreeGradedAlgebra([("x", 0)], {})
    f = DgMorphism(Z, A, {"z": 0})
    g = DgMorphism(Z, A, {"z": "1"})
    obs = try_build_homotopy(f, g)
    assert not isinstance(obs, Homotopy)
    assert obs.generator == "z"


def test_budget_is_enforced():
    B = koszul(["z"], ["z"], names=["w"])
    A = _contractible_target()
    f = DgMorphism(B, A, {"z": 0, "w": 0})
    with pytest.raises(BudgetExhausted):
        try_build_homotopy(f, f, budget=0)


def test_inverse_and_composition_verify():
    A = _contractible_target()
    f = DgMorphism(Z, A, {"z": 0})
    g = DgMorphism(Z, A, {"z": "x"})
    h = DgMorphism(Z, A, {"z": "x^2"})
    fg = try_build_homotopy(f, g)
    gh = try_build_homotopy(g, h)
    assert verify_homotopy(inverse(fg)).ok
    fh = compose_homotopies(fg, gh)
    assert verify_homotopy(fh).ok
    assert fh.at(0).images["z"] == A.zero()
    assert fh.at(1).images["z"] == A.element("x^2")


def test_horn_filler_has_prescribed_edges():
    A = _contractible_target()
    f = DgMorphism(Z, A, {"z": 0})
    g = DgMorphism(Z, A, {"z": "x"})
    h = DgMorphism(Z, A, {"z": "x + x^3"})
    ij, jk = try_build_homotopy(f, g), try_build_homotopy(g, h)
    sigma = fill_horn(ij, jk)
    assert sigma.edge("ij").images == ij.body.images
    assert sigma.edge("jk").images == jk.body.images


def test_triangle_with_trivial_loop_fills():
    A = _contractible_target()
    f = DgMorphism(Z, A, {"z": 0})
    c = constant_homotopy(f)
    sigma, obs = fill_triangle(c, c, c)
    assert obs is None
    assert verify_simplex(sigma, c, c, c).ok


def test_loop_around_a_cycle_is_obstructed():
    A = FreeGradedAlgebra([("x", 0), ("e", -1)], {"e": "0"})
    F1 = with_forms(A, 1)
    f = DgMorphism(Z, A, {"z": 0})
    loop = Homotopy(f, f, DgMorphism(Z, F1, {"z": F1.element("e*_dt")}))
    assert verify_homotopy(loop).ok
    obs = loop_class(loop)
    assert obs is not None and obs.generator == "z"
    # the same loop through a target where e is exact bounds a disc
    A2 = FreeGradedAlgebra([("x", 0), ("e", -1), ("q", -2)], {"e": "0", "q": "e"})
    F2 = with_forms(A2, 1)
    f2 = DgMorphism(Z, A2, {"z": 0})
    loop2 = Homotopy(f2, f2, DgMorphism(Z, F2, {"z": F2.element("e*_dt")}))
    assert loop_class(loop2) is None
