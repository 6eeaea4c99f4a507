import random

import pytest

from dgdescent import DgMorphism, FreeGradedAlgebra, hn_module, koszul
from dgdescent.commalg import ModulePresentation, vector
from dgdescent.commalg.groebner import add_into
from dgdescent.descent import (CechComplex, Cover, CoverError, GluingData, HomotopySquare, ModuleAssignment, cech,
                               coboundary, descent_morphisms_check, elliptic, glue_algebras, glue_from_transitions,
                               glue_modules, module_as_ideal, obstructed_square, repair_augmentation, trivialize,
                               twisted_datum, validate_gluing, verify_augmentation, verify_homotopy_square,
                               weight_gap_certificate)
from dgdescent.descent.cech import cochains_equal

import frozen

QX = FreeGradedAlgebra([("x", 0)], {})


def test_cover_unit_certificate():
    U = Cover(QX, ["x", "1 - x"])
    assert [str(b) for b in U.unit_certificate] == frozen.UNIT_PARTITION_X
    assert U.multi_indices(2) == [(1, 2)]
    A12 = U.chart((1, 2))
    assert set(U.chart((1,)).index) < set(A12.index)


def test_cover_must_generate_unit_ideal():
    with pytest.raises(CoverError):
        Cover(QX, ["x", "x^2"])


def test_partition_of_powers():
    U = Cover(QX, ["x", "1 - x"])
    R = U.R
    part = U.partition(3)
    total = sum((b * U.g(i) ** 3 for b, i in zip(part, U.indices)), R.ambient.zero())
    assert R.reduce(total - 1).is_zero()


@pytest.mark.parametrize("charts", [2, 3])
def test_cech_differential_squares_to_zero(charts):
    U = Cover(QX, ["x", "1 - x", "1 + x"][:charts])
    assign = ModuleAssignment.from_module(U, ModulePresentation.free(U.R, 2))
    C = CechComplex(assign)
    for p in range(charts - 1):
        assert C.check_dd(p)


@pytest.mark.parametrize("seed", range(3))
def test_trivialize_random_coboundaries(seed):
    U = Cover(QX, ["x", "1 - x", "1 + x"])
    M = ModulePresentation.cokernel(U.R, 2, [["x^2", "x - 1"]])
    assign = ModuleAssignment.from_module(U, M)
    rng = random.Random(seed)
    gamma = {}
    for I in U.multi_indices(1):
        acc = {}
        for g in assign.module(I).gens:
            add_into(acc, g, rng.randint(-3, 3))
        gamma[I] = acc
    alpha = coboundary(assign, gamma, 0)
    beta = trivialize(assign, alpha, 1)
    assert cochains_equal(assign, coboundary(assign, beta, 0), alpha)


def test_trivialize_simple_cocycle():
    U = Cover(QX, ["x", "1 - x"])
    assign = ModuleAssignment.from_module(U, ModulePresentation.free(U.R, 1))
    one = vector(assign.module((1, 2)).ring, ["1"])
    beta = trivialize(assign, {(1, 2): one}, 1)
    assert cochains_equal(assign, coboundary(assign, beta, 0), {(1, 2): one})


@pytest.mark.parametrize("charts", [2, 3])
def test_glued_structure_sheaf_is_rank_one(charts):
    U = Cover(QX, ["x", "1 - x", "1 + x"][:charts])
    glued = glue_modules(ModuleAssignment.from_module(U, ModulePresentation.free(U.R, 1)))
    assert glued.report.ok
    assert glued.module.n_generators >= 1
    assert glued.module.dim_q() is None


def test_cech_vanishing_for_coherent_module_on_elliptic():
    A = elliptic()
    U = Cover(A, ["x", "x^2 - 1"])
    M = ModulePresentation.cokernel(U.R, 2, [["x", "y"]])
    assign = ModuleAssignment.from_module(U, M)
    out, rep = cech(assign, 1)
    assert rep.ok and out.is_zero()
    glued, rep0 = cech(assign, 0)
    assert rep0.ok


def test_glue_from_transitions_unit_twist():
    U = Cover(QX, ["x", "1 - x"])
    mods = {i: ModulePresentation.free(U.R, 1) for i in U.indices}
    assign = glue_from_transitions(U, mods, {(1, 2): [["x"]]})
    glued = glue_modules(assign)
    assert glued.report.ok
    # a line bundle over Q[x] is free: one generator, no relations after pruning
    assert glued.module.presentation().dim_q() is None


# -- gluing data ------------------------------------------------------------

def test_trivial_gluing_validates():
    U = Cover(QX, ["x", "1 - x"])
    assert validate_gluing(GluingData.trivial(U)).ok


def test_twisted_gluing_validates():
    assert validate_gluing(twisted_datum()).ok


def _eta_data(cover, image):
    algebras = {I: cover.chart(I).extend([("eta", -1)], {"eta": "0"})
                for I in [(1,), (2,), (1, 2)]}
    maps = {((2,), (1, 2)): DgMorphism(algebras[(2,)], algebras[(1, 2)], {"eta": image})}
    return GluingData(cover, algebras, maps)


def test_non_cartesian_gluing_rejected():
    U = Cover(QX, ["x", "1 - x"])
    rep = validate_gluing(_eta_data(U, "(x + 1)*eta"))
    assert not rep.ok
    assert any(f["kind"] == "cartesian" for f in rep.failures)


def test_map_off_the_chart_rejected():
    U = Cover(QX, ["x", "1 - x"])
    algebras = {I: U.chart(I) for I in [(1,), (2,), (1, 2)]}
    bad = DgMorphism(algebras[(1,)], algebras[(1, 2)], {"x": "x^2"})
    rep = validate_gluing(GluingData(U, algebras, {((1,), (1, 2)): bad}))
    assert not rep.ok
    assert {f["kind"] for f in rep.failures} & {"map", "not_over_chart"}


def test_non_closed_gluing_rejected():
    U = Cover(QX, ["x", "1 - x"])
    algebras = {I: U.chart(I).extend([("v", 0)], {}) for I in [(1,), (2,), (1, 2)]}
    rep = validate_gluing(GluingData(U, algebras))
    assert any(f["kind"] == "not_closed" for f in rep.failures)


def test_base_square_verifies():
    U = Cover(QX, ["x", "1 - x", "1 + x"])
    sq = HomotopySquare.base(GluingData.trivial(U))
    assert verify_homotopy_square(sq).ok
    rep, obs = verify_augmentation(sq)
    assert rep.ok and not obs


def test_glue_trivial_datum_small_budget():
    U = Cover(koszul(["x"], ["x^2"], names=["e"]), ["x - 1", "x + 1"])
    out = glue_algebras(GluingData.trivial(U), 1)
    assert out.report.ok
    kinds = {c["kind"] for c in out.report.certificates}
    assert "isomorphism" in kinds


def test_twisted_gluing_gives_non_free_ideal():
    out = glue_algebras(twisted_datum(), 2)
    assert out.report.ok
    H = hn_module(out.algebra, -1)
    L = module_as_ideal(H)
    assert L is not None
    gens = sorted(str(p) for v in L.gens for p in _entries(L, v))
    assert gens == frozen.TWISTED_IDEAL
    cert = weight_gap_certificate(L.ring, L, frozen.TWISTED_WEIGHTS)
    assert cert.ok
    assert cert.details["colength"] == frozen.TWISTED_COLENGTH
    assert cert.details["gaps"] == frozen.TWISTED_GAPS


def _entries(L, v):
    from dgdescent.commalg import entries
    return entries(L.ring, v, 1)


def test_principal_ideal_is_not_certified_non_free():
    R = Cover(elliptic(), ["x", "x^2 - 1"]).R
    L = ModulePresentation(R, 1, [vector(R, ["x"])], [])
    assert not weight_gap_certificate(R, L, frozen.TWISTED_WEIGHTS).ok


def test_obstructed_square_is_repaired():
    sq = obstructed_square()
    assert verify_homotopy_square(sq).ok
    rep, obs = verify_augmentation(sq)
    assert not rep.ok and obs
    fails = rep.failures
    assert tuple(fails[0]["chart"]) == frozen.OBSTRUCTION["triangle"]
    assert fails[0]["generator"] == frozen.OBSTRUCTION["generator"]
    assert fails[0]["cocycle"] == frozen.OBSTRUCTION["class"]
    fixed = repair_augmentation(sq, obs)
    assert fixed.ok
    rep2, obs2 = verify_augmentation(sq)
    assert rep2.ok and not obs2


def test_descent_for_morphisms_on_two_charts():
    C = FreeGradedAlgebra([])
    B = FreeGradedAlgebra([("a", 0), ("e", -1)], {"e": "a"})
    T = FreeGradedAlgebra([("x", 0), ("s", -1), ("q", -2)], {"s": "0", "q": "0"})
    U = Cover(T, ["x", "1 - x"])
    f = DgMorphism(B, T, {"a": 0, "e": "x*s"})
    rep = descent_morphisms_check(C, B, f, U, levels=(1,))
    assert rep.ok, rep.failures
