import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from dgdescent.algebra import (AlgebraError, DgMorphism, FreeGradedAlgebra, check_morphism, identity,
                               is_free_extension, koszul, localize, tensor_product, with_forms)
from dgdescent.algebra.forms import evaluate, radial_homotopy
from helpers import random_algebra, random_element

SLOW = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _sample(seed):
    rng = random.Random(seed)
    A = random_algebra(rng)
    degs = range(A.min_degree() - 1, 1)
    a = random_element(A, rng.choice(list(degs)), rng)
    b = random_element(A, rng.choice(list(degs)), rng)
    c = random_element(A, rng.choice(list(degs)), rng)
    return A, a, b, c


@SLOW
@given(st.integers(0, 10**6))
def test_d_squared_vanishes(seed):
    A, a, b, _ = _sample(seed)
    for g in A.insertion:
        assert A.differential_of(g.name).d().is_zero()
    assert a.d().d().is_zero()
    assert (a * b).d().d().is_zero()


@SLOW
@given(st.integers(0, 10**6))
def test_leibniz_rule(seed):
    _, a, b, _ = _sample(seed)
    if a.is_zero() or b.is_zero():
        return
    sign = -1 if a.degree() % 2 else 1
    assert (a * b).d() == a.d() * b + sign * (a * b.d())


@SLOW
@given(st.integers(0, 10**6))
def test_koszul_sign_rule(seed):
    _, a, b, c = _sample(seed)
    if a.is_zero() or b.is_zero():
        return
    sign = -1 if (a.degree() * b.degree()) % 2 else 1
    assert a * b == sign * (b * a)
    assert (a * b) * c == a * (b * c)
    if a.degree() % 2:
        assert (a * a).is_zero()


def test_generators_in_positive_degree_rejected():
    with pytest.raises(AlgebraError):
        FreeGradedAlgebra([("x", 1)], {})


def test_d_squared_nonzero_rejected():
    with pytest.raises(AlgebraError):
        FreeGradedAlgebra([("a", 0), ("e", -1), ("w", -2)], {"e": "a", "w": "a*e"})


def test_degree_mismatch_rejected():
    with pytest.raises(AlgebraError):
        FreeGradedAlgebra([("x", 0), ("xi", -1)], {"xi": "xi"})


def test_koszul_differentials():
    K = koszul(["x", "y"], ["x", "y^2"], names=["a", "b"])
    assert str(K.differential_of("a")) == "x"
    assert str(K.differential_of("b")) == "y^2"
    assert (K.gen("a") * K.gen("b")).d() == K.gen("x") * K.gen("b") - K.gen("y") ** 2 * K.gen("a")


def test_localize_adds_inverse_and_homotopy():
    A = FreeGradedAlgebra([("x", 0)], {})
    Ag, inc = localize(A, "x")
    assert is_free_extension(A, Ag)
    assert check_morphism(inc).ok
    names = [g.name for g in Ag.insertion]
    assert names[0] == "x" and len(names) == 3
    eps = names[2]
    assert Ag.differential_of(eps) == Ag.element(f"{names[1]}*x - 1")


def test_tensor_product_pushes_differentials():
    A = FreeGradedAlgebra([("x", 0)], {})
    B = koszul(["x"], ["x"], names=["e"])
    C = FreeGradedAlgebra([("x", 0), ("y", 0)], {})
    to_C = DgMorphism(A, C, {"x": "y^2"})
    T, jB, jC = tensor_product(B, C, A, to_C)
    assert T.differential_of("e") == T.element("y^2")
    assert check_morphism(jB).ok and check_morphism(jC).ok


def test_tensor_product_renames_clashes():
    A = FreeGradedAlgebra([("x", 0)], {})
    B = koszul(["x"], ["x"], names=["e"])
    T, jB, jC = tensor_product(B, B, A)
    names = [g.name for g in T.insertion]
    assert len(names) == 3 and len(set(names)) == 3


def test_morphism_check_detects_non_dg_map():
    B = koszul(["x"], ["x^2"], names=["e"])
    A = koszul(["x"], ["x"], names=["f"])
    assert check_morphism(DgMorphism(B, A, {"e": "x*f"})).ok
    assert not check_morphism(DgMorphism(B, A, {"e": "f"})).ok


def test_identity_composes():
    A = koszul(["x", "y"], ["x*y"])
    f = identity(A)
    assert f.compose(f).images == f.images


def test_radial_homotopy_contracts_interval_forms():
    A = koszul(["x"], ["x"], names=["e"])
    F = with_forms(A, 1)
    w = F.element("x*_t^2*_dt + e*_t + _t^3*e*x")
    K = radial_homotopy
    lhs = F.d(K(w)) + K(F.d(w))
    assert lhs == w - F.element(evaluate(w, 0))


def test_forms_have_square_zero_differential():
    A = koszul(["x"], ["x"], names=["e"])
    F = with_forms(A, 2)
    z = F.element("e*_t*_s + x*_dt*_s + _t^2*_ds*e")
    assert F.d(F.d(z)).is_zero()
