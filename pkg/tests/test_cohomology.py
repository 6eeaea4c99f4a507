import pytest

from dgdescent import (AlgebraError, DgMorphism, FreeGradedAlgebra, amplitude, cotangent_bar, h0_ring, h_theta,
                       hn_map, hn_module, is_etale, is_etale_map, is_open_immersion, koszul, les_theta, localize,
                       obstruction_data, pi_module, relative_dimension)
from dgdescent.algebra import check_morphism
from dgdescent.cohomology import default_window, graph_resolution, spectral_e2
from dgdescent.descent import elliptic
from oracles import Alg, der_oracle, koszul_oracle

import frozen

Q = FreeGradedAlgebra([])


def test_truncation_of_elliptic_algebra():
    R = h0_ring(elliptic())
    P = R.ambient
    assert [P(str(r)) for r in R.relations] == [P(frozen.ELLIPTIC_RELATION)]


def test_default_window_counts_negative_generators():
    assert default_window(elliptic()) == (-2, 0)
    assert default_window(koszul(["x"], ["x", "x", "x"])) == (-4, 0)


@pytest.mark.parametrize("seq", sorted(frozen.KOSZUL_DIMS))
def test_koszul_cohomology_matches_frozen_dimensions(seq):
    expected = frozen.KOSZUL_DIMS[seq]
    K = koszul(["x"] if "y" not in seq else ["x", "y"], list(seq.split(";")))
    for n, dim in expected.items():
        H = hn_module(K, n)
        assert H.dim_q() == dim


def test_koszul_oracle_reproduces_frozen_weights():
    assert koszul_oracle(["x"], [1], ["x^2", "x^3"])[-1] == frozen.KOSZUL_X2_X3_WEIGHTS


def test_h_minus_one_of_non_regular_sequence_is_torsion():
    K = koszul(["x", "y"], ["x*y", "x^2"])
    H = hn_module(K, -1)
    assert not H.is_zero()
    assert H.dim_q() is None  # supported on the line x = 0
    assert hn_module(K, -2).is_zero()


def test_cycles_represent_classes():
    K = koszul(["x"], ["x^2", "x^3"], names=["e", "f"])
    H = hn_module(K, -1)
    assert len(H.cycles) == H.n_generators
    from dgdescent.algebra.strands import to_vector
    c = K.element("x*e - f")
    assert c.d().is_zero()
    assert not H.element_is_zero(H.class_of(to_vector(c, -1)))
    b = K.element("e*f").d()
    assert H.element_is_zero(H.class_of(to_vector(b, -1)))


@pytest.mark.parametrize("B, g", [(elliptic(), "x"), (koszul(["x", "y"], ["x", "x*y"]), "y"),
                                  (koszul(["x"], ["x^2", "x^3"]), "x - 1"), (koszul(["x"], ["x^2", "x^3"]), "x")])
def test_cohomology_commutes_with_localization(B, g):
    Bg, inc = localize(B, g)
    for n in (0, -1, -2):
        ok, cert = hn_map(inc, n).is_isomorphism()
        assert ok, (n, cert)


def test_localization_kills_torsion_supported_at_origin():
    B = koszul(["x"], ["x^2", "x^3"])
    Bg, _ = localize(B, "x")
    assert not hn_module(B, -1).is_zero()
    assert hn_module(Bg, -1).is_zero()


def test_etale_cases():
    A = FreeGradedAlgebra([("x", 0)], {})
    Ag, inc = localize(A, "x")
    assert is_etale(A, Ag)
    assert is_etale_map(inc)
    assert is_etale_map(DgMorphism(A, A, {}))
    assert not is_etale_map(DgMorphism(A, A, {"x": "x^2"}))
    A2 = FreeGradedAlgebra([("x", 0), ("y", 0)], {})
    assert is_etale_map(DgMorphism(A2, A2, {"x": "x + y^2"}))
    assert not is_etale(Q, elliptic())


def test_etale_agrees_with_tangent_vanishing():
    A = FreeGradedAlgebra([("x", 0)], {})
    Ag, _ = localize(A, "x")
    f = DgMorphism(Ag, Ag, {})
    assert all(h_theta(A, Ag, f, l).is_zero() for l in (0, 1))
    K = koszul(["x"], ["x^2"])
    g = DgMorphism(K, K, {})
    assert not all(h_theta(Q, K, g, l).is_zero() for l in (0, 1))


def test_open_immersion_needs_witness_to_be_a_unit():
    A = FreeGradedAlgebra([("x", 0)], {})
    Ag, _ = localize(A, "x")
    ok, cert = is_open_immersion(A, Ag, "x")
    assert ok and cert["h0_isomorphism"]
    ok, cert = is_open_immersion(A, Ag, "x - 1")
    assert not ok and not cert["witness_unit"]
    with pytest.raises(AlgebraError):
        is_open_immersion(A, Ag, None)


def test_graph_resolution_factors_the_map():
    A = FreeGradedAlgebra([("x", 0)], {})
    phi = DgMorphism(A, A, {"x": "x^2"})
    Bp, j, q = graph_resolution(phi)
    assert check_morphism(j).ok and check_morphism(q).ok
    ok, _ = hn_map(q, 0).is_isomorphism()
    assert ok


def test_amplitude_and_obstruction_theory():
    assert amplitude(Q, elliptic()) == 0
    assert relative_dimension(Q, elliptic()) == 1
    fat = koszul(["x"], ["x^2"])
    data = obstruction_data(Q, fat)
    assert data["amplitude"] == frozen.FAT_POINT["amplitude"]
    assert data["ranks"] == frozen.FAT_POINT["ranks"]
    assert data["virtual_dimension"] == frozen.FAT_POINT["virtual_dimension"]
    # killing the syzygy of (x^2, xy) leaves a Jacobian vanishing at the origin
    K = koszul(["x", "y"], ["x^2", "x*y"], names=["a", "b"])
    T = K.extend([("w", -2)], {"w": "y*a - x*b"})
    assert amplitude(Q, T) == 2
    assert relative_dimension(Q, T) == 1
    with pytest.raises(AlgebraError):
        obstruction_data(Q, T)


def test_cotangent_complex_ranks_follow_generators():
    om = cotangent_bar(Q, elliptic())
    assert (om.rank(0), om.rank(-1)) == (2, 1)
    assert om.check()


def test_long_exact_sequence_is_exact():
    K = koszul(["x"], ["x^2", "x^3"], names=["e", "f"])
    T = K.extend([("w", -2)], {"w": "x*e - f"})
    rep = les_theta(Q, K, T)
    assert rep.ok, rep.failures
    assert len(rep.details) >= 10


def test_spectral_page_has_expected_corner():
    E = elliptic()
    pages = spectral_e2(Q, E, DgMorphism(E, E, {}))
    # E_2^{0,0} = Theta^0 = Hom(Omega, R): not zero for a smooth curve
    assert not pages[(0, 0)].is_zero()


# -- tangent modules against the brute-force weight-graded oracle --------

def _oracle_case(k):
    B = koszul(["x"], ["x^3"], names=["e"], name="B")
    A = koszul(["x"], ["x"] * k, name="A")
    P = DgMorphism(B, A, {"e": "x^2*" + A.negative_names()[0]})
    src = Alg(["x"], [1], ["e"], [3], {"e": "x^3"})
    tgt = Alg(["x"], [1], [f"e{i}" for i in range(k)], [1] * k, {f"e{i}": "x" for i in range(k)})
    imgs = [tgt.parse("x"), tgt.mul(tgt.parse("x^2"), {((0,), (0,)): 1})]
    return B, A, P, src, tgt, imgs


@pytest.mark.parametrize("k", [2, 3])
def test_tangent_modules_match_oracle(k):
    B, A, P, src, tgt, imgs = _oracle_case(k)
    assert check_morphism(P).ok
    for level in (0, 1, 2):
        expected = der_oracle(src, tgt, imgs, level)
        assert expected == frozen.DER_DIMS[k][level]
        assert h_theta(Q, B, P, level).dim_q() == expected


@pytest.mark.parametrize("k", [2, 3])
def test_pi_modules_match_oracle(k):
    B, A, P, *_ = _oracle_case(k)
    for level in (1, 2):
        pm = pi_module(Q, B, P, level)
        assert pm.module.dim_q() == frozen.DER_DIMS[k][level]
        assert pm.is_trivial() == (frozen.DER_DIMS[k][level] == 0)


def test_pi_module_rejects_level_zero():
    B, A, P, *_ = _oracle_case(2)
    with pytest.raises(ValueError):
        pi_module(Q, B, P, 0)
