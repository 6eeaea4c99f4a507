from pathlib import Path

import pytest

from dgdescent.cli.dsl import ManifestError, format_manifest, parse, parse_file

HERE = Path(__file__).parent / "manifests"
VALID = sorted(p for p in HERE.glob("*.dgs") if not p.name.startswith("err_"))

# kind, line, column of the first error; positions checked by hand
ERRORS = {
    "err_cover_not_unit.dgs": ("cover", 2, 7),
    "err_d_squared.dgs": ("d2", 3, 5),
    "err_degree_mismatch.dgs": ("degree", 1, 42),
    "err_duplicate.dgs": ("duplicate", 2, 9),
    "err_encoding.dgs": ("encoding", 1, 1),
    "err_eof.dgs": ("syntax", 2, 1),
    "err_gluing_unknown_chart.dgs": ("unknown", 4, 9),
    "err_missing_semicolon.dgs": ("syntax", 1, 29),
    "err_morphism_not_dg.dgs": ("morphism", 3, 10),
    "err_positive_degree.dgs": ("degree", 1, 18),
    "err_unknown_algebra.dgs": ("unknown", 2, 19),
    "err_unknown_generator.dgs": ("unknown", 2, 14),
    "err_unknown_statement.dgs": ("syntax", 2, 1),
}


def test_corpus_is_complete():
    assert len(VALID) + len(ERRORS) >= 15
    assert {p.name for p in HERE.glob("err_*.dgs")} == set(ERRORS)


@pytest.mark.parametrize("path", VALID, ids=lambda p: p.name)
def test_round_trip(path):
    m = parse_file(path)
    text = format_manifest(m)
    again = parse(text)
    assert again.structure() == m.structure()
    assert format_manifest(again) == text


@pytest.mark.parametrize("name", sorted(ERRORS))
def test_error_location(name):
    kind, line, col = ERRORS[name]
    with pytest.raises(ManifestError) as info:
        parse_file(HERE / name)
    err = info.value
    assert (err.kind, err.line, err.col) == (kind, line, col), err.to_dict()


def test_empty_algebra_is_the_rationals():
    m = parse("algebra K { }")
    assert m.algebras["K"].n == 0


def test_elliptic_statement():
    m = parse("algebra A { gens x:0, y:0, xi:-1; d xi = y^2 - 4*(x^3 - x); }")
    A = m.algebras["A"]
    assert A.differential_of("xi") == A.element("y^2 - 4*x^3 + 4*x")


def test_degree_mismatch_explains():
    with pytest.raises(ManifestError) as info:
        parse("algebra A { gens x:0, y:0, xi:-1; d xi = x*y*xi; }")
    assert "expected degree 0" in info.value.message


def test_extends_keeps_base_generators():
    m = parse("algebra A { gens x:0; } algebra B extends A { gens e:-1; d e = x; }")
    assert [g.name for g in m.algebras["B"].insertion] == ["x", "e"]


def test_differential_of_inherited_generator_rejected():
    with pytest.raises(ManifestError) as info:
        parse("algebra A { gens x:0, e:-1; d e = x; } algebra B extends A { gens f:-1; d e = 0; }")
    assert info.value.kind == "unknown"


def test_gluing_charts_extend_cover_charts():
    m = parse_file(HERE / "elliptic.dgs")
    G = m.gluings["T"]
    B12 = G.algebra((1, 2))
    assert "eta" in B12.index and "u1" in B12.index and "u2" in B12.index


def test_module_relations():
    m = parse_file(HERE / "rationals.dgs")
    N = m.modules["N"]
    assert N.n_generators == 2 and len(N.relations) == 2
