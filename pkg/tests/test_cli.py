import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from dgdescent.cli.main import main

HERE = Path(__file__).parent / "manifests"
KEYS = {"command", "inputs", "window", "result", "certificates"}


def run(capsys, *argv):
    code = main([str(a) for a in argv] + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def m(name):
    return HERE / name


@pytest.mark.parametrize("argv, code", [
    (["check", m("elliptic.dgs")], 0),
    (["cohomology", m("elliptic.dgs"), "A"], 0),
    (["cohomology", m("koszul_tower.dgs"), "S", "--window=-2..0"], 0),
    (["truncate", m("elliptic.dgs"), "A"], 0),
    (["tangent", m("elliptic.dgs"), "A->B", "--at", "p", "--level", "1"], 0),
    (["pi", m("elliptic.dgs"), "A->B", "--at", "p", "--level", "1"], 0),
    (["etale", m("etale.dgs"), "id"], 0),
    (["etale", m("etale.dgs"), "A->Ag"], 0),
    (["etale", m("etale.dgs"), "sq"], 1),
    (["etale", m("etale.dgs"), "shear"], 0),
    (["open-immersion", m("etale.dgs"), "A->Ag", "--witness", "x"], 0),
    (["open-immersion", m("etale.dgs"), "A->Ag", "--witness", "x - 1"], 1),
    (["tensor", m("elliptic.dgs"), "B", "B", "--over", "A"], 0),
    (["koszul", "--vars", "x,y", "--seq", "x;y"], 0),
    (["koszul", "--vars", "x", "--seq", "x;x"], 1),
    (["cech", m("elliptic.dgs"), "U", "M", "--p", "0"], 0),
    (["cech", m("elliptic.dgs"), "U", "M", "--p", "1"], 0),
    (["descent-check", m("descent.dgs"), "C->B", "U", "--at", "f", "--levels", "1"], 0),
    (["glue", m("trivial_gluing.dgs"), "U", "G", "--budget", "2"], 0),
    (["amplitude", m("fat_point.dgs"), "K->W"], 0),
    (["obstruction", m("fat_point.dgs"), "K->F"], 0),
    (["obstruction", m("fat_point.dgs"), "K->W"], 1),
])
def test_commands_and_exit_codes(capsys, argv, code):
    got, doc = run(capsys, *argv)
    assert got == code, doc
    assert set(doc) == KEYS
    assert doc["command"] == argv[0]
    assert doc["result"]["ok"] is (code == 0)


def test_truncate_reports_elliptic_relation(capsys):
    _, doc = run(capsys, "truncate", m("elliptic.dgs"), "A")
    from dgdescent.commalg import PolyRing
    P = PolyRing(["x", "y"])
    assert [P(r) for r in doc["result"]["relations"]] == [P("y^2 - 4*x^3 + 4*x")]


def test_glue_trivial_certifies_low_degrees(capsys):
    _, doc = run(capsys, "glue", m("trivial_gluing.dgs"), "U", "G", "--budget", "2")
    iso = {c["degree"] for c in doc["certificates"] if c.get("kind") == "isomorphism"}
    assert {0, -1} <= iso


def test_amplitude_of_non_lci_resolution(capsys):
    _, doc = run(capsys, "amplitude", m("fat_point.dgs"), "K->W")
    assert doc["result"]["amplitude"] == 2
    assert doc["window"] == [-2, 0]


@pytest.mark.parametrize("argv", [
    ["cohomology", m("elliptic.dgs"), "Nope"],
    ["tangent", m("elliptic.dgs"), "A->Nope"],
    ["etale", m("etale.dgs"), "nomorph"],
    ["cech", m("elliptic.dgs"), "U", "Nope", "--p", "1"],
    ["cech", m("elliptic.dgs"), "U", "M", "--p", "-1"],
    ["glue", m("elliptic.dgs"), "U", "Nope", "--budget", "1"],
    ["cohomology", m("elliptic.dgs"), "A", "--window=0..-2"],
    ["open-immersion", m("etale.dgs"), "A->Ag", "--witness", "zz"],
    ["check", m("does_not_exist.dgs")],
])
def test_input_errors_exit_two(capsys, argv):
    code, doc = run(capsys, *argv)
    assert code == 2
    assert doc["result"]["ok"] is False


@pytest.mark.parametrize("name", sorted(p.name for p in HERE.glob("err_*.dgs")))
def test_broken_manifests_exit_two(capsys, name):
    code, doc = run(capsys, "check", m(name))
    assert code == 2
    err = doc["result"]["error"]
    assert {"line", "column", "kind", "message"} <= set(err)


@pytest.mark.parametrize("value", ["zero", "0", "-3"])
def test_invalid_thread_count_is_an_input_error(capsys, monkeypatch, value):
    monkeypatch.setenv("DGS_THREADS", value)
    code, doc = run(capsys, "check", m("elliptic.dgs"))
    assert code == 2


def test_thread_count_is_recorded(capsys, monkeypatch):
    monkeypatch.setenv("DGS_THREADS", "4")
    code, doc = run(capsys, "check", m("elliptic.dgs"))
    assert code == 0 and doc["inputs"]["threads"] == 4


def test_check_print_round_trips(capsys):
    code, doc = run(capsys, "check", m("elliptic.dgs"), "--print")
    from dgdescent.cli.dsl import parse, parse_file
    assert parse(doc["result"]["canonical"]).structure() == parse_file(m("elliptic.dgs")).structure()


def test_text_output_and_module_entry_point():
    env = dict(os.environ)
    env.pop("DGS_THREADS", None)
    proc = subprocess.run([sys.executable, "-m", "dgdescent.cli", "etale", str(m("etale.dgs")), "sq"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 1
    assert "etale: no" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "dgdescent.cli", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2
