import json
import subprocess
import sys
from pathlib import Path

FIXTURE = Path(__file__).parent.parent / "src" / "hochgysin" / "fixtures" / \
    "massey_fixture.dga.json"


def run_cli(args, stdin=None, env_extra=None):
    import os
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    proc = subprocess.run(
        [sys.executable, "-m", "hochgysin.cli", *args],
        input=stdin, capture_output=True, text=True, env=env)
    return proc


def test_build_cochains_validate_pipeline():
    built = run_cli(["build", "torus", "--n", "2"])
    assert built.returncode == 0
    cochains = run_cli(["cochains", "--ring", "Z"], stdin=built.stdout)
    assert cochains.returncode == 0
    validated = run_cli(["validate"], stdin=cochains.stdout)
    assert validated.returncode == 0
    report = json.loads(validated.stdout)
    assert report["exit"] == 0
    assert all(c["pass"] for c in report["checks"])


def test_build_usage_errors():
    assert run_cli(["build", "sphere"]).returncode == 2
    assert run_cli(["build", "torus", "--n", "0"]).returncode == 2
    assert run_cli(["build", "nonsense"]).returncode == 2


def test_validate_rejects_broken_algebra(tmp_path):
    built = run_cli(["build", "circle"])
    cochains = run_cli(["cochains"], stdin=built.stdout)
    payload = json.loads(cochains.stdout)
    payload["diff"]["0"][0][0] = 7
    res = run_cli(["validate"], stdin=json.dumps(payload))
    assert res.returncode == 1
    report = json.loads(res.stdout)
    assert not all(c["pass"] for c in report["checks"])


def test_malformed_input_exit_2(tmp_path):
    res = run_cli(["cochains"], stdin="{broken json")
    assert res.returncode == 2
    bad = tmp_path / "bad.scx.json"
    bad.write_text(json.dumps({"vertex_count": 3, "facets": [[2, 1]]}))
    res2 = run_cli(["cochains", "--in", str(bad)])
    assert res2.returncode == 2
    assert "error" in json.loads(res2.stdout)


def test_cohomology_report():
    built = run_cli(["build", "torus", "--n", "2"])
    res = run_cli(["cohomology", "--ring", "Z"], stdin=built.stdout)
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    ranks = [rep["cohomology"][str(n)]["free_rank"] for n in range(3)]
    assert ranks == [1, 2, 1]
    assert rep["cohomology"]["1"]["representatives"]


def test_sections_theta_pipeline_and_determinism():
    built = run_cli(["build", "torus", "--n", "2"])
    cochains = run_cli(["cochains"], stdin=built.stdout)
    s1 = run_cli(["sections", "--seed", "3"], stdin=cochains.stdout)
    s2 = run_cli(["sections", "--seed", "3"], stdin=cochains.stdout)
    assert s1.returncode == 0
    assert s1.stdout == s2.stdout           # byte-stable for fixed seed
    th1 = run_cli(["theta"], stdin=s1.stdout)
    th2 = run_cli(["theta"], stdin=s2.stdout)
    assert th1.returncode == 0
    assert th1.stdout == th2.stdout
    blocks = json.loads(th1.stdout)
    assert blocks["arity"] == 3 and blocks["internal_degree"] == -1


def test_theta_class_trivial_on_torus():
    built = run_cli(["build", "torus", "--n", "2"])
    cochains = run_cli(["cochains"], stdin=built.stdout)
    res = run_cli(["theta-class"], stdin=cochains.stdout)
    assert res.returncode == 0
    assert json.loads(res.stdout)["trivial"] is True


def test_theta_class_nontrivial_on_fixture():
    res = run_cli(["theta-class", "--in", str(FIXTURE)])
    assert res.returncode == 1
    rep = json.loads(res.stdout)
    assert rep["trivial"] is False
    assert "certificate" in rep


def test_massey_fixture_nonzero():
    res = run_cli(["massey", "--x", "1:[0,1]", "--y", "1:[0,1]", "--z", "1:[1,0]",
                   "--in", str(FIXTURE)])
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert rep["representative"] == [-1, 0]
    assert rep["zero_coset"] is False


def test_massey_rejects_non_triple():
    # [e1] * [e23] is the top class, so (x, y, z) = ([e1], [e23], anything)
    # is not a Massey triple
    res = run_cli(["massey", "--x", "1:[0,1]", "--y", "2:[0,1]", "--z", "1:[1,0]",
                   "--in", str(FIXTURE)])
    assert res.returncode == 2
    assert "NotAMasseyTriple" in json.loads(res.stdout)["error"]


def test_massey_bad_literal():
    res = run_cli(["massey", "--x", "banana", "--y", "1:[0,1]", "--z", "1:[1,0]",
                   "--in", str(FIXTURE)])
    assert res.returncode == 2


def test_gysin_check_th_and_split_on_torus():
    built = run_cli(["build", "torus", "--n", "2"])
    cochains = run_cli(["cochains"], stdin=built.stdout)
    res = run_cli(["gysin", "--c", "2:[1]", "--check-th", "--split"],
                  stdin=cochains.stdout)
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert {c["name"]: c["pass"] for c in rep["checks"]} == {
        "extension_exact": True, "theorem_th": True, "split_found": True}
    assert rep["result"]["extension"]["cone_cohomology"]["2"] == \
        {"free_rank": 2, "torsion": []}


def test_gysin_split_fails_on_fixture():
    res = run_cli(["gysin", "--c", "1:[0,1]", "--split", "--in", str(FIXTURE)])
    assert res.returncode == 1
    rep = json.loads(res.stdout)
    verdicts = {c["name"]: c["pass"] for c in rep["checks"]}
    assert verdicts["extension_exact"] is True
    assert verdicts["split_found"] is False


def test_gysin_torsion_report():
    built = run_cli(["build", "torus", "--n", "2"])
    cochains = run_cli(["cochains"], stdin=built.stdout)
    res = run_cli(["gysin", "--c", "2:[2]"], stdin=cochains.stdout)
    rep = json.loads(res.stdout)
    assert rep["result"]["extension"]["cone_cohomology"]["2"] == \
        {"free_rank": 2, "torsion": [2]}


def test_torus_subcommand(tmp_path):
    out = tmp_path / "w.hcochain.json"
    res = run_cli(["torus", "--n", "2", "--ring", "Z",
                   "--emit-witness", str(out)])
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert all(c["pass"] for c in rep["checks"])
    witness = json.loads(out.read_text())
    assert witness["arity"] == 2 and witness["internal_degree"] == -1


def test_monomorphism_subcommand():
    res = run_cli(["monomorphism", "--n", "2"])
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert rep["injective_on_classes"] is True


def test_env_seed_matches_explicit_seed():
    built = run_cli(["build", "circle"])
    cochains = run_cli(["cochains"], stdin=built.stdout)
    via_flag = run_cli(["sections", "--seed", "9"], stdin=cochains.stdout)
    via_env = run_cli(["sections"], stdin=cochains.stdout,
                      env_extra={"HOCHGYSIN_SEED": "9"})
    assert via_flag.stdout == via_env.stdout


def test_reports_byte_stable():
    built1 = run_cli(["build", "torus", "--n", "2"])
    built2 = run_cli(["build", "torus", "--n", "2"])
    assert built1.stdout == built2.stdout
    r1 = run_cli(["theta-class", "--in", str(FIXTURE)])
    r2 = run_cli(["theta-class", "--in", str(FIXTURE)])
    assert r1.stdout == r2.stdout
