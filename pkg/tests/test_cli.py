import json

import pytest

from coxcoh import __version__
from coxcoh.cli import main
from coxcoh.corpus import corpus, get
from coxcoh.coxeter import CoxeterMatrix


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


@pytest.fixture
def dinf_file(tmp_path):
    path = tmp_path / "dihedral-inf.json"
    path.write_text(json.dumps({"generators": ["s", "t"], "m": [[1, 0], [0, 1]]}))
    return str(path)


def test_corpus_contents():
    names = [e.name for e in corpus()]
    assert len(names) >= 7
    for entry in corpus():
        doc = json.loads(json.dumps(entry.matrix.to_json()))
        assert CoxeterMatrix.from_json(doc) == entry.matrix
    tripod = get("tripod").system()
    assert sum(1 for T in tripod.spherical_poset() if len(T) == 1) == 3


def test_spherical(capsys, dinf_file):
    code, out, _ = run(capsys, "spherical", dinf_file)
    assert code == 0
    assert out["spherical"] == [[], ["s"], ["t"]]
    assert out["version"] == __version__


def test_deterministic(capsys, dinf_file):
    run(capsys, "ball", dinf_file, "--radius", "3")
    first = capsys.readouterr()
    main(["ball", dinf_file, "--radius", "3"])
    a = capsys.readouterr().out
    main(["ball", dinf_file, "--radius", "3"])
    b = capsys.readouterr().out
    assert a == b and first is not None


def test_ball(capsys):
    code, out, _ = run(capsys, "ball", "Dinf", "--radius", "3")
    assert code == 0 and out["size"] == 7


def test_chamber(capsys):
    code, out, _ = run(capsys, "chamber", "tripod")
    assert code == 0
    assert sorted(c["dim"] for c in out["cells"]) == [0, 0, 0, 0, 1, 1, 1]


def test_basis(capsys):
    code, out, _ = run(capsys, "basis", "S3", "--side", "right")
    assert code == 0 and len(out["matrix"]) == 6


def test_graded_action(capsys):
    code, out, _ = run(capsys, "graded-action", "S3", "-T", "s,t", "-s", "s")
    assert code == 0 and out["matrix"] == [[1]]


def test_graded_action_outside_trust_radius(capsys):
    code, _, err = run(capsys, "graded-action", "Dinf", "-T", "s", "-s", "t", "--radius", "3")
    assert code == 6 and "OutOfTrustRadius" in err


def test_homology(capsys):
    code, out, _ = run(capsys, "homology", "Dinf", "--radius", "4", "--variant", "hc")
    assert code == 0 and out["equal"] and out["lhs"]["betti"] == [0, 1]


def test_homology_with_chamber_file(capsys, tmp_path):
    code, chamber, _ = run(capsys, "chamber", "S3")
    path = tmp_path / "k.json"
    path.write_text(json.dumps({k: chamber[k] for k in ("cells", "incidence", "mirrors")}))
    code, out, _ = run(capsys, "homology", "S3", "--chamber", str(path), "--variant", "h")
    assert code == 0 and out["lhs"]["betti"] == [1]


def test_graded(capsys):
    code, out, _ = run(capsys, "graded", "S3", "-p", "1", "--chamber", "point", "--traces")
    assert code == 0 and out["ok"]


def test_demo(capsys):
    code, out, _ = run(capsys, "demo", "tripod", "--radius", "4")
    assert code == 0 and out["pair_x_line"] == 1 and out["pair_xs_line"] == 0


def test_building(capsys):
    code, out, _ = run(
        capsys, "building", "Dinf", "--thickness", "s=2,t=2", "--radius", "2", "--basis", "s", "--realize", "K"
    )
    assert code == 0 and out["chambers"] == 13
    assert out["basis"]["ok"] and out["realization"]["ok"]


def test_hecke(capsys):
    code, out, _ = run(capsys, "hecke", "S3", "--q", "s=2")
    assert code == 0 and all(r["a_idempotent"] for r in out["specials"])
    code, out, _ = run(capsys, "hecke", "S3", "--q", "2", "--graded", "1", "--chamber", "point", "--traces")
    assert code == 0 and out["graded"]["ok"]


def test_verify_subset(capsys):
    code, out, err = run(capsys, "verify", "--suite", "6,9")
    assert code == 0 and out["passed"]
    assert "[PASS] criterion 6" in err


def test_timings_flag(capsys):
    code, out, _ = run(capsys, "--timings", "spherical", "S3")
    assert "elapsed_seconds" in out
    code, out, _ = run(capsys, "spherical", "S3")
    assert "elapsed_seconds" not in out


@pytest.mark.parametrize(
    "content,code",
    [
        ("{not json", 2),
        ('{"generators": ["s", "t"]}', 2),
        ('{"generators": ["s", "t"], "m": [[1, 2], [3, 1]]}', 3),
    ],
)
def test_bad_matrix_files(capsys, tmp_path, content, code):
    path = tmp_path / "bad.json"
    path.write_text(content)
    got, _, err = run(capsys, "spherical", str(path))
    assert got == code
    assert json.loads(err)["exit_code"] == code


def test_unknown_input(capsys):
    code, _, _ = run(capsys, "spherical", "no-such-thing")
    assert code == 2


def test_missing_radius_for_infinite_group(capsys):
    code, _, err = run(capsys, "ball", "tripod")
    assert code == 3


def test_resource_limit(capsys, monkeypatch):
    monkeypatch.setenv("COXCOH_MAX_ELEMENTS", "20")
    code, _, _ = run(capsys, "ball", "tripod", "--radius", "6")
    assert code == 5


def test_bad_arguments(capsys):
    code, _, _ = run(capsys, "graded", "S3")
    assert code == 2
