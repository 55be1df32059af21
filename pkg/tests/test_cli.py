import json
from importlib import resources

import jsonschema
import pytest

from zmcrot.cli import main


@pytest.fixture(scope="module")
def schema():
    text = resources.files("zmcrot").joinpath("schemas/verification_report.schema.json").read_text()
    return json.loads(text)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_ex34(capsys, schema):
    code, out, _ = run(capsys, "verify", "--example", "ex3.4")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, schema)
    assert rep["verdict"] == "pass"
    assert abs(rep["first_integral_mean"] - 0.75) < 1e-7


def test_verify_negative_control(capsys, schema):
    code, out, _ = run(
        capsys, "verify", "--kind", "M1", "--b", "2", "--family", "quadratic", "--l0", "1", "--mu0", "2"
    )
    assert code == 1
    rep = json.loads(out)
    jsonschema.validate(rep, schema)
    assert rep["verdict"] == "fail"


def test_verify_vranceanu(capsys):
    code, out, _ = run(capsys, "verify", "--example", "vranceanu", "--a", "1", "--c", "0")
    assert code == 0 and json.loads(out)["max_mean_curvature"] < 1e-10


def test_verify_writes_file(tmp_path, capsys, schema):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--example", "ex3.5", "--out", str(path))
    assert code == 0 and out == ""
    jsonschema.validate(json.loads(path.read_text()), schema)


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--example", "nope"],
        ["verify", "--kind", "M1"],
        ["verify", "--kind", "M1", "--b", "2", "--family", "quadratic"],
        ["verify", "--example", "ex3.4", "--samples", "1"],
        ["verify", "--example", "ex3.4", "--tol", "-1"],
        ["verify", "--kind", "M1", "--b", "0.5", "--family", "arcsine", "--a0", "-0.75"],
        ["verify", "--bogus"],
    ],
)
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"example": "ex3.5", "samples": 20}))
    code, out, _ = run(capsys, "--config", str(cfg), "verify")
    assert code == 0 and json.loads(out)["samples"] == 20
    code, out, _ = run(capsys, "--config", str(cfg), "verify", "--samples", "30")
    assert json.loads(out)["samples"] == 30


def test_config_file_errors(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert run(capsys, "--config", str(cfg), "verify")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "missing.json"), "verify")[0] == 2


def test_seed_env(monkeypatch, capsys):
    monkeypatch.setenv("ZMCROT_SEED", "7")
    a = run(capsys, "verify", "--example", "ex3.5")[1]
    b = run(capsys, "verify", "--example", "ex3.5")[1]
    assert a == b
    monkeypatch.setenv("ZMCROT_SEED", "x")
    assert run(capsys, "verify", "--example", "ex3.5")[0] == 2


def test_gallery(tmp_path, capsys, schema):
    code, out, _ = run(capsys, "gallery", "--out", str(tmp_path), "--samples", "50", "--grid", "8")
    assert code == 0
    rows = {r["surface"]: r for r in json.loads((tmp_path / "summary.json").read_text())}
    assert rows["ex3.5"]["causal"] == "timelike" and abs(rows["ex3.5"]["a0"] + 3) < 1e-7
    assert rows["ex3.10"]["causal"] == "spacelike-positive-definite"
    assert rows["ex3.12"]["causal"] == "timelike"
    assert all(r["labels_match"] for r in rows.values())
    for name in rows:
        jsonschema.validate(json.loads((tmp_path / f"{name}.json").read_text()), schema)
        assert (tmp_path / f"{name}.obj").read_text().startswith("# zmcrot mesh")
    assert (tmp_path / "summary.csv").read_text().splitlines()[0].startswith("surface,kind,b,a0")
    assert "ex3.10" in out


def test_gallery_io_error(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(capsys, "gallery", "--out", str(blocker / "sub"))[0] == 2


def test_integrate_ex35(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code, _, _ = run(capsys, "integrate", "--example", "ex3.5", "--out", str(out))
    assert code == 0
    rep = json.loads((tmp_path / "c.report.json").read_text())
    assert rep["status"] == "complete" and rep["membership_residual"] < 1e-5
    lines = out.read_text().splitlines()
    assert lines[0] == "u,p,s,dp,ds,ddp,dds" and len(lines) == rep["nodes"] + 1


def test_integrate_no_solution(capsys):
    code, out, err = run(
        capsys, "integrate", "--method", "first-order", "--kind", "M1", "--b", "2",
        "--a0-tilde", "1", "--eps", "1", "--eps-star", "1", "--start", "0.1,1",
    )
    assert code == 1 and "RadicandNegative" in err
    assert json.loads(out)["status"] == "RadicandNegative"


def test_integrate_singular_start(capsys):
    code, _, err = run(capsys, "integrate", "--kind", "M1", "--b", "2", "--start", "0.5,1,1,0")
    assert code == 1 and "SingularStart" in err


def test_integrate_hits_singularity(capsys):
    code, out, _ = run(capsys, "integrate", "--example", "ex3.10", "--direction", "-1")
    rep = json.loads(out)
    assert code == 1 and rep["status"] == "HitSingularity" and rep["boundary"] > 0


def test_integrate_first_order(capsys):
    code, out, _ = run(
        capsys, "integrate", "--method", "first-order", "--example", "ex3.5", "--u0", "0.5",
        "--a0-tilde", "-1", "--eps", "1", "--eps-star", "-1",
    )
    assert code == 0 and json.loads(out)["membership_residual"] < 1e-6


def test_export_csv(tmp_path, capsys):
    path = tmp_path / "m.csv"
    assert run(capsys, "export", "--example", "ex3.4", "--out", str(path))[0] == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "u,v,x1,x2,x3,x4" and len(lines) == 1 + 32 * 32
    # u-major ordering and round-trip floats
    first, second = (l.split(",") for l in lines[1:3])
    assert first[0] == second[0] and float(first[1]) < float(second[1])
    assert repr(float(first[2])) == first[2]


def test_export_obj(tmp_path, capsys):
    path = tmp_path / "m.obj"
    assert run(capsys, "export", "--example", "ex3.5", "--format", "obj", "--nu", "4", "--nv", "5",
               "--drop-coord", "x1", "--out", str(path))[0] == 0
    lines = path.read_text().splitlines()
    verts = [l for l in lines if l.startswith("v ")]
    faces = [l for l in lines if l.startswith("f ")]
    assert len(verts) == 20 and all(len(v.split()) == 4 for v in verts)
    assert len(faces) == 2 * 3 * 4
    assert max(int(i) for f in faces for i in f.split()[1:]) == 20


def test_export_json(capsys):
    code, out, _ = run(capsys, "export", "--example", "ex3.10", "--format", "json", "--nu", "3", "--nv", "2")
    d = json.loads(out)
    assert code == 0 and len(d["points"]) == 6


def test_export_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.obj", tmp_path / "b.obj"
    for p in (a, b):
        run(capsys, "export", "--example", "ex3.12", "--format", "obj", "--out", str(p))
    assert a.read_bytes() == b.read_bytes()


def test_export_singular_grid(capsys):
    code, _, err = run(
        capsys, "export", "--kind", "M1", "--b", "1", "--family", "explicit", "--name", "sin-cos",
        "--domain", "0,0.7853981633974483",
    )
    assert code == 2 and "u=0.7853981633974483" in err
