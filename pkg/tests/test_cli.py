import csv
import io
import json
import subprocess
import sys

import pytest

from polybound.cli import main
from polybound.corpus import shipped_corpus_dir

SINGLE_EDGE = {
    "polynomial": {"n": 2, "edges": [{"vertices": [1, 2], "weight": 1}]},
    "variables": [{"kind": "rademacher"}, {"kind": "rademacher"}],
}


def write(tmp_path, data, name="p.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_profile_single_edge(tmp_path, capsys):
    code, out, _ = run(capsys, "profile", write(tmp_path, SINGLE_EDGE))
    assert code == 0
    assert json.loads(out) == {"mu": [1, 1, 1], "L": 1, "mean": 0, "variance": 1, "q": 2}


def test_profile_malformed_json(tmp_path, capsys):
    code, _, err = run(capsys, "profile", write(tmp_path, '{"polynomial": {'))
    assert code == 2 and "line 1" in err


def test_profile_duplicate_vertex(tmp_path, capsys):
    bad = json.loads(json.dumps(SINGLE_EDGE))
    bad["polynomial"]["edges"][0]["vertices"] = [1, 1]
    code, _, err = run(capsys, "profile", write(tmp_path, bad))
    assert code == 2 and "edges[0]" in err


def test_profile_missing_field(tmp_path, capsys):
    code, _, err = run(capsys, "profile", write(tmp_path, {"polynomial": SINGLE_EDGE["polynomial"]}))
    assert code == 2 and "variables" in err


def test_unsupported_law(tmp_path, capsys):
    prob = json.loads(json.dumps(SINGLE_EDGE))
    prob["variables"][1] = {"kind": "lognormal", "mu": 0, "sigma": 1}
    path = write(tmp_path, prob)
    assert run(capsys, "profile", path)[0] == 3
    assert run(capsys, "bounds", path, "--samples", "0")[0] == 3
    prob["overrides"] = {"L": [None, 4.0]}
    assert run(capsys, "profile", write(tmp_path, prob))[0] == 0


def test_bounds_csv(tmp_path, capsys):
    path = write(tmp_path, SINGLE_EDGE)
    code, out, _ = run(capsys, "bounds", path, "--samples", "20000", "--workers", "1",
                       "--lambda-grid", "0.1,0.5,0.9")
    assert code == 0
    header = out.splitlines()[0].split(",")
    assert header == ["lambda", "main_raw", "main_clamped", "ss_clamped", "hc_clamped", "bernstein_var",
                      "estimate", "ci_low", "ci_high", "violation_flag"]
    table = rows(out)
    assert [float(r["lambda"]) for r in table] == [0.1, 0.5, 0.9]
    assert all(r["violation_flag"] == "0" for r in table)
    assert all(float(r["estimate"]) == 1.0 for r in table)
    assert ";" not in out


def test_bounds_default_grid_is_sorted(tmp_path, capsys):
    code, out, _ = run(capsys, "bounds", write(tmp_path, SINGLE_EDGE), "--samples", "0")
    lams = [float(r["lambda"]) for r in rows(out)]
    assert code == 0 and len(lams) == 10 and lams == sorted(lams)
    assert lams[0] == pytest.approx(0.1) and lams[-1] == pytest.approx(5.0)


def test_bounds_without_samples_drops_empirical(tmp_path, capsys):
    code, out, _ = run(capsys, "bounds", write(tmp_path, SINGLE_EDGE), "--samples", "0", "--lambda-grid", "1")
    assert code == 0
    assert out.splitlines()[0] == "lambda,main_raw,main_clamped,ss_clamped,hc_clamped,bernstein_var,violation_flag"


@pytest.mark.parametrize("grid", ["0.5,0.1", "-1", "a,b", ","])
def test_bad_grid(tmp_path, capsys, grid):
    assert run(capsys, "bounds", write(tmp_path, SINGLE_EDGE), "--samples", "0", "--lambda-grid", grid)[0] == 2


def test_falsified_constants_exit_4(tmp_path, capsys):
    consts = write(tmp_path, {"R": 0.01, "R4": 1, "R0": 1, "R_hc": 1}, "c.json")
    code, out, err = run(capsys, "bounds", write(tmp_path, SINGLE_EDGE), "--constants", consts,
                         "--samples", "20000", "--workers", "1")
    assert code == 4 and "violation" in err
    assert any(r["violation_flag"] == "1" for r in rows(out))


def test_constants_env_fallback(tmp_path, capsys, monkeypatch):
    consts = write(tmp_path, {"R": 0.01, "R4": 1, "R0": 1, "R_hc": 1}, "c.json")
    monkeypatch.setenv("POLYBOUND_CONSTANTS", consts)
    args = ("bounds", write(tmp_path, SINGLE_EDGE), "--samples", "20000", "--workers", "1")
    assert run(capsys, *args)[0] == 4
    monkeypatch.delenv("POLYBOUND_CONSTANTS")
    assert run(capsys, *args)[0] == 0


def test_problem_analysis_settings(tmp_path, capsys):
    consts = write(tmp_path, {"R": 0.01, "R4": 1, "R0": 1, "R_hc": 1}, "c.json")
    prob = dict(SINGLE_EDGE, analysis={"lambda_grid": [0.2, 0.4], "samples": 5000, "seed": 3,
                                       "constants": "c.json"})
    code, out, _ = run(capsys, "bounds", write(tmp_path, prob), "--format", "json", "--workers", "1")
    data = json.loads(out)
    assert code == 4
    assert data["samples"] == 5000 and data["seed"] == 3 and data["constants"]["R"] == 0.01
    assert [r["lambda"] for r in data["rows"]] == [0.2, 0.4]


def test_profile_round_trip_reproduces_table(tmp_path, capsys):
    prob = {
        "polynomial": {"n": 3, "edges": [{"vertices": [1, 2], "weight": "1/2"}, {"vertices": [2, 3], "weight": 2},
                                         {"vertices": [3], "weight": 1}]},
        "variables": [{"kind": "bernoulli", "p": "1/3"}, {"kind": "gaussian", "mean": 0, "sigma": 1},
                      {"kind": "poisson", "lambda": 1}],
    }
    path = write(tmp_path, prob)
    _, prof, _ = run(capsys, "profile", path)
    first = run(capsys, "bounds", path, "--samples", "0")[1]
    prob["overrides"] = {"profile": json.loads(prof)}
    second = run(capsys, "bounds", write(tmp_path, prob, "q.json"), "--samples", "0")[1]
    assert first == second


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "cmb")
    assert code == 0 and "worst ratio" in out and out.strip().endswith("1/1 checks passed")
    code, out, _ = run(capsys, "verify", "counting")
    assert code == 0


def test_verify_failure_exit_1(tmp_path, capsys):
    consts = write(tmp_path, {"R": 1, "R4": 1, "R0": 0.5, "R_hc": 1}, "c.json")
    assert run(capsys, "verify", "counting", "--constants", consts)[0] == 1


def test_verify_typo(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "moment"])
    assert exc.value.code == 2
    assert "invalid choice" in capsys.readouterr().err


def test_fit_empty_and_missing(tmp_path, capsys):
    assert run(capsys, "fit", str(tmp_path), "R")[0] == 2
    assert run(capsys, "fit", str(tmp_path / "nope"), "R")[0] == 2


def _small_corpus(tmp_path):
    src = sorted(shipped_corpus_dir().glob("*.json"))[:4]
    d = tmp_path / "corpus"
    d.mkdir()
    for p in src:
        (d / p.name).write_text(p.read_text())
    return d


def test_fit_idempotent_and_monotone(tmp_path, capsys):
    d = _small_corpus(tmp_path)
    out = tmp_path / "m.json"
    args = ["fit", str(d), "R", "--samples", "100000", "--workers", "1", "--output", str(out)]
    assert run(capsys, *args)[0] == 0
    first = json.loads(out.read_text())
    code, _, err = run(capsys, *args)
    assert code == 0 and "unchanged" in err
    assert json.loads(out.read_text()) == first
    extra = sorted(shipped_corpus_dir().glob("*.json"))[20]
    (d / extra.name).write_text(extra.read_text())
    assert run(capsys, *args)[0] == 0
    second = json.loads(out.read_text())
    assert second["R"] >= first["R"] and second["corpus_hash"] != first["corpus_hash"]


def test_fit_r0_stdout(tmp_path, capsys):
    d = _small_corpus(tmp_path)
    code, out, _ = run(capsys, "fit", str(d), "R0")
    data = json.loads(out)
    assert code == 0
    shipped = json.loads((shipped_corpus_dir().parent / "constants.json").read_text())
    assert data["R0"] == shipped["R0"] and data["R0_sweep_max"] == shipped["R0_sweep_max"]


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "polybound.cli", "verify", "nope"], capture_output=True, text=True)
    assert proc.returncode == 2
