import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from toric_sarkisov import cli
from toric_sarkisov.geography import SliceError
from toric_sarkisov.mmp import EngineError

DATA = Path(__file__).resolve().parent.parent / "data"


def fan(name):
    return str(DATA / f"{name}.fan.json")


def canon(name):
    return str(DATA / f"{name}.canonical.json")


def run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = cli.main(list(args) + ["--out", str(out)])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data


def test_check_p2(tmp_path):
    code, rep = run(["check", fan("p2")], tmp_path)
    assert code == 0
    assert all(rep[k] for k in ("valid", "complete", "simplicial", "projective", "terminal"))
    assert rep["picard_number"] == 1


def test_check_p112(tmp_path):
    code, rep = run(["check", fan("p112")], tmp_path)
    assert code == 0 and rep["projective"] is True and rep["terminal"] is False


def test_check_nonprojective(tmp_path):
    from toric_sarkisov.corpus import nonprojective_cube
    from toric_sarkisov.serialize import fan_to_input
    path = tmp_path / "cube.json"
    path.write_text(json.dumps(fan_to_input(nonprojective_cube())))
    code, rep = run(["check", str(path)], tmp_path)
    assert code == 0 and rep["projective"] is False and "farkas_certificate" in rep


def test_malformed_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rank": 2,\n "rays": [[1, 0]')
    assert cli.main(["check", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "bad.json:2:" in err


def test_invalid_fan_exits_2(tmp_path):
    bad = tmp_path / "overlap.json"
    bad.write_text(json.dumps({"rank": 2, "rays": [[1, 0], [0, 1], [1, 1]], "max_cones": [[0, 1], [0, 2]]}))
    code, rep = run(["check", str(bad)], tmp_path)
    assert code == 2 and rep["valid"] is False and rep["violating_pair"] == [0, 1]


def test_wrong_divisor_length_exits_2(tmp_path):
    d = tmp_path / "d.json"
    d.write_text(json.dumps({"coeffs": ["1", "2"]}))
    assert cli.main(["mmp", fan("p2"), str(d)]) == 2


def test_mmp_f1(tmp_path):
    code, data = run(["mmp", fan("f1"), canon("f1")], tmp_path)
    assert code == 0
    assert data["summary"]["outcome"] == "mori_fiber_space"
    assert data["verify"]["ok"] is True
    assert [s["kind"] for s in data["summary"]["steps"]][-1] == "fiber"


def test_mmp_p2_canonical_is_mfs_to_point(tmp_path):
    code, data = run(["mmp", fan("p2"), canon("p2")], tmp_path)
    assert code == 0 and data["summary"]["base"]["dim"] == 0


def test_mmp_nef_is_minimal_model(tmp_path):
    d = tmp_path / "nef.json"
    d.write_text(json.dumps({"coeffs": ["1", "1", "0", "0"]}))
    code, data = run(["mmp", fan("p1xp1"), str(d)], tmp_path)
    assert code == 0 and data["summary"]["outcome"] == "minimal_model" and data["summary"]["steps"] == []


def test_geography_f1_writes_svg(tmp_path):
    svg = tmp_path / "f1.svg"
    code, data = run(["geography", fan("f1"), canon("f1"), "--svg", str(svg)], tmp_path)
    assert code == 0
    assert sum(c["dimension"] == 2 for c in data["slice"]["chambers"]) >= 2
    text = svg.read_text()
    assert text.startswith("<?xml") and 'viewBox="0 0 800 800"' in text


def test_geography_p2_one_chamber(tmp_path):
    code, data = run(["geography", fan("p2"), canon("p2")], tmp_path)
    assert code == 0
    assert sum(c["dimension"] == 2 for c in data["slice"]["chambers"]) == 1


def test_geography_empty_slice(tmp_path):
    spec = tmp_path / "slice.json"
    spec.write_text(json.dumps({"origin": ["-10", "0", "0"], "directions": [["1", "0", "0"], ["0", "1", "0"]],
                                "region": [["-1", "-1"], ["1", "-1"], ["1", "1"], ["-1", "1"]]}))
    svg = tmp_path / "empty.svg"
    code, data = run(["geography", fan("p2"), canon("p2"), "--slice", str(spec), "--svg", str(svg)], tmp_path)
    assert code == 0 and data["slice"]["effective"] == [] and data["slice"]["chambers"] == []
    assert svg.read_text().startswith("<?xml")


def test_sarkisov_f1(tmp_path):
    svg = tmp_path / "chain.svg"
    code, data = run(["sarkisov", fan("f1"), canon("f1"), "--svg", str(svg)], tmp_path)
    assert code == 0 and len(data["chain"]["links"]) == 1
    assert data["chain"]["types"][0] in ("I", "III")
    assert svg.exists()


def test_sarkisov_p1xp1(tmp_path):
    code, data = run(["sarkisov", fan("p1xp1"), canon("p1xp1"), "--run-b", "seeded-random:0"], tmp_path)
    assert code == 0 and data["chain"]["types"] == ["IVm"]


def test_sarkisov_same_runs_empty_chain(tmp_path):
    svg = tmp_path / "same.svg"
    code, data = run(["sarkisov", fan("p2"), canon("p2"), "--run-a", "seeded-random:4",
                      "--run-b", "seeded-random:4", "--svg", str(svg)], tmp_path)
    assert code == 0 and data["chain"]["links"] == [] and svg.exists()


def test_sarkisov_minimal_model_exits_5(tmp_path):
    d = tmp_path / "ample.json"
    d.write_text(json.dumps({"coeffs": ["1", "1", "1"]}))
    assert cli.main(["sarkisov", fan("p2"), str(d)]) == 5


def test_unknown_strategy_exits_2(tmp_path):
    assert cli.main(["sarkisov", fan("p2"), canon("p2"), "--run-a", "bogus"]) == 2


def test_engine_error_exits_3(monkeypatch, tmp_path):
    def boom(*a, **k):
        raise EngineError("MMP did not terminate")
    monkeypatch.setattr(cli, "run_mmp", boom)
    assert cli.main(["mmp", fan("f1"), canon("f1")]) == 3


def test_genericity_exhausted_exits_4(monkeypatch, capsys):
    def boom(*a, **k):
        raise SliceError("slice construction exhausted its retries", [{"attempt": 0, "properties": ["2"]}])
    monkeypatch.setattr(cli, "factorize", boom)
    assert cli.main(["sarkisov", fan("f1"), canon("f1")]) == 4
    assert '"attempt": 0' in capsys.readouterr().err


def test_seed_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(cli.SEED_ENV, "17")
    code, data = run(["geography", fan("p2"), canon("p2")], tmp_path)
    assert code == 0 and data["seed"] == 17
    monkeypatch.setenv(cli.SEED_ENV, "nope")
    assert cli.main(["geography", fan("p2"), canon("p2")]) == 2


def _subprocess_outputs(tmp_path, tag, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    out, svg = tmp_path / f"{tag}.json", tmp_path / f"{tag}.svg"
    subprocess.run([sys.executable, "-m", "toric_sarkisov.cli", "sarkisov", fan("f1"), canon("f1"),
                    "--out", str(out), "--svg", str(svg)], check=True, env=env)
    return out.read_bytes(), svg.read_bytes()


def test_outputs_are_byte_identical_across_processes(tmp_path):
    a = _subprocess_outputs(tmp_path, "a", 1)
    b = _subprocess_outputs(tmp_path, "b", 12345)
    assert a == b


@pytest.mark.parametrize("jobs", ["1", "2"])
def test_jobs_flag_does_not_change_output(tmp_path, jobs):
    code, data = run(["geography", fan("bl2p2"), canon("bl2p2"), "--jobs", jobs], tmp_path, f"j{jobs}.json")
    ref_code, ref = run(["geography", fan("bl2p2"), canon("bl2p2")], tmp_path, "ref.json")
    assert code == ref_code == 0 and data == ref
