import json
import math
import subprocess
import sys

import numpy as np
import pytest

from sphsym import io as sio
from sphsym.cli import main
from sphsym.families import jump_example, random_blobs, staircase_profile


@pytest.fixture
def jump_json(tmp_path):
    path = tmp_path / "jump.json"
    sio.write_json(path, sio.profile_to_dict(jump_example(count=257)))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


class TestCommands:
    def test_perimeter(self, capsys, jump_json, tmp_path):
        code, s = run(capsys, "perimeter", "--profile", jump_json, "--out", tmp_path / "o")
        assert code == 0
        assert s["total"] == pytest.approx(7 * math.pi / 3 + 4, abs=1e-9)
        man = sio.read_json(tmp_path / "o" / "manifest.json")
        assert man["command"] == "perimeter"
        assert man["inputs"]["profile"]["sha256"] == sio.file_sha256(jump_json)

    def test_rigidity_writes_witness(self, capsys, jump_json, tmp_path):
        code, s = run(capsys, "rigidity", "--profile", jump_json, "--out", tmp_path / "o")
        assert code == 0 and s["holds"] is False
        E = sio.load_set(tmp_path / "o" / "witness.json")
        assert E.n == 2

    def test_counterexample_round_trip(self, capsys, jump_json, tmp_path):
        out = tmp_path / "o"
        code, s = run(capsys, "counterexample", "--kind", "jump", "--profile", jump_json, "--gamma", 0.2, "--out", out)
        assert code == 0
        code, t = run(capsys, "check-inequality", "--set", out / "counterexample_set.json", "--out", tmp_path / "c")
        assert code == 0
        assert abs(t["slack"]) <= 1e-9

    def test_cantor_counterexample(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        sio.write_json(path, sio.profile_to_dict(staircase_profile(count=257)))
        code, s = run(capsys, "counterexample", "--kind", "cantor", "--profile", path, "--out", tmp_path / "o")
        assert code == 0

    def test_symmetrize_voxel(self, capsys, tmp_path):
        sio.write_voxel(tmp_path / "v.pgm", random_blobs(2, np.random.default_rng(2), 1 / 32))
        code, s = run(capsys, "symmetrize", "--voxel", tmp_path / "v.pgm", "--grid", 512, "--out", tmp_path / "o")
        assert code == 0
        assert (tmp_path / "o" / "symmetral.pgm").exists()
        assert (tmp_path / "o" / "profile.csv").exists()

    def test_equality_analyze(self, capsys, jump_json, tmp_path):
        code, s = run(capsys, "equality-analyze", "--profile", jump_json, "--out", tmp_path / "o")
        assert code == 0
        assert (tmp_path / "o" / "direction_trace.csv").exists()

    def test_outputs_are_reproducible(self, capsys, jump_json, tmp_path):
        out = tmp_path / "o"
        run(capsys, "rigidity", "--profile", jump_json, "--out", out)
        first = {p.name: p.read_bytes() for p in out.iterdir()}
        run(capsys, "rigidity", "--profile", jump_json, "--out", out)
        assert first == {p.name: p.read_bytes() for p in out.iterdir()}


class TestErrors:
    def test_missing_file(self, capsys, tmp_path):
        assert main(["perimeter", "--profile", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2

    def test_bad_json(self, capsys, tmp_path):
        (tmp_path / "bad.json").write_text("{")
        assert main(["perimeter", "--profile", str(tmp_path / "bad.json"), "--out", str(tmp_path)]) == 2

    def test_bad_gamma(self, capsys, jump_json, tmp_path):
        code = main(["counterexample", "--kind", "jump", "--profile", str(jump_json), "--gamma", "2.0", "--out", str(tmp_path)])
        assert code == 2

    def test_tolerance_breach(self, capsys, tmp_path):
        # no difference fits a negative budget, so the run must report a breach
        path = tmp_path / "j.json"
        sio.write_json(path, sio.profile_to_dict(jump_example(count=257)))
        code = main(["counterexample", "--kind", "jump", "--profile", str(path), "--gamma", "0.2", "--budget", "-1", "--out", str(tmp_path)])
        assert code == 3


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "sphsym.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "sphsym" in res.stdout
