import json
import math

import numpy as np
import pytest

from sphsym import io as sio
from sphsym.families import jump_example, random_blobs, random_capfield, staircase_profile
from sphsym.perimeter import perimeter_capfield, perimeter_symmetral
from sphsym.sets import MultiArcSet, VoxelSet, planar_rotation, rotate, symmetral_from_profile


class TestProfiles:
    @pytest.mark.parametrize("make", [lambda: jump_example(count=65), lambda: staircase_profile(count=65)])
    def test_round_trip(self, make):
        p = make()
        q = sio.profile_from_dict(json.loads(sio.dumps(sio.profile_to_dict(p))))
        r = np.linspace(p.grid.r_min, p.grid.r_max, 301)
        assert np.array_equal(p.alpha(r), q.alpha(r))
        assert perimeter_symmetral(q).total == perimeter_symmetral(p).total

    def test_expression(self):
        d = {"n": 2, "grid": {"r_min": 1.0, "r_max": 2.0}, "alpha": {"ac_expr": "0.5 + 0.1 * sin(r)"}}
        p = sio.profile_from_dict(d, count=33)
        assert p.grid.count == 33
        assert p.alpha(1.5) == pytest.approx(0.5 + 0.1 * math.sin(1.5), abs=1e-6)

    def test_expression_has_no_builtins(self):
        d = {"n": 2, "grid": {"r_min": 1.0, "r_max": 2.0}, "alpha": {"ac_expr": "__import__('os')"}}
        with pytest.raises(NameError):
            sio.profile_from_dict(d, count=9)

    @pytest.mark.parametrize("bad", [{}, {"n": 2, "grid": {"r_min": 0, "r_max": 1}, "alpha": {}}])
    def test_missing_keys(self, bad):
        with pytest.raises(ValueError):
            sio.profile_from_dict(bad)


class TestSets:
    @pytest.mark.parametrize("seed", range(4))
    def test_capfield_round_trip(self, seed):
        E = random_capfield(2, np.random.default_rng(seed), count=65)
        F = sio.set_from_dict(json.loads(sio.dumps(sio.set_to_dict(E))))
        assert perimeter_capfield(F).total == pytest.approx(perimeter_capfield(E).total, abs=1e-12)

    def test_multiarc_round_trip(self):
        c = symmetral_from_profile(jump_example(count=33))
        M = MultiArcSet((c, rotate(c, planar_rotation(2, math.pi))))
        N = sio.set_from_dict(sio.set_to_dict(M))
        assert isinstance(N, MultiArcSet) and len(N.components) == 2

    def test_profile_by_path(self, tmp_path):
        sio.write_json(tmp_path / "p.json", sio.profile_to_dict(jump_example(count=33)))
        sio.write_json(tmp_path / "s.json", {"profile": "p.json"})
        E = sio.load_set(tmp_path / "s.json")
        assert perimeter_capfield(E).total == pytest.approx(7 * math.pi / 3 + 4, abs=1e-9)

    def test_bad_spec(self):
        with pytest.raises(ValueError):
            sio.set_from_dict({"nothing": 1})


class TestVoxels:
    def test_pgm_round_trip(self, tmp_path):
        V = random_blobs(2, np.random.default_rng(0), 1 / 16)
        sio.write_voxel(tmp_path / "v.pgm", V)
        W = sio.read_voxel(tmp_path / "v.pgm")
        assert np.array_equal(V.occupancy, W.occupancy) and W.h == V.h

    def test_pgm_orientation(self, tmp_path):
        # the first axis runs left to right, the second from the bottom row up
        occ = np.zeros((3, 2), dtype=bool)
        occ[2, 1] = True
        sio.write_pgm(tmp_path / "o.pgm", VoxelSet(occ, 1.0))
        rows = [ln for ln in (tmp_path / "o.pgm").read_text().splitlines() if not ln.startswith(("#", "P"))][2:]
        assert rows[0] == "0 0 1"

    def test_csv_round_trip(self, tmp_path):
        V = random_blobs(3, np.random.default_rng(1), 1 / 8)
        sio.write_voxel(tmp_path / "v.csv", V)
        W = sio.read_voxel(tmp_path / "v.csv")
        assert np.array_equal(V.occupancy, W.occupancy) and W.h == V.h

    def test_missing_spacing(self, tmp_path):
        (tmp_path / "x.pgm").write_text("P2\n2 1\n1\n0 1\n")
        with pytest.raises(ValueError):
            sio.read_voxel(tmp_path / "x.pgm")
        assert sio.read_voxel(tmp_path / "x.pgm", h=0.5).h == 0.5

    def test_bad_suffix(self, tmp_path):
        with pytest.raises(ValueError):
            sio.read_voxel(tmp_path / "x.png")

    def test_wrong_dimension(self, tmp_path):
        with pytest.raises(ValueError):
            sio.write_pgm(tmp_path / "x.pgm", VoxelSet(np.zeros((2, 2, 2), bool), 1.0))


class TestSerialisation:
    def test_dumps_is_deterministic(self):
        a = sio.dumps({"b": np.float64(0.1), "a": [np.int64(3), np.bool_(True)], "c": np.inf})
        assert a == sio.dumps({"c": math.inf, "a": [3, True], "b": 0.1})
        assert json.loads(a)["c"] == "inf"

    def test_csv_precision(self, tmp_path):
        sio.write_csv(tmp_path / "t.csv", ["x"], [[1 / 3]])
        assert float((tmp_path / "t.csv").read_text().split()[1]) == 1 / 3

    def test_bad_json(self, tmp_path):
        (tmp_path / "bad.json").write_text("{")
        with pytest.raises(ValueError):
            sio.read_json(tmp_path / "bad.json")
