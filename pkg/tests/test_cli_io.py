import json
import math

import numpy as np
import pytest

from rarestab import energy, io
from rarestab.cli import main, observed_orders


def write_config(tmp_path, name="cfg.json", **over):
    cfg = {
        "gas": {"c_v": 1.5},
        "riemann": {"left": [1.0, 1.0, 0.0], "right": [1.0, 1.0, 0.5]},
        "grid": {"Lx": 1.0, "Nx": 32, "Ny": 4},
        "solver": {"t_end": 0.2, "cfl": 0.45, "snapshot_times": [0.0, 0.2]},
    }
    for key, val in over.items():
        if val is None:
            cfg.pop(key)
        elif isinstance(val, dict) and key in cfg:
            cfg[key] = {**cfg[key], **val}
        else:
            cfg[key] = val
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


class TestRun:
    def test_success(self, tmp_path):
        out = tmp_path / "run"
        assert main(["run", "--config", str(write_config(tmp_path)), "--out", str(out)]) == 0
        man = json.loads((out / "manifest.json").read_text())
        assert man["status"] == "ok" and man["steps"] > 0
        assert man["snapshots"] == [0.0, 0.2]
        assert max(man["conservation_max_rel_error"]) < 1e-13
        assert man["exact_solution"]["middle"][0] == pytest.approx(0.8185818755128092, rel=1e-14)
        rows = io.read_csv(out / "series.csv")
        assert len(rows) == man["steps"] + 1
        assert rows[0]["entropy_prod_min"] == "nan"
        assert float(rows[-1]["t"]) == 0.2
        assert (out / "snapshots" / "snap_0001_rho.bin").stat().st_size == 32 * 4 * 8

    def test_existing_directory(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "run"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 2
        assert main(["run", "--config", str(cfg), "--out", str(out), "--force"]) == 0

    def test_force_refuses_foreign_directory(self, tmp_path):
        out = tmp_path / "precious"
        out.mkdir()
        (out / "thesis.tex").write_text("keep me")
        assert main(["run", "--config", str(write_config(tmp_path)), "--out", str(out), "--force"]) == 2
        assert (out / "thesis.tex").exists()

    def test_guard(self, tmp_path):
        cfg = write_config(tmp_path, solver={"t_end": 1.0, "snapshot_times": []})
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3
        assert not (tmp_path / "o").exists()

    def test_shock(self, tmp_path):
        cfg = write_config(tmp_path, riemann={"left": [1, 1, 0.5], "right": [1, 1, 0]})
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3

    def test_entropy_mismatch(self, tmp_path):
        cfg = write_config(tmp_path, riemann={"left": [1, 1, 0], "right": [1, 2, 0]})
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3

    @pytest.mark.parametrize("over", [
        {"riemann": None},
        {"grid": {"Nx": 2}},
        {"solver": {"cfl": 1.5}},
        {"riemann": {"left": [1, 1], "right": [1, 1, 0]}},
        {"perturbation": {"amplitude": 0.1, "phase": 2}},
        {"gas": {"c_v": -1}},
    ])
    def test_invalid_config(self, tmp_path, over):
        cfg = write_config(tmp_path, **over)
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2

    def test_missing_file_and_bad_args(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")]) == 2
        assert main(["run"]) == 2
        assert main(["frobnicate"]) == 2

    def test_deterministic(self, tmp_path):
        cfg = write_config(tmp_path, perturbation={"amplitude": 0.01, "mode": 2})
        for name in ("a", "b"):
            assert main(["run", "--config", str(cfg), "--out", str(tmp_path / name)]) == 0
        for rel in ("series.csv", "snapshots/snap_0001_E_tot.bin", "snapshots/snap_0001_rho.json"):
            assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()


class TestCertify:
    def test_defaults(self, tmp_path):
        assert main(["certify", "--out", str(tmp_path)]) == 0
        reports = json.loads((tmp_path / "certification.json").read_text())
        assert all(r["passed"] for r in reports)
        assert {r["claim"] for r in reports} >= {"G_nonpositive", "critical_point", "young_inequality"}

    def test_invalid_spec(self, tmp_path):
        spec = tmp_path / "scan.json"
        spec.write_text(json.dumps({"y_range": [-1.0, 2.0, 11]}))
        assert main(["certify", "--config", str(spec)]) == 2

    def test_corrupted_G(self, tmp_path, monkeypatch, capsys):
        good = energy.G_function
        monkeypatch.setattr(energy, "G_function", lambda y, z, gas: good(y, z, gas) + 2 * np.exp(z) * y)
        spec = tmp_path / "scan.json"
        spec.write_text(json.dumps({"y_range": [1e-3, 1e2, 101], "z_range": [0, 10, 101],
                                    "n_random": 1000}))
        assert main(["certify", "--config", str(spec)]) == 1
        reports = json.loads(capsys.readouterr().out)
        assert not reports[0]["passed"]


class TestConverge:
    def test_rarefaction(self, tmp_path):
        cfg = write_config(tmp_path, solver={"snapshot_times": []})
        out = tmp_path / "conv"
        assert main(["converge", "--config", str(cfg), "--levels", "3", "--out", str(out)]) == 0
        rows = io.read_csv(out / "convergence.csv")
        assert [int(r["Nx"]) for r in rows] == [32, 64, 128]
        l1 = [float(r["l1_rho"]) for r in rows]
        assert l1[0] > l1[1] > l1[2]
        assert rows[0]["order_rho"] == "NA" and float(rows[1]["order_rho"]) > 0
        E = [float(r["E_total"]) for r in rows]
        assert E[0] > E[1] > E[2]
        assert (out / "level_2" / "manifest.json").exists()

    def test_equal_states_give_NA(self, tmp_path):
        cfg = write_config(tmp_path, riemann={"left": [1, 1, 0.2], "right": [1, 1, 0.2]},
                           solver={"snapshot_times": []})
        out = tmp_path / "conv"
        assert main(["converge", "--config", str(cfg), "--levels", "3", "--out", str(out)]) == 0
        rows = io.read_csv(out / "convergence.csv")
        assert all(float(r["l1_rho"]) == 0 for r in rows)
        assert all(r["order_rho"] == "NA" for r in rows)

    def test_perturbed(self, tmp_path):
        # Ny = 4 would put mode 2 at the grid Nyquist frequency, where it cannot drive u2
        cfg = write_config(tmp_path, solver={"snapshot_times": []}, grid={"Ny": 8},
                           perturbation={"amplitude": 0.01, "mode": 2})
        out = tmp_path / "conv"
        assert main(["converge", "--config", str(cfg), "--levels", "3", "--out", str(out),
                     "--threads", "2"]) == 0
        rows = io.read_csv(out / "convergence.csv")
        u2 = [float(r["l1_u2"]) for r in rows]
        E = [float(r["E_total"]) for r in rows]
        assert u2[0] > u2[1] > u2[2] > 0
        assert E[0] > E[1] > E[2]

    def test_too_few_levels(self, tmp_path):
        cfg = write_config(tmp_path)
        assert main(["converge", "--config", str(cfg), "--levels", "2", "--out", str(tmp_path / "c")]) == 2

    def test_observed_orders(self):
        assert observed_orders([1.0, 0.5, 0.25], [0.1, 0.05, 0.025]) == ["NA", 1.0, 1.0]
        assert observed_orders([1.0, 0.0], [0.1, 0.05]) == ["NA", "NA"]


class TestSample:
    def _read(self, path):
        rows = io.read_csv(path)
        return {k: np.array([float(r[k]) for r in rows]) for k in rows[0]}

    def test_initial_data(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "s.csv"
        assert main(["sample", "--config", str(cfg), "--t", "0", "--out", str(out), "--points", "11"]) == 0
        d = self._read(out)
        assert np.all(d["U"][d["x1"] <= 0] == 0.0) and np.all(d["U"][d["x1"] > 0] == 0.5)
        assert np.ptp(d["s"]) == 0.0
        assert np.allclose(d["p"], d["R"] * d["Theta"])

    def test_self_similar(self, tmp_path):
        cfg = write_config(tmp_path)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["sample", "--config", str(cfg), "--t", "0.1", "--out", str(a),
                     "--xmin", "-0.5", "--xmax", "0.5"]) == 0
        assert main(["sample", "--config", str(cfg), "--t", "0.2", "--out", str(b),
                     "--xmin", "-1", "--xmax", "1"]) == 0
        da, db = self._read(a), self._read(b)
        for k in ("R", "Theta", "U"):
            assert np.allclose(da[k], db[k], rtol=1e-13, atol=1e-13)
        assert np.ptp(db["s"]) < 1e-13

    def test_negative_time(self, tmp_path):
        cfg = write_config(tmp_path)
        assert main(["sample", "--config", str(cfg), "--t", "-1", "--out", str(tmp_path / "s.csv")]) == 2


class TestIO:
    def test_snapshot_roundtrip(self, tmp_path, rng):
        q = rng.normal(size=(4, 5, 3))
        paths = io.write_snapshot(tmp_path, 7, 0.125, q)
        assert paths[0].name == "snap_0007_rho.bin"
        for k, p in enumerate(paths):
            header, arr = io.read_snapshot(p)
            assert header["time"] == 0.125 and header["Nx"] == 5
            assert np.array_equal(arr, q[k])
        raw = np.frombuffer(paths[1].read_bytes(), dtype="<f8")
        # i runs fastest
        assert raw[0] == q[1, 0, 0] and raw[1] == q[1, 1, 0] and raw[5] == q[1, 0, 1]

    def test_fmt(self):
        assert io.fmt(0.1) == "0.1"
        assert io.fmt(math.nan) == "nan"
        assert io.fmt(3) == "3" and io.fmt("NA") == "NA"
        assert float(io.fmt(1 / 3)) == 1 / 3

    def test_config_roundtrip(self, tmp_path):
        cfg = io.load_run_config(write_config(tmp_path, perturbation={"amplitude": 0.02}))
        again = io.RunConfig.from_dict(cfg.to_dict())
        assert again.to_dict() == cfg.to_dict()
        assert cfg.with_grid(64).grid.Nx == 64

    def test_atomic_json(self, tmp_path):
        p = tmp_path / "x.json"
        io.write_json_atomic(p, {"a": np.float64(1.5), "b": np.arange(2)})
        assert json.loads(p.read_text()) == {"a": 1.5, "b": [0, 1]}
        assert not (tmp_path / "x.json.tmp").exists()
