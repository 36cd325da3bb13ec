import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from catchall.cli import EXIT_DATA, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main

SIM = ["simulate", "--theta", "0.9", "--sigma2-eps", "1", "--sigma2-eta", "1"]


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def body(path):
    return path.read_text()


@pytest.fixture
def sim_csv(tmp_path):
    out = tmp_path / "y.csv"
    assert main(SIM + ["-T", "5000", "--seed", "3", "--out", str(out)]) == EXIT_OK
    return out


class TestSimulate:
    def test_latent_column_equal_without_noise(self, tmp_path):
        out = tmp_path / "s.csv"
        rc = main(["simulate", "--theta", "0.5", "--sigma2-eps", "1", "--sigma2-eta", "0",
                   "-T", "50", "--emit-latent", "--out", str(out)])
        assert rc == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["t", "y", "x"]
        assert all(r[1] == r[2] for r in rows)
        assert [int(r[0]) for r in rows] == list(range(1, 51))
        manifest = json.loads((tmp_path / "s.csv.manifest.json").read_text())
        assert manifest["command"] == "simulate" and manifest["master_seed"] == 0
        assert "PCG64" in manifest["rng"]

    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(SIM + ["-T", "300", "--seed", "9", "--out", str(a)])
        main(SIM + ["-T", "300", "--seed", "9", "--out", str(b)])
        assert body(a) == body(b)

    def test_variance_and_round_trip(self, tmp_path):
        out = tmp_path / "big.csv"
        main(SIM + ["-T", "100000", "--seed", "1", "--out", str(out), "--emit-latent"])
        header, rows = read_csv(out)
        y = np.array([float(r[1]) for r in rows])
        assert np.var(y) == pytest.approx(6.263158, rel=0.05)
        for r in rows[:200]:
            assert repr(float(r[1])) == r[1]

    def test_bad_flags(self, capsys):
        assert main(["simulate", "--theta", "1.2", "--sigma2-eps", "1", "--sigma2-eta", "1",
                     "-T", "10"]) == EXIT_USAGE
        assert "theta" in capsys.readouterr().err
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--theta", "0.5"])
        assert exc.value.code == EXIT_USAGE


class TestReduce:
    def test_json(self, capsys):
        assert main(["reduce", "--theta", "0.9", "--sigma2-eps", "1", "--sigma2-eta", "1",
                     "--horizons", "1,2,5,20", "--json"]) == EXIT_OK
        rep = json.loads(capsys.readouterr().out)
        assert set(rep) == {"theta", "alpha", "sigma2_u", "c", "sigma2_x", "sigma2_y", "plims", "var_factors"}
        assert rep["alpha"] == pytest.approx(0.36233344146816689, abs=1e-12)
        assert rep["c"] == pytest.approx(0.159664, abs=1e-6)
        plims = [d["value"] for d in rep["plims"]]
        assert plims == sorted(plims) and len(set(plims)) == 4
        assert [d["k"] for d in rep["var_factors"]] == [1, 2, 5, 20]

    def test_no_noise(self, capsys):
        main(["reduce", "--theta", "0.9", "--sigma2-eps", "1", "--sigma2-eta", "0", "--json"])
        rep = json.loads(capsys.readouterr().out)
        assert rep["alpha"] == 0.0 and rep["c"] == 0.0

    @pytest.mark.parametrize("theta", ["0", "1", "-0.3"])
    def test_theta_domain(self, theta):
        assert main(["reduce", "--theta", theta, "--sigma2-eps", "1", "--sigma2-eta", "1"]) == EXIT_USAGE


class TestEstimate:
    def test_point_mass_equivalence(self, sim_csv, capsys):
        main(["estimate", "--in", str(sim_csv), "--k", "1", "--method", "closed", "--json"])
        closed = json.loads(capsys.readouterr().out)
        main(["estimate", "--in", str(sim_csv), "--weights", "1:1", "--json"])
        mini = json.loads(capsys.readouterr().out)
        assert abs(closed["theta_hat"] - mini["theta_hat"]) < 1e-6
        assert closed["method"] == "closed_form" and mini["method"] == "minimizer"
        assert abs(closed["theta_hat"] - 0.7563) < 0.055
        assert closed["n_terms"] == {"1": 4999}

    def test_profile(self, sim_csv, tmp_path, capsys):
        prof = tmp_path / "prof.csv"
        rc = main(["estimate", "--in", str(sim_csv), "--weights", "1:1,3:2", "--profile", str(prof),
                   "--profile-points", "64"])
        assert rc == EXIT_OK
        header, rows = read_csv(prof)
        assert header == ["theta", "Q"] and len(rows) == 64
        assert (tmp_path / "prof.csv.manifest.json").exists()

    def test_zero_variance(self, tmp_path):
        f = tmp_path / "z.csv"
        f.write_text("t,y\n" + "".join(f"{i},0.0\n" for i in range(1, 20)))
        assert main(["estimate", "--in", str(f), "--k", "1"]) == EXIT_USAGE
        f.write_text("t,y\n" + "".join(f"{i},2.5\n" for i in range(1, 20)))
        assert main(["estimate", "--in", str(f), "--k", "1"]) == EXIT_USAGE

    def test_nonpositive_ratio(self, tmp_path):
        f = tmp_path / "alt.csv"
        f.write_text("t,y\n" + "".join(f"{i},{(-1) ** i}\n" for i in range(1, 30)))
        assert main(["estimate", "--in", str(f), "--k", "1"]) == EXIT_DOMAIN

    def test_parse_errors(self, tmp_path):
        assert main(["estimate", "--in", str(tmp_path / "missing.csv"), "--k", "1"]) == EXIT_DATA
        f = tmp_path / "bad.csv"
        f.write_text("t,y\n1,abc\n2,3\n")
        assert main(["estimate", "--in", str(f), "--k", "1"]) == EXIT_DATA
        f.write_text("t,z\n1,1\n2,3\n")
        assert main(["estimate", "--in", str(f), "--k", "1"]) == EXIT_DATA

    def test_closed_needs_single_horizon(self, sim_csv):
        assert main(["estimate", "--in", str(sim_csv), "--weights", "1:1,2:1",
                     "--method", "closed"]) == EXIT_USAGE

    def test_demean(self, tmp_path, capsys):
        f = tmp_path / "m.csv"
        from scipy.signal import lfilter
        e = np.random.default_rng(0).standard_normal(2000)
        v = 10 + lfilter([1.0], [1.0, -0.5], e)
        f.write_text("y\n" + "".join(f"{float(x)!r}\n" for x in v))
        main(["estimate", "--in", str(f), "--k", "1", "--json"])
        raw = json.loads(capsys.readouterr().out)["theta_hat"]
        main(["estimate", "--in", str(f), "--k", "1", "--demean", "--json"])
        centred = json.loads(capsys.readouterr().out)["theta_hat"]
        assert raw > 0.95
        assert abs(centred - 0.5) < 0.1


class TestSpectrum:
    def test_theory(self, tmp_path, capsys):
        out = tmp_path / "th.csv"
        rc = main(["spectrum", "--theory", "--theta", "0.9", "--sigma2-eps", "1", "--sigma2-eta", "1",
                   "--out", str(out), "--json"])
        assert rc == EXIT_OK
        rep = json.loads(capsys.readouterr().out)
        assert rep["f_bar"] == pytest.approx(1.277008, abs=1e-6)
        assert rep["global_peak"] == 0.0
        header, rows = read_csv(out)
        assert header == ["lambda", "f_x", "f_y", "lower", "upper"] and len(rows) == 4096
        width = {float(r[4]) - float(r[3]) for r in rows}
        assert max(width) - min(width) < 1e-12

    def test_data(self, sim_csv, tmp_path, capsys):
        out = tmp_path / "sp.csv"
        assert main(["spectrum", "--in", str(sim_csv), "--half-width", "16", "--out", str(out),
                     "--json"]) == EXIT_OK
        rep = json.loads(capsys.readouterr().out)
        header, rows = read_csv(out)
        assert header == ["lambda", "f_hat", "lower", "upper"] and len(rows) == 2500
        for r in rows:
            assert float(r[2]) == float(r[1]) - rep["f_bar"]
            assert float(r[3]) == float(r[1])

    def test_errors(self, tmp_path):
        f = tmp_path / "short.csv"
        f.write_text("y\n1\n2\n3\n")
        assert main(["spectrum", "--in", str(f)]) == EXIT_DATA
        f.write_text("y\n" + "".join(f"{i % 7}\n" for i in range(40)))
        assert main(["spectrum", "--in", str(f), "--half-width", "11"]) == EXIT_USAGE
        assert main(["spectrum"]) == EXIT_USAGE


class TestMc:
    @pytest.mark.parametrize("exp, extra", [
        ("bias", ["--horizons", "1,5"]),
        ("variance", ["--horizons", "3,6"]),
        ("spectral", ["--half-width", "8"]),
    ])
    def test_parallel_identical(self, tmp_path, exp, extra):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        common = ["mc", exp, "-T", "1024", "-R", "16", "--seed", "11"] + extra
        assert main(common + ["--out", str(a)]) == EXIT_OK
        assert main(common + ["--out", str(b), "--parallel", "--workers", "4"]) == EXIT_OK
        assert body(a) == body(b)
        man = json.loads((tmp_path / "b.csv.manifest.json").read_text())
        assert man["master_seed"] == 11 and man["params"]["parallel"] is True

    def test_invalid(self):
        assert main(["mc", "bias", "-T", "100", "-R", "1"]) == EXIT_USAGE
        assert main(["mc", "bias", "-T", "100", "--horizons", "1,x"]) == EXIT_USAGE


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "catchall", "reduce", "--theta", "0.5",
                          "--sigma2-eps", "3", "--sigma2-eta", "1", "--json"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["c"] == pytest.approx(0.2)
