import json

import numpy as np
import pytest

from mollab.cli import main
from mollab.fieldio import export_csv, load_field_csv, save_field_csv
from mollab.grid import Field, make_grid
from mollab.synth import Holder, generate


class TestFieldIO:
    def test_roundtrip_space(self, tmp_path):
        g = make_grid(1, 64)
        f = generate(g, Holder(0.4, seed=1))
        p = tmp_path / "f.csv"
        save_field_csv(f, p)
        back = load_field_csv(p)
        assert back.grid == f.grid
        assert np.array_equal(back.data, f.data)

    def test_roundtrip_spacetime(self, tmp_path):
        g = make_grid(1, 32, nt=16, t_end=0.5)
        rng = np.random.default_rng(0)
        f = Field(g, rng.standard_normal((16, 32)), time_periodic=True)
        p = tmp_path / "f.csv"
        save_field_csv(f, p)
        back = load_field_csv(p)
        assert back.grid == f.grid
        assert back.time_periodic
        assert np.array_equal(back.data, f.data)

    def test_export_csv_refuses_empty(self, tmp_path):
        with pytest.raises(ValueError):
            export_csv([], ["a", "b"], tmp_path / "x.csv")

    def test_export_csv_two_columns(self, tmp_path):
        p = tmp_path / "pairs.csv"
        export_csv([(0.1, 1.0), (0.05, 0.5)], ["epsilon", "norm"], p)
        lines = p.read_text().strip().splitlines()
        assert lines[0] == "epsilon,norm"
        assert len(lines) == 3


class TestSubcommands:
    def test_generate_mollify_besov_pipeline(self, tmp_path, capsys):
        field_file = tmp_path / "field.csv"
        rc = main(["generate", "--n", "4096", "--kind", "holder",
                   "--alpha", "0.5", "--seed", "3", "--quiet",
                   "--out", str(field_file)])
        assert rc == 0
        smooth_file = tmp_path / "smooth.csv"
        rc = main(["mollify", "--field", str(field_file),
                   "--epsilon", "0.01", "--quiet", "--out", str(smooth_file)])
        assert rc == 0
        rc = main(["besov", "--field", str(field_file), "--q", "3"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert 0.35 <= doc["alpha_hat"] <= 0.65

    def test_check_preset_pass_exit0(self, capsys):
        rc = main(["check", "--preset", "vacuum-endpoint", "--gamma", "2"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["passed"] is True

    def test_check_params_file_fail_exit1(self, tmp_path, capsys):
        params = {"gamma": "2", "p": "5", "q": "5", "alpha": "1/3",
                  "k": "5/2", "l": "5/2", "rho_floor": 1,
                  "grad_rho": ["5/2", "5/2"], "dt_rho": ["5/2", "5/2"]}
        pf = tmp_path / "params.json"
        pf.write_text(json.dumps(params))
        rc = main(["check", "--check", "local", "--params", str(pf)])
        assert rc == 1

    def test_simulate_writes_outputs(self, tmp_path):
        rc = main(["simulate", "--n", "256", "--t-end", "0.05",
                   "--ic", "equilibrium", "--quiet", "--out", str(tmp_path)])
        assert rc == 0
        for name in ("snapshots.csv", "energy.csv", "conservation.csv",
                     "summary.json", "manifest.json"):
            assert (tmp_path / name).exists()
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert set(manifest) >= {"config", "energy", "conservation"}
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["conserved"] is True

    def test_balance_subcommand(self, tmp_path):
        rc = main(["balance", "--n", "512", "--t-end", "0.2",
                   "--snapshot-every", "2",
                   "--epsilons", "0.03125,0.015625", "--quiet",
                   "--out", str(tmp_path)])
        assert rc == 0
        lines = (tmp_path / "balance.csv").read_text().strip().splitlines()
        assert len(lines) == 3

    def test_balance_threaded_matches_serial(self, tmp_path):
        args = ["balance", "--n", "256", "--t-end", "0.2",
                "--snapshot-every", "2",
                "--epsilons", "0.0625,0.03125", "--quiet"]
        assert main(args + ["--out", str(tmp_path / "a")]) == 0
        assert main(args + ["--out", str(tmp_path / "b"),
                            "--threads", "4"]) == 0
        assert ((tmp_path / "a" / "balance.csv").read_bytes()
                == (tmp_path / "b" / "balance.csv").read_bytes())

    def test_bad_input_exit2(self, tmp_path):
        rc = main(["mollify", "--field", str(tmp_path / "missing.csv"),
                   "--epsilon", "0.1", "--out", str(tmp_path / "o.csv")])
        assert rc == 2


class TestRun:
    def _write(self, tmp_path, text):
        cfg = tmp_path / "exp.toml"
        cfg.write_text(text)
        return cfg

    def test_cet_rate_config_and_determinism(self, tmp_path):
        cfg = self._write(tmp_path, """
experiment = "cet-rate"
seed = 7
[grid]
n = 4096
[fields]
alpha1 = 0.4
alpha2 = 0.4
[sweep]
eps_hi = 0.125
eps_lo = 0.00390625
[norm]
q = 1.5
[tolerances]
slope_band = 0.2
r2_min = 0.97
""")
        out1 = tmp_path / "o1"
        out2 = tmp_path / "o2"
        assert main(["run", str(cfg), "--quiet", "--out", str(out1)]) == 0
        assert main(["run", str(cfg), "--quiet", "--out", str(out2)]) == 0
        for name in ("sweep.csv", "summary.json"):
            a = (out1 / "cet-rate" / name).read_bytes()
            b = (out2 / "cet-rate" / name).read_bytes()
            assert a == b
        summary = json.loads((out1 / "cet-rate" / "summary.json").read_text())
        assert summary["pass"] is True
        manifest = json.loads((out1 / "cet-rate" / "manifest.json").read_text())
        assert manifest["seed"] == 7

    def test_criterion_check_config(self, tmp_path):
        cfg = self._write(tmp_path, """
experiment = "criterion-check"
[check]
preset = "local-endpoint"
gamma = "3/2"
""")
        out = tmp_path / "o"
        assert main(["run", str(cfg), "--quiet", "--out", str(out)]) == 0
        doc = json.loads((out / "criterion-check" / "verdict.json").read_text())
        assert doc["passed"] is True

    def test_euler_run_config(self, tmp_path):
        cfg = self._write(tmp_path, """
experiment = "euler-run"
[grid]
n = 256
[sim]
ic = "equilibrium"
t_end = 0.05
[tolerances]
mass_tol = 1e-13
energy_drift_max = 1e-12
""")
        out = tmp_path / "o"
        assert main(["run", str(cfg), "--quiet", "--out", str(out)]) == 0

    def test_unknown_experiment_exit2(self, tmp_path):
        cfg = self._write(tmp_path, 'experiment = "warp-drive"\n')
        assert main(["run", str(cfg), "--quiet",
                     "--out", str(tmp_path / "o")]) == 2

    def test_failed_run_removes_partial_outputs(self, tmp_path):
        cfg = self._write(tmp_path, """
experiment = "cet-rate"
[sweep]
eps_hi = 0.125
eps_lo = 0.125
""")
        out = tmp_path / "o"
        assert main(["run", str(cfg), "--quiet", "--out", str(out)]) == 2
        leftovers = list((out / "cet-rate").iterdir()) if (out / "cet-rate").exists() else []
        assert leftovers == []
