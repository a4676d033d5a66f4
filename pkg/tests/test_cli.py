import csv
import json
import math

import pytest

from owc_relay import cli
from owc_relay.config import RunConfig, SweepSpec, config_from_dict, load_config
from owc_relay.errors import ConfigError, NonConvergence


def write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestMetrics:
    def test_three_method_table(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"methods": ["closed_form", "quadrature", "monte_carlo"],
                                      "sim": {"trials": 20000}})
        out = str(tmp_path / "m.json")
        assert cli.main(["metrics", "--config", cfg, "--out", out, "--format", "json"]) == 0
        text = capsys.readouterr().out
        assert "closed_form" in text and "quadrature" in text and "monte_carlo" in text
        doc = json.load(open(out))
        relay = doc["results"]["relay"]
        dev = relay["closed_form"]["relative_deviation_vs_quadrature"][0]
        assert abs(dev) <= 0.10
        approx = relay["closed_form"]["extras"]["outage_approx"]
        assert approx / relay["quadrature"]["outage"] - 1 == pytest.approx(0.0, abs=0.10)
        assert doc["units"]["avg_snr_db"].startswith("dB")

    def test_csv_with_sidecar(self, tmp_path):
        out = str(tmp_path / "m.csv")
        assert cli.main(["metrics", "--out", out]) == 0
        rows = read_csv(out)
        assert {(r["link"], r["method"]) for r in rows} == {
            ("relay", "closed_form"), ("relay", "quadrature"), ("direct", "closed_form"),
            ("direct", "quadrature")}
        assert json.load(open(out + ".json"))["config"]["topology"]["d_km"] == 1.0

    def test_threshold_above_cap(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"gamma_th_db": 200.0, "methods": ["closed_form"]})
        assert cli.main(["metrics", "--config", cfg]) == 0
        text = capsys.readouterr().out
        direct = text.split("[direct]")[1]
        assert "support cap" in direct
        assert direct.splitlines()[2].split()[1] == "1"

    def test_relay_beyond_destination(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"topology": {"d_km": 1.0, "d_r_km": 1.5}})
        assert cli.main(["metrics", "--config", cfg]) == 2
        assert "d_r" in capsys.readouterr().err

    def test_nonconvergence_exit(self, monkeypatch, capsys):
        def boom(run):
            raise NonConvergence("outer outage integral did not converge", label="relay outage")

        monkeypatch.setattr(cli, "point_reports", boom)
        assert cli.main(["metrics"]) == 3
        assert "relay outage" in capsys.readouterr().err


class TestSweep:
    def run_sweep(self, tmp_path, args, name="s.csv"):
        out = str(tmp_path / name)
        code = cli.main(["sweep", "--out", out] + args)
        return code, out

    def test_columns_and_finiteness(self, tmp_path):
        code, out = self.run_sweep(tmp_path, ["--sweep", "pt_dbm:0:30:4"])
        assert code == 0
        rows = read_csv(out)
        assert list(rows[0])[:12] == ["pt_dbm", "outage_cf", "outage_quad", "outage_mc", "mc_lo", "mc_hi",
                                      "avg_snr_db_cf", "avg_snr_db_quad", "avg_snr_db_mc", "rate_cf",
                                      "rate_quad", "rate_mc"]
        assert "direct_outage_cf" in rows[0]
        for row in rows:
            assert row["status"] == "ok"
            for key, value in row.items():
                if value and key not in ("status", "reason"):
                    assert math.isfinite(float(value))
        outages = [float(r["outage_quad"]) for r in rows]
        assert outages == sorted(outages, reverse=True)

    def test_deterministic_and_round_trip(self, tmp_path):
        cfg = write_config(tmp_path, {"methods": ["closed_form", "monte_carlo"], "sim": {"trials": 5000}})
        args = ["--config", cfg, "--sweep", "d_r:0.3:0.7:3", "--seed", "99"]
        _, a = self.run_sweep(tmp_path, args, "a.csv")
        _, b = self.run_sweep(tmp_path, args, "b.csv")
        assert open(a).read() == open(b).read()
        _, c = self.run_sweep(tmp_path, ["--config", a + ".json"], "c.csv")
        assert open(c).read() == open(a).read()

    def test_workers_do_not_change_output(self, tmp_path):
        base = {"methods": ["closed_form"], "sim": {"trials": 2000}}
        one = write_config(tmp_path, base, "one.json")
        two = write_config(tmp_path, dict(base, sim={"trials": 2000, "workers": 2}), "two.json")
        _, a = self.run_sweep(tmp_path, ["--config", one, "--sweep", "gamma_th_db:0:20:5"], "a.csv")
        _, b = self.run_sweep(tmp_path, ["--config", two, "--sweep", "gamma_th_db:0:20:5"], "b.csv")
        assert open(a).read() == open(b).read()

    def test_midpoint_minimum(self, tmp_path):
        cfg = write_config(tmp_path, {"methods": ["closed_form"], "baseline": False})
        _, out = self.run_sweep(tmp_path, ["--config", cfg, "--sweep", "d_r:0.25:0.75:11"])
        rows = read_csv(out)
        best = min(rows, key=lambda r: float(r["outage_cf"]))
        assert float(best["d_r_km"]) == pytest.approx(0.5)

    def test_json_format(self, tmp_path):
        cfg = write_config(tmp_path, {"methods": ["closed_form"]})
        out = str(tmp_path / "s.json")
        assert cli.main(["sweep", "--config", cfg, "--sweep", "d:0.6:2.0:3", "--format", "json",
                         "--out", out]) == 0
        doc = json.load(open(out))
        assert [r["d_km"] for r in doc["rows"]] == [0.6, 1.3, 2.0]
        assert doc["units"]["d_km"] == "km"

    def test_error_rows(self, tmp_path, capsys):
        # the relay position runs past the destination for part of the grid
        cfg = write_config(tmp_path, {"methods": ["closed_form"], "topology": {"d_km": 0.8, "d_r_km": 0.3}})
        code, out = self.run_sweep(tmp_path, ["--config", cfg, "--sweep", "d:0.2:0.8:3"])
        assert code == 0
        rows = read_csv(out)
        assert rows[0]["status"] == "error" and "d_r" in rows[0]["reason"]
        assert rows[-1]["status"] == "ok"
        assert "warning" in capsys.readouterr().err

    def test_missing_sweep(self):
        assert cli.main(["sweep"]) == 2

    @pytest.mark.parametrize("text", ["pt:0:30:5", "pt_dbm:0:30", "pt_dbm:30:0:5", "pt_dbm:0:30:2",
                                      "pt_dbm:a:30:5"])
    def test_bad_sweep(self, text):
        assert cli.main(["sweep", "--sweep", text]) == 2


class TestSimulate:
    def test_json_output(self, tmp_path, capsys):
        out = str(tmp_path / "sim.json")
        assert cli.main(["simulate", "--trials", "10000", "--seed", "3", "--mode", "relay-min",
                         "--out", out]) == 0
        doc = json.load(open(out))
        assert doc["mode"] == "relay_min" and doc["trials"] == 10000
        lo, hi = doc["outage_ci95"]
        assert lo <= doc["outage"] <= hi

    def test_direct_mode(self, capsys):
        assert cli.main(["simulate", "--trials", "2000", "--mode", "direct"]) == 0
        assert json.loads(capsys.readouterr().out)["mode"] == "direct"

    @pytest.mark.parametrize("args", [["--seed", "-1"], ["--seed", str(2 ** 64)], ["--trials", "0"]])
    def test_bad_overrides(self, args):
        assert cli.main(["simulate"] + args) == 2


class TestValidate:
    def test_default_report(self, tmp_path, capsys):
        out = str(tmp_path / "v.json")
        code = cli.main(["validate", "--trials", "200000", "--out", out])
        checks = json.load(open(out))
        failed = [c["name"] for c in checks if c["status"] == "FAIL"]
        # the general-k average SNR expression is the one known defect
        assert failed == ["general-k average SNR closed form agrees with k=2 form"]
        assert code == 1

    def test_literature_convention(self, tmp_path):
        cfg = write_config(tmp_path, {"geometry": {"wzeq_convention": "literature"}, "sim": {"trials": 100000}})
        out = str(tmp_path / "v.json")
        cli.main(["validate", "--config", cfg, "--out", out])
        checks = {c["name"]: c for c in json.load(open(out))}
        assert checks["single-hop density normalises"]["status"] == "PASS"
        assert checks["harmonic-mean density normalises"]["status"] == "PASS"
        assert checks["w_zeq convention comparison"]["status"] == "INFO"

    def test_loose_tolerance_fails_loudly(self, tmp_path):
        out = str(tmp_path / "v.json")
        assert cli.main(["validate", "--rel-tol", "1", "--trials", "20000", "--out", out]) == 1
        checks = {c["name"]: c["status"] for c in json.load(open(out))}
        assert checks["single-hop density normalises"] == "FAIL"
        assert checks["log-power moment identity (8 random draws)"] == "FAIL"

    def test_bad_tolerance(self):
        assert cli.main(["validate", "--rel-tol", "0"]) == 2


class TestConfig:
    def test_unknown_fields(self, tmp_path):
        assert cli.main(["metrics", "--config", write_config(tmp_path, {"fgo": {}})]) == 2
        assert cli.main(["metrics", "--config", write_config(tmp_path, {"fog": {"kk": 2}})]) == 2

    def test_invalid_values(self, tmp_path):
        assert cli.main(["metrics", "--config", write_config(tmp_path, {"fog": {"k": -1}})]) == 2
        assert cli.main(["metrics", "--config", write_config(tmp_path, {"methods": ["guess"]})]) == 2
        assert cli.main(["metrics", "--config", write_config(tmp_path, {"sim": {"mode": "x"}})]) == 2

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert cli.main(["metrics", "--config", str(path)]) == 2
        assert cli.main(["metrics", "--config", str(tmp_path / "missing.json")]) == 2

    def test_direct_pointing(self):
        run = config_from_dict({"direct_pointing": {"hop1": {"rho": 1.2, "A0": 0.01},
                                                    "hop2": {"rho": 1.2, "A0": 0.01}}})
        cfg = run.relay_config()
        assert cfg.hop1.rho == pytest.approx(1.2) and cfg.hop1.A0 == 0.01
        assert cfg.symmetric
        with pytest.raises(ConfigError):
            config_from_dict({"direct_pointing": {"hop3": {"rho": 1.0, "A0": 0.1}}})
        with pytest.raises(ConfigError):
            config_from_dict({"direct_pointing": {"hop1": {"rho": 1.0, "A0": 1.5}}})

    def test_sidecar_round_trip(self):
        run = RunConfig(sweep=SweepSpec("pt_dbm", 0.0, 30.0, 31))
        assert config_from_dict(json.loads(json.dumps({"config": run.to_dict()}))) == run

    def test_defaults(self):
        run = load_config(None)
        assert run.gamma_th == pytest.approx(10 ** 0.6)
        assert run.system.pt_dbm == 15.0 and run.fog.k == 2.0
        assert SweepSpec.parse("d_r:0.25:0.75:11").grid()[-1] == 0.75
