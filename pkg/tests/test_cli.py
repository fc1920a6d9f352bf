"""Command line behavior: schemas, config merging, and exit codes."""

import numpy as np

from swipt_ia.cli import main

FAST = ["--users", "3", "--tx-antennas", "2", "--rx-antennas", "2", "--slots", "25", "--cal-slots", "25"]


def test_calibrate_schema(capsys):
    assert main(["calibrate"] + FAST) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == "snr_db,slots,seed,P_t"
    assert len(lines) == 2
    assert float(lines[1].split(",")[-1]) > 0


def test_reruns_are_byte_identical(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["selection"] + FAST
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().startswith(b"algorithm,L,")


def test_pso_alpha_forms(capsys):
    assert main(["pso"] + FAST + ["--alpha", "0.8"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "alpha,mean_sum_rate,mean_sum_power,mean_rho"
    assert len(out.strip().splitlines()) == 2

    assert main(["pso"] + FAST + ["--alpha", "0.5,0.8,0.95"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "k,alpha,mean_rate,mean_power,mean_rho"
    assert len(out.strip().splitlines()) == 4


def test_config_file_merging(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("users=3\ntx-antennas=2\nrx-antennas=2\nslots=20\ncal-slots=20\nseed=4\n")
    assert main(["selection", "--config", str(cfg)]) == 0
    base = capsys.readouterr().out
    assert len(base.strip().splitlines()) == 1 + 2 * 4  # K=3: L in 0..3, both rules

    # explicit flags override the file
    assert main(["selection", "--config", str(cfg), "--users", "4", "--tx-antennas", "3"]) == 0
    wider = capsys.readouterr().out
    assert len(wider.strip().splitlines()) == 1 + 2 * 5


def test_selection_single_point(capsys):
    assert main(["selection"] + FAST + ["--eh-users", "1"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 3  # header + one L for each algorithm
    assert out[1].startswith("RRS,1,") and out[2].startswith("PRRS,1,")

    assert main(["selection"] + FAST + ["--id-users", "1"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[1].startswith("RRS,2,")


def test_bounds_containment(capsys):
    assert main(["bounds"] + FAST + ["--user", "2"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    assert len(rows) == 25
    for row in rows:
        slot, k, q, q_up = row.split(",")
        assert k == "2"
        assert 0.0 <= float(q) <= float(q_up)


def test_error_exits(capsys, tmp_path):
    # infeasible antenna setup
    assert main(["selection", "--users", "4", "--tx-antennas", "1", "--rx-antennas", "1", "--slots", "5"]) == 1
    assert "error:" in capsys.readouterr().err

    # malformed alpha list
    assert main(["pso"] + FAST + ["--alpha", "0.2,0.5"]) == 1
    assert "error:" in capsys.readouterr().err

    # unknown config key
    bad = tmp_path / "bad.cfg"
    bad.write_text("userz=5\n")
    assert main(["calibrate", "--config", str(bad)]) == 1
    assert "unknown config key" in capsys.readouterr().err

    # unreadable config path
    assert main(["calibrate", "--config", str(tmp_path / "missing.cfg")]) == 1
    assert "error:" in capsys.readouterr().err


def test_region_small(capsys):
    assert main(["region"] + FAST + ["--alpha-grid", "3", "--restarts", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "method,alpha,mean_sum_power,mean_sum_rate"
    methods = [ln.split(",")[0] for ln in lines[1:]]
    assert methods.count("RRS") == 4 and methods.count("PSO-PA") == 3


def test_pso_pa_defaults_need_matching_size(capsys):
    # the built-in weight profile only fits the five-user default
    assert main(["pso-pa"] + FAST) == 1
    assert "error:" in capsys.readouterr().err
    assert main(["pso-pa"] + FAST + ["--alpha", "0.3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("k,alpha,")
    assert len(lines) == 4
