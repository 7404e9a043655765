import csv
import io
import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from murmur.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_only_subprocess_is_fast():
    t0 = time.perf_counter()
    res = subprocess.run([sys.executable, "-m", "murmur.cli", "enumerate", "--count-only", "-X", "2^18"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "15936"
    assert time.perf_counter() - t0 < 1.0


def test_enumerate_csv(capsys):
    code, out, _ = run(capsys, "enumerate", "-X", "48")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 14
    assert {"A", "B", "H"} <= rows[0].keys()


def test_ap_and_an(capsys):
    assert run(capsys, "ap", "--A", "0", "--B", "1", "--p", "5")[1].strip() == "0"
    # auto reports the bad-prime value; the point counters refuse bad primes
    assert run(capsys, "ap", "--A", "0", "--B", "1", "--p", "2")[1].strip() == "0"
    code, _, err = run(capsys, "ap", "--A", "0", "--B", "1", "--p", "2", "--method", "naive")
    assert code == 1 and "not good reduction" in err
    code, out, _ = run(capsys, "an", "--A", "0", "--B", "1", "--nmax", "13")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "a_n"] and rows[7] == ["7", "-4"] and rows[13] == ["13", "2"]


def test_reduce_json(capsys):
    code, out, _ = run(capsys, "reduce", "--A", "-1", "--B", "0")
    d = json.loads(out)
    assert code == 0 and d["N"] == 32 and d["eps"] == 1
    assert d["locals"][0]["p"] == 2 and d["locals"][0]["kind"] == "additive"


def test_local_factors(capsys):
    code, out, _ = run(capsys, "local-factors", "--p", "2", "--nu", "10")
    assert code == 0 and "8/341" in out
    code, out, _ = run(capsys, "local-factors", "--p", "5", "--nu", "4", "--flavor", "hat", "--check-bruteforce")
    assert code == 0


def test_usage_errors(capsys):
    assert run(capsys, "enumerate")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "ap", "--A", "0", "--B", "1", "--p", "x")[0] == 2


def test_runtime_errors(capsys, tmp_path):
    assert run(capsys, "reduce", "--A", "-3", "--B", "2")[0] == 1
    assert run(capsys, "lhs", "--records", str(tmp_path / "missing.npz"))[0] == 1


def test_voronoi_exit_codes(capsys):
    code, out, _ = run(capsys, "voronoi-check", "--A", "-1", "--B", "0", "--q", "1", "--a", "1")
    assert code == 0
    code, out, _ = run(capsys, "voronoi-check", "--A", "-1", "--B", "0", "--q", "1", "--a", "1",
                       "--n-rhs", "50", "--tol", "1e-12")
    assert code == 3


def test_config_loading(capsys, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[enumerate]\nheight-bound = 65536\ncount-only = true\n")
    code, out, _ = run(capsys, "--config", str(cfg), "enumerate")
    assert code == 0 and out.strip() == "5042"
    cfg.write_text("[enumerate]\nbogus = 1\n")
    assert run(capsys, "--config", str(cfg), "enumerate")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "none.ini"), "enumerate")[0] == 2


def test_sums_shards_merge_lhs(capsys, tmp_path):
    common = ["-X", "400", "--r", "8", "--plist", "1,2,inf"]
    for i in range(2):
        code, _, _ = run(capsys, "sums", *common, "--shard", f"{i}/2", "--out", str(tmp_path / f"s{i}.npz"))
        assert code == 0
    assert run(capsys, "sums", *common, "--out", str(tmp_path / "all.npz"))[0] == 0
    assert run(capsys, "merge", str(tmp_path / "s0.npz"), str(tmp_path / "s1.npz"),
               "--out", str(tmp_path / "m.npz"))[0] == 0
    outs = []
    for name in ("m.npz", "all.npz"):
        code, out, _ = run(capsys, "lhs", "--records", str(tmp_path / name), "--P", "inf")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    assert len(outs[0].strip().splitlines()) == 9


def test_run_smoke(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text(f"[run]\nheight-bound = 300\nr = 10\nplist = 1, inf\nB = 256\nr-rhs = 20\n"
                   f"out-dir = {tmp_path / 'out'}\n")
    code, _, err = run(capsys, "--config", str(cfg), "run")
    assert code == 0, err
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert (tmp_path / "out" / "records.npz").exists()
    text = json.dumps(summary)
    assert "mean_abs_diff" in text
    # rerun resumes from the existing records
    assert run(capsys, "--config", str(cfg), "run")[0] == 0


@pytest.mark.parametrize("path", sorted((Path(__file__).parent.parent / "configs").glob("*.ini")), ids=lambda p: p.name)
def test_shipped_configs_parse(path):
    import configparser

    from murmur.cli import _apply_config, build_parser

    cfg = configparser.ConfigParser()
    cfg.read(path)
    assert cfg.sections()
    for section in cfg.sections():
        parser = build_parser()
        _apply_config(parser, ["--config", str(path)])
        args = parser.parse_args(["--config", str(path), section])
        assert args.command == section
