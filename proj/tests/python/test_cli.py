import json
import math
import os
import random
import subprocess

import pytest

CLI = os.environ.get("QABBA_CLI")

pytestmark = pytest.mark.skipif(
    not CLI, reason="QABBA_CLI not set; run through ctest"
)


def run(*args, expect=0):
    proc = subprocess.run(
        [CLI, *map(str, args)], capture_output=True, text=True
    )
    assert proc.returncode == expect, proc.stderr
    return proc


def write_wave(path, n=600):
    with open(path, "w") as f:
        for i in range(n):
            f.write(f"{math.sin(i / 30.0):.17g}\n")


def test_compress_reconstruct_evaluate(tmp_path):
    src = tmp_path / "wave.csv"
    write_wave(src)
    artifact = tmp_path / "wave.qabba"

    proc = run("compress", src, artifact, "--tol", "0.05")
    summary = json.loads(proc.stdout)
    assert summary["n"] == 600
    assert summary["quantized"] is True
    assert summary["actual_bytes"] == artifact.stat().st_size
    assert artifact.read_bytes()[:5] == b"QABA1"

    rebuilt = tmp_path / "rebuilt.csv"
    proc = run("reconstruct", artifact, rebuilt, "--original", src)
    summary = json.loads(proc.stdout)
    assert summary["mse"] < 0.5
    assert rebuilt.exists()
    rows = rebuilt.read_text().strip().splitlines()
    assert abs(len(rows) - 600) <= 5

    proc = run("evaluate", src, artifact)
    report = json.loads(proc.stdout)
    assert report["mse"] < 0.5
    assert report["theoretical_ratio"] < 1.0


def test_evaluate_tolerates_length_drift(tmp_path):
    # Quantized length rounding can shift the rebuilt sample count by a few;
    # evaluate and reconstruct --original must truncate by default, not fail.
    src = tmp_path / "mix.csv"
    rng = random.Random(3)
    with open(src, "w") as f:
        for i in range(800):
            v = math.sin(i * 0.02) * 3 + math.sin(i * 0.11) + rng.gauss(0, 0.05)
            f.write(f"{v:.6f}\n")
    artifact = tmp_path / "mix.qabba"
    run("compress", src, artifact, "--tol", "0.05", "--method", "ga")

    rebuilt = tmp_path / "rebuilt.csv"
    proc = run("reconstruct", artifact, rebuilt, "--original", src)
    assert "mse" in json.loads(proc.stdout)

    proc = run("evaluate", src, artifact)
    report = json.loads(proc.stdout)
    assert math.isfinite(report["mse"])
    rebuilt_rows = len(rebuilt.read_text().strip().splitlines())
    assert report["truncated"] == (rebuilt_rows != 800)

    run("evaluate", src, artifact, "--strict-lengths", "1",
        expect=0 if rebuilt_rows == 800 else 1)


def test_compress_is_deterministic(tmp_path):
    src = tmp_path / "wave.csv"
    write_wave(src)
    a = tmp_path / "a.qabba"
    b = tmp_path / "b.qabba"
    run("compress", src, a, "--method", "vq", "--k", "5", "--seed", "7")
    run("compress", src, b, "--method", "vq", "--k", "5", "--seed", "7")
    assert a.read_bytes() == b.read_bytes()


def test_tsv_corpus_fans_out(tmp_path):
    corpus = tmp_path / "corpus.tsv"
    lines = []
    for row in range(3):
        cells = [str(row)] + [
            f"{math.sin(i / 20.0 + row):.17g}" for i in range(300)
        ]
        lines.append("\t".join(cells))
    corpus.write_text("\n".join(lines) + "\n")

    out = tmp_path / "corpus.qabba"
    proc = run("compress", corpus, out, "--tol", "0.08")
    summaries = json.loads(proc.stdout)
    assert len(summaries) == 3
    for i in range(3):
        assert (tmp_path / f"corpus_{i}.qabba").exists()


def test_sweep_synthetic(tmp_path):
    out = tmp_path / "sweep.csv"
    run(
        "sweep",
        "--bits", "6,12",
        "--synth-n", "400",
        "--synth-count", "3",
        "--out", out,
    )
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "bits,mean_mse"
    assert len(lines) == 3
    assert lines[1].startswith("6,")
    assert lines[2].startswith("12,")


def test_profile_from_matrix(tmp_path):
    matrix = tmp_path / "scores.csv"
    matrix.write_text(
        "algorithm,p0,p1,p2\nfirst,1,2,4\nsecond,2,2,1\n"
    )
    proc = run("profile", "--matrix", matrix, "--thetas", "1,1.5,3,5")
    lines = proc.stdout.strip().splitlines()
    assert lines[0] == "algorithm,theta,rho"
    assert any(line.startswith("first,") for line in lines[1:])
    assert any(line.startswith("second,") for line in lines[1:])


def test_usage_errors_exit_two(tmp_path):
    run("compress", expect=2)
    run("bogus-subcommand", expect=2)


def test_domain_errors_exit_one(tmp_path):
    missing = tmp_path / "missing.csv"
    out = tmp_path / "out.qabba"
    proc = run("compress", missing, out, expect=1)
    assert proc.stderr.strip() != ""

    garbage = tmp_path / "garbage.qabba"
    garbage.write_bytes(b"definitely not a container")
    proc = run("reconstruct", garbage, tmp_path / "x.csv", expect=1)
    assert proc.stderr.strip() != ""
