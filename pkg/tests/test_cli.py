"""CLI behaviour: exit codes, artifacts, determinism, config files."""


import pytest

from dewijs import cli


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out


def test_table1_passes_and_writes_csv(tmp_path, capsys):
    out = tmp_path / "table1.csv"
    code, stdout = run(["table1", "--out", str(out)], capsys)
    assert code == 0
    assert "PASS table1-max-abs-error" in stdout
    assert "PASS weights-sum-to-one" in stdout
    lines = out.read_text().splitlines()
    assert lines[0] == "s,t,weight,weight_3dec,reference,abs_error"
    assert len([l for l in lines if not l.startswith("#")]) == 1 + 44
    assert any(l.startswith("# PASS table1-max-abs-error") for l in lines)


def test_hitting_small_run(tmp_path, capsys):
    out = tmp_path / "hist.csv"
    code, stdout = run(["hitting", "--x0", "0.5,0", "--n", "20000",
                        "--method", "wos", "--seed", "7",
                        "--out", str(out)], capsys)
    assert code == 0
    assert "chi-square" in stdout
    lines = out.read_text().splitlines()
    assert lines[0] == "bin_start,bin_end,count,expected"
    data = [l for l in lines if not l.startswith("#")]
    assert len(data) == 1 + 36
    counts = sum(int(l.split(",")[2]) for l in data[1:])
    assert counts == 20000


def test_byte_identical_reruns(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    argv = ["hitting", "--x0", "0.3,0.2", "--n", "5000", "--seed", "11",
            "--workers", "2"]
    assert cli.main(argv + ["--out", str(out1)]) == 0
    assert cli.main(argv + ["--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


def test_poisson_check(capsys):
    code, stdout = run(["poisson-check", "--pairs", "6", "--seed", "3"], capsys)
    assert code == 0
    assert "PASS poisson-normalization" in stdout
    assert "PASS harmonic-identity" in stdout


def test_poisson_check_segment_artifact(tmp_path, capsys):
    out = tmp_path / "segments.csv"
    code, stdout = run(["poisson-check", "--pairs", "2", "--segments", "16",
                        "--x0", "0.4,0.1", "--out", str(out)], capsys)
    assert code == 0
    assert "PASS segment-weights-sum-to-one" in stdout
    lines = out.read_text().splitlines()
    assert lines[0] == "segment,theta_start,theta_end,weight,poisson_integral"
    assert len([l for l in lines if not l.startswith("#")]) == 1 + 16


def test_lattice_check(tmp_path, capsys):
    out = tmp_path / "lattice.csv"
    code, stdout = run(["lattice-check", "--box", "5", "--all-interior",
                        "--random-domains", "2", "--cells", "12",
                        "--out", str(out)], capsys)
    assert code == 0
    assert "PASS dynkin-weights-vs-hitting" in stdout
    data = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert data[0] == "domain,x,y,deviation"


def test_potential_command(tmp_path, capsys):
    out = tmp_path / "potential.csv"
    code, stdout = run(["potential", "--max-lag", "3", "--out", str(out)],
                       capsys)
    assert code == 0
    assert "PASS laplacian-identity" in stdout
    data = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(data) == 1 + 49


def test_occupation_small_and_failing_tolerance(tmp_path, capsys):
    ok_code, stdout = run(["occupation", "--horizon", "2000", "--n", "400",
                           "--seed", "5", "--tol", "0.5"], capsys)
    assert ok_code == 0
    out = tmp_path / "occ.csv"
    bad_code, stdout = run(["occupation", "--horizon", "2000", "--n", "400",
                            "--seed", "5", "--tol", "1e-12",
                            "--out", str(out)], capsys)
    assert bad_code == 1
    assert "FAIL occupation-vs-kernel" in stdout
    assert any(l.startswith("# FAIL occupation-vs-kernel")
               for l in out.read_text().splitlines())


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# hitting defaults\nn = 4000\nseed = 13\nx0 = 0.2,0.1\n")
    out = tmp_path / "h.csv"
    code, _ = run(["hitting", "--config", str(cfg), "--n", "2000",
                   "--out", str(out)], capsys)
    assert code == 0
    data = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert sum(int(l.split(",")[2]) for l in data[1:]) == 2000  # flag wins


def test_bad_arguments_exit_two(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["hitting", "--x0", "not-a-point"])
    assert err.value.code == 2
    capsys.readouterr()


def test_unknown_command_exits_two(capsys):
    with pytest.raises(SystemExit) as err:
        cli.main(["frobnicate"])
    assert err.value.code == 2
    capsys.readouterr()


def test_empty_rows_gives_header_only_artifact(tmp_path):
    checks = cli.CheckList()
    path = tmp_path / "empty.csv"
    cli._write_artifact(str(path), "a,b", [], checks)
    assert path.read_text() == "a,b\n"


def test_partial_artifact_flushed_with_failed_marker(tmp_path):
    checks = cli.CheckList()
    path = tmp_path / "partial.csv"

    def rows():
        yield (1, 2.0)
        raise RuntimeError("interrupted mid-run")

    with pytest.raises(RuntimeError):
        cli._write_artifact(str(path), "a,b", rows(), checks)
    text = path.read_text().splitlines()
    assert text[0] == "a,b"
    assert text[-1].startswith("# FAILED")
