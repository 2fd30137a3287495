import json

import pytest

from yamabe import cli
from yamabe.cli import run_cli
from yamabe.errors import InvariantFailure
from yamabe.oracle import CHECK_COUNT
from yamabe.oracle import CheckResult

FIVE_CELL_K = 10.3612282206


def run(capsys, *args):
    status = run_cli(list(args))
    out, err = capsys.readouterr()
    return status, out, err


@pytest.mark.parametrize("name", ["5cell", "5cell.txt", "cyclic9", "s2xs1"])
def test_validate_builtin(capsys, name):
    status, out, _ = run(capsys, "validate", "--facets", name)

    assert status == 0
    assert "closed pseudomanifold" in out
    assert "not a" not in out


def test_validate_file(capsys, tmp_path):
    path = tmp_path / "tet.txt"
    path.write_text("1 2 3 4\n")

    status, out, err = run(capsys, "validate", "--facets", str(path))

    assert status == 0
    assert "not a closed pseudomanifold: 4 problem(s)" in out
    assert "1 2 3" in out
    assert "warning" in err


def test_unknown_facets(capsys):
    status, _, err = run(capsys, "validate", "--facets", "no-such-complex")

    assert status == 1
    assert "error" in err


def test_usage_errors(capsys):
    assert run(capsys, "validate")[0] == 1
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "validate", "--facets", "5cell", "extra")[0] == 1
    assert run(capsys, "flow", "--facets", "5cell", "--dt", "fast")[0] == 1


def test_help(capsys):
    status, out, _ = run(capsys)
    assert status == 0
    for name in ("validate", "curvature", "flow", "check"):
        assert name in out

    status, out, _ = run(capsys, "help", "flow")
    assert status == 0
    assert "--t-max" in out
    assert "--no-normalize" in out

    status, out, _ = run(capsys, "curvature", "--help")
    assert status == 0
    assert "--facets" in out


def test_curvature_json(capsys):
    status, out, _ = run(capsys, "curvature", "--facets", "5cell", "--format", "json")
    data = json.loads(out)

    assert status == 0
    assert data["vertex"] == [1, 2, 3, 4, 5]
    assert data["K"] == pytest.approx([FIVE_CELL_K] * 5, abs=1e-9)
    assert data["k"] == pytest.approx(FIVE_CELL_K, abs=1e-9)
    assert data["T"] == pytest.approx(5 * FIVE_CELL_K, abs=1e-8)


def test_curvature_out_file(capsys, tmp_path):
    path = tmp_path / "k.csv"
    status, out, _ = run(capsys, "curvature", "--facets", "cyclic9", "--out", str(path))

    assert status == 0
    assert out == ""

    lines = path.read_text().splitlines()
    assert lines[0] == "vertex,K"
    assert len(lines) == 12
    assert lines[-2].startswith("k,")
    assert lines[-1].startswith("T,")


def test_curvature_table(capsys):
    status, out, _ = run(capsys, "curvature", "--facets", "5cell")

    assert status == 0
    assert "vertex" in out
    assert "k = 10.3612282" in out


def test_curvature_bad_format(capsys):
    status, _, err = run(capsys, "curvature", "--facets", "5cell", "--format", "xml")

    assert status == 1
    assert "--format" in err


def test_random_radii_are_seeded(capsys):
    args = ("curvature", "--facets", "cyclic9", "--radii", "random:0.5,2", "--format", "json")

    first = run(capsys, *args, "--seed", "5")[1]
    again = run(capsys, *args, "--seed", "5")[1]
    other = run(capsys, *args, "--seed", "6")[1]

    assert first == again
    assert first != other

    assert json.loads(first)["vertex"] == list(range(1, 10))


def test_bad_random_radii(capsys):
    assert run(capsys, "curvature", "--facets", "5cell", "--radii", "random:1")[0] == 1


def test_radii_file(capsys, tmp_path):
    path = tmp_path / "r.txt"
    path.write_text("1 1\n2 1\n3 1\n4 1\n5 2\n")

    status, out, _ = run(capsys, "curvature", "--facets", "5cell", "--radii", str(path), "--format", "json")
    data = json.loads(out)

    assert status == 0
    assert data["K"][4] != pytest.approx(data["K"][0])
    assert data["K"][0] == pytest.approx(data["K"][3], rel=1e-12)


def test_degenerate_radii(capsys, tmp_path):
    path = tmp_path / "r.txt"
    path.write_text("1 1\n2 1\n3 1\n4 1\n5 0.01\n")

    assert run(capsys, "curvature", "--facets", "5cell", "--radii", str(path))[0] == 1
    assert run(capsys, "flow", "--facets", "5cell", "--radii", str(path))[0] == 1


def test_flow_converges_on_the_five_cell(capsys):
    status, out, _ = run(capsys, "flow", "--facets", "5cell.txt", "--radii", "ones", "--normalize", "--t-max", "10")
    summary = json.loads(out)

    assert status == 0
    assert summary["termination"] == "Converged"
    assert summary["k_final"] == pytest.approx(FIVE_CELL_K, abs=1e-9)


def test_flow_outputs_are_reproducible(capsys, tmp_path):
    outputs = []
    for run_id in range(2):
        trajectory, summary = tmp_path / ("t%d.csv" % run_id), tmp_path / ("s%d.json" % run_id)
        status, out, _ = run(
            capsys,
            "flow",
            "--facets",
            "5cell",
            "--radii",
            "random:0.8,1.25",
            "--seed",
            "11",
            "--t-max",
            "0.5",
            "--sample-every",
            "5",
            "--out",
            str(trajectory),
            "--summary",
            str(summary),
        )
        assert status == 0
        assert json.loads(out) == json.loads(summary.read_text())
        outputs.append((trajectory.read_bytes(), summary.read_bytes()))

    assert outputs[0] == outputs[1]
    assert outputs[0][0].startswith(b"t,r_1,r_2,r_3,r_4,r_5,K_1")


def test_flow_config_file_and_overrides(capsys, tmp_path):
    config = tmp_path / "flow.json"
    config.write_text(json.dumps({"t_max": 100.0, "dt": 0.01, "normalize": False}))

    status, out, _ = run(
        capsys,
        "flow",
        "--facets",
        "cyclic9",
        "--radii",
        "random:0.5,2",
        "--seed",
        "3",
        "--config",
        str(config),
        "--t-max",
        "0.05",
    )
    summary = json.loads(out)

    assert status == 0
    assert summary["termination"] == "HorizonReached"
    assert summary["t_final"] == pytest.approx(0.05)


def test_flow_bad_config(capsys, tmp_path):
    config = tmp_path / "flow.json"
    config.write_text(json.dumps({"step": 0.01}))

    status, _, err = run(capsys, "flow", "--facets", "5cell", "--config", str(config))

    assert status == 1
    assert "step" in err

    assert run(capsys, "flow", "--facets", "5cell", "--config", str(tmp_path / "missing.json"))[0] == 1
    assert run(capsys, "flow", "--facets", "5cell", "--delta-collapse", "0.5")[0] == 1


def test_flow_invariant_failure(capsys, monkeypatch):
    def broken(*args, **kwargs):
        raise InvariantFailure("average curvature increased")

    monkeypatch.setattr(cli, "run_flow", broken)
    status, _, err = run(capsys, "flow", "--facets", "5cell")

    assert status == 2
    assert "internal error" in err


def test_check(capsys, tmp_path):
    path = tmp_path / "checks.json"
    status, out, _ = run(capsys, "check", "--samples", "50", "--out", str(path))
    report = json.loads(path.read_text())

    assert status == 0
    assert len(report) == CHECK_COUNT
    assert all(entry["pass"] for entry in report)
    assert "schlafli_residual" in out


def test_check_failure(capsys, monkeypatch):
    def failing(samples, seed, on_check=None):
        return [CheckResult("schlafli_residual", samples, 1.0, 1e-10)]

    monkeypatch.setattr(cli, "run_checks", failing)
    status, out, err = run(capsys, "check", "--samples", "5")

    assert status == 2
    assert "FAILED" in out
    assert "1 check(s) failed" in err


def test_check_rejects_zero_samples(capsys):
    assert run(capsys, "check", "--samples", "0")[0] == 1


def test_quiet_and_verbose(capsys, tmp_path):
    path = tmp_path / "tet.txt"
    path.write_text("1 2 3 4\n")

    _, _, err = run(capsys, "-q", "validate", "--facets", str(path))
    assert "warning" not in err

    _, _, err = run(capsys, "--verbose", "flow", "--facets", "5cell", "--t-max", "0.01")
    assert "flow started" in err
