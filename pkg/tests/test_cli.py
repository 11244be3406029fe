import csv
import io
import json
import re

import pytest

from triq.cli import main
from triq.emit import format_csv, render_heatmap, render_lines
from triq.errors import UsageError
from triq.sweep import Axis, SweepSpec, evaluate_point, run_sweep


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_correlations_json(capsys):
    code, out, err = run(capsys, "correlations", "--j", "6", "--eta", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["t3_central_b"] == pytest.approx(0.5, abs=0.02)
    assert doc["path"] == "analytic"
    assert doc["config"]["j"] == 6.0
    assert "# j=6.0" in err
    assert err.strip().splitlines()[-1].startswith("correlations:")


def test_sweep_csv_shape(capsys, tmp_path):
    out_file = tmp_path / "grid.csv"
    code, _, _ = run(
        capsys, "sweep", "--axis1", "j:-8:8:81", "--axis2", "eta:0:2:41", "--quantity", "t3", "--format", "csv", "--out", str(out_file)
    )
    assert code == 0
    lines = out_file.read_text().split("\n")
    assert lines[0] == "j,eta,t3,path"
    assert len(lines) == 3321 + 2  # header, rows, trailing newline
    assert lines[-1] == ""


def test_one_point_csv_is_two_lines(capsys, tmp_path):
    out_file = tmp_path / "one.csv"
    run(capsys, "sweep", "--axis1", "j:6:6:1", "--out", str(out_file))
    assert out_file.read_bytes().count(b"\n") == 2
    assert b"\r" not in out_file.read_bytes()


def test_csv_round_trip(capsys, tmp_path):
    out_file = tmp_path / "rt.csv"
    run(capsys, "sweep", "--axis1", "j:-3:5:9", "--axis2", "omega=0.8,1.2", "--eta", "0.6", "--quantity", "t3,n_ab", "--out", str(out_file))
    rows = list(csv.DictReader(out_file.open()))
    row = rows[5]
    values, used, _ = evaluate_point({"j": float(row["j"]), "omega": float(row["omega"]), "eta": 0.6}, ("t3", "n_ab"))
    assert used == row["path"]
    for q in ("t3", "n_ab"):
        assert float(row[q]) == pytest.approx(values[q], rel=1e-15, abs=0)


def test_thermal_curves_row_count(capsys, tmp_path):
    # two configurations x two signs of J x 50 temperatures
    total = 0
    for eta, omega in ((1.4, 1.4), (0.72, 1.18)):
        out_file = tmp_path / f"f7_{eta}.csv"
        code, _, _ = run(capsys, "thermal", "--eta", str(eta), "--omega", str(omega), "--axis2", "j=-6,6", "--format", "csv", "--out", str(out_file))
        assert code == 0
        total += len(out_file.read_text().splitlines()) - 1
    assert total == 200


def test_validate_default_grid(capsys):
    code, out, err = run(capsys, "validate", "--grid", "default")
    assert code == 0
    assert json.loads(out)["max_deviation"] < 1e-7


def test_svg_only_for_sweep_and_thermal(capsys, tmp_path):
    code, _, err = run(capsys, "ground", "--format", "svg", "--out", str(tmp_path / "x.svg"))
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["error"] == "usage"


def test_heatmap_needs_two_axes(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", "--axis1", "j:6:6:1", "--axis2", "eta:1:1:1", "--format", "svg", "--out", str(tmp_path / "h.svg"))
    assert code == 2


def test_usage_errors(capsys):
    assert run(capsys, "sweep")[0] == 2
    assert run(capsys, "sweep", "--axis1", "q:0:1:3")[0] == 2
    assert run(capsys, "spectrum", "--j", "abc")[0] == 2
    assert run(capsys, "ground", "--h", "-1")[0] == 2
    assert run(capsys, "nope")[0] == 2


def test_numeric_failure_exit_code(capsys, monkeypatch):
    from triq import cli
    from triq.errors import ConvergenceError

    def broken(cfg):
        raise ConvergenceError("did not converge", residual=1.0)

    monkeypatch.setitem(cli.HANDLERS, "spectrum", broken)
    code, _, err = run(capsys, "spectrum")
    assert code == 3
    assert json.loads(err.strip().splitlines()[-1])["error"] == "numeric"


def test_failed_sweep_point_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--axis1", "T=-1,0.1", "--quantity", "thermal_t3", "--out", str(tmp_path / "f.csv"))
    assert code == 3
    assert "T" in json.loads(err.strip().splitlines()[-1])["message"]


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# model\nj = -2\neta=0.5\npath=numeric-only\n")
    code, out, _ = run(capsys, "ground", "--config", str(cfg), "--eta", "1.5")
    doc = json.loads(out)
    assert code == 0
    assert doc["config"]["j"] == -2.0 and doc["config"]["eta"] == 1.5
    assert doc["path"] == "numeric"


def test_bad_config_file(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour=blue\n")
    assert run(capsys, "ground", "--config", str(cfg))[0] == 2


@pytest.mark.parametrize(
    "argv,key",
    [
        (["spectrum", "--j", "-4"], "energies"),
        (["ground", "--j", "2", "--omega", "0.7"], "amplitudes"),
        (["susceptibility", "--j", "-1"], "chi_t3"),
        (["thermal", "--j", "6", "--temperature", "0.05"], "points"),
        (["classical", "--couplings=-1,-1,-1"], "energy"),
    ],
)
def test_every_command_reports_path(capsys, argv, key):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    doc = json.loads(out)
    assert key in doc
    text = json.dumps(doc)
    assert '"path": "analytic"' in text or '"path": "numeric"' in text


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--j", "3", "--eta", "0.4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["index", "energy", "path"]
    assert len(rows) == 9


def test_classical_angles(capsys):
    code, out, _ = run(capsys, "classical", "--couplings=1,1,1", "--thetas", "0,0,0")
    assert json.loads(out)["energy"] == -3.0


def test_svg_deterministic(capsys, tmp_path):
    # the output path is part of the embedded config, so reuse it
    p = tmp_path / "h.svg"
    outputs = []
    for threads in ("1", "4"):
        run(capsys, "sweep", "--axis1", "j:-8:8:9", "--axis2", "eta:0:2:5", "--format", "svg", "--out", str(p), "--threads", threads)
        outputs.append(p.read_bytes())
    text = outputs[0].decode()
    # only the echoed thread count may differ
    assert outputs[0].replace(b"threads=1", b"threads=4") == outputs[1]
    assert text.startswith("<svg") and "axis1=j:-8:8:9" in text
    assert text.count("<rect") > 45


def test_six_thermal_curves_svg(capsys, tmp_path):
    p = tmp_path / "f5.svg"
    code, _, _ = run(capsys, "thermal", "--axis2", "j=-6,-4,-2,2,4,6", "--format", "svg", "--out", str(p))
    assert code == 0
    assert p.read_text().count("<polyline") == 6


def _small_result():
    return run_sweep(SweepSpec(Axis.parse("j:-2:2:3"), Axis.parse("eta:0.5:1.5:3")))


def test_heatmap_renderer():
    svg = render_heatmap(_small_result(), config_echo={"note": "a--b"})
    assert "<!--" in svg and "a- -b" in svg
    assert len(re.findall(r'<rect x="[\d.]+" y="[\d.]+" width="160"', svg)) == 9


def test_lines_renderer_modes():
    res = _small_result()
    assert render_lines(res).count("<polyline") == 3
    one = run_sweep(SweepSpec(Axis.parse("j:-2:2:5"), quantities=("t3", "n_ab")))
    assert render_lines(one).count("<polyline") == 2
    with pytest.raises(UsageError):
        render_lines(one, quantity="delta")
    with pytest.raises(UsageError):
        render_heatmap(one)


def test_csv_float_format():
    res = run_sweep(SweepSpec(Axis.parse("eta=0.1")))
    line = format_csv(res).splitlines()[1]
    assert line.startswith("0.10000000000000001,")
    assert float(line.split(",")[1]) == res.rows[0][1]
