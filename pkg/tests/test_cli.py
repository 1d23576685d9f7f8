import json

import pytest

from cospa.cli import main

TRACKS = "t,id,x0,x1\n1,a,0,0\n1,b,3,4\n2,a,1,0\n"


def write(path, text):
    path.write_text(text)
    return str(path)


def test_eval_identical_files_gives_zero_totals(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", TRACKS)
    assert main(["eval", "--truth", truth, "--est", est]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("time,metric,total")
    assert len(lines) == 1 + 2 * 3
    for line in lines[1:]:
        fields = line.split(",")
        assert float(fields[2]) == 0.0


def test_eval_accepts_the_reference_flag_set(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", "t,id,x0,x1\n1,a,0,1\n1,b,3,5\n2,a,1,1\n")
    code = main(["eval", "--truth", truth, "--est", est,
                 "--p", "1", "--c", "80", "--cdot", "81", "--xi", "1", "--alpha", "2"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    # every estimate is one unit away from its truth target, so the
    # normalized metrics read 1.0 and gospa reads the pair count
    for line in lines[1:]:
        fields = line.split(",")
        expected = float(fields[6]) if fields[1] == "gospa" else 1.0
        assert float(fields[2]) == pytest.approx(expected, rel=1e-12)


def test_eval_writes_file_and_plots(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", TRACKS)
    out = tmp_path / "results.csv"
    code = main(["eval", "--truth", truth, "--est", est, "--out", str(out), "--plot"])
    assert code == 0
    assert out.exists()
    pngs = sorted(p.name for p in tmp_path.glob("*.png"))
    assert pngs == ["results_components.png", "results_counts.png", "results_totals.png"]
    assert all((tmp_path / name).stat().st_size > 0 for name in pngs)


def test_eval_json_output(tmp_path):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", TRACKS)
    out = tmp_path / "results.json"
    code = main(["eval", "--truth", truth, "--est", est,
                 "--out", str(out), "--format", "json"])
    assert code == 0
    rows = json.loads(out.read_text())
    assert {row["metric"] for row in rows} == {"ospa", "gospa", "cospa"}


def test_eval_plot_requires_a_file_target(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", TRACKS)
    assert main(["eval", "--truth", truth, "--est", est, "--plot"]) == 1
    assert "error:" in capsys.readouterr().err


def test_eval_missing_file_fails_cleanly(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    code = main(["eval", "--truth", truth, "--est", str(tmp_path / "nope.csv")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_eval_bad_track_file_reports_line(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", "t,id,x0,x1\n1,a,0\n")
    assert main(["eval", "--truth", truth, "--est", est]) == 1
    assert "line 2" in capsys.readouterr().err


def test_eval_bad_params_fail(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", TRACKS)
    code = main(["eval", "--truth", truth, "--est", est, "--cdot", "0.5", "--c", "1"])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_eval_metric_subset(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", TRACKS)
    code = main(["eval", "--truth", truth, "--est", est, "--metrics", "ospa,cospa"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    metrics = {line.split(",")[1] for line in lines[1:]}
    assert metrics == {"ospa", "cospa"}


def test_eval_unknown_metric_is_a_usage_error(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", TRACKS)
    with pytest.raises(SystemExit) as excinfo:
        main(["eval", "--truth", truth, "--est", est, "--metrics", "ospa,mota"])
    assert excinfo.value.code == 2
    assert "unknown metrics" in capsys.readouterr().err


def test_eval_missing_step_uses_empty_set(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", "t,id,x0,x1\n1,a,0,0\n1,b,3,4\n")
    code = main(["eval", "--truth", truth, "--est", est,
                 "--c", "1", "--cdot", "1.2", "--metrics", "cospa"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    last = lines[-1].split(",")
    assert last[0] == "2"
    # one truth target versus an empty report: the closed-form penalty
    assert float(last[2]) == pytest.approx(1.2, rel=1e-12)
    assert last[6:8] == ["1", "0"]


def test_eval_infinite_order(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", "t,id,x0,x1\n1,a,0,1\n1,b,3,5\n2,a,1,1\n")
    code = main(["eval", "--truth", truth, "--est", est,
                 "--p", "inf", "--metrics", "ospa,cospa"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    for line in lines[1:]:
        assert float(line.split(",")[2]) == pytest.approx(1.0, rel=1e-12)


def test_eval_gospa_rejects_infinite_order(tmp_path, capsys):
    truth = write(tmp_path / "truth.csv", TRACKS)
    est = write(tmp_path / "est.csv", TRACKS)
    code = main(["eval", "--truth", truth, "--est", est, "--p", "inf"])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_tables_default_run_passes(capsys):
    assert main(["tables"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "checks pass" in out.splitlines()[-1]


def test_tables_figure_subset(capsys):
    assert main(["tables", "--figure", "5"]) == 0
    out = capsys.readouterr().out
    body = [line for line in out.splitlines() if line.startswith("fig")]
    assert body
    assert all(line.startswith("fig 5") for line in body)


def test_tables_reject_bad_cdot(capsys):
    assert main(["tables", "--cdot", "0.5"]) == 1
    assert "error:" in capsys.readouterr().err


def test_tables_reject_higher_order(capsys):
    assert main(["tables", "--p", "2"]) == 1
    assert "error:" in capsys.readouterr().err


def test_simulate_is_deterministic(tmp_path):
    first = tmp_path / "a"
    second = tmp_path / "b"
    for base in (first, second):
        base.mkdir()
        code = main(["simulate", "--targets", "5", "--steps", "10", "--seed", "3",
                     "--truth", str(base / "truth.csv"), "--est", str(base / "est.csv")])
        assert code == 0
    assert (first / "truth.csv").read_bytes() == (second / "truth.csv").read_bytes()
    assert (first / "est.csv").read_bytes() == (second / "est.csv").read_bytes()


def test_simulate_eval_noiseless_run_is_zero(tmp_path, capsys):
    code = main(["simulate", "--targets", "4", "--steps", "5", "--survival", "1",
                 "--detection", "1", "--clutter", "0", "--noise", "0", "--seed", "2",
                 "--truth", str(tmp_path / "truth.csv"), "--est", str(tmp_path / "est.csv"),
                 "--eval"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1 + 5 * 3
    for line in lines[1:]:
        assert float(line.split(",")[2]) == 0.0


def test_simulate_eval_writes_results_and_plots(tmp_path):
    out = tmp_path / "run.csv"
    code = main(["simulate", "--targets", "3", "--steps", "4", "--seed", "9",
                 "--truth", str(tmp_path / "truth.csv"), "--est", str(tmp_path / "est.csv"),
                 "--eval", "--out", str(out), "--plot"])
    assert code == 0
    assert out.exists()
    assert len(list(tmp_path.glob("*.png"))) == 3


def test_simulate_plot_without_eval_fails(tmp_path, capsys):
    code = main(["simulate", "--truth", str(tmp_path / "t.csv"),
                 "--est", str(tmp_path / "e.csv"), "--plot"])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_simulate_rejects_bad_probability(tmp_path, capsys):
    code = main(["simulate", "--detection", "1.5",
                 "--truth", str(tmp_path / "t.csv"), "--est", str(tmp_path / "e.csv")])
    assert code == 1
    assert "detection_prob" in capsys.readouterr().err


def test_unknown_subcommand_exits_with_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 2


def test_bad_figure_choice_exits_with_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["tables", "--figure", "99"])
    assert excinfo.value.code == 2
