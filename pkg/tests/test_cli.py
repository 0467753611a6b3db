"""End-to-end command-line checks, run in process against tmp_path artifacts."""

import json

import pytest

from incmax.cli import main
from incmax.separable import SeparableInstance
from incmax.yao import YaoCertificate


def test_greedy_trace_artifact(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code = main(["greedy", "--instance", "capped:100", "--c1", "1", "--rho", "2.6",
                 "--out", str(out)])
    assert code == 0
    assert "status=value_covered" in capsys.readouterr().out
    lines = out.read_text().splitlines()
    assert lines[0] == "i,c,density,value,reach,spent"
    assert len(lines) == 3  # two blocks: 1 and 160


def test_greedy_density_floor_fails(capsys):
    code = main(["greedy", "--instance", "identity", "--c1", "1", "--rho", "2.6"])
    assert code == 2
    assert "reason=density_floor" in capsys.readouterr().out


def test_check_verdicts(tmp_path, capsys):
    code = main(["check", "--instance", "capped:2", "--rho", "2", "--sizes", "1,2,4"])
    assert code == 0
    assert "ok=True" in capsys.readouterr().out
    out = tmp_path / "verdict.json"
    code = main(["check", "--instance", "capped:2", "--rho", "1.05",
                 "--sizes", "1,1.2", "--out", str(out)])
    assert code == 2
    payload = json.loads(out.read_text())
    assert payload["ok"] is False
    assert payload["first_violation"] == [2, "density_step"]


def test_exclude_artifacts(tmp_path, capsys):
    out = tmp_path / "chain.json"
    png = tmp_path / "chain.png"
    code = main(["exclude", "--starts", "1", "--rho", "2.2",
                 "--out", str(out), "--plot", str(png)])
    assert code == 0
    assert "defeated=1/1" in capsys.readouterr().out
    payload = json.loads(out.read_text())
    assert payload["exclusions"][0]["k"] == 2
    assert payload["instance"]["breakpoints"]
    assert png.stat().st_size > 1000


def test_detlb_certify_refusal_and_bypass(tmp_path, capsys):
    code = main(["detlb", "--rho", "2.24"])
    assert code == 1
    assert "error[IncmaxError]" in capsys.readouterr().err
    out = tmp_path / "built.json"
    code = main(["detlb", "--rho", "2.24", "--no-certify", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["infeasible"] is None
    assert payload["ell"] == 41


def test_detlb_small_rho_certifies(tmp_path, capsys):
    out = tmp_path / "cert.json"
    inst_out = tmp_path / "stairs.json"
    code = main(["detlb", "--rho", "1.9", "--out", str(out),
                 "--instance-out", str(inst_out)])
    assert code == 0
    assert "infeasible" in capsys.readouterr().out
    payload = json.loads(out.read_text())
    assert payload["infeasible"] is True
    assert payload["candidates_checked"] == 15
    assert json.loads(inst_out.read_text())["breakpoints"]


def test_roots_json_and_trace(tmp_path, capsys):
    out = tmp_path / "roots.json"
    trace = tmp_path / "trace.csv"
    code = main(["roots", "--rho", "2.24", "--eps", "1e-4",
                 "--out", str(out), "--trace-out", str(trace)])
    assert code == 0
    assert "first_negative=46" in capsys.readouterr().out
    payload = json.loads(out.read_text())
    assert payload["analysis_b"]["regime"] == "one_real_complex_pair"
    assert payload["analysis_a"]["lambdas"] is None
    lines = trace.read_text().splitlines()
    assert lines[0] == "n,t_n,one_over_t_n"
    assert len(lines) == 48  # header + t_0 .. t_46, ending on the sign flip


def test_roots_trace_precision_env(tmp_path, monkeypatch, capsys):
    pytest.importorskip("mpmath")
    trace = tmp_path / "trace.csv"
    monkeypatch.setenv("INCMAX_PRECISION", "120")
    code = main(["roots", "--rho", "2.24", "--eps", "1e-4", "--trace-out", str(trace)])
    assert code == 0
    assert "first_negative=46" in capsys.readouterr().out
    monkeypatch.setenv("INCMAX_PRECISION", "0")
    assert main(["roots", "--rho", "2.24", "--trace-out", str(trace)]) == 1


def test_rand_expectation_floor(tmp_path, capsys):
    out = tmp_path / "bounds.csv"
    args = ["rand", "expectation", "--cmin", "130", "--cmax", "140", "--out", str(out)]
    assert main(args + ["--floor", "0.58"]) == 0
    assert main(args + ["--floor", "0.60"]) == 2
    printed = capsys.readouterr().out
    assert "at C=134" in printed
    assert len(out.read_text().splitlines()) == 12


def test_rand_bound_small_grid(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    code = main(["rand", "bound", "--k-range", "3:4", "--delta-step", "0.5",
                 "--out", str(out)])
    assert code == 0
    assert "grid_min" in capsys.readouterr().out
    assert len(out.read_text().splitlines()) == 5


def test_rand_run_is_reproducible(tmp_path, capsys):
    out = tmp_path / "run.json"
    code = main(["rand", "run", "--instance", "harmonic:500", "--seed", "7",
                 "--out", str(out)])
    assert code == 0
    assert "blocks=[1, 8, 45, 234]" in capsys.readouterr().out
    first = out.read_bytes()
    assert main(["rand", "run", "--instance", "harmonic:500", "--seed", "7",
                 "--out", str(out)]) == 0
    assert out.read_bytes() == first


def test_yao_verify_and_search(tmp_path, capsys):
    assert main(["yao", "verify"]) == 0
    assert "holds=True" in capsys.readouterr().out
    assert main(["yao", "verify", "--evaluation", "literal"]) == 2
    out = tmp_path / "cert.json"
    assert main(["yao", "search", "--n", "3", "--budget", "30",
                 "--out", str(out)]) == 0
    cert = YaoCertificate.from_json(json.loads(out.read_text()))
    assert cert.N == 3


def test_reduce_hidden_pair_misbehaves(tmp_path, capsys):
    out = tmp_path / "reduce.json"
    code = main(["reduce", "--oracle", "hidden_pair:6", "--out", str(out)])
    assert code == 2
    assert "accountable=False" in capsys.readouterr().out
    payload = json.loads(out.read_text())
    assert payload["violating_set"] == [1, 2]
    assert payload["instance"] is None


def test_discretize_artifact(tmp_path, capsys):
    out = tmp_path / "inst.json"
    code = main(["discretize", "--instance", "capped:3", "--n", "2",
                 "--max-size", "8", "--out", str(out)])
    assert code == 0
    inst = SeparableInstance.from_json(json.loads(out.read_text()))
    assert inst.n_sets == 8


def test_usage_and_domain_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as err:
        main(["greedy", "--instance", "identity"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        main(["no-such-command"])
    assert err.value.code == 1
    # a missing instance file is a domain error, reported without a traceback
    assert main(["greedy", "--instance", "missing.json", "--c1", "1",
                 "--rho", "2"]) == 1
    assert "error" in capsys.readouterr().err
