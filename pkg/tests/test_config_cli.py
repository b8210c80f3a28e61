import json

import pytest

from gzskew import cli
from gzskew.config import load_config, thread_count
from gzskew.errors import ConfigError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def cfg_arg(data):
    return json.dumps(data)


def test_schubert_table_for_s2(capsys):
    code, rep, _ = run(capsys, "schubert", "--config", cfg_arg({"group": "typeA_product([2])"}))
    assert code == 0
    assert {row["w"]: row["P"] for row in rep["table"]} == {"e": "2", "s1": "x1 - x2"}
    assert rep["config_hash"] and rep["seed"] == 0


def test_commutators_pass_and_perturbed_fail(capsys):
    code, rep, _ = run(capsys, "commutators", "--config", cfg_arg({"n": 2}))
    assert code == 0 and rep["checked"] == 6 and rep["failed"] == 0
    code, rep, _ = run(capsys, "commutators", "--config", cfg_arg({"n": 2, "perturb": True}))
    assert code == 1 and rep["failed"] > 0


def test_commutators_reject_n4_without_opt_in(capsys):
    code, rep, err = run(capsys, "commutators", "--config", cfg_arg({"n": 4}))
    assert code == 2 and rep is None and "allow_n4" in err


def test_verify_invariance(capsys):
    good = {"operators": [{"builder": "ogz", "rows": [1, 2]}]}
    code, rep, _ = run(capsys, "verify-invariance", "--samples", "4", "--config", cfg_arg(good))
    assert code == 0 and rep["applications"] == 8 and rep["ok"]
    bad = {"group": "typeA_product([2])", "operators": [{"name": "A", "expr": "x1 * phi(1, 0)"}]}
    code, rep, _ = run(capsys, "verify-invariance", "--samples", "3", "--config", cfg_arg(bad))
    assert code == 1 and rep["failures"]


def test_structure_theorem_reports_scalar(capsys):
    data = {"group": "typeA_product([3])", "structure": {"v": [1, 1, 0]}}
    code, rep, _ = run(capsys, "structure-theorem", "--samples", "3", "--config", cfg_arg(data))
    assert code == 0 and rep["a"] == rep["predicted"] == "2"


def test_act_identity_echoes_input(capsys, tmp_path):
    op = tmp_path / "op.json"
    op.write_text(json.dumps({"group": "typeA_product([2])", "expr": "phi(0, 0)"}))
    fn = tmp_path / "f.json"
    fn.write_text(json.dumps({"point": ["0", "1"], "w": [1]}))
    code, rep, _ = run(capsys, "act", "--operator", str(op), "--functional", str(fn))
    assert code == 0
    assert rep["result"] == rep["input"] == [{"point": ["0", "1"], "w": [1], "coeff": "1"}]


def test_act_rejects_bad_functional(capsys, tmp_path):
    op = tmp_path / "op.json"
    op.write_text(json.dumps({"group": "typeA_product([2])", "expr": "phi(0, 0)"}))
    fn = tmp_path / "f.json"
    fn.write_text(json.dumps({"point": ["1", "0"], "w": []}))   # not a parabolic representative
    code, _, err = run(capsys, "act", "--operator", str(op), "--functional", str(fn))
    assert code == 2 and "functional" in err


def test_gamma_graph_writes_files(capsys, tmp_path):
    data = {"v": ["1/3", "2/7", "-5/11"], "operators": [{"builder": "ogz", "rows": [1, 2]}]}
    out = tmp_path / "g.json"
    code, rep, _ = run(capsys, "gamma-graph", "--radius", "2", "--out", str(out), "--config", cfg_arg(data))
    assert code == 0
    assert rep["certificate"]["verdict"] == "certified-on-window"
    for name in ("g.json", "g.graph.json", "g.dot"):
        assert (tmp_path / name).exists()
    assert (tmp_path / "g.dot").read_text().startswith("digraph")


def test_gamma_graph_violation_exits_one(capsys):
    data = {"v": [0, 0, 1], "operators": [{"builder": "ogz", "rows": [1, 2]}]}
    code, rep, _ = run(capsys, "gamma-graph", "--radius", "2", "--config", cfg_arg(data))
    assert code == 1 and rep["certificate"]["verdict"] == "violated"


@pytest.mark.parametrize("argv", [
    ["schubert", "--config", '{"group": "bogus("}'],
    ["schubert", "--config", "[1, 2]"],
    ["schubert", "--config", "{not json"],
    ["gamma-graph", "--config", '{"operators": [{"builder": "nope"}]}'],
    ["structure-theorem", "--config", '{"group": "typeA_product([2])"}'],
])
def test_configuration_errors_exit_two(capsys, argv):
    code, rep, err = run(capsys, *argv)
    assert code == 2 and rep is None
    assert json.loads(err)["error"]


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 2


def test_config_builders():
    cfg = load_config({
        "group": "typeA_product([2])",
        "operators": [
            {"name": "H", "builder": "invariant", "h": "x1 + x2"},
            {"name": "S", "builder": "structure", "v": [0, 1]},
            {"name": "I", "builder": "type_I", "parts": [{"w": [1], "p": "1", "v": [0, 1]}]},
            {"name": "D", "expr": "ddiff(1)"},
        ],
        "v": ["1/2", 0],
        "lattice": [[1, 0], [0, 1]],
    })
    assert sorted(cfg.operators) == ["D", "H", "I", "S"]
    assert cfg.v[0].denominator == 2
    with pytest.raises(ConfigError):
        load_config({"group": "typeA_product([2])", "operators": [{"name": "A", "expr": "x1"}, {"name": "A", "expr": "x2"}]})
    with pytest.raises(ConfigError):
        load_config({"group": "typeA_product([2])", "v": [1, 2, 3]})
    with pytest.raises(ConfigError):
        load_config({"group": "typeA_product([3])", "operators": [{"builder": "ogz", "rows": [1, 2]}]})


def test_thread_count(monkeypatch, capsys):
    monkeypatch.setenv("GZ_ENGINE_THREADS", "3")
    assert thread_count() == 3
    data = {"operators": [{"builder": "ogz", "rows": [1, 2]}]}
    code, rep, _ = run(capsys, "verify-invariance", "--samples", "2", "--config", cfg_arg(data))
    assert code == 0 and rep["ok"]
    monkeypatch.setenv("GZ_ENGINE_THREADS", "many")
    code, _, _ = run(capsys, "schubert", "--config", cfg_arg({"group": "typeA_product([2])"}))
    assert code == 2
