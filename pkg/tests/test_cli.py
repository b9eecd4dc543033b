import json
from pathlib import Path

import pytest

from qmlab.cli import main
from qmlab.system import parse_system
from qmlab.table import parse_table

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def test_gen_fixture_matches_shipped_file(tmp_path):
    out = tmp_path / "tri3.json"
    assert main(["gen", "fixture", "--name", "tri3", "--out", str(out)]) == 0
    assert out.read_bytes() == (FIXTURES_DIR / "tri3.json").read_bytes()


def test_gen_unknown_fixture_exits_2(tmp_path):
    out = tmp_path / "x.json"
    assert main(["gen", "fixture", "--name", "nope", "--out", str(out)]) == 2


def test_gen_ring_and_gridworld_and_digraph(tmp_path):
    ring = tmp_path / "ring.json"
    assert main(["gen", "ring", "--n", "10", "--out", str(ring)]) == 0
    assert parse_system(ring.read_text()).n_states == 10

    grid = tmp_path / "grid.json"
    assert main([
        "gen", "gridworld", "--w", "2", "--h", "1",
        "--wind", "0.5,0", "--door", "0:1", "--out", str(grid),
    ]) == 0
    sys_ = parse_system(grid.read_text())
    assert sys_.edges == ((0, 1, 0.5),)

    dig = tmp_path / "g.json"
    assert main(["gen", "digraph", "--n", "20", "--p", "0.1", "--seed", "7", "--out", str(dig)]) == 0
    assert parse_system(dig.read_text()).n_states == 20


def test_gen_bad_flags_exit_2(tmp_path):
    with pytest.raises(SystemExit) as ei:
        main(["gen", "ring", "--n", "ten", "--out", str(tmp_path / "r.json")])
    assert ei.value.code == 2


def test_solve_tri3(tmp_path):
    table_path = tmp_path / "table.json"
    assert main(["solve", str(FIXTURES_DIR / "tri3.json"), "--out", str(table_path)]) == 0
    t = parse_table(table_path.read_text())
    assert t.values.tolist() == [[0, 1, 3], [7, 0, 2], [5, 6, 0]]


def test_solve_with_goal_writes_cost_to_go(tmp_path):
    table_path = tmp_path / "table.json"
    goal_path = tmp_path / "ctg.json"
    assert main([
        "solve", str(FIXTURES_DIR / "ow2.json"),
        "--out", str(table_path), "--goal", "0", "--goal-out", str(goal_path),
    ]) == 0
    obj = json.loads(goal_path.read_text())
    assert obj["values"] == [0.0, "inf"]


def test_solve_missing_file_exits_1(tmp_path):
    assert main(["solve", str(tmp_path / "absent.json"), "--out", str(tmp_path / "t.json")]) == 1


def test_solve_malformed_file_exits_1(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["solve", str(bad), "--out", str(tmp_path / "t.json")]) == 1


def test_audit_solved_table_passes(tmp_path):
    table_path = tmp_path / "table.json"
    main(["solve", str(FIXTURES_DIR / "tri3.json"), "--out", str(table_path)])
    report_path = tmp_path / "report.json"
    assert main(["audit", str(table_path), "--out", str(report_path), "--cap", "10"]) == 0
    obj = json.loads(report_path.read_text())
    assert all(c["passed"] for c in obj["checks"])
    assert obj["asymmetry"]["max_gap"] == 6.0


def test_audit_failure_exits_4_but_writes_report(tmp_path):
    table_path = tmp_path / "table.json"
    table_path.write_text('{"n_states": 2, "rows": [[0.5, 1.0], [1.0, 0.0]]}')
    report_path = tmp_path / "report.json"
    assert main(["audit", str(table_path), "--out", str(report_path)]) == 4
    obj = json.loads(report_path.read_text())
    reflex = next(c for c in obj["checks"] if c["axiom"] == "reflexivity")
    assert not reflex["passed"]
    assert reflex["witnesses"] == [[0, 0, 0.5]]


def test_audit_ow2_reports_obstruction(tmp_path):
    table_path = tmp_path / "table.json"
    main(["solve", str(FIXTURES_DIR / "ow2.json"), "--out", str(table_path)])
    report_path = tmp_path / "report.json"
    assert main(["audit", str(table_path), "--out", str(report_path), "--cap", "10"]) == 0
    assert json.loads(report_path.read_text())["symmetric_obstruction_bound"] == 4.5


def _train(tmp_path, name, *extra):
    ckpt = tmp_path / f"{name}.json"
    code = main([
        "train", str(FIXTURES_DIR / "tri3.json"),
        "--mode", "supervised", "--head", "sumrelu",
        "--steps", "300", "--seed", "1", "--out", str(ckpt), *extra,
    ])
    return code, ckpt


def test_train_supervised_and_rerun_is_byte_identical(tmp_path, capsys):
    code, a = _train(tmp_path, "a", "--curve-out", str(tmp_path / "curve.csv"))
    assert code == 0
    line = capsys.readouterr().out.strip().splitlines()[-1]
    metrics = json.loads(line)["final_metrics"]
    assert set(metrics) == {
        "mae_finite", "spearman_finite", "constraint_violation_mean",
        "triangle_violation_max", "one_way_max_error",
    }
    curve = (tmp_path / "curve.csv").read_text()
    assert curve.startswith("step,term,value\n")
    code, b = _train(tmp_path, "b")
    assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_train_zero_steps_equals_initialization(tmp_path):
    code, ckpt = _train(tmp_path, "init", "--steps", "0")
    assert code == 0
    from qmlab.models import EmbeddingTable, parse_model

    m = parse_model(ckpt.read_text())
    init = EmbeddingTable.init_uniform(3, 2, seed=1, scale=0.1)
    assert m.embeddings.vectors.tolist() == init.vectors.tolist()


def test_train_l2_reports_the_obstruction(tmp_path, capsys):
    ckpt = tmp_path / "l2.json"
    code = main([
        "train", str(FIXTURES_DIR / "ow2.json"),
        "--mode", "supervised", "--head", "l2",
        "--steps", "2000", "--cap", "10", "--out", str(ckpt),
    ])
    assert code == 0
    line = capsys.readouterr().out.strip().splitlines()[-1]
    assert json.loads(line)["final_metrics"]["one_way_max_error"] >= 4.5 - 1e-9


@pytest.mark.filterwarnings("ignore::RuntimeWarning")  # divergence is the point
def test_train_divergence_exits_5(tmp_path):
    code = main([
        "train", str(FIXTURES_DIR / "tri3.json"),
        "--mode", "qrl", "--head", "sumrelu", "--dim", "32",
        "--lr", "10.0", "--steps", "2000", "--out", str(tmp_path / "c.json"),
    ])
    assert code == 5


def test_eval_assert_triangle(tmp_path):
    code, ckpt = _train(tmp_path, "m")
    assert code == 0
    metrics_path = tmp_path / "metrics.json"
    code = main([
        "eval", str(ckpt), str(FIXTURES_DIR / "tri3.json"),
        "--out", str(metrics_path), "--assert-triangle",
    ])
    assert code == 0
    assert json.loads(metrics_path.read_text())["triangle_violation_max"] <= 1e-9


def test_eval_zero_model_tri3(tmp_path):
    ckpt = tmp_path / "zero.json"
    ckpt.write_text(json.dumps({
        "dim": 2,
        "head": {"variant": "sum_relu_asym", "epsilon": 0.01},
        "vectors": [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
    }))
    metrics_path = tmp_path / "metrics.json"
    code = main(["eval", str(ckpt), str(FIXTURES_DIR / "tri3.json"), "--out", str(metrics_path)])
    assert code == 0
    assert json.loads(metrics_path.read_text())["mae_finite"] == 4.0


def test_cli_outputs_are_deterministic(tmp_path):
    digests = []
    for name in ("x", "y"):
        out = tmp_path / f"{name}.json"
        main(["gen", "digraph", "--n", "30", "--p", "0.1", "--seed", "3", "--out", str(out)])
        table = tmp_path / f"{name}_t.json"
        main(["solve", str(out), "--out", str(table)])
        report = tmp_path / f"{name}_r.json"
        main(["audit", str(table), "--out", str(report)])
        digests.append((out.read_bytes(), table.read_bytes(), report.read_bytes()))
    assert digests[0] == digests[1]
