"""File-based experiment pipeline: gen | solve | audit | train | eval.

Every command is deterministic given its flags; all randomness flows from
explicit --seed arguments. Exit codes: 0 ok, 1 I/O, 2 bad arguments,
3 internal consistency failure, 4 failed audit/assertion, 5 diverged
training.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import audit as audit_mod
from . import envs, fields, models, solver, train, value
from .errors import NonFiniteLossError, ParseError, QmlabError
from .system import parse_system, serialize_system
from .table import parse_table, serialize_table

EXIT_IO = 1
EXIT_ARGS = 2
EXIT_CONSISTENCY = 3
EXIT_AUDIT = 4
EXIT_DIVERGED = 5


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        print(f"error: cannot read {path}: {e}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        print(f"error: cannot write {path}: {e}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _parse_wind(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("wind must be 'wx,wy'")
    return float(parts[0]), float(parts[1])


def _parse_door(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("door must be 'cellA:cellB'")
    return int(parts[0]), int(parts[1])


def cmd_gen(args) -> int:
    if args.generator == "fixture":
        sys_ = envs.make_fixture(args.name)
    elif args.generator == "ring":
        sys_ = envs.make_one_way_ring(args.n)
    elif args.generator == "gridworld":
        sys_ = envs.make_gridworld(args.w, args.h, args.door, args.wind)
    elif args.generator == "digraph":
        sys_ = envs.make_random_digraph(args.n, args.p, (args.lo, args.hi), args.seed)
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(args.generator)
    _write(args.out, serialize_system(sys_))
    return 0


def cmd_solve(args) -> int:
    sys_ = parse_system(_read(args.system))
    table = solver.all_pairs_energy(sys_)
    _write(args.out, serialize_table(table))
    if args.goal is not None:
        ctg = value.value_iteration(sys_, args.goal)
        for s in range(sys_.n_states):
            a, b = ctg.values[s], table.get(s, args.goal)
            if a.is_infinite != b.is_infinite or (
                a.is_finite and abs(a.value - b.value) > 1e-9
            ):
                print(
                    f"error: cost-to-go/energy mismatch at state {s}: {a} vs {b}",
                    file=sys.stderr,
                )
                return EXIT_CONSISTENCY
        goal_out = args.goal_out or (args.out + f".goal{args.goal}.json")
        _write(goal_out, value.serialize_cost_to_go(ctg))
    return 0


def cmd_audit(args) -> int:
    table = parse_table(_read(args.table))
    reports = audit_mod.run_all_checks(table, args.tol, args.budget, args.seed)
    extra = {"asymmetry": audit_mod.asymmetry_profile(table).to_json_obj()}
    if args.cap is not None:
        extra["symmetric_obstruction_bound"] = audit_mod.symmetric_obstruction_bound(
            table, args.cap
        )
    _write(args.out, audit_mod.serialize_reports(reports, extra))
    if all(r.passed for r in reports):
        return 0
    for r in reports:
        if not r.passed:
            print(f"audit failed: {r.axiom} (worst violation {r.worst_violation})", file=sys.stderr)
    return EXIT_AUDIT


def _make_head(name: str, epsilon: float, scale: float):
    if name == "sumrelu":
        return models.SumReluAsym(epsilon)
    if name == "maxrelu":
        return models.MaxReluAsym(epsilon)
    return models.SymmetricL2(scale)


def cmd_train(args) -> int:
    sys_ = parse_system(_read(args.system))
    oracle = solver.all_pairs_energy(sys_)
    cap = args.cap
    if cap is None:
        finite = oracle.values[oracle.finite]
        cap = 10.0 * float(finite.max()) if finite.size and finite.max() > 0 else 10.0
    cfg = train.TrainConfig(
        learning_rate=args.lr,
        steps=args.steps,
        batch_size=args.batch,
        lambda_penalty=getattr(args, "lambda"),
        cap=cap,
        seed=args.seed,
        log_every=args.log_every,
    )
    emb = models.EmbeddingTable.init_uniform(sys_.n_states, args.dim, args.seed, args.init_scale)
    model = models.EnergyModel(emb, _make_head(args.head, args.epsilon, args.scale))
    data = train.TransitionDataset.from_system(sys_)
    try:
        if args.mode == "supervised":
            fitted, curve = train.supervised_fit(model, oracle, cfg)
        else:
            fitted, curve = train.qrl_style_fit(model, data, cfg)
    except NonFiniteLossError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIVERGED
    _write(args.out, models.serialize_model(fitted))
    if args.curve_out:
        _write(args.curve_out, train.curve_to_csv(curve))
    metrics = train.evaluate_model(fitted, oracle, data, cap, args.seed)
    print(json.dumps({"final_metrics": metrics.to_json_obj(), "cap": cap}))
    return 0


def cmd_eval(args) -> int:
    model = models.parse_model(_read(args.checkpoint))
    sys_ = parse_system(_read(args.system))
    oracle = solver.all_pairs_energy(sys_)
    cap = args.cap
    if cap is None:
        finite = oracle.values[oracle.finite]
        cap = 10.0 * float(finite.max()) if finite.size and finite.max() > 0 else 10.0
    data = train.TransitionDataset.from_system(sys_)
    metrics = train.evaluate_model(model, oracle, data, cap, args.seed)
    _write(args.out, train.metrics_to_json(metrics))
    if args.assert_triangle and metrics.triangle_violation_max > 1e-9:
        print(
            f"error: triangle violation {metrics.triangle_violation_max} > 1e-9",
            file=sys.stderr,
        )
        return EXIT_AUDIT
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmlab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a transition-system file")
    gs = g.add_subparsers(dest="generator", required=True)
    gf = gs.add_parser("fixture")
    gf.add_argument("--name", required=True)
    gf.add_argument("--out", required=True)
    gr = gs.add_parser("ring")
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--out", required=True)
    gg = gs.add_parser("gridworld")
    gg.add_argument("--w", type=int, required=True)
    gg.add_argument("--h", type=int, required=True)
    gg.add_argument("--wind", type=_parse_wind, default=(0.0, 0.0))
    gg.add_argument("--door", type=_parse_door, action="append", default=[])
    gg.add_argument("--out", required=True)
    gd = gs.add_parser("digraph")
    gd.add_argument("--n", type=int, required=True)
    gd.add_argument("--p", type=float, required=True)
    gd.add_argument("--lo", type=float, default=0.5)
    gd.add_argument("--hi", type=float, default=2.0)
    gd.add_argument("--seed", type=int, default=0)
    gd.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve all-pairs energies (and a goal's cost-to-go)")
    s.add_argument("system")
    s.add_argument("--out", required=True)
    s.add_argument("--goal", type=int, default=None)
    s.add_argument("--goal-out", default=None)
    s.set_defaults(func=cmd_solve)

    a = sub.add_parser("audit", help="run the four quasimetric axiom checks on a table")
    a.add_argument("table")
    a.add_argument("--out", required=True)
    a.add_argument("--tol", type=float, default=audit_mod.DEFAULT_TOL)
    a.add_argument("--budget", type=int, default=audit_mod.DEFAULT_TRIPLE_BUDGET)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--cap", type=float, default=None)
    a.set_defaults(func=cmd_audit)

    t = sub.add_parser("train", help="fit an energy model to a system")
    t.add_argument("system")
    t.add_argument("--mode", choices=["supervised", "qrl"], required=True)
    t.add_argument("--head", choices=["sumrelu", "maxrelu", "l2"], default="sumrelu")
    t.add_argument("--init-scale", type=float, default=0.1)
    t.add_argument("--dim", type=int, default=2)
    t.add_argument("--epsilon", type=float, default=0.01)
    t.add_argument("--scale", type=float, default=1.0)
    t.add_argument("--lr", type=float, default=0.05)
    t.add_argument("--steps", type=int, default=2000)
    t.add_argument("--batch", type=int, default=64)
    t.add_argument("--lambda", type=float, default=100.0)
    t.add_argument("--cap", type=float, default=None)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--log-every", type=int, default=100)
    t.add_argument("--out", required=True)
    t.add_argument("--curve-out", default=None)
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("eval", help="evaluate a checkpoint against the solved oracle")
    e.add_argument("checkpoint")
    e.add_argument("system")
    e.add_argument("--out", required=True)
    e.add_argument("--cap", type=float, default=None)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--assert-triangle", action="store_true")
    e.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as e:  # I/O helpers exit directly with their code
        return int(e.code)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except QmlabError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
