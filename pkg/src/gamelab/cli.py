"""Command-line experiment harness.

Everything here is plumbing around the library: seeded match running,
a mixed graph corpus for smoke experiments, and subcommands that expose
the solver, the box game, good-set search, telemetry analysis, and the
acceptance suite.  One master seed determines an experiment byte for
byte; per-trial randomness is derived by hashing, never drawn from a
shared generator, so trial order cannot matter.

Subcommands: gen, solve, chi, play, boxgame, goodset, telemetry, accept.
The environment variable GAMELAB_SEED, when set, overrides the seed of
any experiment spec.  Exit status is 0 iff every check the invocation
actually executed passed (informational commands always exit 0).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from ._util import BudgetExceeded, StrategyError, derive_seed, wilson_interval
from .boxgame import box_threshold, bob_wins, is_near_uniform, solve_boxgame
from .breaker import (
    BoxReductionBreaker,
    GreedyBlockingBreaker,
    SkipBreaker,
    UniformRandomBreaker,
)
from .engine import (
    BREAKER,
    MAKER,
    MAKER_WON,
    MODIFIED,
    STRICT,
    GameConfig,
    GameState,
    MoveLog,
    new_game,
)
from .exact import game_chromatic_index, solve
from .goodset import condition_values, find_good_set, harmonic_condition
from .graph import (
    Graph,
    complete,
    complete_bipartite,
    cycle,
    generate,
    gnp,
    path,
    random_regular,
    read_edge_list,
    star,
    write_edge_list,
)
from .maker import DangerRedirectMaker, GreedyMaker, MakerConfig, UniformRandomMaker
from .telemetry import analyze, summary_json, to_csv

MAKER_POLICIES = ("paper", "random", "greedy")
BREAKER_POLICIES = ("box", "random", "greedy", "skip")

VARIANTS = {"skip": GameConfig.skip_variant, "classic": GameConfig.classic}


def make_maker(policy: str, seed: int, mcfg: MakerConfig | None = None):
    if policy == "paper":
        return DangerRedirectMaker(mcfg or MakerConfig(), seed=seed)
    if policy == "random":
        return UniformRandomMaker(seed=seed)
    if policy == "greedy":
        return GreedyMaker()
    raise ValueError(f"unknown maker policy {policy!r}")


def make_breaker(policy: str, seed: int):
    if policy == "box":
        return BoxReductionBreaker()
    if policy == "random":
        return UniformRandomBreaker(seed=seed)
    if policy == "greedy":
        return GreedyBlockingBreaker()
    if policy == "skip":
        return SkipBreaker()
    raise ValueError(f"unknown breaker policy {policy!r}")


def play_game(g: Graph, cfg: GameConfig, maker, breaker, collector=None) -> GameState:
    """Drive one game to the end, optionally feeding every transition to
    a trace collector.  The harness, not the breaker policy, ends the
    Breaker turn once the bias is spent."""
    s = new_game(g, cfg)
    while not s.game_over():
        if s.turn == MAKER:
            e, c, ann = maker.move(s)
            s.apply_move(MAKER, e, c, ann)
        elif s.breaker_moves_this_turn >= cfg.b:
            s.end_breaker_turn()
        else:
            mv = breaker.micro_move(s)
            if mv is None:
                s.end_breaker_turn()
            else:
                s.apply_move(BREAKER, mv[0], mv[1], mv[2])
        if collector is not None:
            collector.observe(s)
    return s


@dataclass
class ExperimentSpec:
    """A reproducible match: graph, policies, rules, trial count, seed."""

    graph: str
    maker: str
    breaker: str
    k: int
    b: int = 1
    variant: str = "skip"
    mode: str = STRICT
    trials: int = 1
    seed: int = 0
    lam: str | None = None
    c: str | None = None
    logs_dir: str | None = None

    def game_config(self) -> GameConfig:
        try:
            factory = VARIANTS[self.variant]
        except KeyError:
            raise ValueError(f"unknown variant {self.variant!r}") from None
        return factory(k=self.k, b=self.b, mode=self.mode)

    def maker_config(self) -> MakerConfig | None:
        if self.lam is None and self.c is None:
            return None
        base = MakerConfig()
        return MakerConfig(
            lam=Fraction(self.lam) if self.lam is not None else base.lam,
            c=Fraction(self.c) if self.c is not None else base.c,
        )


@dataclass
class MatchReport:
    """Aggregated match outcome; counts and sums only, so trial order
    can never leak into the report."""

    spec: ExperimentSpec
    maker_wins: int
    breaker_wins: int
    total_moves: int
    total_rounds: int
    forced_nonproper: int
    wilson_low: float
    wilson_high: float

    @property
    def trials(self) -> int:
        return self.maker_wins + self.breaker_wins

    def to_json(self) -> str:
        doc = {
            "spec": asdict(self.spec),
            "results": {
                "trials": self.trials,
                "maker_wins": self.maker_wins,
                "breaker_wins": self.breaker_wins,
                "mean_game_length": self.total_moves / max(1, self.trials),
                "mean_rounds": self.total_rounds / max(1, self.trials),
                "forced_nonproper": self.forced_nonproper,
                "maker_win_rate": self.maker_wins / max(1, self.trials),
                "wilson_95": [self.wilson_low, self.wilson_high],
            },
        }
        return json.dumps(doc, sort_keys=True, indent=2)


def run_match(spec: ExperimentSpec) -> MatchReport:
    """Play spec.trials independent seeded games and aggregate."""
    g = load_graph(spec.graph)
    cfg = spec.game_config()
    mcfg = spec.maker_config()
    logs_dir = Path(spec.logs_dir) if spec.logs_dir else None
    if logs_dir is not None:
        logs_dir.mkdir(parents=True, exist_ok=True)
    maker_wins = breaker_wins = moves = rounds = forced = 0
    for i in range(spec.trials):
        maker = make_maker(spec.maker, derive_seed(spec.seed, i, "maker"), mcfg)
        breaker = make_breaker(spec.breaker, derive_seed(spec.seed, i, "breaker"))
        s = play_game(g, cfg, maker, breaker)
        if s.winner() == MAKER_WON:
            maker_wins += 1
        else:
            breaker_wins += 1
        for rec in s.log:
            if rec.skip:
                continue
            moves += 1
            if rec.ann and rec.ann.get("forced_nonproper"):
                forced += 1
        rounds += s.round
        if logs_dir is not None:
            (logs_dir / f"trial_{i:04d}.jsonl").write_text(s.log.to_jsonl(g))
    lo, hi = wilson_interval(maker_wins, spec.trials)
    return MatchReport(
        spec=spec,
        maker_wins=maker_wins,
        breaker_wins=breaker_wins,
        total_moves=moves,
        total_rounds=rounds,
        forced_nonproper=forced,
        wilson_low=lo,
        wilson_high=hi,
    )


def mixed_corpus() -> list[tuple[str, Graph]]:
    """The named smoke-test corpus: 25 small graphs across families."""
    petersen = Graph(
        10,
        [(i, (i + 1) % 5) for i in range(5)]
        + [(i, i + 5) for i in range(5)]
        + [(5 + i, 5 + (i + 2) % 5) for i in range(5)],
    )
    spider = Graph(7, [(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (5, 6)])
    caterpillar = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 6), (3, 7)])
    out: list[tuple[str, Graph]] = []
    out.extend((f"star:{n}", star(n)) for n in range(2, 7))
    out.extend((f"path:{n}", path(n)) for n in range(3, 7))
    out.extend((f"cycle:{n}", cycle(n)) for n in range(3, 8))
    out.append(("complete:4", complete(4)))
    out.append(("complete:5", complete(5)))
    out.append(("complete_bipartite:2:3", complete_bipartite(2, 3)))
    out.append(("complete_bipartite:3:3", complete_bipartite(3, 3)))
    out.append(("spider", spider))
    out.append(("caterpillar", caterpillar))
    out.append(("gnp:8:0.4:7", gnp(8, 0.4, seed=7)))
    out.append(("gnp:10:0.3:11", gnp(10, 0.3, seed=11)))
    out.append(("random_regular:8:3:5", random_regular(8, 3, seed=5)))
    out.append(("random_regular:10:4:9", random_regular(10, 4, seed=9)))
    out.append(("petersen", petersen))
    assert len(out) >= 20 and all(g.m >= 1 for _, g in out)
    return out


def load_graph(source: str) -> Graph:
    """A file path if one exists there, else a generator spec string."""
    p = Path(source)
    if p.exists():
        return read_edge_list(p.read_text())
    if source == "petersen" or source in ("spider", "caterpillar"):
        return dict(mixed_corpus())[source]
    return generate(source)


def master_seed(arg_seed: int) -> int:
    env = os.environ.get("GAMELAB_SEED")
    return int(env) if env is not None else arg_seed


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_gen(args) -> int:
    g = generate(args.spec)
    _emit(write_edge_list(g), args.out)
    return 0


def cmd_solve(args) -> int:
    g = load_graph(args.graph)
    cfg = VARIANTS[args.variant](k=args.k, b=args.b)
    try:
        res = solve(g, args.k, cfg, budget=args.budget, memoize=not args.no_memo)
    except BudgetExceeded as exc:
        print(f"budget exceeded after {exc.nodes} nodes", file=sys.stderr)
        return 1
    doc = {
        "graph": args.graph,
        "n": g.n,
        "m": g.m,
        "k": args.k,
        "b": args.b,
        "variant": args.variant,
        "winner": res.winner,
        "nodes": res.nodes,
    }
    _emit(json.dumps(doc, sort_keys=True, indent=2), args.out)
    return 0


def cmd_chi(args) -> int:
    g = load_graph(args.graph)
    cfg = VARIANTS[args.variant](k=1, b=args.b)
    res = game_chromatic_index(
        g, args.b, cfg, budget=args.budget, memoize=not args.no_memo
    )
    doc = {
        "graph": args.graph,
        "b": args.b,
        "variant": args.variant,
        "value": res.value,
        "winners": {str(k): w for k, w in sorted(res.winners.items())},
        "partial": res.partial,
        "nodes": res.nodes,
    }
    _emit(json.dumps(doc, sort_keys=True, indent=2), args.out)
    return 1 if res.partial else 0


def cmd_play(args) -> int:
    spec = ExperimentSpec(
        graph=args.graph,
        maker=args.maker,
        breaker=args.breaker,
        k=args.k,
        b=args.b,
        variant=args.variant,
        mode=args.mode,
        trials=args.trials,
        seed=master_seed(args.seed),
        lam=args.lam,
        c=args.c,
        logs_dir=args.logs,
    )
    report = run_match(spec)
    _emit(report.to_json(), args.out)
    return 0


def cmd_boxgame(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    if not sizes:
        print("need at least one box size", file=sys.stderr)
        return 2
    doc: dict = {
        "sizes": sizes,
        "b": args.b,
        "near_uniform": is_near_uniform(sizes),
        "f_threshold": box_threshold(len(sizes), args.b),
        "bob_wins_criterion": bob_wins(sizes, args.b),
    }
    status = 0
    if args.solve:
        winner = solve_boxgame(sizes, args.b, budget=args.budget)
        doc["minimax_bob_wins"] = winner
        doc["agree"] = winner == doc["bob_wins_criterion"]
        status = 0 if doc["agree"] else 1
    _emit(json.dumps(doc, sort_keys=True, indent=2), args.out)
    return status


def cmd_goodset(args) -> int:
    g = load_graph(args.graph)
    cert = find_good_set(g)
    doc: dict = {
        "graph": args.graph,
        "F": [list(g.edges[e]) for e in cert.edges],
        "indices": list(cert.edges),
        "size": len(cert),
        "pair_distances": [list(t) for t in cert.pair_distances],
    }
    status = 0
    if args.b >= 2:
        lhs, rhs = condition_values(g, cert.edges, args.b)
        satisfied = harmonic_condition(g, cert.edges, args.b)
        doc["condition_lhs"] = str(lhs)
        doc["condition_rhs"] = str(rhs)
        doc["satisfied"] = satisfied
        status = 0 if satisfied else 1
    else:
        doc["condition_lhs"] = doc["condition_rhs"] = doc["satisfied"] = None
    _emit(json.dumps(doc, sort_keys=True, indent=2), args.out)
    return status


def cmd_telemetry(args) -> int:
    g = load_graph(args.graph)
    log = MoveLog.from_jsonl(Path(args.log).read_text(), g)
    cfg = VARIANTS[args.variant](k=args.k, b=args.b, mode=args.mode)
    mcfg = MakerConfig(lam=Fraction(args.lam), c=Fraction(args.c))
    report = analyze(log, g, cfg, mcfg)
    csv_text = to_csv(report)
    json_text = summary_json(report)
    if args.out_csv:
        Path(args.out_csv).write_text(csv_text)
    if args.out_json:
        Path(args.out_json).write_text(json_text + "\n")
    if not args.out_csv and not args.out_json:
        print(csv_text, end="")
        print(json_text)
    return 0


def cmd_accept(args) -> int:
    from . import acceptance

    only = None
    if args.only:
        only = sorted({int(x) for x in args.only.split(",") if x.strip()})
    results = acceptance.run_criteria(only)
    for res in results:
        print(res.line())
    if args.out:
        doc = [res.as_dict() for res in results]
        Path(args.out).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return 0 if all(r.status != "FAIL" for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gamelab",
        description="Maker-Breaker edge-coloring game experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph(p):
        p.add_argument("--graph", required=True, help="edge-list file or family spec")

    def add_out(p):
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("gen", help="emit a generated graph as an edge list")
    p.add_argument("spec", help="family spec, e.g. cycle:7 or random_regular:64:16:1")
    add_out(p)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("solve", help="exact winner for one palette size")
    add_graph(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--variant", choices=sorted(VARIANTS), default="skip")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--no-memo", action="store_true")
    add_out(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("chi", help="game chromatic index over the trivial range")
    add_graph(p)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--variant", choices=sorted(VARIANTS), default="skip")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--no-memo", action="store_true")
    add_out(p)
    p.set_defaults(fn=cmd_chi)

    p = sub.add_parser("play", help="seeded match between two policies")
    add_graph(p)
    p.add_argument("--maker", choices=MAKER_POLICIES, default="random")
    p.add_argument("--breaker", choices=BREAKER_POLICIES, default="random")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--variant", choices=sorted(VARIANTS), default="skip")
    p.add_argument("--mode", choices=[STRICT, MODIFIED], default=STRICT)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lambda", dest="lam", default=None, help="maker lambda, e.g. 1/10")
    p.add_argument("--c", default=None, help="maker c, e.g. 1/1000")
    p.add_argument("--logs", default=None, help="directory for per-trial JSON-lines logs")
    add_out(p)
    p.set_defaults(fn=cmd_play)

    p = sub.add_parser("boxgame", help="box-game criterion, optionally vs minimax")
    p.add_argument("--sizes", required=True, help="comma-separated box sizes")
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--solve", action="store_true", help="cross-check by minimax")
    p.add_argument("--budget", type=int, default=None)
    add_out(p)
    p.set_defaults(fn=cmd_boxgame)

    p = sub.add_parser("goodset", help="greedy good set and the harmonic criterion")
    add_graph(p)
    p.add_argument("--b", type=int, default=2)
    add_out(p)
    p.set_defaults(fn=cmd_goodset)

    p = sub.add_parser("telemetry", help="per-vertex trace report from a game log")
    p.add_argument("--log", required=True, help="JSON-lines move log")
    add_graph(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--variant", choices=sorted(VARIANTS), default="skip")
    p.add_argument("--mode", choices=[STRICT, MODIFIED], default=MODIFIED)
    p.add_argument("--lambda", dest="lam", default="1/10")
    p.add_argument("--c", default="1/1000")
    p.add_argument("--out-csv", default=None)
    p.add_argument("--out-json", default=None)
    p.set_defaults(fn=cmd_telemetry)

    p = sub.add_parser("accept", help="run the acceptance criteria suite")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    add_out(p)
    p.set_defaults(fn=cmd_accept)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (StrategyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
