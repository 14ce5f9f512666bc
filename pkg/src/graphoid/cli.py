"""Command-line front end: load JSON artifacts, run queries and suites.

Exit codes: 0 for success or a holding property, 1 for a failing property,
2 for usage or input errors.  JSON is the only machine-readable surface;
anything human-oriented goes to stderr or is clearly prose.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bayesnet import Dag, SeparationQuery, build_network, connected_components, d_separated
from .dist_oracle import (
    CiOracle,
    GaussianModel,
    JointTable,
    random_gaussian,
    random_spb,
)
from .errors import GraphoidError
from .model_core import DependencyModel
from .relevance import (
    VIOLATION,
    PartitionTriple,
    check_clean,
    is_transitive,
    mutually_irrelevant,
    uncoupled,
    unrelated,
)
from .simnet import HypothesisCover, build_similarity, types_equivalent
from .suites import SUITES, run_suite

DEFAULT_SEED = 0


def _default_seed() -> int:
    env = os.environ.get("GRAPHOID_SEED")
    return int(env) if env else DEFAULT_SEED


def _parse_names(text: str | None) -> list[str]:
    if not text:
        return []
    return [part.strip() for part in text.split(",") if part.strip()]


def load_distribution(path: str):
    """Read a JSON artifact: joint table, Gaussian model, or dependency model."""
    with open(path) as fh:
        data = json.load(fh)
    if "probs" in data:
        return JointTable.from_json_dict(data)
    if "cov" in data:
        return GaussianModel.from_json_dict(data)
    if "triplets" in data:
        return DependencyModel.from_json_dict(data)
    raise ValueError(f"{path}: unrecognized artifact (need probs, cov, or triplets)")


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_ci(args: argparse.Namespace) -> int:
    dist = load_distribution(args.dist_file)
    oracle = CiOracle(dist)
    x, y, z = [args.x], [args.y], _parse_names(args.given)
    holds = oracle.ci(x, y, z)
    word = "holds" if holds else "fails"
    if isinstance(dist, DependencyModel):
        print(word)
    else:
        print(f"{word} (max discrepancy = {oracle.discrepancy(x, y, z):.6g})")
    return 0 if holds else 1


def cmd_build_net(args: argparse.Namespace) -> int:
    dist = load_distribution(args.dist_file)
    order = _parse_names(args.order) or None
    dag = build_network(CiOracle(dist), order)
    _emit(dag.to_json_dict(), args.out)
    components = " ".join("{" + ",".join(c) + "}" for c in connected_components(dag))
    print(f"components: {components}", file=sys.stderr)
    return 0


def cmd_dsep(args: argparse.Namespace) -> int:
    with open(args.dag_file) as fh:
        dag = Dag.from_json_dict(json.load(fh))
    q = SeparationQuery.make(_parse_names(args.x), _parse_names(args.y), _parse_names(args.given))
    separated = d_separated(dag, q)
    print("d-separated" if separated else "connected")
    return 0 if separated else 1


def cmd_relations(args: argparse.Namespace) -> int:
    oracle = CiOracle(load_distribution(args.dist_file))
    verdicts = {
        "mutually_irrelevant": mutually_irrelevant(oracle, args.x, args.y).to_json_dict(),
        "uncoupled": uncoupled(oracle, args.x, args.y).to_json_dict(),
        "unrelated": unrelated(oracle, args.x, args.y).to_json_dict(),
    }
    _emit(verdicts, args.out)
    return 0


def cmd_transitive(args: argparse.Namespace) -> int:
    result = is_transitive(CiOracle(load_distribution(args.dist_file)))
    _emit(result.to_json_dict(), args.out)
    return 0 if result.holds else 1


def cmd_clean_check(args: argparse.Namespace) -> int:
    dist = load_distribution(args.dist_file)
    if isinstance(dist, DependencyModel):
        raise ValueError("clean-check needs a table or Gaussian artifact")
    ground = dist.universe.names - {args.e}
    x1 = frozenset(_parse_names(args.x1))
    y1 = frozenset(_parse_names(args.y1))
    z1 = frozenset(_parse_names(args.z1))
    values = tuple(int(v) for v in _parse_names(args.e_values)) or (0, 1)
    pt = PartitionTriple(
        x1, ground - x1, y1, ground - y1, z1, ground - z1, args.e, values
    )
    result = check_clean(dist, pt)
    _emit(result.to_json_dict(), args.out)
    return 1 if result.status == VIOLATION else 0


def _parse_cover(text: str) -> tuple[tuple[int, ...], ...]:
    subsets = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            subsets.append(tuple(int(v) for v in _parse_names(chunk)))
    return tuple(subsets)


def cmd_simnet(args: argparse.Namespace) -> int:
    dist = load_distribution(args.dist_file)
    if not isinstance(dist, JointTable):
        raise ValueError("simnet needs a joint-table artifact")
    cover = HypothesisCover(args.hypothesis, _parse_cover(args.cover))
    if args.compare_types:
        outcome = types_equivalent(dist, cover)
        _emit(outcome.to_json_dict(), args.out)
        return 0 if outcome.equivalent else 1
    net = build_similarity(dist, cover, args.type)
    _emit(net.to_json_dict(), args.out)
    return 0


def cmd_randgen(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.kind == "spb":
        artifact = random_spb(args.n, seed)
    else:
        artifact = random_gaussian(args.n, seed)
    _emit(artifact.to_json_dict(), args.out)
    return 0


def cmd_suite(args: argparse.Namespace) -> int:
    if args.name not in SUITES:
        raise ValueError(f"unknown suite {args.name!r}; choose from {sorted(SUITES)}")
    seed = args.seed if args.seed is not None else _default_seed()
    report = run_suite(args.name, seed=seed, n_vars=args.n_vars, samples=args.samples)
    path = args.report or f"suite_{args.name}.json"
    with open(path, "w") as fh:
        fh.write(report.to_json())
    print(report.summary())
    return 0 if report.ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphoid",
        description="Queries and verification suites over independence artifacts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ci", help="test one conditional-independence statement")
    p.add_argument("dist_file")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--given", default="", help="comma-separated conditioning variables")
    p.set_defaults(func=cmd_ci)

    p = sub.add_parser("build-net", help="build a minimal network from a distribution")
    p.add_argument("dist_file")
    p.add_argument("--order", default="", help="comma-separated construction order")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_build_net)

    p = sub.add_parser("dsep", help="run a d-separation query against a network file")
    p.add_argument("dag_file")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--given", default="")
    p.set_defaults(func=cmd_dsep)

    p = sub.add_parser("relations", help="report the three relevance relations for a pair")
    p.add_argument("dist_file")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("transitive", help="check transitivity of pairwise relevance")
    p.add_argument("dist_file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_transitive)

    p = sub.add_parser("clean-check", help="evaluate the partition-triple implication")
    p.add_argument("dist_file")
    p.add_argument("--e", required=True, help="pivot variable")
    p.add_argument("--x1", required=True, help="first side of the first partition")
    p.add_argument("--y1", required=True)
    p.add_argument("--z1", required=True)
    p.add_argument("--e-values", default="", help="two pivot value indices, default 0,1")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_clean_check)

    p = sub.add_parser("simnet", help="build or compare similarity networks")
    p.add_argument("dist_file")
    p.add_argument("--hypothesis", required=True)
    p.add_argument("--cover", required=True, help="value subsets like '0,1;1,2'")
    p.add_argument("--type", type=int, choices=(1, 2), default=1)
    p.add_argument("--compare-types", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simnet)

    p = sub.add_parser("randgen", help="generate a seeded random distribution")
    p.add_argument("kind", choices=("spb", "gaussian"))
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_randgen)

    p = sub.add_parser("suite", help="run a named verification suite")
    p.add_argument("name")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n-vars", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--report", default=None, help="report path, default suite_<name>.json")
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (GraphoidError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
