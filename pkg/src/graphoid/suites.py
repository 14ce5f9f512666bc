"""Seeded verification suites exercising the package's theorem-level claims.

Each suite runs a deterministic sweep at desk scale and reports failures as
structured records.  The JSON form of a report depends only on the inputs,
the seed, and the flags; timing lives in the human summary alone so reports
stay byte-identical across runs.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .bayesnet import (
    SeparationQuery,
    build_network,
    connected_components,
    d_separated,
    factorization_max_error,
)
from .dist_oracle import (
    CiOracle,
    JointTable,
    extract_model,
    marginalize,
    random_gaussian,
    random_spb,
    xor_table,
)
from .model_core import Universe, check_graphoid_axioms, subsets
from .relevance import (
    VIOLATION,
    PartitionTriple,
    PtBinBlocks,
    check_clean,
    check_pt_bin,
    gaussian_axioms_check,
    is_transitive,
    mutually_irrelevant,
    uncoupled,
    unrelated,
)
from .simnet import HypothesisCover, build_similarity, restrict_to_hypotheses, types_equivalent

CHAIN_RULE_TOL = 1e-9


@dataclass
class SuiteReport:
    """Cases run, failures found, and the seed that reproduces them."""

    suite: str
    seed: int
    params: dict
    cases: int = 0
    failures: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        # wall_time stays out: reports must be byte-identical given the
        # same inputs, seed, and flags.
        return {
            "suite": self.suite,
            "seed": self.seed,
            "params": self.params,
            "cases": self.cases,
            "failures": self.failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    def summary(self) -> str:
        state = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        return (
            f"suite {self.suite}: {self.cases} cases, {state}, "
            f"seed {self.seed}, {self.wall_time:.2f}s"
        )


def _sizes(count: int, n_max: int, n_min: int = 2) -> list[int]:
    span = list(range(n_min, n_max + 1))
    return [span[i % len(span)] for i in range(count)]


def _fail(report: SuiteReport, **record) -> None:
    report.failures.append(dict(sorted(record.items())))


def suite_axioms(seed: int = 0, n_vars: int = 4, samples: int = 200) -> SuiteReport:
    """Models extracted from random tables must satisfy all five axioms."""
    report = SuiteReport("axioms", seed, {"n_vars": n_vars, "samples": samples})
    for i, n in enumerate(_sizes(samples, min(n_vars, 4))):
        table = random_spb(n, seed + i)
        violations = check_graphoid_axioms(extract_model(CiOracle(table)))
        report.cases += 1
        if violations:
            _fail(
                report,
                case=i,
                n=n,
                table_seed=seed + i,
                violations=[v.axiom for v in violations[:5]],
            )
    return report


def suite_dsep_soundness(seed: int = 0, n_vars: int = 5, samples: int = 200) -> SuiteReport:
    """Every separation read off a constructed network must hold in the table."""
    report = SuiteReport("dsep-soundness", seed, {"n_vars": n_vars, "samples": samples})
    rng = np.random.default_rng(seed)
    for i, n in enumerate(_sizes(samples, min(n_vars, 5))):
        table = random_spb(n, seed + i)
        oracle = CiOracle(table)
        names = list(table.universe.variables)
        for _ in range(3):
            order = tuple(names[k] for k in rng.permutation(len(names)))
            dag = build_network(oracle, order)
            for a, b in itertools.combinations(sorted(names), 2):
                rest = frozenset(names) - {a, b}
                for z_set in subsets(rest):
                    report.cases += 1
                    q = SeparationQuery.make({a}, {b}, z_set)
                    if d_separated(dag, q) and not oracle.ci({a}, {b}, z_set):
                        _fail(
                            report,
                            case=i,
                            order=list(order),
                            pair=[a, b],
                            table_seed=seed + i,
                            z=sorted(z_set),
                        )
    return report


def suite_components(seed: int = 0, n_vars: int = 4, samples: int = 100) -> SuiteReport:
    """Component structure must not depend on the construction order."""
    report = SuiteReport("components", seed, {"n_vars": n_vars, "samples": samples})
    for i in range(samples):
        table = random_spb(n_vars, seed + i)
        oracle = CiOracle(table)
        partitions = {
            connected_components(build_network(oracle, perm))
            for perm in itertools.permutations(table.universe.variables)
        }
        report.cases += 1
        if len(partitions) != 1:
            _fail(
                report,
                case=i,
                distinct_partitions=sorted(str(p) for p in partitions),
                table_seed=seed + i,
            )
    return report


def _relation_checks(report: SuiteReport, oracle: CiOracle, label: str) -> None:
    names = sorted(oracle.universe.variables)
    for a, b in itertools.combinations(names, 2):
        mi = mutually_irrelevant(oracle, a, b)
        uc = uncoupled(oracle, a, b)
        ur = unrelated(oracle, a, b)
        report.cases += 1
        if uc.holds != ur.holds:
            _fail(report, kind="uncoupled_vs_unrelated", source=label, pair=[a, b],
                  uncoupled=uc.holds, unrelated=ur.holds)
        if uc.holds and not mi.holds:
            _fail(report, kind="relevant_implies_coupled", source=label, pair=[a, b])


def suite_relations(seed: int = 0, n_vars: int = 4, samples: int = 100) -> SuiteReport:
    """Uncoupled must equal unrelated, and relevance must imply coupling.

    The paired-coin fixture must show the strict gap between irrelevance and
    uncoupling, with the known non-transitivity witness.
    """
    report = SuiteReport("relations", seed, {"n_vars": n_vars, "samples": samples})

    xor = CiOracle(xor_table())
    report.cases += 1
    gap_ok = (
        mutually_irrelevant(xor, "x", "y").holds
        and not uncoupled(xor, "x", "y").holds
        and not unrelated(xor, "x", "y").holds
    )
    trans = is_transitive(xor)
    if not gap_ok or trans.holds or trans.witness != ("x", "z", "y"):
        _fail(report, kind="xor_fixture", gap_ok=gap_ok,
              transitive=trans.holds, witness=list(trans.witness or ()))

    for i in range(samples):
        table = random_spb(min(n_vars, 5), seed + i)
        _relation_checks(report, CiOracle(table), f"spb:{seed + i}")
    for i in range(max(1, samples // 4)):
        g = random_gaussian(min(n_vars, 5), seed + 10_000 + i)
        _relation_checks(report, CiOracle(g), f"gaussian:{seed + 10_000 + i}")
    return report


def _ordered_bipartitions(names: frozenset[str]):
    pool = sorted(names)
    out = []
    for mask in range(1, 2 ** len(pool) - 1):
        side = frozenset(pool[i] for i in range(len(pool)) if mask >> i & 1)
        out.append((side, names - side))
    return out


def _clean_sweep(report: SuiteReport, dist, label: str, rng: np.random.Generator,
                 sampled_triples: int = 200) -> None:
    names = sorted(dist.universe.variables)
    exhaustive = len(names) <= 4
    if exhaustive:
        for e_var in names:
            ground = frozenset(names) - {e_var}
            splits = _ordered_bipartitions(ground)
            for (x1, x2), (y1, y2), (z1, z2) in itertools.product(splits, splits, splits):
                report.cases += 1
                result = check_clean(dist, PartitionTriple(x1, x2, y1, y2, z1, z2, e_var))
                if result.status == VIOLATION:
                    _fail(report, source=label, e=e_var,
                          x1=sorted(x1), y1=sorted(y1), z1=sorted(z1))
    else:
        ground_splits = {
            e_var: _ordered_bipartitions(frozenset(names) - {e_var}) for e_var in names
        }
        for _ in range(sampled_triples):
            e_var = names[int(rng.integers(len(names)))]
            splits = ground_splits[e_var]
            picks = rng.integers(len(splits), size=3)
            (x1, x2), (y1, y2), (z1, z2) = (splits[int(k)] for k in picks)
            report.cases += 1
            result = check_clean(dist, PartitionTriple(x1, x2, y1, y2, z1, z2, e_var))
            if result.status == VIOLATION:
                _fail(report, source=label, e=e_var,
                      x1=sorted(x1), y1=sorted(y1), z1=sorted(z1))


def suite_clean(seed: int = 0, n_vars: int = 5, samples: int = 500) -> SuiteReport:
    """The partition-triple implication must never be violated.

    Exhaustive partition triples through four variables, 200 sampled triples
    at five; run over both random binary tables and random Gaussians.
    """
    report = SuiteReport("clean", seed, {"n_vars": n_vars, "samples": samples})
    rng = np.random.default_rng(seed)
    for i, n in enumerate(_sizes(samples, min(n_vars, 5), n_min=3)):
        _clean_sweep(report, random_spb(n, seed + i), f"spb:{seed + i}", rng)
    for i, n in enumerate(_sizes(samples, min(n_vars, 5), n_min=3)):
        g_seed = seed + 100_000 + i
        _clean_sweep(report, random_gaussian(n, g_seed), f"gaussian:{g_seed}", rng)
    return report


def _random_blocks(rng: np.random.Generator, ground: list[str]) -> PtBinBlocks:
    """Random eight-way block assignment with both first blocks non-empty."""
    while True:
        codes = rng.integers(8, size=len(ground))
        groups = [frozenset(g for g, c in zip(ground, codes) if c == k) for k in range(8)]
        if groups[0] and groups[4]:
            return PtBinBlocks(*groups)


def suite_pt_bin(seed: int = 0, n_vars: int = 5, samples: int = 200) -> SuiteReport:
    """The eight-block reformulation must agree with the partition form.

    Agreement is checked on random (table, blocks) pairs whose first blocks
    are non-empty (the partition form requires non-empty intersection cells),
    and no sweep may produce a violation.
    """
    report = SuiteReport("pt-bin", seed, {"n_vars": n_vars, "samples": samples})
    rng = np.random.default_rng(seed)
    for i, n in enumerate(_sizes(samples, min(n_vars, 5), n_min=3)):
        table = random_spb(n, seed + i)
        names = sorted(table.universe.variables)
        e_var = names[int(rng.integers(len(names)))]
        ground = [v for v in names if v != e_var]
        blocks = _random_blocks(rng, ground)
        report.cases += 1
        by_blocks = check_pt_bin(table, blocks, e_var)
        by_partitions = check_clean(table, blocks.as_partition_triple(e_var))
        if (by_blocks.status, by_blocks.r1_holds, by_blocks.r2_holds) != (
            by_partitions.status,
            by_partitions.r1_holds,
            by_partitions.r2_holds,
        ):
            _fail(report, kind="disagreement", table_seed=seed + i, e=e_var,
                  blocks=[sorted(b) for b in blocks.as_tuple()],
                  block_result=by_blocks.to_json_dict(),
                  partition_result=by_partitions.to_json_dict())
        if by_blocks.status == VIOLATION:
            _fail(report, kind="violation", table_seed=seed + i, e=e_var,
                  blocks=[sorted(b) for b in blocks.as_tuple()])
    return report


def suite_gaussian_props(seed: int = 0, n_vars: int = 5, samples: int = 100) -> SuiteReport:
    """Composition and marginal weak transitivity must hold for Gaussians."""
    report = SuiteReport(
        "gaussian-props",
        seed,
        {"n_vars": n_vars, "samples": samples, "unification": "structurally_satisfied"},
    )
    for i, n in enumerate(_sizes(samples, min(n_vars, 6), n_min=3)):
        g = random_gaussian(n, seed + i)
        violations = gaussian_axioms_check(g)
        report.cases += 1
        if violations:
            _fail(report, case=i, model_seed=seed + i,
                  violations=[v.prop for v in violations[:5]])
    return report


def suite_transitivity(seed: int = 0, n_vars: int = 5, samples: int = 200) -> SuiteReport:
    """Random binary tables and Gaussians must be transitive; the paired-coin
    fixture must not be."""
    report = SuiteReport("transitivity", seed, {"n_vars": n_vars, "samples": samples})

    report.cases += 1
    xor_result = is_transitive(CiOracle(xor_table()))
    if xor_result.holds or xor_result.witness != ("x", "z", "y"):
        _fail(report, kind="xor_fixture", holds=xor_result.holds,
              witness=list(xor_result.witness or ()))

    for i, n in enumerate(_sizes(samples, min(n_vars, 5))):
        report.cases += 1
        result = is_transitive(CiOracle(random_spb(n, seed + i)))
        if not result.holds:
            _fail(report, kind="spb", table_seed=seed + i,
                  witness=list(result.witness))
    for i, n in enumerate(_sizes(max(1, samples // 2), min(n_vars, 5))):
        g_seed = seed + 100_000 + i
        report.cases += 1
        result = is_transitive(CiOracle(random_gaussian(n, g_seed)))
        if not result.holds:
            _fail(report, kind="gaussian", model_seed=g_seed,
                  witness=list(result.witness))
    return report


def xor_hypothesis_table() -> JointTable:
    """The paired-coin table with the first coin relabeled as a hypothesis."""
    base = xor_table()
    renamed = Universe(("h", "y", "z"), base.universe.domains)
    return JointTable(renamed, base.probs)


def _chain_rule_errors(table: JointTable, cover: HypothesisCover, net_type: int):
    net = build_similarity(table, cover, net_type)
    for ln in net.locals:
        restricted = restrict_to_hypotheses(table, cover.h, ln.hypotheses)
        local = marginalize(restricted, ln.dag.construction_order)
        yield ln, factorization_max_error(local, ln.dag)


def suite_simnet_equiv(seed: int = 0, n_vars: int = 5, samples: int = 50) -> SuiteReport:
    """The two inclusion rules must coincide on strictly positive tables.

    The paired-coin hypothesis fixture must diverge exactly on the second
    coin, and every local network must reconstruct its restricted joint.
    """
    report = SuiteReport("simnet-equiv", seed, {"n_vars": n_vars, "samples": samples})

    fixture = xor_hypothesis_table()
    fixture_cover = HypothesisCover("h", ((0, 1),))
    outcome = types_equivalent(fixture, fixture_cover)
    report.cases += 1
    if outcome.equivalent or [d.only_related for d in outcome.divergences] != [("y",)]:
        _fail(report, kind="xor_fixture", report=outcome.to_json_dict())

    for i, n in enumerate(_sizes(samples, min(n_vars, 5))):
        table = random_spb(n, seed + i)
        h = table.universe.variables[0]
        cover = HypothesisCover(h, ((0, 1),))
        report.cases += 1
        outcome = types_equivalent(table, cover)
        if not outcome.equivalent:
            _fail(report, kind="divergence", table_seed=seed + i,
                  report=outcome.to_json_dict())
        for net_type in (1, 2):
            for ln, err in _chain_rule_errors(table, cover, net_type):
                report.cases += 1
                if err > CHAIN_RULE_TOL:
                    _fail(report, kind="chain_rule", table_seed=seed + i,
                          net_type=net_type, hypotheses=list(ln.hypotheses),
                          error=err)
    return report


SUITES = {
    "axioms": suite_axioms,
    "dsep-soundness": suite_dsep_soundness,
    "components": suite_components,
    "relations": suite_relations,
    "clean": suite_clean,
    "pt-bin": suite_pt_bin,
    "gaussian-props": suite_gaussian_props,
    "transitivity": suite_transitivity,
    "simnet-equiv": suite_simnet_equiv,
}


def run_suite(
    name: str,
    seed: int = 0,
    n_vars: int | None = None,
    samples: int | None = None,
) -> SuiteReport:
    """Run a named suite; unknown names raise KeyError."""
    fn = SUITES[name]
    kwargs: dict = {"seed": seed}
    if n_vars is not None:
        kwargs["n_vars"] = n_vars
    if samples is not None:
        kwargs["samples"] = samples
    started = time.perf_counter()
    report = fn(**kwargs)
    report.wall_time = time.perf_counter() - started
    return report
