import itertools

import numpy as np
import pytest

from graphoid import (
    CheckResult,
    CiOracle,
    GaussianModel,
    JointTable,
    PartitionTriple,
    PtBinBlocks,
    Universe,
    check_clean,
    check_pt_bin,
    gaussian_axioms_check,
    is_transitive,
    mutually_irrelevant,
    mutually_irrelevant_sets,
    random_gaussian,
    random_spb,
    uncoupled,
    unrelated,
)
from graphoid.errors import InvalidPartition, UniverseTooLarge
from graphoid.relevance import ANTECEDENT_FAILS, CONSEQUENT_HOLDS, VIOLATION


def pivot_block_table():
    """Dependent pair (a1, a2), free coin b, pivot e leaning on a1 alone.

    Joint: P(a1,a2) * P(b) * P(e | a1), all entries positive.
    """
    pair = np.array([[0.4, 0.1], [0.1, 0.4]])
    coin = np.array([0.55, 0.45])
    e_given_a1 = np.array([[0.7, 0.3], [0.3, 0.7]])
    probs = np.einsum("ij,k,il->ijkl", pair, coin, e_given_a1)
    return JointTable(Universe.binary("a1", "a2", "b", "e"), probs)


class TestMutuallyIrrelevant:
    def test_xor_coins(self, xor_oracle):
        assert mutually_irrelevant(xor_oracle, "x", "y").holds

    def test_xor_coin_vs_pair(self, xor_oracle):
        verdict = mutually_irrelevant(xor_oracle, "x", "z")
        assert not verdict.holds
        assert verdict.witness == frozenset()

    def test_two_variable_independent_table(self):
        table = JointTable(Universe.binary("x", "y"), np.full((2, 2), 0.25))
        assert mutually_irrelevant(CiOracle(table), "x", "y").holds

    def test_witness_is_least_violating_set(self):
        # e depends on a1 only given nothing, but not given a1 itself, so the
        # least witness for (a2, e) has to be scanned, not assumed empty.
        oracle = CiOracle(pivot_block_table())
        verdict = mutually_irrelevant(oracle, "a2", "e")
        assert not verdict.holds
        assert verdict.witness == frozenset()

    def test_same_variable_rejected(self, xor_oracle):
        with pytest.raises(ValueError):
            mutually_irrelevant(xor_oracle, "x", "x")


class TestMutuallyIrrelevantSets:
    def test_xor_pairs(self, xor_oracle):
        assert mutually_irrelevant_sets(xor_oracle, {"x"}, {"y"})
        assert not mutually_irrelevant_sets(xor_oracle, {"x"}, {"y", "z"})

    def test_union_composition(self):
        # irrelevance of (A,B) and (A,C) must extend to (A, B+C)
        for seed in range(6):
            table = random_spb(4, seed)
            oracle = CiOracle(table)
            names = sorted(table.universe.variables)
            for a in names:
                rest = [n for n in names if n != a]
                for b, c in itertools.combinations(rest, 2):
                    if mutually_irrelevant_sets(
                        oracle, {a}, {b}
                    ) and mutually_irrelevant_sets(oracle, {a}, {c}):
                        assert mutually_irrelevant_sets(oracle, {a}, {b, c})


class TestUncoupled:
    def test_xor_coins_coupled(self, xor_oracle):
        assert not uncoupled(xor_oracle, "x", "y").holds

    def test_fully_independent_table(self):
        table = JointTable(Universe.binary("a", "b", "c"), np.full((2, 2, 2), 1 / 8))
        verdict = uncoupled(CiOracle(table), "a", "b")
        assert verdict.holds
        assert verdict.witness == (frozenset({"a"}), frozenset({"b", "c"}))

    def test_two_block_witness(self, blocks_table):
        verdict = uncoupled(CiOracle(blocks_table), "x", "y")
        assert verdict.holds
        assert verdict.witness == (frozenset({"x", "w"}), frozenset({"y", "v"}))


class TestUnrelated:
    def test_xor_connected_through_pair(self, xor_oracle):
        verdict = unrelated(xor_oracle, "x", "y")
        assert not verdict.holds
        assert verdict.witness.nodes[0] == "x"
        assert verdict.witness.nodes[-1] == "y"

    def test_verdict_is_order_invariant(self, xor_oracle):
        from graphoid import build_network, connected_components

        partitions = {
            connected_components(build_network(xor_oracle, perm))
            for perm in itertools.permutations(("x", "y", "z"))
        }
        assert len(partitions) == 1

    def test_two_block_table(self, blocks_table):
        oracle = CiOracle(blocks_table)
        assert unrelated(oracle, "x", "y").holds
        assert not unrelated(oracle, "x", "w").holds


class TestRelationTheorems:
    def test_uncoupled_equals_unrelated(self):
        sources = [CiOracle(random_spb(4, s)) for s in range(8)]
        sources += [CiOracle(random_gaussian(4, s)) for s in range(4)]
        from graphoid import xor_table

        sources.append(CiOracle(xor_table()))
        for oracle in sources:
            for a, b in itertools.combinations(sorted(oracle.universe.variables), 2):
                assert uncoupled(oracle, a, b).holds == unrelated(oracle, a, b).holds

    def test_uncoupled_implies_mutually_irrelevant(self, blocks_table):
        oracles = [CiOracle(blocks_table)] + [CiOracle(random_spb(4, s)) for s in range(4)]
        for oracle in oracles:
            for a, b in itertools.combinations(sorted(oracle.universe.variables), 2):
                if uncoupled(oracle, a, b).holds:
                    assert mutually_irrelevant(oracle, a, b).holds

    def test_xor_gap(self, xor_oracle):
        assert mutually_irrelevant(xor_oracle, "x", "y").holds
        assert not uncoupled(xor_oracle, "x", "y").holds


class TestTransitivity:
    def test_xor_witness(self, xor_oracle):
        result = is_transitive(xor_oracle)
        assert not result.holds
        assert result.witness == ("x", "z", "y")

    def test_spb_samples_transitive(self):
        for seed in range(10):
            assert is_transitive(CiOracle(random_spb(4, seed))).holds

    def test_gaussian_samples_transitive(self):
        for seed in range(10):
            assert is_transitive(CiOracle(random_gaussian(4, seed))).holds

    def test_coupled_implies_relevant_when_transitive(self):
        oracles = [CiOracle(random_spb(4, s)) for s in range(6)]
        for oracle in oracles:
            if not is_transitive(oracle).holds:
                continue
            for a, b in itertools.combinations(sorted(oracle.universe.variables), 2):
                if not uncoupled(oracle, a, b).holds:
                    assert not mutually_irrelevant(oracle, a, b).holds

    def test_bound(self):
        with pytest.raises(UniverseTooLarge):
            is_transitive(
                CiOracle(
                    GaussianModel(
                        Universe.reals(*[f"u{i}" for i in range(9)]),
                        np.zeros(9),
                        np.eye(9),
                    )
                )
            )


class TestPartitionTriple:
    def test_nonempty_sides_required(self):
        with pytest.raises(InvalidPartition):
            PartitionTriple(
                frozenset(), frozenset({"a", "b"}),
                frozenset({"a"}), frozenset({"b"}),
                frozenset({"a"}), frozenset({"b"}),
                "e",
            )

    def test_covers_must_match(self):
        with pytest.raises(InvalidPartition):
            PartitionTriple(
                frozenset({"a"}), frozenset({"b"}),
                frozenset({"a"}), frozenset({"c"}),
                frozenset({"a"}), frozenset({"b"}),
                "e",
            )

    def test_distinct_pivot_values(self):
        with pytest.raises(InvalidPartition):
            PartitionTriple(
                frozenset({"a"}), frozenset({"b"}),
                frozenset({"a"}), frozenset({"b"}),
                frozenset({"a"}), frozenset({"b"}),
                "e", (1, 1),
            )

    def test_intersection_cells(self):
        pt = PartitionTriple(
            frozenset({"a", "c"}), frozenset({"b"}),
            frozenset({"a"}), frozenset({"b", "c"}),
            frozenset({"a", "c"}), frozenset({"b"}),
            "e",
        )
        assert pt.r1 == {"a"}
        assert pt.r2 == {"b"}


def identical_partition(table, e="e"):
    ground = table.universe.names - {e}
    one = frozenset({"a1", "a2"})
    two = ground - one
    return PartitionTriple(one, two, one, two, one, two, e)


class TestCheckClean:
    def test_identical_partitions_special_case(self):
        # identical partitions, pivot leaning on the a-block: the b-side
        # disjunct must carry the conclusion
        table = pivot_block_table()
        result = check_clean(table, identical_partition(table))
        assert result.status == CONSEQUENT_HOLDS
        assert result.r1_holds is False
        assert result.r2_holds is True

    def test_antecedent_failure_reported(self, xor_oracle):
        table = pivot_block_table()
        pt = PartitionTriple(
            frozenset({"a1"}), frozenset({"a2", "b"}),
            frozenset({"a1"}), frozenset({"a2", "b"}),
            frozenset({"a1"}), frozenset({"a2", "b"}),
            "e",
        )
        result = check_clean(table, pt)
        assert result.status == ANTECEDENT_FAILS
        assert result.detail == "i1"

    def test_empty_intersection_cell_skipped(self):
        table = pivot_block_table()
        pt = PartitionTriple(
            frozenset({"a1", "a2"}), frozenset({"b"}),
            frozenset({"b", "a2"}), frozenset({"a1"}),
            frozenset({"a1", "a2"}), frozenset({"b"}),
            "e",
        )
        result = check_clean(table, pt)
        assert result.status == ANTECEDENT_FAILS
        assert result.detail in ("empty_r1", "empty_r2")

    def test_never_violated_on_spb_sweep(self):
        for seed in range(10):
            table = random_spb(4, seed)
            names = sorted(table.universe.variables)
            for e in names:
                ground = frozenset(names) - {e}
                sides = [
                    (s, ground - s)
                    for s in map(frozenset, itertools.combinations(sorted(ground), 1))
                ]
                sides += [(b, a) for a, b in sides]
                for (x1, x2), (y1, y2), (z1, z2) in itertools.product(
                    sides, sides, sides
                ):
                    result = check_clean(
                        table, PartitionTriple(x1, x2, y1, y2, z1, z2, e)
                    )
                    assert result.status != VIOLATION

    def test_never_violated_on_gaussian_sweep(self):
        for seed in range(10):
            g = random_gaussian(4, seed)
            names = sorted(g.universe.variables)
            for e in names:
                ground = frozenset(names) - {e}
                sides = [
                    (s, ground - s)
                    for s in map(frozenset, itertools.combinations(sorted(ground), 1))
                ]
                for (x1, x2), (y1, y2), (z1, z2) in itertools.product(
                    sides, sides, sides
                ):
                    result = check_clean(g, PartitionTriple(x1, x2, y1, y2, z1, z2, e))
                    assert result.status != VIOLATION

    def test_non_transitive_fixture_violates_the_implication(self, xor):
        # the paired-coin table sits outside the strictly positive family and
        # is not transitive, so some partition triple must produce a genuine
        # violation (satisfying the implication everywhere forces transitivity)
        coins = frozenset({"x"}), frozenset({"y"})
        pt = PartitionTriple(*coins, *coins, *coins, "z", (0, 1))
        result = check_clean(xor, pt)
        assert result.status == VIOLATION
        assert result.r1_holds is False and result.r2_holds is False

    def test_gaussian_block_structure_consequent(self):
        # (u1, u2) correlated block independent of u3; pivot u4 tied to u1
        cov = np.array(
            [
                [1.0, 0.6, 0.0, 0.5],
                [0.6, 1.0, 0.0, 0.3],
                [0.0, 0.0, 1.0, 0.0],
                [0.5, 0.3, 0.0, 1.0],
            ]
        )
        g = GaussianModel(Universe.reals("u1", "u2", "u3", "u4"), np.zeros(4), cov)
        one = frozenset({"u1", "u2"})
        two = frozenset({"u3"})
        result = check_clean(g, PartitionTriple(one, two, one, two, one, two, "u4"))
        assert result.status == CONSEQUENT_HOLDS
        assert result.r2_holds is True


class TestCheckPtBin:
    def test_agrees_with_partition_form(self):
        rng = np.random.default_rng(0)
        for seed in range(60):
            table = random_spb(4, seed)
            names = sorted(table.universe.variables)
            e = names[int(rng.integers(len(names)))]
            ground = [v for v in names if v != e]
            while True:
                codes = rng.integers(8, size=len(ground))
                groups = [
                    frozenset(g for g, c in zip(ground, codes) if c == k)
                    for k in range(8)
                ]
                if groups[0] and groups[4]:
                    break
            blocks = PtBinBlocks(*groups)
            by_blocks = check_pt_bin(table, blocks, e)
            by_partitions = check_clean(table, blocks.as_partition_triple(e))
            assert (by_blocks.status, by_blocks.r1_holds, by_blocks.r2_holds) == (
                by_partitions.status,
                by_partitions.r1_holds,
                by_partitions.r2_holds,
            )

    def test_agreement_on_nontrivial_consequent(self):
        table = pivot_block_table()
        blocks = PtBinBlocks(
            frozenset({"a1", "a2"}), frozenset(), frozenset(), frozenset(),
            frozenset({"b"}), frozenset(), frozenset(), frozenset(),
        )
        result = check_pt_bin(table, blocks, "e")
        assert result.status == CONSEQUENT_HOLDS
        assert result.r2_holds is True
        mirrored = check_clean(table, blocks.as_partition_triple("e"))
        assert (mirrored.status, mirrored.r1_holds, mirrored.r2_holds) == (
            result.status,
            result.r1_holds,
            result.r2_holds,
        )

    def test_empty_first_block_makes_disjunct_trivial(self):
        table = pivot_block_table()
        blocks = PtBinBlocks(
            frozenset(), frozenset({"a1", "a2"}), frozenset(), frozenset(),
            frozenset({"b"}), frozenset(), frozenset(), frozenset(),
        )
        result = check_pt_bin(table, blocks, "e")
        assert result.status in (CONSEQUENT_HOLDS, ANTECEDENT_FAILS)
        if result.status == CONSEQUENT_HOLDS:
            assert result.r1_holds is True

    def test_binary_pivot_required(self, xor):
        blocks = PtBinBlocks(
            frozenset({"x"}), frozenset(), frozenset(), frozenset(),
            frozenset({"y"}), frozenset(), frozenset(), frozenset(),
        )
        with pytest.raises(InvalidPartition):
            check_pt_bin(xor, blocks, "z")

    def test_blocks_must_cover(self):
        table = pivot_block_table()
        blocks = PtBinBlocks(
            frozenset({"a1"}), frozenset(), frozenset(), frozenset(),
            frozenset({"b"}), frozenset(), frozenset(), frozenset(),
        )
        with pytest.raises(InvalidPartition):
            check_pt_bin(table, blocks, "e")

    def test_never_violated_on_spb_samples(self):
        rng = np.random.default_rng(1)
        for seed in range(30):
            table = random_spb(4, seed)
            names = sorted(table.universe.variables)
            e = names[int(rng.integers(len(names)))]
            ground = [v for v in names if v != e]
            codes = rng.integers(8, size=len(ground))
            blocks = PtBinBlocks(
                *[
                    frozenset(g for g, c in zip(ground, codes) if c == k)
                    for k in range(8)
                ]
            )
            assert check_pt_bin(table, blocks, e).status != VIOLATION


class TestGaussianAxioms:
    def test_random_models_clean(self):
        for seed in range(10):
            assert gaussian_axioms_check(random_gaussian(4, seed)) == []

    def test_diagonal_clean(self):
        g = GaussianModel(Universe.reals("a", "b", "c"), np.zeros(3), np.eye(3))
        assert gaussian_axioms_check(g) == []

    def test_block_structure_exercises_weak_transitivity(self):
        # (a, b) correlated, c free: premises of marginal weak transitivity
        # hold nontrivially with e = b, and the conclusion must too
        cov = np.array([[1.0, 0.7, 0.0], [0.7, 1.0, 0.0], [0.0, 0.0, 1.0]])
        g = GaussianModel(Universe.reals("a", "b", "c"), np.zeros(3), cov)
        assert gaussian_axioms_check(g) == []

    def test_bound(self):
        with pytest.raises(UniverseTooLarge):
            gaussian_axioms_check(
                GaussianModel(
                    Universe.reals(*[f"u{i}" for i in range(7)]),
                    np.zeros(7),
                    np.eye(7),
                )
            )


def test_check_result_serialization():
    result = CheckResult(CONSEQUENT_HOLDS, True, False)
    assert result.to_json_dict() == {
        "status": "consequent_holds",
        "r1_holds": True,
        "r2_holds": False,
        "detail": None,
    }


def test_relation_verdict_serialization(xor_oracle):
    verdict = mutually_irrelevant(xor_oracle, "x", "z")
    data = verdict.to_json_dict()
    assert data == {"relation": "mutually_irrelevant", "holds": False, "witness": {"z": []}}
    coupled = uncoupled(xor_oracle, "x", "y").to_json_dict()
    assert coupled == {"relation": "uncoupled", "holds": False, "witness": None}
