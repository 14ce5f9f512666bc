import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphoid import (
    CiOracle,
    GaussianModel,
    JointTable,
    Triplet,
    Universe,
    check_graphoid_axioms,
    ci_holds_discrete,
    ci_holds_gaussian,
    condition_on,
    extract_model,
    marginalize,
    random_gaussian,
    random_spb,
)
from graphoid.dist_oracle import ci_residual_gaussian
from graphoid.errors import (
    InvalidSets,
    SingularConditioning,
    UniverseTooLarge,
    ZeroProbabilityEvidence,
)
from graphoid.model_core import iter_disjoint_triples


def factorization_gap(table, x, y, z, tol=1e-9):
    """Independent check: max |P(x,y|z) - P(x|z) P(y|z)| over usable z."""
    xs, ys, zs = tuple(sorted(x)), tuple(sorted(y)), tuple(sorted(z))
    m = table.marginal(xs + ys + zs)
    d_x = int(np.prod([table.domain_size(v) for v in xs])) if xs else 1
    d_y = int(np.prod([table.domain_size(v) for v in ys])) if ys else 1
    d_z = m.size // (d_x * d_y)
    p = m.reshape(d_x, d_y, d_z)
    p_z = p.sum(axis=(0, 1))
    worst = 0.0
    for k in range(d_z):
        if p_z[k] <= tol:
            continue
        joint = p[:, :, k] / p_z[k]
        px = joint.sum(axis=1)
        py = joint.sum(axis=0)
        worst = max(worst, float(np.abs(joint - np.outer(px, py)).max()))
    return worst


class TestJointTableInvariants:
    def test_sum_enforced(self):
        with pytest.raises(ValueError):
            JointTable(Universe.binary("x", "y"), np.full(4, 0.3))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            JointTable(Universe.binary("x", "y"), [0.5, 0.6, -0.1, 0.0])

    def test_singleton_domain_rejected(self):
        u = Universe(("x",), (("only",),))
        with pytest.raises(ValueError):
            JointTable(u, [1.0])

    def test_strictly_positive_flag(self, xor):
        assert not xor.strictly_positive
        assert random_spb(3, 0).strictly_positive


class TestDiscreteCi:
    def test_xor_marginal_independence(self, xor):
        assert ci_holds_discrete(xor, {"x"}, {"y"})

    def test_xor_given_pair_variable(self, xor):
        assert ci_holds_discrete(xor, {"x"}, {"y"}, {"z"})

    def test_xor_joint_dependence(self, xor):
        assert not ci_holds_discrete(xor, {"x"}, {"y", "z"})

    def test_empty_y_trivially_holds(self, xor):
        assert ci_holds_discrete(xor, {"x"}, set(), {"z"})
        assert ci_holds_discrete(xor, set(), {"x"}, {"z"})

    def test_overlap_rejected(self, xor):
        with pytest.raises(InvalidSets):
            ci_holds_discrete(xor, {"x"}, {"x", "y"})

    def test_unknown_variable_rejected(self, xor):
        with pytest.raises(InvalidSets):
            ci_holds_discrete(xor, {"x"}, {"q"})

    def test_symmetry_on_samples(self, xor):
        tables = [xor] + [random_spb(4, s) for s in range(3)]
        for table in tables:
            names = table.universe.variables
            for x, y, z in iter_disjoint_triples(names):
                assert ci_holds_discrete(table, x, y, z) == ci_holds_discrete(
                    table, y, x, z
                )

    def test_agrees_with_factorization_check(self, xor):
        tables = [xor] + [random_spb(4, s) for s in range(3)]
        tol = 1e-9
        for table in tables:
            for x, y, z in iter_disjoint_triples(table.universe.variables):
                if not x or not y:
                    continue
                gap = factorization_gap(table, x, y, z, tol)
                if ci_holds_discrete(table, x, y, z, tol):
                    assert gap <= 2 * tol
                else:
                    assert gap > 2 * tol

    def test_decomposition_consistency(self):
        table = random_spb(4, 11)
        names = table.universe.variables
        for x, y, z in iter_disjoint_triples(names):
            if len(y) < 2 or not ci_holds_discrete(table, x, y, z):
                continue
            for part in y:
                assert ci_holds_discrete(table, x, y - {part}, z)


class TestGaussianCi:
    def test_diagonal_always_independent(self):
        g = GaussianModel(Universe.reals("a", "b", "c"), np.zeros(3), np.eye(3))
        assert ci_holds_gaussian(g, {"a"}, {"b"})
        assert ci_holds_gaussian(g, {"a"}, {"b"}, {"c"})

    def test_chain_covariance(self):
        cov = np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.5], [0.0, 0.5, 1.0]])
        g = GaussianModel(Universe.reals("v1", "v2", "v3"), np.zeros(3), cov)
        assert ci_holds_gaussian(g, {"v1"}, {"v3"})
        assert not ci_holds_gaussian(g, {"v1"}, {"v3"}, {"v2"})
        assert ci_residual_gaussian(g, {"v1"}, {"v3"}, {"v2"}) == pytest.approx(0.25)

    def test_empty_block_trivially_holds(self):
        g = random_gaussian(3, 0)
        assert ci_holds_gaussian(g, {"u1"}, set(), {"u2"})

    def test_singular_conditioning_detected(self):
        # Correlation 1 - 1e-12 keeps the (a, b) block positive definite but
        # pushes its condition number past the 1e12 regularity limit.
        almost_one = 1.0 - 1e-12
        cov = np.eye(4)
        cov[0, 1] = cov[1, 0] = almost_one
        g = GaussianModel(Universe.reals("a", "b", "c", "d"), np.zeros(4), cov)
        with pytest.raises(SingularConditioning):
            ci_holds_gaussian(g, {"c"}, {"d"}, {"a", "b"})

    def test_symmetry_requirement(self):
        cov = np.array([[1.0, 0.2], [0.3, 1.0]])
        with pytest.raises(ValueError):
            GaussianModel(Universe.reals("a", "b"), np.zeros(2), cov)

    def test_positive_definite_requirement(self):
        cov = np.array([[1.0, 2.0], [2.0, 1.0]])
        with pytest.raises(ValueError):
            GaussianModel(Universe.reals("a", "b"), np.zeros(2), cov)

    def test_symmetry_on_samples(self):
        import itertools

        for seed in range(3):
            g = random_gaussian(4, seed)
            names = g.universe.variables
            for codes in itertools.product(range(4), repeat=4):
                x = {n for n, c in zip(names, codes) if c == 1}
                y = {n for n, c in zip(names, codes) if c == 2}
                z = {n for n, c in zip(names, codes) if c == 3}
                assert ci_holds_gaussian(g, x, y, z) == ci_holds_gaussian(g, y, x, z)

    def test_composition_on_samples(self):
        for seed in range(5):
            g = random_gaussian(4, seed)
            names = g.universe.variables
            import itertools

            for codes in itertools.product(range(4), repeat=4):
                x = {n for n, c in zip(names, codes) if c == 1}
                y = {n for n, c in zip(names, codes) if c == 2}
                w = {n for n, c in zip(names, codes) if c == 3}
                if not x or not y or not w:
                    continue
                if ci_holds_gaussian(g, x, y) and ci_holds_gaussian(g, x, w):
                    assert ci_holds_gaussian(g, x, y | w)


class TestExtractModel:
    def test_xor_model_members(self, xor_oracle):
        m = extract_model(xor_oracle)
        assert Triplet.make("x", "y") in m.triplets
        assert Triplet.make("x", "y", "z") in m.triplets
        assert Triplet.make("x", {"y", "z"}) not in m.triplets

    def test_diagonal_gaussian_fully_independent(self):
        g = GaussianModel(Universe.reals("a", "b", "c"), np.zeros(3), np.eye(3))
        m = extract_model(CiOracle(g))
        assert len(m.triplets) == 4 ** 3  # every disjoint triple holds

    def test_extracted_model_passes_axioms(self):
        for seed in range(3):
            m = extract_model(CiOracle(random_spb(3, seed)))
            assert check_graphoid_axioms(m) == []

    def test_bound(self):
        g = random_gaussian(6, 0)
        with pytest.raises(UniverseTooLarge):
            extract_model(CiOracle(g))


class TestConditionAndMarginal:
    def test_condition_xor_on_pair_value(self, xor):
        point = condition_on(xor, "z", 0)
        assert point.universe.variables == ("x", "y")
        assert point.probs[0, 0] == pytest.approx(1.0)

    def test_condition_requires_mass(self, xor):
        table = condition_on(xor, "x", 0)  # now y=tail,z=(head,head) impossible
        with pytest.raises(ZeroProbabilityEvidence):
            condition_on(table, "z", 2)

    def test_conditional_sums_to_one(self, xor):
        for v in range(4):
            assert condition_on(xor, "z", v).probs.sum() == pytest.approx(1.0)

    def test_marginal_fair_coin(self, xor):
        coin = marginalize(xor, {"x"})
        assert np.allclose(coin.probs, [0.5, 0.5])

    def test_marginal_identity(self, xor):
        assert np.allclose(marginalize(xor, xor.universe.names).probs, xor.probs)

    def test_tower_property(self):
        table = random_spb(5, 3)
        mid = marginalize(table, {"u1", "u2", "u3"})
        assert np.allclose(
            marginalize(mid, {"u1", "u3"}).probs,
            marginalize(table, {"u1", "u3"}).probs,
        )


class TestGenerators:
    def test_spb_deterministic(self):
        a, b = random_spb(3, 7), random_spb(3, 7)
        assert np.array_equal(a.probs, b.probs)

    def test_spb_strictly_positive_and_normalized(self):
        for seed in range(5):
            table = random_spb(4, seed)
            assert table.probs.min() > 0
            assert abs(table.probs.sum() - 1.0) <= 1e-12

    def test_spb_bounds(self):
        with pytest.raises(ValueError):
            random_spb(1, 0)
        with pytest.raises(ValueError):
            random_spb(7, 0)

    def test_gaussian_deterministic(self):
        a, b = random_gaussian(4, 1), random_gaussian(4, 1)
        assert np.array_equal(a.covariance, b.covariance)
        assert np.array_equal(a.mean, b.mean)

    def test_gaussian_valid_and_well_conditioned(self):
        for seed in range(5):
            g = random_gaussian(5, seed)
            eigs = np.linalg.eigvalsh(g.covariance)
            assert eigs.min() >= 1e-2 - 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_table_json_round_trip_bit_exact(seed, n):
    table = random_spb(n, seed)
    text = json.dumps(table.to_json_dict())
    again = JointTable.from_json_dict(json.loads(text))
    assert np.array_equal(again.probs, table.probs)
    assert again.universe == table.universe


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_gaussian_json_round_trip_bit_exact(seed, n):
    g = random_gaussian(n, seed)
    text = json.dumps(g.to_json_dict())
    again = GaussianModel.from_json_dict(json.loads(text))
    assert np.array_equal(again.covariance, g.covariance)
    assert np.array_equal(again.mean, g.mean)


def test_product_table_blocks_independent(blocks_table):
    assert ci_holds_discrete(blocks_table, {"x", "w"}, {"y", "v"})
    assert not ci_holds_discrete(blocks_table, {"x"}, {"w"})
