"""Relevance relations between variables and transitivity of relevance.

Three relations are computed independently so their theoretical coincidences
can be cross-validated rather than assumed:

* mutually irrelevant -- (x, y | Z) holds for every conditioning set Z;
* uncoupled -- the universe splits into two marginally independent halves
  separating x from y (found by brute-force partition scan);
* unrelated -- x and y land in different components of a minimal network.

The module also checks the partition-triple implication that makes a
distribution family transitive, its eight-block reformulation for binary
tables, and the covariance properties that settle the Gaussian case.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass

from .bayesnet import build_network, connecting_trail
from .dist_oracle import (
    DISCRETE_TOL,
    GAUSSIAN_TOL,
    CiOracle,
    GaussianModel,
    JointTable,
    ci_holds_discrete,
    ci_holds_gaussian,
    condition_on,
    marginalize,
)
from .errors import InvalidPartition, UniverseTooLarge
from .model_core import subsets_lex

MAX_PAIR_SWEEP_VARS = 12
MAX_TRANSITIVITY_VARS = 8
MAX_GAUSSIAN_SWEEP_VARS = 6

MUTUALLY_IRRELEVANT = "mutually_irrelevant"
UNCOUPLED = "uncoupled"
UNRELATED = "unrelated"

ANTECEDENT_FAILS = "antecedent_fails"
CONSEQUENT_HOLDS = "consequent_holds"
VIOLATION = "violation"


@dataclass(frozen=True)
class RelationVerdict:
    """Outcome of one relation query, with substantiating evidence.

    The witness is present exactly when it proves something: a conditioning
    set for a failed irrelevance claim, the separating partition for a
    successful uncoupling, a connecting trail for a failed unrelatedness.
    """

    relation: str
    holds: bool
    witness: object | None = None

    def to_json_dict(self) -> dict:
        witness: object | None = None
        if self.relation == MUTUALLY_IRRELEVANT and not self.holds:
            witness = {"z": sorted(self.witness)}
        elif self.relation == UNCOUPLED and self.holds:
            first, second = self.witness
            witness = {"u1": sorted(first), "u2": sorted(second)}
        elif self.relation == UNRELATED and not self.holds:
            witness = {"trail": list(self.witness.nodes)}
        return {"relation": self.relation, "holds": self.holds, "witness": witness}


def _pair_sweep_guard(oracle: CiOracle) -> tuple[str, ...]:
    names = oracle.universe.variables
    if len(names) > MAX_PAIR_SWEEP_VARS:
        raise UniverseTooLarge(
            f"{len(names)} variables exceed the sweep bound of {MAX_PAIR_SWEEP_VARS}"
        )
    return names


def mutually_irrelevant(oracle: CiOracle, x: str, y: str) -> RelationVerdict:
    """Whether ({x}, {y} | Z) holds for every Z avoiding x and y.

    On failure the witness is the lexicographically least violating Z.
    """
    names = _pair_sweep_guard(oracle)
    if x == y:
        raise ValueError("x and y must differ")
    oracle.universe.require({x, y})
    rest = frozenset(names) - {x, y}
    for z_set in subsets_lex(rest):
        if not oracle.ci({x}, {y}, z_set):
            return RelationVerdict(MUTUALLY_IRRELEVANT, False, z_set)
    return RelationVerdict(MUTUALLY_IRRELEVANT, True)


def mutually_irrelevant_sets(
    oracle: CiOracle, a_set: Iterable[str] | str, b_set: Iterable[str] | str
) -> bool:
    """Set-level irrelevance: (A, B | Z) for every Z outside A and B."""
    names = _pair_sweep_guard(oracle)
    a = oracle.universe.require(a_set)
    b = oracle.universe.require(b_set)
    if not a or not b or a & b:
        raise ValueError("the sets must be disjoint and non-empty")
    rest = frozenset(names) - a - b
    return all(oracle.ci(a, b, z_set) for z_set in subsets_lex(rest))


def uncoupled(oracle: CiOracle, x: str, y: str) -> RelationVerdict:
    """Scan every partition with x on one side and y on the other.

    This is the definitional brute-force oracle; it never consults a network,
    so network-based answers can be validated against it.  The witness is the
    first qualifying partition in lexicographic scan order.
    """
    names = _pair_sweep_guard(oracle)
    if x == y:
        raise ValueError("x and y must differ")
    oracle.universe.require({x, y})
    rest = frozenset(names) - {x, y}
    for with_x in subsets_lex(rest):
        side_x = with_x | {x}
        side_y = (rest - with_x) | {y}
        if oracle.ci(side_x, side_y, ()):
            return RelationVerdict(UNCOUPLED, True, (side_x, side_y))
    return RelationVerdict(UNCOUPLED, False)


def unrelated(oracle: CiOracle, x: str, y: str) -> RelationVerdict:
    """Disconnectedness in one minimal network under the listing order.

    Component structure is the same for every construction order, so a single
    network suffices.  A connecting trail witnesses failure.
    """
    if x == y:
        raise ValueError("x and y must differ")
    oracle.universe.require({x, y})
    dag = build_network(oracle)
    trail = connecting_trail(dag, x, y)
    if trail is None:
        return RelationVerdict(UNRELATED, True)
    return RelationVerdict(UNRELATED, False, trail)


@dataclass(frozen=True)
class TransitivityResult:
    holds: bool
    witness: tuple[str, str, str] | None = None

    def to_json_dict(self) -> dict:
        return {"holds": self.holds, "witness": list(self.witness) if self.witness else None}


def is_transitive(oracle: CiOracle) -> TransitivityResult:
    """Whether pairwise relevance chains across every ordered variable triple.

    Relevance is the negation of mutual irrelevance, computed by the subset
    sweep rather than through network connectivity.  On failure the least
    triple (a, b, c) with relevant(a,b), relevant(b,c), irrelevant(a,c)
    is returned.
    """
    names = sorted(oracle.universe.variables)
    if len(names) > MAX_TRANSITIVITY_VARS:
        raise UniverseTooLarge(
            f"{len(names)} variables exceed the bound of {MAX_TRANSITIVITY_VARS}"
        )
    relevant: dict[tuple[str, str], bool] = {}
    for a, b in itertools.combinations(names, 2):
        r = not mutually_irrelevant(oracle, a, b).holds
        relevant[(a, b)] = relevant[(b, a)] = r
    for a, b, c in itertools.permutations(names, 3):
        if relevant[(a, b)] and relevant[(b, c)] and not relevant[(a, c)]:
            return TransitivityResult(False, (a, b, c))
    return TransitivityResult(True)


@dataclass(frozen=True)
class PartitionTriple:
    """Three two-way partitions of the same variable set, plus a pivot variable.

    Each side must be non-empty, the pivot is excluded from the partitioned
    set, and the two pivot values must differ.
    """

    x1: frozenset[str]
    x2: frozenset[str]
    y1: frozenset[str]
    y2: frozenset[str]
    z1: frozenset[str]
    z2: frozenset[str]
    e_var: str
    e_values: tuple[int, int] = (0, 1)

    def __post_init__(self) -> None:
        ground = self.x1 | self.x2
        for one, two in ((self.x1, self.x2), (self.y1, self.y2), (self.z1, self.z2)):
            if not one or not two:
                raise InvalidPartition("partition sides must be non-empty")
            if one & two:
                raise InvalidPartition("partition sides must be disjoint")
            if one | two != ground:
                raise InvalidPartition("all three partitions must cover the same set")
        if self.e_var in ground:
            raise InvalidPartition("the pivot variable cannot be partitioned")
        if self.e_values[0] == self.e_values[1]:
            raise InvalidPartition("the two pivot values must differ")

    @property
    def ground(self) -> frozenset[str]:
        return self.x1 | self.x2

    @property
    def r1(self) -> frozenset[str]:
        return self.x1 & self.y1 & self.z1

    @property
    def r2(self) -> frozenset[str]:
        return self.x2 & self.y2 & self.z2


@dataclass(frozen=True)
class CheckResult:
    """Outcome lattice of a partition-implication check.

    ``antecedent_fails`` when a premise is unmet (including an empty
    intersection cell), ``consequent_holds`` with the side flags when at
    least one disjunct holds, ``violation`` when the premises hold and both
    disjuncts fail.
    """

    status: str
    r1_holds: bool | None = None
    r2_holds: bool | None = None
    detail: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "r1_holds": self.r1_holds,
            "r2_holds": self.r2_holds,
            "detail": self.detail,
        }


def _ci_given_value(
    table: JointTable, a: frozenset[str], b: frozenset[str], e_var: str, value: int, tol: float
) -> bool:
    """Independence of a and b given one specific value of the pivot.

    Holds vacuously when the conditioning value has no probability mass.
    """
    axis = table.universe.index(e_var)
    mass = float(table.probs.sum(axis=tuple(i for i in range(table.probs.ndim) if i != axis))[value])
    if mass <= tol:
        return True
    return ci_holds_discrete(condition_on(table, e_var, value), a, b, (), tol)


def check_clean(
    dist: JointTable | GaussianModel, pt: PartitionTriple, tol: float | None = None
) -> CheckResult:
    """Partition-triple implication behind transitivity of the distribution family.

    Premises: the first partition is independent with the pivot summed out,
    the second given one pivot value, the third given the other.  Conclusion:
    one of the two triple-intersection cells is independent of everything
    else including the pivot.
    """
    if isinstance(dist, GaussianModel):
        return _check_clean_gaussian(dist, pt, tol)
    return _check_clean_discrete(dist, pt, tol)


def _validate_ground(dist, pt: PartitionTriple) -> frozenset[str]:
    names = dist.universe.names
    if pt.e_var not in names:
        raise InvalidPartition(f"unknown pivot variable {pt.e_var}")
    ground = names - {pt.e_var}
    if pt.ground != ground:
        raise InvalidPartition("partitions must cover the universe minus the pivot")
    return ground


def _check_clean_discrete(
    table: JointTable, pt: PartitionTriple, tol: float | None
) -> CheckResult:
    tol = DISCRETE_TOL if tol is None else tol
    ground = _validate_ground(table, pt)
    n_values = len(table.universe.domain(pt.e_var))
    for v in pt.e_values:
        if not 0 <= v < n_values:
            raise InvalidPartition(f"pivot value index {v} out of range")

    if not pt.r1:
        return CheckResult(ANTECEDENT_FAILS, detail="empty_r1")
    if not pt.r2:
        return CheckResult(ANTECEDENT_FAILS, detail="empty_r2")

    base = marginalize(table, ground)
    if not ci_holds_discrete(base, pt.x1, pt.x2, (), tol):
        return CheckResult(ANTECEDENT_FAILS, detail="i1")
    if not _ci_given_value(table, pt.y1, pt.y2, pt.e_var, pt.e_values[0], tol):
        return CheckResult(ANTECEDENT_FAILS, detail="i2")
    if not _ci_given_value(table, pt.z1, pt.z2, pt.e_var, pt.e_values[1], tol):
        return CheckResult(ANTECEDENT_FAILS, detail="i3")

    c1 = ci_holds_discrete(table, pt.r1, {pt.e_var} | (ground - pt.r1), (), tol)
    c2 = ci_holds_discrete(table, pt.r2, {pt.e_var} | (ground - pt.r2), (), tol)
    if c1 or c2:
        return CheckResult(CONSEQUENT_HOLDS, c1, c2)
    return CheckResult(VIOLATION, False, False)


def _check_clean_gaussian(
    g: GaussianModel, pt: PartitionTriple, tol: float | None
) -> CheckResult:
    tol = GAUSSIAN_TOL if tol is None else tol
    ground = _validate_ground(g, pt)

    if not pt.r1:
        return CheckResult(ANTECEDENT_FAILS, detail="empty_r1")
    if not pt.r2:
        return CheckResult(ANTECEDENT_FAILS, detail="empty_r2")

    # Conditioning a Gaussian on a pivot value shifts only the mean, so
    # value-specific premises reduce to conditioning on the pivot variable.
    if not ci_holds_gaussian(g, pt.x1, pt.x2, (), tol):
        return CheckResult(ANTECEDENT_FAILS, detail="i1")
    if not ci_holds_gaussian(g, pt.y1, pt.y2, {pt.e_var}, tol):
        return CheckResult(ANTECEDENT_FAILS, detail="i2")
    if not ci_holds_gaussian(g, pt.z1, pt.z2, {pt.e_var}, tol):
        return CheckResult(ANTECEDENT_FAILS, detail="i3")

    c1 = ci_holds_gaussian(g, pt.r1, {pt.e_var} | (ground - pt.r1), (), tol)
    c2 = ci_holds_gaussian(g, pt.r2, {pt.e_var} | (ground - pt.r2), (), tol)
    if c1 or c2:
        return CheckResult(CONSEQUENT_HOLDS, c1, c2)
    return CheckResult(VIOLATION, False, False)


@dataclass(frozen=True)
class PtBinBlocks:
    """Eight pairwise-disjoint blocks; any block may be empty."""

    a1: frozenset[str]
    a2: frozenset[str]
    a3: frozenset[str]
    a4: frozenset[str]
    b1: frozenset[str]
    b2: frozenset[str]
    b3: frozenset[str]
    b4: frozenset[str]

    def __post_init__(self) -> None:
        blocks = self.as_tuple()
        total = sum(len(b) for b in blocks)
        union = frozenset().union(*blocks)
        if total != len(union):
            raise InvalidPartition("blocks must be pairwise disjoint")

    def as_tuple(self) -> tuple[frozenset[str], ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.b1, self.b2, self.b3, self.b4)

    @property
    def union(self) -> frozenset[str]:
        return frozenset().union(*self.as_tuple())

    def as_partition_triple(self, e_var: str, e_values: tuple[int, int] = (0, 1)) -> PartitionTriple:
        """Regroup the blocks into the three-partition form.

        Requires every resulting partition side to be non-empty.
        """
        return PartitionTriple(
            x1=self.a1 | self.a2 | self.a3 | self.a4,
            x2=self.b1 | self.b2 | self.b3 | self.b4,
            y1=self.a1 | self.a2 | self.b3 | self.b4,
            y2=self.b1 | self.b2 | self.a3 | self.a4,
            z1=self.a1 | self.a3 | self.b2 | self.b4,
            z2=self.b1 | self.b3 | self.a2 | self.a4,
            e_var=e_var,
            e_values=e_values,
        )


def check_pt_bin(
    table: JointTable, blocks: PtBinBlocks, e_var: str, tol: float | None = None
) -> CheckResult:
    """Eight-block reformulation of the partition implication for binary pivots.

    Empty blocks are allowed: an empty first block makes its consequent
    disjunct trivially true.  Under the block-to-partition regrouping this
    check agrees with ``check_clean`` whenever both first blocks are
    non-empty.
    """
    tol = DISCRETE_TOL if tol is None else tol
    names = table.universe.names
    if e_var not in names:
        raise InvalidPartition(f"unknown pivot variable {e_var}")
    if len(table.universe.domain(e_var)) != 2:
        raise InvalidPartition("the pivot variable must be binary")
    ground = names - {e_var}
    if blocks.union != ground:
        raise InvalidPartition("blocks must cover the universe minus the pivot")

    x1 = blocks.a1 | blocks.a2 | blocks.a3 | blocks.a4
    x2 = blocks.b1 | blocks.b2 | blocks.b3 | blocks.b4
    y1 = blocks.a1 | blocks.a2 | blocks.b3 | blocks.b4
    y2 = blocks.b1 | blocks.b2 | blocks.a3 | blocks.a4
    z1 = blocks.a1 | blocks.a3 | blocks.b2 | blocks.b4
    z2 = blocks.b1 | blocks.b3 | blocks.a2 | blocks.a4

    base = marginalize(table, ground)
    if not ci_holds_discrete(base, x1, x2, (), tol):
        return CheckResult(ANTECEDENT_FAILS, detail="i1")
    if not _ci_given_value(table, y1, y2, e_var, 0, tol):
        return CheckResult(ANTECEDENT_FAILS, detail="i2")
    if not _ci_given_value(table, z1, z2, e_var, 1, tol):
        return CheckResult(ANTECEDENT_FAILS, detail="i3")

    c1 = ci_holds_discrete(table, blocks.a1, {e_var} | (ground - blocks.a1), (), tol)
    c2 = ci_holds_discrete(table, blocks.b1, {e_var} | (ground - blocks.b1), (), tol)
    if c1 or c2:
        return CheckResult(CONSEQUENT_HOLDS, c1, c2)
    return CheckResult(VIOLATION, False, False)


@dataclass(frozen=True)
class GaussianPropertyViolation:
    prop: str
    sets: tuple[tuple[str, ...], ...]


def gaussian_axioms_check(
    g: GaussianModel, tol: float | None = None
) -> list[GaussianPropertyViolation]:
    """Sweep composition and marginal weak transitivity over small set triples.

    Composition: I(X,Y|Z) and I(X,W|Z) must give I(X, Y+W | Z).  Marginal
    weak transitivity: I(X,Y) and I(X,Y|e) must give I(X,e) or I(e,Y).  The
    unification property (value-specific independence lifting to the
    variable level) is structurally satisfied because the oracle never takes
    conditioning values, so it is not sweepable and never reported.
    """
    tol = GAUSSIAN_TOL if tol is None else tol
    names = sorted(g.universe.variables)
    if len(names) > MAX_GAUSSIAN_SWEEP_VARS:
        raise UniverseTooLarge(
            f"{len(names)} variables exceed the sweep bound of {MAX_GAUSSIAN_SWEEP_VARS}"
        )
    out: list[GaussianPropertyViolation] = []

    def ci(a, b, c) -> bool:
        return ci_holds_gaussian(g, a, b, c, tol)

    for codes in itertools.product(range(5), repeat=len(names)):
        x = frozenset(n for n, c in zip(names, codes) if c == 1)
        y = frozenset(n for n, c in zip(names, codes) if c == 2)
        w = frozenset(n for n, c in zip(names, codes) if c == 3)
        z = frozenset(n for n, c in zip(names, codes) if c == 4)
        if not x or not y or not w:
            continue
        if tuple(sorted(y)) > tuple(sorted(w)):
            continue  # composition is symmetric in the two merged sets
        if ci(x, y, z) and ci(x, w, z) and not ci(x, y | w, z):
            out.append(
                GaussianPropertyViolation(
                    "composition",
                    (tuple(sorted(x)), tuple(sorted(y)), tuple(sorted(w)), tuple(sorted(z))),
                )
            )

    for codes in itertools.product(range(3), repeat=len(names)):
        x = frozenset(n for n, c in zip(names, codes) if c == 1)
        y = frozenset(n for n, c in zip(names, codes) if c == 2)
        if not x or not y:
            continue
        for e in names:
            if e in x or e in y:
                continue
            if ci(x, y, ()) and ci(x, y, {e}) and not (ci(x, {e}, ()) or ci({e}, y, ())):
                out.append(
                    GaussianPropertyViolation(
                        "marginal_weak_transitivity",
                        (tuple(sorted(x)), tuple(sorted(y)), (e,)),
                    )
                )

    out.sort(key=lambda v: (v.prop, v.sets))
    return out

