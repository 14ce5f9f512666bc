"""Concrete probability backends exposing a uniform conditional-independence oracle.

Two families are supported: discrete joint tables (dense arrays over the
Cartesian product of finite domains) and regular Gaussian models (mean vector
plus positive-definite covariance).  An explicit dependency model can also
back the oracle, answering by set membership after graphoid closure.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidSets,
    SingularConditioning,
    UniverseTooLarge,
    UnknownVariable,
    ZeroProbabilityEvidence,
)
from .model_core import (
    DependencyModel,
    Triplet,
    Universe,
    graphoid_closure,
    iter_disjoint_triples,
)

DISCRETE_TOL = 1e-9
GAUSSIAN_TOL = 1e-7
PROB_SUM_TOL = 1e-12
COV_SYMMETRY_TOL = 1e-12
CONDITION_LIMIT = 1e12
SPB_ENTRY_FLOOR = 1e-3
GAUSSIAN_RIDGE = 1e-2
MAX_EXTRACT_VARS = 5


def _validate_sets(
    universe: Universe,
    x_set: Iterable[str] | str,
    y_set: Iterable[str] | str,
    z_set: Iterable[str] | str,
) -> tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]:
    """Check disjointness and membership; return the sets as sorted tuples."""
    try:
        xs = universe.require(x_set)
        ys = universe.require(y_set)
        zs = universe.require(z_set)
    except UnknownVariable as exc:
        raise InvalidSets(f"unknown variable: {exc}") from None
    if xs & ys or xs & zs or ys & zs:
        raise InvalidSets("query sets must be pairwise disjoint")
    return tuple(sorted(xs)), tuple(sorted(ys)), tuple(sorted(zs))


@dataclass(frozen=True, eq=False)
class JointTable:
    """Dense discrete joint distribution over a universe.

    ``probs`` is indexed by the mixed-radix encoding of full assignments with
    the last-listed variable varying fastest (C order).  Entries must be
    non-negative and sum to one within 1e-12.
    """

    universe: Universe
    probs: np.ndarray

    def __post_init__(self) -> None:
        shape = tuple(len(d) for d in self.universe.domains)
        if any(size < 2 for size in shape):
            raise ValueError("every variable of a joint table needs at least two values")
        arr = np.asarray(self.probs, dtype=float).reshape(shape)
        if not np.isfinite(arr).all() or (arr < 0).any():
            raise ValueError("probabilities must be finite and non-negative")
        if abs(float(arr.sum()) - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {arr.sum()!r}, not 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def strictly_positive(self) -> bool:
        return bool((self.probs > 0).all())

    def domain_size(self, name: str) -> int:
        return len(self.universe.domain(name))

    def marginal(self, names: tuple[str, ...]) -> np.ndarray:
        """Marginal array over ``names``, axes in the requested order."""
        keep = [self.universe.index(n) for n in names]
        drop = tuple(i for i in range(self.probs.ndim) if i not in set(keep))
        m = self.probs.sum(axis=drop) if drop else self.probs
        ordered = sorted(keep)
        return m.transpose([ordered.index(k) for k in keep])

    def to_json_dict(self) -> dict:
        return {
            "variables": [
                {"name": v, "values": list(d)}
                for v, d in zip(self.universe.variables, self.universe.domains)
            ],
            "probs": self.probs.ravel(order="C").tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "JointTable":
        universe = Universe(
            tuple(v["name"] for v in data["variables"]),
            tuple(tuple(v["values"]) for v in data["variables"]),
        )
        return cls(universe, np.asarray(data["probs"], dtype=float))


@dataclass(frozen=True, eq=False)
class GaussianModel:
    """Regular Gaussian distribution: finite mean, positive-definite covariance."""

    universe: Universe
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.universe.variables)
        mean = np.asarray(self.mean, dtype=float).reshape(n)
        cov = np.asarray(self.covariance, dtype=float).reshape(n, n)
        if not (np.isfinite(mean).all() and np.isfinite(cov).all()):
            raise ValueError("mean and covariance must be finite")
        if float(np.abs(cov - cov.T).max()) > COV_SYMMETRY_TOL:
            raise ValueError("covariance must be symmetric")
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ValueError("covariance must be positive definite") from None
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    def indices(self, names: Iterable[str]) -> list[int]:
        return [self.universe.index(n) for n in names]

    def to_json_dict(self) -> dict:
        return {
            "variables": list(self.universe.variables),
            "mean": self.mean.tolist(),
            "cov": self.covariance.tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "GaussianModel":
        universe = Universe.reals(*data["variables"])
        return cls(universe, np.asarray(data["mean"]), np.asarray(data["cov"]))


def marginalize(table: JointTable, keep: Iterable[str]) -> JointTable:
    """Sum out every variable not in ``keep``; the output sums to one."""
    kept = table.universe.require(keep)
    if not kept:
        raise ValueError("cannot marginalize away every variable")
    names = tuple(v for v in table.universe.variables if v in kept)
    return JointTable(table.universe.restricted_to(names), table.marginal(names))


def condition_on(table: JointTable, var: str, value: int) -> JointTable:
    """Conditional distribution given ``var`` equals the value at ``value`` index."""
    axis = table.universe.index(var)
    if not 0 <= value < len(table.universe.domain(var)):
        raise ValueError(f"value index {value} out of range for {var}")
    slab = np.take(table.probs, value, axis=axis)
    mass = float(slab.sum())
    if mass <= 0.0:
        raise ZeroProbabilityEvidence(f"P({var}={value}) = 0")
    remaining = tuple(v for v in table.universe.variables if v != var)
    return JointTable(table.universe.restricted_to(remaining), slab / mass)


def ci_discrepancy_discrete(
    table: JointTable,
    x_set: Iterable[str] | str,
    y_set: Iterable[str] | str,
    z_set: Iterable[str] | str = (),
    tol: float = DISCRETE_TOL,
) -> float:
    """Largest |P(X|Y,Z) - P(X|Z)| over assignments with usable conditioning mass.

    Assignments whose conditioning event has probability at most ``tol``
    impose no constraint: the conditional is undefined (or the statement holds
    vacuously when P(Z) is zero).
    """
    xs, ys, zs = _validate_sets(table.universe, x_set, y_set, z_set)
    m = table.marginal(xs + ys + zs)
    d_x = int(np.prod([table.domain_size(v) for v in xs])) if xs else 1
    d_y = int(np.prod([table.domain_size(v) for v in ys])) if ys else 1
    d_z = int(np.prod([table.domain_size(v) for v in zs])) if zs else 1
    p_xyz = m.reshape(d_x, d_y, d_z)
    p_yz = p_xyz.sum(axis=0)
    p_xz = p_xyz.sum(axis=1)
    p_z = p_yz.sum(axis=0)
    usable = (p_yz > tol) & (p_z > tol)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        left = p_xyz / p_yz[None, :, :]
        right = (p_xz / p_z[None, :])[:, None, :]
        gap = np.abs(left - right)
    gap = np.where(usable[None, :, :], gap, 0.0)
    return float(gap.max())


def ci_holds_discrete(
    table: JointTable,
    x_set: Iterable[str] | str,
    y_set: Iterable[str] | str,
    z_set: Iterable[str] | str = (),
    tol: float = DISCRETE_TOL,
) -> bool:
    """Whether (x_set, y_set | z_set) holds for the table at tolerance ``tol``."""
    return ci_discrepancy_discrete(table, x_set, y_set, z_set, tol) <= tol


def ci_residual_gaussian(
    g: GaussianModel,
    x_set: Iterable[str] | str,
    y_set: Iterable[str] | str,
    z_set: Iterable[str] | str = (),
) -> float:
    """Largest |entry| of the X-Y block of the covariance conditioned on Z.

    The conditional block is the Schur complement S_XY - S_XZ S_ZZ^-1 S_ZY,
    computed through a symmetric factorization of S_ZZ.  Values given to the
    conditioning variables never enter: the answer is a covariance property.
    """
    xs, ys, zs = _validate_sets(g.universe, x_set, y_set, z_set)
    if not xs or not ys:
        return 0.0
    xi, yi = g.indices(xs), g.indices(ys)
    cov = g.covariance
    block = cov[np.ix_(xi, yi)]
    if zs:
        zi = g.indices(zs)
        s_zz = cov[np.ix_(zi, zi)]
        eigs = np.linalg.eigvalsh(s_zz)
        if eigs[0] <= 0.0 or eigs[-1] / eigs[0] > CONDITION_LIMIT:
            raise SingularConditioning(
                f"conditioning block over {zs} is numerically singular"
            )
        chol = np.linalg.cholesky(s_zz)
        w_y = np.linalg.solve(chol, cov[np.ix_(zi, yi)])
        w_x = np.linalg.solve(chol, cov[np.ix_(zi, xi)])
        block = block - w_x.T @ w_y
    return float(np.abs(block).max())


def ci_holds_gaussian(
    g: GaussianModel,
    x_set: Iterable[str] | str,
    y_set: Iterable[str] | str,
    z_set: Iterable[str] | str = (),
    tol: float = GAUSSIAN_TOL,
) -> bool:
    return ci_residual_gaussian(g, x_set, y_set, z_set) <= tol


@dataclass
class CiOracle:
    """Uniform conditional-independence query surface over any backend.

    The backend is a JointTable, a GaussianModel, or a DependencyModel; a
    model backend answers by set membership after graphoid closure.  Queries
    are pure functions of the inputs, safe for parallel fan-out.
    """

    backend: JointTable | GaussianModel | DependencyModel
    tolerance: float | None = None

    def __post_init__(self) -> None:
        if self.tolerance is None:
            if isinstance(self.backend, JointTable):
                self.tolerance = DISCRETE_TOL
            elif isinstance(self.backend, GaussianModel):
                self.tolerance = GAUSSIAN_TOL
            elif isinstance(self.backend, DependencyModel):
                self.tolerance = 0.0
            else:
                raise TypeError(f"unsupported backend {type(self.backend).__name__}")
        if self.tolerance < 0.0:
            raise ValueError("tolerance must be non-negative")
        self._closed: DependencyModel | None = None

    @property
    def universe(self) -> Universe:
        return self.backend.universe

    def ci(
        self,
        x_set: Iterable[str] | str,
        y_set: Iterable[str] | str,
        z_set: Iterable[str] | str = (),
    ) -> bool:
        if isinstance(self.backend, JointTable):
            return ci_holds_discrete(self.backend, x_set, y_set, z_set, self.tolerance)
        if isinstance(self.backend, GaussianModel):
            return ci_holds_gaussian(self.backend, x_set, y_set, z_set, self.tolerance)
        xs, ys, zs = _validate_sets(self.universe, x_set, y_set, z_set)
        if self._closed is None:
            self._closed = graphoid_closure(self.backend)
        return Triplet.make(xs, ys, zs) in self._closed.triplets

    def discrepancy(
        self,
        x_set: Iterable[str] | str,
        y_set: Iterable[str] | str,
        z_set: Iterable[str] | str = (),
    ) -> float:
        """Numeric gap behind the verdict; defined for table and Gaussian backends."""
        if isinstance(self.backend, JointTable):
            return ci_discrepancy_discrete(self.backend, x_set, y_set, z_set, self.tolerance)
        if isinstance(self.backend, GaussianModel):
            return ci_residual_gaussian(self.backend, x_set, y_set, z_set)
        raise TypeError("discrepancy is undefined for a dependency-model backend")


def extract_model(oracle: CiOracle) -> DependencyModel:
    """Dependency model holding exactly the triplets the oracle affirms."""
    names = oracle.universe.variables
    if len(names) > MAX_EXTRACT_VARS:
        raise UniverseTooLarge(
            f"{len(names)} variables exceed the extraction bound of {MAX_EXTRACT_VARS}"
        )
    held = (
        Triplet(x, y, z)
        for x, y, z in iter_disjoint_triples(names)
        if oracle.ci(x, y, z)
    )
    return DependencyModel.of(oracle.universe, held)


def random_spb(n: int, seed: int) -> JointTable:
    """Strictly positive binary distribution over ``n`` variables, seeded.

    Entries are drawn uniformly from [1e-3, 1) and normalized, keeping every
    configuration bounded away from zero.
    """
    if not 2 <= n <= 6:
        raise ValueError("random_spb supports 2..6 variables")
    rng = np.random.default_rng(seed)
    raw = rng.uniform(SPB_ENTRY_FLOOR, 1.0, size=2**n)
    universe = Universe.binary(*(f"u{i + 1}" for i in range(n)))
    return JointTable(universe, raw / raw.sum())


def random_gaussian(n: int, seed: int) -> GaussianModel:
    """Regular Gaussian over ``n`` variables: covariance A @ A.T + 0.01 I, seeded."""
    if not 2 <= n <= 8:
        raise ValueError("random_gaussian supports 2..8 variables")
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1.0, 1.0, size=(n, n))
    mean = rng.uniform(-1.0, 1.0, size=n)
    cov = a @ a.T + GAUSSIAN_RIDGE * np.eye(n)
    universe = Universe.reals(*(f"u{i + 1}" for i in range(n)))
    return GaussianModel(universe, mean, cov)


def xor_table() -> JointTable:
    """Two independent fair coins x, y plus z recording the joint outcome.

    x and y stay independent both marginally and given z, yet each is
    dependent on z; the distribution is the stock example of pairwise
    relevance failing to chain.
    """
    coin = ("head", "tail")
    pair = tuple(f"{a},{b}" for a in coin for b in coin)
    universe = Universe(("x", "y", "z"), (coin, coin, pair))
    probs = np.zeros((2, 2, 4))
    for i in range(2):
        for j in range(2):
            probs[i, j, 2 * i + j] = 0.25
    return JointTable(universe, probs)


def product_table(left: JointTable, right: JointTable) -> JointTable:
    """Independent product of two tables over disjoint variable sets."""
    if left.universe.names & right.universe.names:
        raise InvalidSets("product requires disjoint universes")
    universe = Universe(
        left.universe.variables + right.universe.variables,
        left.universe.domains + right.universe.domains,
    )
    return JointTable(universe, np.multiply.outer(left.probs, right.probs))
