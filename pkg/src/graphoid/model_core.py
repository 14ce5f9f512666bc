"""Variable universes, independence triplets, and dependency models.

A dependency model is an explicit finite set of triplets ``(X, Y | Z)`` over
a universe of variables, read as "X is independent of Y given Z".  The model
is a *graphoid* when it is closed under five axioms: trivial independence,
symmetry, decomposition, weak union, and contraction.  This module computes
and checks that closure by exhaustive enumeration at desk scale.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .errors import InvalidTriplet, UniverseTooLarge, UnknownVariable

VariableId = str

# Enumeration bound for closure and axiom checking: candidate triplets grow
# as 4^n, so anything past 8 variables is out of desk range.
MAX_CLOSURE_VARS = 8

AXIOM_TRIVIAL = "trivial_independence"
AXIOM_SYMMETRY = "symmetry"
AXIOM_DECOMPOSITION = "decomposition"
AXIOM_WEAK_UNION = "weak_union"
AXIOM_CONTRACTION = "contraction"


def _as_name_set(value: Iterable[str] | str) -> frozenset[str]:
    if isinstance(value, str):
        return frozenset((value,))
    return frozenset(value)


@dataclass(frozen=True)
class Universe:
    """An ordered collection of named variables with finite value domains."""

    variables: tuple[VariableId, ...]
    domains: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        if any(not name for name in self.variables):
            raise ValueError("variable names must be non-empty")
        if len(self.domains) != len(self.variables):
            raise ValueError("one domain per variable required")
        if any(len(dom) == 0 for dom in self.domains):
            raise ValueError("every domain must be non-empty")

    @classmethod
    def binary(cls, *names: str) -> "Universe":
        """Universe of two-valued variables with domains ('0', '1')."""
        return cls(tuple(names), tuple(("0", "1") for _ in names))

    @classmethod
    def reals(cls, *names: str) -> "Universe":
        """Universe for real-valued variables; the domain label is a placeholder."""
        return cls(tuple(names), tuple(("real",) for _ in names))

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def domain(self, name: str) -> tuple[str, ...]:
        return self.domains[self.index(name)]

    def require(self, names: Iterable[str]) -> frozenset[str]:
        """Return ``names`` as a set, raising UnknownVariable on strangers."""
        wanted = _as_name_set(names)
        missing = wanted - self.names
        if missing:
            raise UnknownVariable(", ".join(sorted(missing)))
        return wanted

    def restricted_to(self, keep: Iterable[str]) -> "Universe":
        kept = self.require(keep)
        pairs = [(v, d) for v, d in zip(self.variables, self.domains) if v in kept]
        return Universe(tuple(v for v, _ in pairs), tuple(d for _, d in pairs))


@dataclass(frozen=True)
class Triplet:
    """An ordered independence statement (x_set, y_set | z_set).

    The three sets must be pairwise disjoint.  Empty x or y sets are
    representable; they are required for the trivial-independence axiom.
    """

    x_set: frozenset[str]
    y_set: frozenset[str]
    z_set: frozenset[str]

    def __post_init__(self) -> None:
        if self.x_set & self.y_set or self.x_set & self.z_set or self.y_set & self.z_set:
            raise InvalidTriplet(f"overlapping sets in {self.sort_key()}")

    @classmethod
    def make(
        cls,
        x_set: Iterable[str] | str,
        y_set: Iterable[str] | str,
        z_set: Iterable[str] | str = (),
    ) -> "Triplet":
        return cls(_as_name_set(x_set), _as_name_set(y_set), _as_name_set(z_set))

    def mentioned(self) -> frozenset[str]:
        return self.x_set | self.y_set | self.z_set

    def symmetric(self) -> "Triplet":
        return Triplet(self.y_set, self.x_set, self.z_set)

    def sort_key(self) -> tuple[tuple[str, ...], ...]:
        return (tuple(sorted(self.x_set)), tuple(sorted(self.y_set)), tuple(sorted(self.z_set)))

    def to_json_dict(self) -> dict:
        return {"x": sorted(self.x_set), "y": sorted(self.y_set), "z": sorted(self.z_set)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Triplet":
        return cls.make(data["x"], data["y"], data.get("z", ()))


@dataclass(frozen=True)
class DependencyModel:
    """An explicit set of triplets over a universe."""

    universe: Universe
    triplets: frozenset[Triplet]

    def __post_init__(self) -> None:
        known = self.universe.names
        for t in self.triplets:
            if not t.mentioned() <= known:
                raise InvalidTriplet(
                    f"triplet {t.sort_key()} mentions variables outside the universe"
                )

    @classmethod
    def of(cls, universe: Universe, triplets: Iterable[Triplet] = ()) -> "DependencyModel":
        return cls(universe, frozenset(triplets))

    def contains(self, t: Triplet) -> bool:
        """Exact set membership; no axiom inference is performed."""
        if not t.mentioned() <= self.universe.names:
            raise InvalidTriplet(
                f"triplet {t.sort_key()} mentions variables outside the universe"
            )
        return t in self.triplets

    def __contains__(self, t: Triplet) -> bool:
        return self.contains(t)

    def sorted_triplets(self) -> list[Triplet]:
        return sorted(self.triplets, key=Triplet.sort_key)

    def to_json_dict(self) -> dict:
        return {
            "variables": list(self.universe.variables),
            "triplets": [t.to_json_dict() for t in self.sorted_triplets()],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DependencyModel":
        universe = Universe.binary(*data["variables"])
        return cls.of(universe, (Triplet.from_json_dict(d) for d in data["triplets"]))


@dataclass(frozen=True)
class AxiomViolation:
    """One failed axiom instance: the premises present and the member missing."""

    axiom: str
    premises: tuple[Triplet, ...]
    missing: Triplet

    def sort_key(self):
        return (self.axiom, self.missing.sort_key(), tuple(p.sort_key() for p in self.premises))


def subsets(names: Iterable[str]) -> Iterator[frozenset[str]]:
    """All subsets of ``names``, smallest first, lexicographic within a size."""
    pool = sorted(names)
    for size in range(len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            yield frozenset(combo)


def subsets_lex(names: Iterable[str]) -> Iterator[frozenset[str]]:
    """All subsets of ``names`` in lexicographic order of their sorted tuples."""
    pool = sorted(names)

    def gen(prefix: list[str], start: int) -> Iterator[frozenset[str]]:
        yield frozenset(prefix)
        for i in range(start, len(pool)):
            prefix.append(pool[i])
            yield from gen(prefix, i + 1)
            prefix.pop()

    return gen([], 0)


def iter_disjoint_pairs(names: Iterable[str]) -> Iterator[tuple[frozenset[str], frozenset[str]]]:
    """All ordered pairs of disjoint subsets (3^n of them)."""
    pool = sorted(names)
    for codes in itertools.product((0, 1, 2), repeat=len(pool)):
        first = frozenset(n for n, c in zip(pool, codes) if c == 1)
        second = frozenset(n for n, c in zip(pool, codes) if c == 2)
        yield first, second


def iter_disjoint_triples(
    names: Iterable[str],
) -> Iterator[tuple[frozenset[str], frozenset[str], frozenset[str]]]:
    """All ordered triples of pairwise-disjoint subsets (4^n of them)."""
    pool = sorted(names)
    for codes in itertools.product((0, 1, 2, 3), repeat=len(pool)):
        x = frozenset(n for n, c in zip(pool, codes) if c == 1)
        y = frozenset(n for n, c in zip(pool, codes) if c == 2)
        z = frozenset(n for n, c in zip(pool, codes) if c == 3)
        yield x, y, z


def _check_bound(universe: Universe) -> None:
    if len(universe.variables) > MAX_CLOSURE_VARS:
        raise UniverseTooLarge(
            f"{len(universe.variables)} variables exceed the bound of {MAX_CLOSURE_VARS}"
        )


def graphoid_closure(model: DependencyModel) -> DependencyModel:
    """Least superset of ``model`` closed under the five graphoid axioms.

    A work queue of newly derived triplets drives the fixpoint; contraction
    joins pairs of triplets sharing the same x-set.
    """
    _check_bound(model.universe)
    names = model.universe.variables

    closed: set[Triplet] = set()
    queue: deque[Triplet] = deque()
    by_x: dict[frozenset[str], list[Triplet]] = {}

    def add(t: Triplet) -> None:
        if t not in closed:
            closed.add(t)
            by_x.setdefault(t.x_set, []).append(t)
            queue.append(t)

    # Trivial independence forces (X, {} | Z) for every disjoint X, Z.
    for x_set, z_set in iter_disjoint_pairs(names):
        add(Triplet(x_set, frozenset(), z_set))
    for t in model.triplets:
        add(t)

    while queue:
        t = queue.popleft()
        add(t.symmetric())
        for kept in subsets(t.y_set):
            if kept == t.y_set:
                continue
            add(Triplet(t.x_set, kept, t.z_set))  # decomposition
            add(Triplet(t.x_set, kept, t.z_set | (t.y_set - kept)))  # weak union
        # Contraction: (X,Y|Z) & (X,W|Z+Y) => (X, Y+W | Z), with t on either side.
        zy = t.z_set | t.y_set
        for other in list(by_x.get(t.x_set, ())):
            if other.z_set == zy:
                add(Triplet(t.x_set, t.y_set | other.y_set, t.z_set))
            if t.z_set == other.z_set | other.y_set:
                add(Triplet(t.x_set, other.y_set | t.y_set, other.z_set))

    return DependencyModel(model.universe, frozenset(closed))


def check_graphoid_axioms(model: DependencyModel) -> list[AxiomViolation]:
    """Exhaustively instantiate the five axioms; empty result means graphoid.

    Each violated axiom instance is reported once, with the instantiating
    triplets as premises and the absent member as the witness.  The list is
    sorted for reproducible output.
    """
    _check_bound(model.universe)
    names = model.universe.variables
    present = model.triplets
    out: list[AxiomViolation] = []

    for x_set, z_set in iter_disjoint_pairs(names):
        t = Triplet(x_set, frozenset(), z_set)
        if t not in present:
            out.append(AxiomViolation(AXIOM_TRIVIAL, (), t))

    by_x: dict[frozenset[str], list[Triplet]] = {}
    for t in present:
        by_x.setdefault(t.x_set, []).append(t)

    for t in present:
        sym = t.symmetric()
        if sym not in present:
            out.append(AxiomViolation(AXIOM_SYMMETRY, (t,), sym))
        for kept in subsets(t.y_set):
            if not kept or kept == t.y_set:
                continue
            dec = Triplet(t.x_set, kept, t.z_set)
            if dec not in present:
                out.append(AxiomViolation(AXIOM_DECOMPOSITION, (t,), dec))
            weak = Triplet(t.x_set, kept, t.z_set | (t.y_set - kept))
            if weak not in present:
                out.append(AxiomViolation(AXIOM_WEAK_UNION, (t,), weak))

    for t1 in present:
        if not t1.y_set:
            continue
        zy = t1.z_set | t1.y_set
        for t2 in by_x.get(t1.x_set, ()):
            if not t2.y_set or t2.z_set != zy:
                continue
            joined = Triplet(t1.x_set, t1.y_set | t2.y_set, t1.z_set)
            if joined not in present:
                out.append(AxiomViolation(AXIOM_CONTRACTION, (t1, t2), joined))

    out.sort(key=AxiomViolation.sort_key)
    return out


def restrict(model: DependencyModel, keep: Iterable[str]) -> DependencyModel:
    """Model over the reduced universe with exactly the triplets inside ``keep``."""
    kept = model.universe.require(keep)
    reduced = model.universe.restricted_to(kept)
    return DependencyModel.of(reduced, (t for t in model.triplets if t.mentioned() <= kept))
