"""Minimal Bayesian-network construction, d-separation, and minimality audits.

A network is built from a conditional-independence oracle under a
construction order: each node's parents are the smallest predecessor subset
that screens it off from the remaining predecessors.  Separation queries run
on a linear-time reachability scheme validated against the definitional
enumeration of active trails.
"""

from __future__ import annotations

import itertools
import json
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .dist_oracle import CiOracle, JointTable, _validate_sets
from .errors import InvalidOrder, InvalidSets
from .model_core import (
    DependencyModel,
    Triplet,
    Universe,
    _as_name_set,
    subsets,
    subsets_lex,
)


@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph with construction-order metadata.

    Every parent set lies among the node's predecessors in the construction
    order, which makes acyclicity structural.
    """

    universe: Universe
    parents: dict[str, frozenset[str]]
    construction_order: tuple[str, ...]

    def __post_init__(self) -> None:
        names = self.universe.names
        if frozenset(self.construction_order) != names or len(
            self.construction_order
        ) != len(names):
            raise InvalidOrder("construction order must list every variable exactly once")
        if set(self.parents) != set(names):
            raise ValueError("parents must be given for every variable")
        seen: set[str] = set()
        for v in self.construction_order:
            if not self.parents[v] <= seen:
                raise ValueError(f"parents of {v} must precede it in the construction order")
            seen.add(v)

    def children(self, v: str) -> frozenset[str]:
        return self._children_map()[v]

    def _children_map(self) -> dict[str, frozenset[str]]:
        cached = self.__dict__.get("_children")
        if cached is None:
            out: dict[str, set[str]] = {v: set() for v in self.construction_order}
            for child, pars in self.parents.items():
                for p in pars:
                    out[p].add(child)
            cached = {v: frozenset(c) for v, c in out.items()}
            self.__dict__["_children"] = cached
        return cached

    def edges(self) -> Iterator[tuple[str, str]]:
        for child in self.construction_order:
            for parent in sorted(self.parents[child]):
                yield parent, child

    def neighbors(self, v: str) -> frozenset[str]:
        return self.parents[v] | self.children(v)

    def to_json_dict(self) -> dict:
        return {
            "order": list(self.construction_order),
            "parents": {v: sorted(self.parents[v]) for v in self.construction_order},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Dag":
        order = tuple(data["order"])
        universe = Universe.binary(*order)
        parents = {v: frozenset(data["parents"].get(v, ())) for v in order}
        return cls(universe, parents, order)


@dataclass(frozen=True)
class Trail:
    """A simple path in the underlying undirected graph, given by its nodes."""

    nodes: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.nodes) < 2 or len(set(self.nodes)) != len(self.nodes):
            raise ValueError("a trail is a simple path between distinct nodes")

    def links(self, dag: Dag) -> tuple[tuple[str, str], ...]:
        """The traversed edges in their graph orientation (parent, child)."""
        out = []
        for a, b in zip(self.nodes, self.nodes[1:]):
            out.append((a, b) if b in dag.children(a) else (b, a))
        return tuple(out)


@dataclass(frozen=True)
class SeparationQuery:
    """Three disjoint node sets: are x_set and y_set separated given z_set?"""

    x_set: frozenset[str]
    y_set: frozenset[str]
    z_set: frozenset[str]

    @classmethod
    def make(
        cls,
        x_set: Iterable[str] | str,
        y_set: Iterable[str] | str,
        z_set: Iterable[str] | str = (),
    ) -> "SeparationQuery":
        return cls(_as_name_set(x_set), _as_name_set(y_set), _as_name_set(z_set))


def minimal_parents(oracle: CiOracle, order: Sequence[str], position: int) -> frozenset[str]:
    """Smallest predecessor subset screening the node at ``position`` (1-based).

    Candidates are scanned in ascending cardinality, lexicographically within
    a cardinality, so the first hit has no qualifying proper subset and ties
    break deterministically.
    """
    order = _validated_order(oracle.universe, order)
    if not 1 <= position <= len(order):
        raise InvalidOrder(f"position {position} outside 1..{len(order)}")
    node = order[position - 1]
    preceding = frozenset(order[: position - 1])
    for candidate in subsets(preceding):
        if oracle.ci({node}, preceding - candidate, candidate):
            return candidate
    raise AssertionError("the full predecessor set always qualifies")


def build_network(oracle: CiOracle, order: Sequence[str] | None = None) -> Dag:
    """Minimal Bayesian network of the oracle's model under ``order``.

    Omitting the order uses the universe listing order.
    """
    order = _validated_order(oracle.universe, order)
    parents = {
        node: minimal_parents(oracle, order, i + 1) for i, node in enumerate(order)
    }
    return Dag(oracle.universe, parents, order)


def _validated_order(universe: Universe, order: Sequence[str] | None) -> tuple[str, ...]:
    if order is None:
        return universe.variables
    order = tuple(order)
    if len(order) != len(universe.variables) or frozenset(order) != universe.names:
        raise InvalidOrder("order must be a permutation of the universe")
    return order


def ancestors(dag: Dag, v: str) -> frozenset[str]:
    """Nodes with a directed path of positive length to ``v``."""
    out: set[str] = set()
    stack = list(dag.parents[v])
    while stack:
        u = stack.pop()
        if u not in out:
            out.add(u)
            stack.extend(dag.parents[u])
    return frozenset(out)


def descendants(dag: Dag, v: str) -> frozenset[str]:
    """Nodes reachable from ``v`` by a directed path of positive length."""
    out: set[str] = set()
    stack = list(dag.children(v))
    while stack:
        u = stack.pop()
        if u not in out:
            out.add(u)
            stack.extend(dag.children(u))
    return frozenset(out)


def _ancestral(dag: Dag, z_set: frozenset[str]) -> frozenset[str]:
    closed = set(z_set)
    for z in z_set:
        closed.update(ancestors(dag, z))
    return frozenset(closed)


def _validate_query(dag: Dag, q: SeparationQuery) -> None:
    try:
        _validate_sets(dag.universe, q.x_set, q.y_set, q.z_set)
    except InvalidSets:
        raise
    if not q.x_set or not q.y_set:
        raise InvalidSets("x_set and y_set must be non-empty")


def d_separated(dag: Dag, q: SeparationQuery) -> bool:
    """Whether no active trail joins x_set and y_set with respect to z_set.

    Runs a reachability scan over (node, arrival-direction) states: arriving
    from a child permits any move unless the node is conditioned on; arriving
    from a parent permits descending, or ascending exactly when the node has
    itself or a descendant in the conditioning set.
    """
    _validate_query(dag, q)
    conditioned = q.z_set
    collider_open = _ancestral(dag, conditioned)
    seen: set[tuple[str, bool]] = set()
    # True means the node was entered from a child (or is a source).
    stack: list[tuple[str, bool]] = [(x, True) for x in sorted(q.x_set)]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        node, from_child = state
        if node in q.y_set:
            return False
        if from_child:
            if node not in conditioned:
                stack.extend((p, True) for p in dag.parents[node])
                stack.extend((c, False) for c in dag.children(node))
        else:
            if node not in conditioned:
                stack.extend((c, False) for c in dag.children(node))
            if node in collider_open:
                stack.extend((p, True) for p in dag.parents[node])
    return True


def all_trails(dag: Dag, start: str, end: str) -> list[Trail]:
    """Every simple path between two nodes in the underlying graph."""
    out: list[Trail] = []
    path = [start]
    on_path = {start}

    def walk(v: str) -> None:
        if v == end:
            out.append(Trail(tuple(path)))
            return
        for nxt in sorted(dag.neighbors(v)):
            if nxt not in on_path:
                path.append(nxt)
                on_path.add(nxt)
                walk(nxt)
                path.pop()
                on_path.remove(nxt)

    if start != end:
        walk(start)
    return out


def trail_active(dag: Dag, trail: Trail, z_set: frozenset[str]) -> bool:
    """Definitional activeness: head-to-head nodes need support in z_set,
    every other interior node must avoid it."""
    opened = _ancestral(dag, z_set)
    nodes = trail.nodes
    for i in range(1, len(nodes) - 1):
        prev_node, node, next_node = nodes[i - 1], nodes[i], nodes[i + 1]
        head_to_head = prev_node in dag.parents[node] and next_node in dag.parents[node]
        if head_to_head:
            if node not in opened:
                return False
        elif node in z_set:
            return False
    return True


def d_separated_by_enumeration(dag: Dag, q: SeparationQuery) -> bool:
    """Separation by explicitly enumerating trails; the definitional oracle."""
    _validate_query(dag, q)
    for a in sorted(q.x_set):
        for b in sorted(q.y_set):
            for trail in all_trails(dag, a, b):
                if trail_active(dag, trail, q.z_set):
                    return False
    return True


def connecting_trail(dag: Dag, start: str, end: str) -> Trail | None:
    """Shortest undirected path between two nodes, or None if disconnected."""
    if start == end:
        return None
    back: dict[str, str] = {start: start}
    frontier = [start]
    while frontier:
        nxt: list[str] = []
        for v in frontier:
            for u in sorted(dag.neighbors(v)):
                if u not in back:
                    back[u] = v
                    if u == end:
                        nodes = [end]
                        while nodes[-1] != start:
                            nodes.append(back[nodes[-1]])
                        return Trail(tuple(reversed(nodes)))
                    nxt.append(u)
        frontier = nxt
    return None


def connected_components(dag: Dag) -> tuple[tuple[str, ...], ...]:
    """Partition into maximal trail-connected node sets.

    Members are sorted by name and components by their least member.
    """
    remaining = set(dag.universe.variables)
    comps: list[tuple[str, ...]] = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        frontier = [seed]
        while frontier:
            v = frontier.pop()
            for u in dag.neighbors(v):
                if u not in comp:
                    comp.add(u)
                    frontier.append(u)
        remaining -= comp
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: c[0])
    return tuple(comps)


@dataclass(frozen=True)
class MinimalityViolation:
    """A node whose parent set shrinks: the oracle releases ``subset``."""

    node: str
    subset: frozenset[str]


def audit_minimality(dag: Dag, oracle: CiOracle) -> list[MinimalityViolation]:
    """Report every node and non-empty parent subset the oracle lets go.

    Empty means no parent set is reducible.  Missing edges are not audited;
    only proper-subset reducibility of the recorded parents.
    """
    out: list[MinimalityViolation] = []
    for node in dag.construction_order:
        pars = dag.parents[node]
        for sub in subsets_lex(pars):
            if sub and oracle.ci({node}, sub, pars - sub):
                out.append(MinimalityViolation(node, sub))
    return out


def factorization_max_error(table: JointTable, dag: Dag) -> float:
    """Largest gap between the joint and the product of per-node conditionals.

    Conditionals with zero-probability parent assignments contribute a zero
    factor, matching the joint they reconstruct.
    """
    if dag.universe.names != table.universe.names:
        raise InvalidSets("table and network must share a universe")
    node_margs = {}
    parent_margs = {}
    for node in dag.construction_order:
        pars = tuple(sorted(dag.parents[node]))
        node_margs[node] = (pars, table.marginal((node,) + pars))
        parent_margs[node] = table.marginal(pars) if pars else None
    axis_of = {v: i for i, v in enumerate(table.universe.variables)}
    worst = 0.0
    for assignment in np.ndindex(table.probs.shape):
        prod = 1.0
        for node in dag.construction_order:
            pars, joint_m = node_margs[node]
            idx = (assignment[axis_of[node]],) + tuple(assignment[axis_of[p]] for p in pars)
            num = float(joint_m[idx])
            if pars:
                den = float(parent_margs[node][tuple(assignment[axis_of[p]] for p in pars)])
            else:
                den = 1.0
            prod *= num / den if den > 0.0 else 0.0
        worst = max(worst, abs(prod - float(table.probs[assignment])))
    return worst


def random_dag(n_nodes: int, max_edges: int, rng: np.random.Generator) -> Dag:
    """Uniformly seeded DAG over u1..un with at most ``max_edges`` edges."""
    names = tuple(f"u{i + 1}" for i in range(n_nodes))
    pairs = list(itertools.combinations(range(n_nodes), 2))
    cap = min(max_edges, len(pairs))
    n_edges = int(rng.integers(0, cap + 1))
    chosen = rng.choice(len(pairs), size=n_edges, replace=False) if n_edges else []
    parents: dict[str, set[str]] = {v: set() for v in names}
    for k in chosen:
        i, j = pairs[int(k)]
        parents[names[j]].add(names[i])
    return Dag(
        Universe.binary(*names),
        {v: frozenset(p) for v, p in parents.items()},
        names,
    )


def burglary_model() -> DependencyModel:
    """The alarm-story dependency model: two sensors, an alarm, a patrol.

    Sensor outcomes are independent given burglary, the alarm depends on the
    burglary only through the sensors, and the patrol only through the alarm.
    """
    universe = Universe(
        ("burglary", "sensorA", "sensorB", "alarm", "patrol"),
        tuple(("yes", "no") for _ in range(5)),
    )
    return DependencyModel.of(
        universe,
        (
            Triplet.make({"sensorA"}, {"sensorB"}, {"burglary"}),
            Triplet.make({"alarm"}, {"burglary"}, {"sensorA", "sensorB"}),
            Triplet.make({"patrol"}, {"burglary", "sensorA", "sensorB"}, {"alarm"}),
        ),
    )


def burglary_network() -> Dag:
    """The shipped five-node alarm-story network fixture."""
    text = resources.files("graphoid").joinpath("data/burglary_dag.json").read_text()
    return Dag.from_json_dict(json.loads(text))
