"""Standard transfinite graphs of rank up to omega.

A graph of finite rank mu is the family {X^0, B, X^1, ..., X^mu}: a set of
0-nodes, branches joining two distinct 0-nodes, and for each rank
1 <= rho <= mu a layer of rho-nodes. Tips are primitive identifiers: the
declared tip universe of rank rho-1 is partitioned among the rho-nodes
(each tip owned by exactly one node). A rho-node may additionally embrace
one exceptional element, a node of some lower rank; distinct rho-nodes
never share their exceptional element, and every node owns at least one
tip. Whether a tip is "really" the end of a one-ended path is the input
author's responsibility and is deliberately not checked here.

Graphs of rank omega-arrow or omega cannot list their infinitely many
layers, so they carry a layer scheme: a uniform template instantiated on
demand. The omega layer (omega-nodes owning omega-arrow tips) is either
declared explicitly or generated by the graded scheme, whose j-th
omega-node embraces the rank-j node of the tower as its exceptional
element. No graph here has omega-arrow nodes.

Extremities of a graph at level mu are the raw material for higher nodes:
the (mu-1)-tips together with the exceptional elements of the mu-nodes.
Two extremities are shorted when the same mu-node contains both.

All structures are immutable after construction; layer materialization for
schemes is cached and idempotent, so sharing between readers is safe.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .errors import DuplicateId, NotAnExtremity, RankTooHigh


class _RankSentinel:
    __slots__ = ("_name", "_order")

    def __init__(self, name: str, order: int):
        self._name = name
        self._order = order

    def __repr__(self):
        return self._name


OMEGA_ARROW = _RankSentinel("omega-arrow", 1)
OMEGA = _RankSentinel("omega", 2)

Rank = "int | _RankSentinel"


def rank_key(rank) -> tuple[int, int]:
    if isinstance(rank, int):
        return (0, rank)
    return (rank._order, 0)


def rank_lt(a, b) -> bool:
    return rank_key(a) < rank_key(b)


def rank_le(a, b) -> bool:
    return rank_key(a) <= rank_key(b)


def rank_str(rank) -> str:
    return repr(rank) if isinstance(rank, _RankSentinel) else str(rank)


def parse_rank(text: str):
    if text == "omega":
        return OMEGA
    if text == "omega-arrow":
        return OMEGA_ARROW
    return int(text)


@dataclass(frozen=True)
class Extremity:
    """A (level-1)-tip or the exceptional node of a level-node."""

    kind: str  # "tip" or "node"
    ident: str
    rank: object  # the tip's rank, or the node's rank

    def describe(self) -> str:
        return f"{self.kind}:{self.ident}"

    def sort_key(self):
        return (self.kind, self.ident)


@dataclass(frozen=True)
class StandardNode:
    ident: str
    rank: object
    tips: frozenset
    exceptional: str | None = None

    @staticmethod
    def make(ident, rank, tips, exceptional=None) -> "StandardNode":
        return StandardNode(ident, rank, frozenset(tips), exceptional)


_TIP_RE = re.compile(r"^t(\d+)_(\d+)$")
_NODE_RE = re.compile(r"^x(\d+)_(\d+)$")
_OTIP_RE = re.compile(r"^T_(\d+)$")
_ONODE_RE = re.compile(r"^W_(\d+)$")


class TowerScheme:
    """Uniform layers: width-k ranks where node x{rho}_i owns tip t{rho-1}_i."""

    def __init__(self, width: int):
        if width < 1:
            raise ValueError("scheme width must be at least 1")
        self.width = width

    def tips_at(self, rank: int) -> frozenset:
        return frozenset(f"t{rank}_{i}" for i in range(self.width))

    def nodes_at(self, rank: int) -> dict:
        if rank < 1:
            raise ValueError("scheme layers start at rank 1")
        return {
            f"x{rank}_{i}": StandardNode.make(
                f"x{rank}_{i}", rank, (f"t{rank - 1}_{i}",)
            )
            for i in range(self.width)
        }

    def node_rank(self, ident: str) -> int | None:
        m = _NODE_RE.match(ident)
        if m and int(m.group(2)) < self.width and int(m.group(1)) >= 1:
            return int(m.group(1))
        return None

    def tip_owner(self, ident: str) -> str | None:
        m = _TIP_RE.match(ident)
        if m and int(m.group(2)) < self.width:
            return f"x{int(m.group(1)) + 1}_{m.group(2)}"
        return None

    def graded_omega_node(self, j: int) -> StandardNode:
        # Omega-node j owns the j-th omega-arrow tip; for j >= 1 it also
        # embraces the rank-j tower node as its exceptional element.
        exceptional = f"x{j}_0" if j >= 1 else None
        return StandardNode.make(f"W_{j}", OMEGA, (f"T_{j}",), exceptional)

    def params(self) -> tuple:
        return ("tower", self.width)


class StandardGraph:
    def __init__(
        self,
        name: str,
        rank,
        nodes0: Iterable[str],
        branches: dict[str, tuple[str, str]],
        tips: dict[int, Iterable[str]] | None = None,
        nodes: Iterable[StandardNode] = (),
        scheme: TowerScheme | None = None,
        omega_tips: Iterable[str] | None = None,
        omega_nodes: Iterable[StandardNode] = (),
        graded_omega: bool = False,
    ):
        self.name = name
        self.rank = rank
        self.nodes0 = frozenset(nodes0)
        self.branches = dict(branches)
        self._tip_layers = {r: frozenset(ids) for r, ids in (tips or {}).items()}
        self._node_layers: dict[int, dict[str, StandardNode]] = {}
        self.scheme = scheme
        self.graded_omega = graded_omega
        if isinstance(rank, _RankSentinel) and scheme is None:
            raise ValueError("graphs of unbounded rank need a layer scheme")
        if not isinstance(rank, _RankSentinel) and scheme is not None:
            raise ValueError("finite-rank graphs list their layers explicitly")
        seen = set(self.nodes0)
        for node in nodes:
            if node.ident in seen:
                raise DuplicateId(f"node id {node.ident!r} declared twice")
            seen.add(node.ident)
            self._node_layers.setdefault(node.rank, {})[node.ident] = node
        self.omega_tips = None if omega_tips is None else frozenset(omega_tips)
        self.omega_nodes: dict[str, StandardNode] = {}
        for node in omega_nodes:
            if node.ident in seen:
                raise DuplicateId(f"node id {node.ident!r} declared twice")
            seen.add(node.ident)
            self.omega_nodes[node.ident] = node
        if rank is OMEGA and not graded_omega and self.omega_tips is None:
            self.omega_tips = frozenset()
        self._layer_cache: dict[int, dict[str, StandardNode]] = {}

    # -- layers ---------------------------------------------------------------

    def finite_rank(self) -> int | None:
        return self.rank if isinstance(self.rank, int) else None

    def layer_nodes(self, rank: int) -> dict[str, StandardNode]:
        if rank < 1:
            raise ValueError("node layers start at rank 1")
        if self.scheme is not None:
            if rank not in self._layer_cache:
                self._layer_cache[rank] = self.scheme.nodes_at(rank)
            return self._layer_cache[rank]
        if rank > self.rank:
            raise RankTooHigh(f"graph {self.name} has rank {rank_str(self.rank)}")
        return self._node_layers.get(rank, {})

    def layer_tips(self, rank: int) -> frozenset:
        if rank < 0:
            raise ValueError("tip layers start at rank 0")
        if self.scheme is not None:
            return self.scheme.tips_at(rank)
        if not isinstance(self.rank, int) or rank >= self.rank:
            raise RankTooHigh(
                f"graph {self.name} of rank {rank_str(self.rank)} has no rank-{rank} tips"
            )
        return self._tip_layers.get(rank, frozenset())

    def node_rank(self, ident: str):
        if ident in self.nodes0:
            return 0
        for r, layer in self._node_layers.items():
            if ident in layer:
                return r
        if ident in self.omega_nodes:
            return OMEGA
        if self.scheme is not None:
            r = self.scheme.node_rank(ident)
            if r is not None:
                return r
            if self.graded_omega and _ONODE_RE.match(ident):
                return OMEGA
        return None

    # -- the omega layer ---------------------------------------------------------

    def omega_layer_explicit(self) -> bool:
        return self.rank is OMEGA and not self.graded_omega

    def omega_node_at(self, j: int) -> StandardNode:
        if not self.graded_omega:
            raise RankTooHigh("graph has no generated omega layer")
        return self.scheme.graded_omega_node(j)

    # -- extremities ----------------------------------------------------------------

    def levels(self) -> list:
        """Node levels this graph has, finite ones capped for schemes by callers."""
        if isinstance(self.rank, int):
            return list(range(1, self.rank + 1))
        return []

    def _check_level(self, level) -> None:
        if level is OMEGA_ARROW:
            raise RankTooHigh("there are no omega-arrow nodes, hence no such level")
        if level is OMEGA:
            if self.rank is not OMEGA:
                raise RankTooHigh(f"graph {self.name} has rank {rank_str(self.rank)}")
            return
        if not isinstance(level, int) or level < 1:
            raise RankTooHigh(f"{level!r} is not a node level")
        if isinstance(self.rank, int) and level > self.rank:
            raise RankTooHigh(
                f"level {level} exceeds the rank {self.rank} of graph {self.name}"
            )

    def extremity_list(self, level, bound: int | None = None) -> list[Extremity]:
        """All extremities at the level, sorted; for a generated omega layer a
        bound on the layer index is required."""
        self._check_level(level)
        out: list[Extremity] = []
        if level is OMEGA:
            if self.omega_layer_explicit():
                for t in self.omega_tips:
                    out.append(Extremity("tip", t, OMEGA_ARROW))
                nodes = self.omega_nodes.values()
            else:
                if bound is None:
                    raise RankTooHigh(
                        "the generated omega layer is unbounded; pass a bound"
                    )
                out.extend(
                    Extremity("tip", f"T_{j}", OMEGA_ARROW) for j in range(bound)
                )
                nodes = [self.omega_node_at(j) for j in range(bound)]
        else:
            out.extend(Extremity("tip", t, level - 1) for t in self.layer_tips(level - 1))
            nodes = self.layer_nodes(level).values()
        for node in nodes:
            if node.exceptional is not None:
                out.append(
                    Extremity("node", node.exceptional, self.node_rank(node.exceptional))
                )
        return sorted(out, key=Extremity.sort_key)

    def owner_of(self, e: Extremity, level) -> str:
        """The ident of the level-node containing the extremity."""
        self._check_level(level)
        if level is OMEGA:
            return self._omega_owner(e)
        if e.kind == "tip":
            if e.ident in self.layer_tips(level - 1):
                owner = self._tip_owner_index(level).get(e.ident)
                if owner is not None:
                    return owner
            raise NotAnExtremity(
                f"{e.describe()} is not an owned rank-{level - 1} tip of graph {self.name}"
            )
        owner = self._exceptional_index(level).get(e.ident)
        if owner is None:
            raise NotAnExtremity(
                f"{e.describe()} is not the exceptional element of any "
                f"rank-{level} node of graph {self.name}"
            )
        return owner

    def _omega_owner(self, e: Extremity) -> str:
        if self.omega_layer_explicit():
            if e.kind == "tip":
                for node in self.omega_nodes.values():
                    if e.ident in node.tips:
                        return node.ident
            else:
                for node in self.omega_nodes.values():
                    if node.exceptional == e.ident:
                        return node.ident
            raise NotAnExtremity(
                f"{e.describe()} is not an omega extremity of graph {self.name}"
            )
        if e.kind == "tip":
            m = _OTIP_RE.match(e.ident)
            if m:
                return f"W_{m.group(1)}"
        else:
            m = _NODE_RE.match(e.ident)
            if m and int(m.group(1)) >= 1 and m.group(2) == "0":
                return f"W_{m.group(1)}"
        raise NotAnExtremity(
            f"{e.describe()} is not an omega extremity of graph {self.name}"
        )

    def is_extremity(self, e: Extremity, level) -> bool:
        try:
            self.owner_of(e, level)
            return True
        except (NotAnExtremity, RankTooHigh):
            return False

    def _tip_owner_index(self, level: int) -> dict[str, str]:
        index: dict[str, str] = {}
        for node in self.layer_nodes(level).values():
            for t in node.tips:
                index.setdefault(t, node.ident)
        return index

    def _exceptional_index(self, level: int) -> dict[str, str]:
        return {
            node.exceptional: node.ident
            for node in self.layer_nodes(level).values()
            if node.exceptional is not None
        }

    # -- equality (structural) -----------------------------------------------------

    def _canonical(self) -> tuple:
        return (
            self.name,
            rank_str(self.rank),
            tuple(sorted(self.nodes0)),
            tuple(sorted((b, u, v) for b, (u, v) in self.branches.items())),
            tuple(sorted((r, tuple(sorted(ids))) for r, ids in self._tip_layers.items())),
            tuple(
                sorted(
                    (r, n.ident, tuple(sorted(n.tips)), n.exceptional)
                    for r, layer in self._node_layers.items()
                    for n in layer.values()
                )
            ),
            self.scheme.params() if self.scheme else None,
            tuple(sorted(self.omega_tips)) if self.omega_tips is not None else None,
            tuple(
                sorted(
                    (n.ident, tuple(sorted(n.tips)), n.exceptional)
                    for n in self.omega_nodes.values()
                )
            ),
            self.graded_omega,
        )

    def __eq__(self, other):
        if not isinstance(other, StandardGraph):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def __repr__(self):
        return f"StandardGraph({self.name}, rank {rank_str(self.rank)})"


# -- operations ---------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def render(self) -> str:
        return f"[{self.code}] {self.detail}"


@dataclass
class ValidationReport:
    graph: str
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def validate(graph: StandardGraph, probe_depth: int = 4) -> ValidationReport:
    """Check the node/tip/branch axioms; violations are data, not errors.

    Scheme-backed layers are spot-checked up to ``probe_depth``. Tip
    path-consistency is out of scope by design and noted as unchecked.
    """
    report = ValidationReport(graph.name)
    bad = report.violations.append
    for bid, (u, v) in sorted(graph.branches.items()):
        if u == v:
            bad(Violation("branch-loop", f"branch {bid} joins {u} to itself"))
        for end in (u, v):
            if end not in graph.nodes0:
                bad(Violation("branch-endpoint", f"branch {bid} endpoint {end} is not a 0-node"))
    if isinstance(graph.rank, int):
        levels = list(range(1, graph.rank + 1))
        if graph.rank >= 1 and not graph.layer_nodes(graph.rank):
            bad(
                Violation(
                    "layer-empty-top",
                    f"rank-{graph.rank} graph has no rank-{graph.rank} nodes",
                )
            )
        for r in graph._node_layers:
            if not isinstance(r, int) or r < 1 or r > graph.rank:
                bad(Violation("rank-range", f"node layer at invalid rank {rank_str(r)}"))
        for r in graph._tip_layers:
            if r < 0 or r >= graph.rank:
                bad(Violation("rank-range", f"tip layer at invalid rank {r}"))
    else:
        levels = list(range(1, probe_depth + 1))
        report.notes.append(
            f"scheme layers spot-checked up to rank {probe_depth}; the template "
            "repeats uniformly beyond"
        )
    for level in levels:
        _check_layer(graph, level, report)
    if graph.rank is OMEGA:
        _check_omega_layer(graph, report, probe_depth)
    report.notes.append("tip path-consistency: not checked (tips are primitive identifiers)")
    return report


def _tip_universe(graph: StandardGraph, rank: int) -> frozenset:
    if rank == -1:
        return frozenset()
    return graph.layer_tips(rank)


def _check_layer(graph: StandardGraph, level: int, report: ValidationReport) -> None:
    bad = report.violations.append
    universe = _tip_universe(graph, level - 1)
    owners: dict[str, list[str]] = {}
    layer = graph.layer_nodes(level)
    for node in sorted(layer.values(), key=lambda n: n.ident):
        if not node.tips:
            bad(Violation("node-empty", f"node {node.ident} owns no rank-{level - 1} tip"))
        for t in sorted(node.tips):
            owners.setdefault(t, []).append(node.ident)
            if t not in universe:
                bad(
                    Violation(
                        "unknown-tip",
                        f"node {node.ident} references undeclared tip {t}",
                    )
                )
        if node.exceptional is not None:
            _check_exceptional(graph, node, level, report)
    for t in sorted(universe):
        who = owners.get(t, [])
        if not who:
            bad(Violation("tip-unowned", f"rank-{level - 1} tip {t} belongs to no rank-{level} node"))
        elif len(who) > 1:
            bad(
                Violation(
                    "tip-shared",
                    f"rank-{level - 1} tip {t} belongs to nodes {', '.join(who)}",
                )
            )
    shared: dict[str, list[str]] = {}
    for node in layer.values():
        if node.exceptional is not None:
            shared.setdefault(node.exceptional, []).append(node.ident)
    for target, who in sorted(shared.items()):
        if len(who) > 1:
            bad(
                Violation(
                    "exceptional-shared",
                    f"node {target} is the exceptional element of {', '.join(sorted(who))}",
                )
            )


def _check_exceptional(graph, node, level, report) -> None:
    bad = report.violations.append
    target_rank = graph.node_rank(node.exceptional)
    if target_rank is None:
        bad(
            Violation(
                "exceptional-missing",
                f"node {node.ident} embraces unknown node {node.exceptional}",
            )
        )
    elif not rank_lt(target_rank, node.rank):
        bad(
            Violation(
                "exceptional-rank",
                f"node {node.ident} of rank {rank_str(node.rank)} embraces "
                f"{node.exceptional} of rank {rank_str(target_rank)}",
            )
        )


def _check_omega_layer(graph, report, probe_depth) -> None:
    bad = report.violations.append
    if graph.omega_layer_explicit():
        universe = graph.omega_tips
        owners: dict[str, list[str]] = {}
        for node in sorted(graph.omega_nodes.values(), key=lambda n: n.ident):
            if not node.tips:
                bad(Violation("node-empty", f"omega-node {node.ident} owns no omega-arrow tip"))
            for t in sorted(node.tips):
                owners.setdefault(t, []).append(node.ident)
                if t not in universe:
                    bad(Violation("unknown-tip", f"omega-node {node.ident} references undeclared tip {t}"))
            if node.exceptional is not None:
                _check_exceptional(graph, node, OMEGA, report)
        for t in sorted(universe):
            who = owners.get(t, [])
            if not who:
                bad(Violation("tip-unowned", f"omega-arrow tip {t} belongs to no omega-node"))
            elif len(who) > 1:
                bad(Violation("tip-shared", f"omega-arrow tip {t} belongs to nodes {', '.join(who)}"))
    else:
        for j in range(probe_depth):
            node = graph.omega_node_at(j)
            if node.exceptional is not None and graph.node_rank(node.exceptional) is None:
                bad(
                    Violation(
                        "exceptional-missing",
                        f"omega-node {node.ident} embraces unknown node {node.exceptional}",
                    )
                )
        report.notes.append(
            f"generated omega layer spot-checked up to index {probe_depth}"
        )


def truncate(graph: StandardGraph, new_rank) -> StandardGraph:
    """The graph cut down to the given rank; identical at shared layers."""
    if rank_lt(graph.rank, new_rank):
        raise RankTooHigh(
            f"cannot truncate rank-{rank_str(graph.rank)} graph to {rank_str(new_rank)}"
        )
    if rank_key(new_rank) == rank_key(graph.rank):
        return graph
    if new_rank is OMEGA_ARROW:
        return StandardGraph(
            graph.name,
            OMEGA_ARROW,
            graph.nodes0,
            graph.branches,
            scheme=graph.scheme,
        )
    if not isinstance(new_rank, int):
        raise RankTooHigh(f"{new_rank!r} is not a truncation rank")
    if graph.scheme is not None:
        nodes = [
            node for r in range(1, new_rank + 1) for node in graph.layer_nodes(r).values()
        ]
        tips = {r: graph.layer_tips(r) for r in range(new_rank)}
    else:
        nodes = [
            node
            for r, layer in graph._node_layers.items()
            if r <= new_rank
            for node in layer.values()
        ]
        tips = {r: ids for r, ids in graph._tip_layers.items() if r < new_rank}
    return StandardGraph(graph.name, new_rank, graph.nodes0, graph.branches, tips, nodes)


def extremities(graph: StandardGraph, level, bound: int | None = None) -> tuple[Extremity, ...]:
    return tuple(graph.extremity_list(level, bound))


def shorted_std(graph: StandardGraph, e: Extremity, f: Extremity, level) -> bool:
    """Same-node test at the given level (reflexive by construction)."""
    return graph.owner_of(e, level) == graph.owner_of(f, level)
