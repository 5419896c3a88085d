"""Resistive networks on 0-graphs and their nonstandard operating points.

A branch joining u to v carries a positive resistance r and a series EMF
e, oriented with the branch: the branch current is i = (phi_u - phi_v + e)/r
and the branch voltage is the potential drop v = phi_u - phi_v, so Ohm's
law reads v = r*i - e. Standard networks are solved by nodal analysis
(one reference node per connected component, pinned to potential zero).

A nonstandard network attaches eventually periodic or generated resistance
and EMF sequences to the branches of a graph family whose prototypes all
share one branch-identifier set. Its operating point is the sequence of
standard solutions, packaged as hyperreals:

* all data eventually periodic — the solver runs once per phase of the
  joint structural window and the results are exact eventually periodic
  descriptors;
* otherwise — currents and potentials become generated sequences that
  solve the n-th network on demand, and each branch voltage is formed as
  the hyperreal combination r*i - e so that Ohm's law holds as a class
  identity by construction, not merely within tolerance.

``verify_laws`` re-reads values from the operating point's descriptors, so
a perturbed operating point is honestly re-checked: it confirms Kirchhoff's
current law at every node, Kirchhoff's voltage law around every fundamental
loop of a spanning tree, Ohm's law per branch, and Tellegen's theorem,
index by index, with residuals normalized by the magnitude of the data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyNetwork, InvariantBreach, NumericalFailure, SolverFailure, Undecidable
from .graphs import StandardGraph
from .hyperreal import Hyperreal, hr_eq
from .oracle import FilterOracle
from .sequences import (
    GeneratedSeq,
    PeriodicSeq,
    form_key,
    generated,
    structural_window,
    value_at,
)
from .ultrapower import GraphFamily

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class Branch:
    resistance: float
    emf: float = 0.0


class StandardNetwork:
    def __init__(self, graph: StandardGraph, data: dict[str, Branch]):
        missing = sorted(set(graph.branches) - set(data))
        extra = sorted(set(data) - set(graph.branches))
        if missing or extra:
            raise InvariantBreach(
                f"branch data does not match the graph: missing {missing}, extra {extra}"
            )
        self.graph = graph
        self.data = dict(data)


@dataclass
class StandardSolution:
    potentials: dict[str, float]
    currents: dict[str, float]
    voltages: dict[str, float]


def _components(nodes: list[str], branches: dict) -> dict[str, str]:
    """Map each node to the smallest node id of its connected component."""
    parent = {w: w for w in nodes}

    def find(w: str) -> str:
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for u, v in branches.values():
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    return {w: find(w) for w in nodes}


def solve_standard(net: StandardNetwork, index: int | None = None) -> StandardSolution:
    """Nodal analysis; deterministic given the network (nodes sorted)."""
    if not net.graph.branches:
        raise EmptyNetwork("the network has no branches to solve", index=index)
    for bid in sorted(net.data):
        r = net.data[bid].resistance
        if not (isinstance(r, (int, float)) and math.isfinite(r)) or r <= 0:
            raise SolverFailure(
                f"branch {bid} has nonpositive or nonfinite resistance {r!r}",
                index=index,
            )
        e = net.data[bid].emf
        if not (isinstance(e, (int, float)) and math.isfinite(e)):
            raise SolverFailure(f"branch {bid} has nonfinite source value {e!r}", index=index)
    nodes = sorted(net.graph.nodes0)
    roots = _components(nodes, net.graph.branches)
    unknowns = [w for w in nodes if roots[w] != w]
    pos = {w: k for k, w in enumerate(unknowns)}
    m = len(unknowns)
    matrix = np.zeros((m, m))
    rhs = np.zeros(m)
    for bid in sorted(net.graph.branches):
        u, v = net.graph.branches[bid]
        g = 1.0 / net.data[bid].resistance
        e = net.data[bid].emf
        for w, other, sign in ((u, v, -1.0), (v, u, 1.0)):
            if w not in pos:
                continue
            k = pos[w]
            matrix[k, k] += g
            if other in pos:
                matrix[k, pos[other]] -= g
            rhs[k] += sign * e * g
    potentials = {w: 0.0 for w in nodes}
    if m:
        condition = float(np.linalg.cond(matrix))
        if not math.isfinite(condition) or condition > _COND_LIMIT:
            raise NumericalFailure(
                f"nodal matrix is ill-conditioned (condition {condition:.3e})",
                condition=condition,
                index=index,
            )
        phi = np.linalg.solve(matrix, rhs)
        for w, k in pos.items():
            potentials[w] = float(phi[k])
    currents: dict[str, float] = {}
    voltages: dict[str, float] = {}
    for bid in sorted(net.graph.branches):
        u, v = net.graph.branches[bid]
        r = net.data[bid].resistance
        e = net.data[bid].emf
        i = (potentials[u] - potentials[v] + e) / r
        currents[bid] = i
        voltages[bid] = r * i - e
    return StandardSolution(potentials, currents, voltages)


# -- nonstandard networks -------------------------------------------------------------


class NsNetwork:
    """Branch data sequences over a family with a common branch-id set."""

    def __init__(self, name: str, family: GraphFamily, data: dict[str, tuple]):
        bids = set(data)
        for g in family.prototypes:
            if set(g.branches) != bids:
                raise InvariantBreach(
                    f"prototype {g.name} has branches {sorted(g.branches)}, "
                    f"expected exactly {sorted(bids)}"
                )
        for bid, (r_seq, e_seq) in data.items():
            for seq in (r_seq, e_seq):
                if not isinstance(seq, (PeriodicSeq, GeneratedSeq)):
                    raise InvariantBreach(
                        f"branch {bid}: {seq!r} is not a value sequence"
                    )
        self.name = name
        self.family = family
        self.data = dict(data)

    def network_at(self, n: int) -> StandardNetwork:
        branch_data = {
            bid: Branch(float(value_at(r, n)), float(value_at(e, n)))
            for bid, (r, e) in self.data.items()
        }
        return StandardNetwork(self.family.graph_at(n), branch_data)

    def content_key(self):
        """Symbolic identity of the whole network, or None if any rule lacks one."""
        parts = []
        for bid in sorted(self.data):
            r, e = self.data[bid]
            kr, ke = form_key(r), form_key(e)
            if kr is None or ke is None:
                return None
            parts.append((bid, kr, ke))
        return (
            self.family.name,
            self.family.assignment.describe(),
            tuple(parts),
        )

    def all_periodic(self) -> bool:
        return all(
            isinstance(r, PeriodicSeq) and isinstance(e, PeriodicSeq)
            for r, e in self.data.values()
        )


@dataclass
class OperatingPoint:
    network: NsNetwork
    oracle: FilterOracle
    route: str  # "periodic" or "generated"
    currents: dict[str, Hyperreal]
    voltages: dict[str, Hyperreal]
    potentials: dict[str, Hyperreal]
    horizon: int | float
    notes: list[str] = field(default_factory=list)


def operating_point(
    net: NsNetwork, oracle: FilterOracle, horizon: int = 1_000_000
) -> OperatingPoint:
    shared_nodes = net.family.shared_zero_nodes()
    notes = []
    skipped = sorted(net.family.all_zero_nodes() - set(shared_nodes))
    if skipped:
        notes.append(
            "potentials reported only for 0-nodes common to every prototype; "
            "omitted: " + ", ".join(skipped)
        )
    if net.all_periodic():
        op = _periodic_operating_point(net, oracle, shared_nodes)
    else:
        op = _generated_operating_point(net, oracle, shared_nodes, horizon)
    op.notes.extend(notes)
    return op


def _periodic_operating_point(net, oracle, shared_nodes) -> OperatingPoint:
    seqs = [net.family.assignment]
    for r, e in net.data.values():
        seqs.extend((r, e))
    head, period = structural_window(*seqs)
    window = head + period
    solutions = [solve_standard(net.network_at(n), index=n) for n in range(window)]

    def packaged(values: list[float]) -> Hyperreal:
        return Hyperreal(PeriodicSeq.make(values[:head], values[head:]), oracle)

    currents = {
        bid: packaged([s.currents[bid] for s in solutions]) for bid in sorted(net.data)
    }
    voltages = {
        bid: packaged([s.voltages[bid] for s in solutions]) for bid in sorted(net.data)
    }
    potentials = {
        w: packaged([s.potentials[w] for s in solutions]) for w in shared_nodes
    }
    return OperatingPoint(
        net, oracle, "periodic", currents, voltages, potentials, float("inf")
    )


def _generated_operating_point(net, oracle, shared_nodes, horizon) -> OperatingPoint:
    n_max = horizon
    for r, e in net.data.values():
        for seq in (r, e):
            if isinstance(seq, GeneratedSeq):
                n_max = min(n_max, seq.n_max)
    cache: dict[int, StandardSolution] = {}

    def solve_at(n: int) -> StandardSolution:
        if n not in cache:
            cache[n] = solve_standard(net.network_at(n), index=n)
        return cache[n]

    ck = net.content_key()
    currents: dict[str, Hyperreal] = {}
    voltages: dict[str, Hyperreal] = {}
    for bid in sorted(net.data):
        key = ("ns-current", ck, bid) if ck is not None else None
        rep = generated(
            lambda n, b=bid: solve_at(n).currents[b],
            n_max,
            key=key,
            label=f"i({bid})",
        )
        i = Hyperreal(rep, oracle)
        r_h = Hyperreal(net.data[bid][0], oracle)
        e_h = Hyperreal(net.data[bid][1], oracle)
        currents[bid] = i
        voltages[bid] = r_h * i - e_h
    potentials = {}
    for w in shared_nodes:
        key = ("ns-potential", ck, w) if ck is not None else None
        potentials[w] = Hyperreal(
            generated(
                lambda n, x=w: solve_at(n).potentials[x],
                n_max,
                key=key,
                label=f"phi({w})",
            ),
            oracle,
        )
    op = OperatingPoint(
        net, oracle, "generated", currents, voltages, potentials, n_max
    )
    if ck is None:
        op.notes.append(
            "some branch data carries no symbolic identity; class-level "
            "equalities involving these results may be undecidable"
        )
    return op


# -- verification -----------------------------------------------------------------------


@dataclass
class LawCheck:
    law: str
    subject: str
    worst: float
    ok: bool
    witness: int
    class_verdict: str | None = None

    def render(self) -> str:
        state = "ok" if self.ok else "VIOLATED"
        extra = f", as classes: {self.class_verdict}" if self.class_verdict else ""
        return (
            f"{self.law} {self.subject}: {state} "
            f"(worst residual {self.worst:.3e} at n={self.witness}{extra})"
        )


@dataclass
class LawReport:
    ok: bool
    tol: float
    checks: list[LawCheck]
    notes: list[str] = field(default_factory=list)

    def render_lines(self) -> list[str]:
        lines = [c.render() for c in self.checks]
        lines.extend(f"note: {t}" for t in self.notes)
        return lines


def _spanning_tree(graph: StandardGraph):
    """Tree edges as {branch id: +-1 orientation consistent with BFS}, chords."""
    adj: dict[str, list[tuple[str, str]]] = {w: [] for w in graph.nodes0}
    for bid, (u, v) in sorted(graph.branches.items()):
        adj[u].append((bid, v))
        adj[v].append((bid, u))
    seen: set[str] = set()
    tree: dict[str, tuple[str, str]] = {}  # bid -> (from, to) as traversed
    for root in sorted(graph.nodes0):
        if root in seen:
            continue
        seen.add(root)
        frontier = [root]
        while frontier:
            here = frontier.pop()
            for bid, there in sorted(adj[here]):
                if there in seen or bid in tree:
                    continue
                seen.add(there)
                tree[bid] = (here, there)
                frontier.append(there)
    chords = sorted(set(graph.branches) - set(tree))
    return tree, chords


def _tree_potentials(graph: StandardGraph, tree, voltages_at) -> dict[str, float]:
    """Potentials implied by the branch voltages along the spanning tree."""
    phi: dict[str, float] = {}
    for root in sorted(graph.nodes0):
        if root in phi:
            continue
        phi[root] = 0.0
        changed = True
        while changed:
            changed = False
            for bid in tree:
                u, v = graph.branches[bid]
                drop = voltages_at(bid)
                for x, y, d in ((u, v, drop), (v, u, -drop)):
                    if x in phi and y not in phi:
                        phi[y] = phi[x] - d
                        changed = True
    return phi


def verify_laws(op: OperatingPoint, tol: float = 1e-9, check_upto: int = 64) -> LawReport:
    net = op.network
    if op.route == "periodic":
        seqs = [net.family.assignment]
        for h in list(op.currents.values()) + list(op.voltages.values()):
            seqs.append(h.rep)
        for r, e in net.data.values():
            seqs.extend((r, e))
        head, period = structural_window(*seqs)
        indices = range(head + period)
    else:
        indices = range(min(check_upto, int(op.horizon)))
    worst: dict[tuple[str, str], tuple[float, int]] = {}

    def record(law: str, subject: str, residual: float, scale: float, n: int) -> None:
        value = abs(residual) / max(1.0, scale)
        key = (law, subject)
        if key not in worst or value > worst[key][0]:
            worst[key] = (value, n)

    trees: dict[int, tuple] = {}
    for n in indices:
        graph = net.family.graph_at(n)
        proto = value_at(net.family.assignment, n)
        if proto not in trees:
            trees[proto] = _spanning_tree(graph)
        tree, chords = trees[proto]
        i_at = {bid: value_at(op.currents[bid].rep, n) for bid in net.data}
        v_at = {bid: value_at(op.voltages[bid].rep, n) for bid in net.data}
        r_at = {bid: value_at(net.data[bid][0], n) for bid in net.data}
        e_at = {bid: value_at(net.data[bid][1], n) for bid in net.data}
        scale = max(
            [1.0]
            + [abs(x) for x in i_at.values()]
            + [abs(x) for x in v_at.values()]
            + [abs(x) for x in e_at.values()]
        )
        flow = {w: 0.0 for w in graph.nodes0}
        for bid, (u, v) in graph.branches.items():
            flow[u] += i_at[bid]
            flow[v] -= i_at[bid]
        for w in sorted(graph.nodes0):
            record("KCL", f"node {w}", flow[w], scale, n)
        phi = _tree_potentials(graph, tree, lambda bid: v_at[bid])
        for bid in chords:
            u, v = graph.branches[bid]
            record("KVL", f"loop of {bid}", v_at[bid] - (phi[u] - phi[v]), scale, n)
        for bid in sorted(net.data):
            record("Ohm", f"branch {bid}", v_at[bid] - (r_at[bid] * i_at[bid] - e_at[bid]), scale, n)
        power = sum(v_at[bid] * i_at[bid] for bid in net.data)
        record("Tellegen", "total power", power, scale * scale, n)
    checks: list[LawCheck] = []
    notes: list[str] = []
    for (law, subject), (value, witness) in sorted(worst.items()):
        check = LawCheck(law, subject, value, value <= tol, witness)
        if law == "Ohm":
            bid = subject.split()[-1]
            check.class_verdict = _ohm_class_verdict(op, bid)
        checks.append(check)
    if not indices:
        notes.append("no indices were available to check")
    report = LawReport(all(c.ok for c in checks), tol, checks, notes)
    return report


def _ohm_class_verdict(op: OperatingPoint, bid: str) -> str:
    r_h = Hyperreal(op.network.data[bid][0], op.oracle)
    e_h = Hyperreal(op.network.data[bid][1], op.oracle)
    try:
        same = hr_eq(op.voltages[bid], r_h * op.currents[bid] - e_h)
    except Undecidable:
        return "undecidable"
    return "equal" if same else "UNEQUAL"
