"""Nonstandard graphs as reduced powers of standard-graph sequences.

A :class:`GraphFamily` is a sequence of standard graphs G_n drawn from a
finite list of prototypes under an eventually periodic assignment. A
nonstandard extremity is (the class of) a sequence e_n, where e_n is an
extremity of G_n at a fixed level; two such sequences are identified when
they agree on a set the membership oracle declares large. Shorting is
decided the same way: *e and *f are shorted exactly when the set of n at
which the same node of G_n contains both e_n and f_n is large — i.e. when
their owner-node identifier sequences agree almost everywhere.

Alongside the raw sequence, every nonstandard extremity carries derived
descriptors: the owner-id sequence, the index set where the element is a
tip, and the rank sequence. For eventually periodic data these are
computed exactly over a structural window; generated (rule-based)
sequences carry descriptors built from the same rule, tagged with symbolic
keys so that two constructions known to be identical compare equal on all
of N rather than on a sampled window.

Nonstandard nodes are the shorting classes of a universe of extremities.
The builder checks the decided relation for transitivity and checks the
node axioms (at least one tip per node, at most one exceptional class per
node, no exceptional class shared between nodes); a failure is an
:class:`~ultragraph.errors.InvariantBreach`, signalling that the supplied
prototypes or queries were malformed rather than a fault of the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvariantBreach, NotAnExtremity, RankTooHigh, Undecidable
from .graphs import (
    OMEGA,
    OMEGA_ARROW,
    Extremity,
    StandardGraph,
    rank_str,
)
from .indexsets import IndexSet
from .oracle import Membership, FilterOracle
from .sequences import (
    INJECTIVE_BEYOND,
    MONOTONE,
    UNBOUNDED,
    GeneratedSeq,
    PeriodicSeq,
    agreement_set,
    generated,
    horizon,
    pointwise,
    value_at,
)
from .hyperreal import Hypernatural


class GraphFamily:
    """Graphs G_n = prototypes[assignment(n)].

    An eventually periodic assignment keeps every derived index set exactly
    decidable; a generated assignment is legal but opaque, so downstream
    classifications may come back Undecidable.
    """

    def __init__(
        self,
        name: str,
        prototypes: tuple[StandardGraph, ...],
        assignment=None,
    ):
        if not prototypes:
            raise ValueError("a family needs at least one prototype")
        ranks = {repr(g.rank) if not isinstance(g.rank, int) else g.rank for g in prototypes}
        if len(ranks) != 1:
            raise ValueError("all prototypes in a family must share one rank")
        self.name = name
        self.prototypes = tuple(prototypes)
        if assignment is None:
            assignment = PeriodicSeq.make((), (0,))
        if isinstance(assignment, PeriodicSeq):
            probe = set(assignment.pre) | set(assignment.cycle)
        else:
            probe = {value_at(assignment, n) for n in range(min(64, assignment.n_max) + 1)}
        for k in probe:
            if not isinstance(k, int) or not 0 <= k < len(prototypes):
                raise ValueError(f"assignment value {k!r} is not a prototype index")
        self.assignment = assignment
        self.rank = prototypes[0].rank

    def graph_at(self, n: int) -> StandardGraph:
        return self.prototypes[value_at(self.assignment, n)]

    def graded_omega(self) -> bool:
        return self.rank is OMEGA and all(g.graded_omega for g in self.prototypes)

    def shared_zero_nodes(self) -> list[str]:
        shared = set(self.prototypes[0].nodes0)
        for g in self.prototypes[1:]:
            shared &= g.nodes0
        return sorted(shared)

    def all_zero_nodes(self) -> set[str]:
        out: set[str] = set()
        for g in self.prototypes:
            out |= g.nodes0
        return out

    def shared_branches(self) -> list[str]:
        shared = set(self.prototypes[0].branches)
        for g in self.prototypes[1:]:
            shared &= set(g.branches)
        return sorted(shared)

    def all_branches(self) -> set[str]:
        out: set[str] = set()
        for g in self.prototypes:
            out |= set(g.branches)
        return out

    def shared_extremities(self, level) -> list[Extremity]:
        """Extremities valid at the level in every prototype."""
        if level is OMEGA and self.graded_omega():
            raise RankTooHigh(
                "the generated omega layer has no finite shared-extremity list"
            )
        pools = [set(g.extremity_list(level)) for g in self.prototypes]
        shared = set.intersection(*pools)
        return sorted(shared, key=Extremity.sort_key)

    def describe(self) -> str:
        names = ", ".join(g.name for g in self.prototypes)
        return (
            f"family {self.name}: rank {rank_str(self.rank)}, prototypes [{names}], "
            f"assignment {self.assignment.describe()}"
        )


class NsExtremity:
    """A sequence of level extremities together with derived descriptors."""

    def __init__(
        self,
        family: GraphFamily,
        level,
        rep,
        owner_rep,
        kind_tip_set: IndexSet,
        rank_rep,
        label: str | None = None,
    ):
        self.family = family
        self.level = level
        self.rep = rep
        self.owner_rep = owner_rep
        self.kind_tip_set = kind_tip_set
        self.rank_rep = rank_rep
        self.label = label if label is not None else rep.describe()

    def describe(self) -> str:
        return self.label


def ns_extremity(family: GraphFamily, level, rep, label: str | None = None) -> NsExtremity:
    """Build a nonstandard extremity, deriving owner/kind/rank descriptors.

    For an eventually periodic representative the descriptors are exact:
    the representative and the prototype assignment are unrolled over one
    structural window. A generated representative yields generated
    descriptors over the same horizon; owner keys for those should come
    from the dedicated constructors (for the graded omega layer) since a
    bare rule carries no symbolic identity.
    """
    if isinstance(rep, PeriodicSeq):
        for e in list(rep.pre) + list(rep.cycle):
            if not isinstance(e, Extremity):
                raise NotAnExtremity(f"{e!r} is not an extremity")
        if isinstance(family.assignment, PeriodicSeq):
            owner_rep = pointwise(
                [rep, family.assignment],
                lambda e, k: family.prototypes[k].owner_of(e, level),
            )
            kind_bits = pointwise([rep], lambda e: e.kind == "tip")
            kind_tip_set = IndexSet.eventually_periodic(kind_bits.pre, kind_bits.cycle)
            rank_rep = pointwise([rep], lambda e: e.rank)
            return NsExtremity(family, level, rep, owner_rep, kind_tip_set, rank_rep, label)
    elif not isinstance(rep, GeneratedSeq):
        raise NotAnExtremity(f"{rep!r} is not an extremity sequence")
    span = min(
        s.n_max for s in (rep, family.assignment) if isinstance(s, GeneratedSeq)
    )

    def owner_at(n: int) -> str:
        return family.graph_at(n).owner_of(value_at(rep, n), level)

    owner_rep = generated(
        owner_at, span, label=f"owner({label or rep.describe()})"
    )
    if isinstance(rep, PeriodicSeq):
        # Kind and rank live on the extremity values themselves, so a
        # periodic representative keeps them exact even when the prototype
        # assignment is opaque; only ownership needs sampling.
        kind_bits = pointwise([rep], lambda e: e.kind == "tip")
        kind_tip_set = IndexSet.eventually_periodic(kind_bits.pre, kind_bits.cycle)
        rank_rep = pointwise([rep], lambda e: e.rank)
        return NsExtremity(family, level, rep, owner_rep, kind_tip_set, rank_rep, label)
    # A bare rule reveals its tip/node split only by sampling; the dedicated
    # constructors below supply exact sets because they know the construction.
    kind_tip_set = IndexSet.sampled(lambda n: value_at(rep, n).kind == "tip", span)
    rank_rep = generated(lambda n: value_at(rep, n).rank, span, label="rank")
    return NsExtremity(family, level, rep, owner_rep, kind_tip_set, rank_rep, label)


def constant_extremity(family: GraphFamily, level, e: Extremity) -> NsExtremity:
    return ns_extremity(
        family, level, PeriodicSeq.make((), (e,)), label=e.describe()
    )


def omega_exceptional_query(family: GraphFamily, n_max: int = 100_000) -> NsExtremity:
    """e_n = the exceptional node embraced by the omega-node W_{n+1}.

    Its rank sequence n+1 is certifiably unbounded, so the class has a
    nonstandard (hypernatural) rank even though every e_n is standard.
    """
    _require_graded(family)
    rep = generated(
        lambda n: Extremity("node", f"x{n + 1}_0", n + 1),
        n_max,
        key=("graded-omega-exceptional", family.name),
        label="node:x{n+1}_0",
    )
    owner_rep = generated(
        lambda n: f"W_{n + 1}",
        n_max,
        key=("graded-omega-owner", family.name),
        label="W_{n+1}",
    )
    rank_rep = generated(
        lambda n: n + 1,
        n_max,
        traits=(MONOTONE, UNBOUNDED, INJECTIVE_BEYOND),
        key=("affine", 1, 1),
        label="n+1",
    )
    return NsExtremity(
        family, OMEGA, rep, owner_rep, IndexSet.empty(), rank_rep, "node:x{n+1}_0"
    )


def omega_tip_query(family: GraphFamily, n_max: int = 100_000) -> NsExtremity:
    """e_n = the omega-arrow tip T_{n+1}, owned by the same W_{n+1}."""
    _require_graded(family)
    rep = generated(
        lambda n: Extremity("tip", f"T_{n + 1}", OMEGA_ARROW),
        n_max,
        key=("graded-omega-tip", family.name),
        label="tip:T_{n+1}",
    )
    owner_rep = generated(
        lambda n: f"W_{n + 1}",
        n_max,
        key=("graded-omega-owner", family.name),
        label="W_{n+1}",
    )
    rank_rep = generated(lambda n: OMEGA_ARROW, n_max, label="omega-arrow")
    return NsExtremity(
        family, OMEGA, rep, owner_rep, IndexSet.naturals(), rank_rep, "tip:T_{n+1}"
    )


def _require_graded(family: GraphFamily) -> None:
    if not family.graded_omega():
        raise RankTooHigh(
            f"family {family.name} has no generated omega layer to index into"
        )


# -- classification ------------------------------------------------------------------


@dataclass(frozen=True)
class ExtremityClass:
    kind: str  # "tip" or "node"
    rank: object  # int, omega-arrow, or a Hypernatural
    standard_rank: bool
    detail: str

    def describe(self) -> str:
        return self.detail


def classify(ext: NsExtremity, oracle: FilterOracle, check_upto: int = 64) -> ExtremityClass:
    """Tip or exceptional-node class, with standard or hypernatural rank.

    The tip/node split is one oracle decision. An exceptional class whose
    rank sequence takes finitely many values gets its rank by selecting
    from the finite partition of N those values induce; an unbounded
    generated rank sequence must carry a certificate and then names a
    nonstandard hypernatural rank.
    """
    verdict = oracle.decide(ext.kind_tip_set, context=f"tip-kind of {ext.label}")
    if verdict is Membership.IN:
        rank = OMEGA_ARROW if ext.level is OMEGA else ext.level - 1
        return ExtremityClass(
            "tip", rank, True, f"tip of rank {rank_str(rank)}"
        )
    if isinstance(ext.rep, PeriodicSeq):
        rank = _select_periodic_rank(ext, oracle)
        return ExtremityClass(
            "node", rank, True, f"exceptional node of standard rank {rank}"
        )
    ranks = Hypernatural(ext.rank_rep, oracle, check_upto=check_upto)
    if ranks.is_standard():
        value = ranks.value()
        return ExtremityClass(
            "node", value, True, f"exceptional node of standard rank {value}"
        )
    return ExtremityClass(
        "node",
        ranks,
        False,
        "exceptional node of nonstandard rank (exceeds every natural)",
    )


def _select_periodic_rank(ext: NsExtremity, oracle: FilterOracle) -> int:
    values = list(ext.rep.pre) + list(ext.rep.cycle)
    head = len(ext.rep.pre)
    keys: list[object] = []
    for e in values:
        if e.kind == "tip":
            keys.append("tip")
        elif isinstance(e.rank, int):
            keys.append(e.rank)
        else:
            raise Undecidable(
                f"{ext.label}: exceptional element {e.ident} has nonfinite rank"
            )
    distinct = sorted({k for k in keys if k != "tip"})
    parts: list[IndexSet] = []
    for rank in distinct:
        bits = [k == rank for k in keys]
        parts.append(IndexSet.eventually_periodic(bits[:head], bits[head:]))
    if "tip" in keys:
        bits = [k == "tip" for k in keys]
        parts.append(IndexSet.eventually_periodic(bits[:head], bits[head:]))
    chosen = oracle.select_from_partition(parts, context=f"rank of {ext.label}")
    if chosen >= len(distinct):
        raise InvariantBreach(
            f"{ext.label}: the oracle placed an exceptional class on tip positions"
        )
    return distinct[chosen]


# -- shorting and node building --------------------------------------------------------


def ns_shorted(a: NsExtremity, b: NsExtremity, oracle: FilterOracle) -> bool:
    """Whether one nonstandard node contains both extremities."""
    if a.level is not b.level and a.level != b.level:
        raise RankTooHigh(
            f"cannot short across levels {rank_str(a.level)} and {rank_str(b.level)}"
        )
    agree = agreement_set(a.owner_rep, b.owner_rep)
    verdict = oracle.decide(
        agree, context=f"shorting {a.label} with {b.label}"
    )
    return verdict is Membership.IN


@dataclass
class NsNode:
    ident: str
    level: object
    members: tuple[NsExtremity, ...]
    classes: tuple[ExtremityClass, ...]

    def tip_count(self) -> int:
        return sum(1 for c in self.classes if c.kind == "tip")

    def describe(self) -> str:
        level = rank_str(self.level)
        inner = "; ".join(
            f"{m.label} ({c.describe()})" for m, c in zip(self.members, self.classes)
        )
        return f"{self.ident} [level {level}] {{ {inner} }}"


@dataclass
class NsLayer:
    level: object
    nodes: list[NsNode]
    notes: list[str] = field(default_factory=list)


def build_ns_nodes(
    family: GraphFamily,
    level,
    extremities: list[NsExtremity],
    oracle: FilterOracle,
    audit_upto: int = 64,
    require_tip: bool = True,
) -> NsLayer:
    """Partition the extremities into nonstandard nodes by decided shorting."""
    exts = list(extremities)
    classes = [classify(e, oracle) for e in exts]
    n = len(exts)
    decided: dict[tuple[int, int], bool] = {}
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            same = ns_shorted(exts[i], exts[j], oracle)
            decided[(i, j)] = same
            if same:
                parent[find(i)] = find(j)
    for (i, j), same in decided.items():
        if not same and find(i) == find(j):
            raise InvariantBreach(
                f"shorting decisions are not transitive: {exts[i].label} and "
                f"{exts[j].label} were declared distinct yet share a node"
            )
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    ordered = sorted(groups.values(), key=lambda idx: min(exts[i].label for i in idx))
    notes: list[str] = []
    nodes: list[NsNode] = []
    for k, idx in enumerate(ordered):
        idx_sorted = sorted(idx, key=lambda i: exts[i].label)
        members = tuple(exts[i] for i in idx_sorted)
        mcls = tuple(classes[i] for i in idx_sorted)
        node = NsNode(f"*{rank_str(level)}.{k}", level, members, mcls)
        if require_tip and node.tip_count() == 0:
            raise InvariantBreach(
                f"node {node.ident} contains no tip class; the supplied universe "
                "is not the extremity set of a graph sequence"
            )
        nodes.append(node)
    _audit_exceptionals(nodes, oracle, notes)
    _audit_pointwise(nodes, audit_upto, notes)
    return NsLayer(level, nodes, notes)


def _audit_exceptionals(nodes: list[NsNode], oracle: FilterOracle, notes: list[str]) -> None:
    tagged: list[tuple[str, NsExtremity]] = []
    for node in nodes:
        inside = [m for m, c in zip(node.members, node.classes) if c.kind == "node"]
        for a, b in _pairs(inside):
            if not _same_element(a, b, oracle, notes):
                raise InvariantBreach(
                    f"node {node.ident} embraces two distinct exceptional classes "
                    f"({a.label}, {b.label}); a node embraces at most one"
                )
        if inside:
            tagged.append((node.ident, inside[0]))
    for (ida, a), (idb, b) in _pairs(tagged):
        if _same_element(a, b, oracle, notes):
            raise InvariantBreach(
                f"nodes {ida} and {idb} embrace the same exceptional class "
                f"({a.label}); exceptional elements are never shared"
            )


def _pairs(items):
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            yield items[i], items[j]


def _same_element(a: NsExtremity, b: NsExtremity, oracle: FilterOracle, notes: list[str]):
    try:
        verdict = oracle.decide(
            agreement_set(a.rep, b.rep),
            context=f"identity of {a.label} and {b.label}",
        )
    except Undecidable:
        notes.append(
            f"identity audit of {a.label} and {b.label} is undecidable; "
            "treating them as distinct"
        )
        return False
    return verdict is Membership.IN


def _audit_pointwise(nodes: list[NsNode], upto: int, notes: list[str]) -> None:
    for node in nodes:
        if len(node.members) < 2:
            continue
        for a, b in _pairs(node.members):
            window = int(min(upto, horizon(a.owner_rep), horizon(b.owner_rep)))
            hits = sum(
                1
                for n in range(window)
                if value_at(a.owner_rep, n) == value_at(b.owner_rep, n)
            )
            if hits == 0 and window > 0:
                notes.append(
                    f"{a.label} and {b.label} share no owner in the first "
                    f"{window} indices; their identification rests on the "
                    "selected tail"
                )


# -- whole-graph assembly ---------------------------------------------------------------


@dataclass
class NsGraph:
    name: str
    family: GraphFamily
    zero_classes: tuple[str, ...]
    branch_classes: tuple[str, ...]
    layers: dict  # level -> NsLayer
    notes: list[str] = field(default_factory=list)

    def layer(self, level) -> NsLayer:
        for key, value in self.layers.items():
            if key == level or key is level:
                return value
        raise RankTooHigh(f"no level {rank_str(level)} in nonstandard graph {self.name}")

    def truncated(self, mu: int) -> "NsGraph":
        kept = {k: v for k, v in self.layers.items() if isinstance(k, int) and k <= mu}
        return NsGraph(
            f"{self.name}|{mu}",
            self.family,
            self.zero_classes,
            self.branch_classes,
            kept,
            list(self.notes),
        )


def build_ns_graph(
    family: GraphFamily,
    oracle: FilterOracle,
    mu_max: int = 4,
    queries: dict | None = None,
    audit_upto: int = 64,
) -> NsGraph:
    """Assemble nonstandard node layers from shared extremities plus queries.

    The 0-node and branch classes are the identifiers common to every
    prototype (constant sequences of distinct identifiers never merge, so
    no decisions are needed there). Identifiers that are not shared name a
    partial universe and are reported in the notes rather than classified.
    """
    queries = dict(queries or {})
    notes: list[str] = []
    zero = family.shared_zero_nodes()
    extra0 = sorted(family.all_zero_nodes() - set(zero))
    if extra0:
        notes.append(
            "0-nodes absent from some prototype are omitted: " + ", ".join(extra0)
        )
    branches = family.shared_branches()
    extra_b = sorted(family.all_branches() - set(branches))
    if extra_b:
        notes.append(
            "branches absent from some prototype are omitted: " + ", ".join(extra_b)
        )
    levels: list = []
    if isinstance(family.rank, int):
        levels = list(range(1, min(family.rank, mu_max) + 1))
    else:
        levels = list(range(1, mu_max + 1))
        if family.rank is OMEGA:
            levels.append(OMEGA)
    layers: dict = {}
    for level in levels:
        pool: list[NsExtremity] = []
        if level is OMEGA and family.graded_omega():
            notes.append(
                "omega layer is generated; only query extremities are classified there"
            )
        else:
            pool.extend(
                constant_extremity(family, level, e)
                for e in family.shared_extremities(level)
            )
        pool.extend(queries.get(level, ()))
        if level is OMEGA:
            pool.extend(queries.get("omega", ()))
        if not pool:
            layers[level] = NsLayer(level, [], ["no extremities at this level"])
            continue
        layers[level] = build_ns_nodes(
            family, level, pool, oracle, audit_upto=audit_upto
        )
    return NsGraph(
        f"*{family.name}",
        family,
        tuple(zero),
        tuple(branches),
        layers,
        notes,
    )
