"""Project files: one text format for oracles, graphs, families, networks.

The format is line oriented: a file is a sequence of named blocks, each
block a brace-delimited list of statements, one per line (';' also ends a
statement, which lets the same statement grammar ride inside a command
line flag). '#' starts a comment. Grammar:

  oracle NAME {
    residue mod=M : R          # the tower selects residue R at modulus M
    pin (in|out) SET           # force a verdict for SET (and supersets/complements)
  }

  graph NAME rank=RANK [scheme=tower width=K] [omega=graded] {
    nodes0 ID ...
    branch ID FROM TO
    tips R = ID ...            # the declared rank-R tip universe
    node ID rank=R tips={ID, ...} [exceptional=ID]
    omega-tips ID ...          # explicit omega layer only
    omega-node ID tips={ID, ...} [exceptional=ID]
  }

  family NAME {
    prototypes NAME ...
    assignment SEQ             # prototype indices; eventually periodic stays
  }                            #   exactly decidable, gen= forms are opaque

  network NAME on FAMILY {
    r BRANCH = SEQ             # resistance sequence (required per branch)
    e BRANCH = SEQ             # source sequence (defaults to 0)
  }

  query NAME {
    family NAME
    level RANK
    extremity EXT
  }

  SET  := finite={N, ...} | cofinite={N, ...} | mod=M : R
        | [pre=[BITS]] cycle=[BITS]
  SEQ  := [pre=[V, ...]] cycle=[V, ...] | gen=GEN nmax=N
  GEN  := identity | const(V) | affine(A, B) | mod(P)
  EXT  := [pre=[REF, ...]] cycle=[REF, ...]
        | gen=(omega-exceptional | omega-tip) [nmax=N]
  REF  := (tip|node):ID
  RANK := N | omega | omega-arrow

Parsing produces a :class:`Project` of plain spec values plus fully built
graphs; resolution into oracles, families, networks and query extremities
happens on demand. ``serialize`` renders a canonical form (sorted blocks,
sorted statement bodies), and parsing that form yields an equal project.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    DuplicateId,
    ProjectSyntaxError,
    UnresolvedReference,
)
from .graphs import (
    OMEGA,
    OMEGA_ARROW,
    Extremity,
    StandardGraph,
    StandardNode,
    TowerScheme,
    parse_rank,
    rank_str,
)
from .indexsets import IndexSet
from .oracle import FilterOracle, Membership
from .sequences import PeriodicSeq, _fmt, named_generator, periodic, pointwise
from .ultrapower import (
    GraphFamily,
    NsExtremity,
    ns_extremity,
    omega_exceptional_query,
    omega_tip_query,
)
from .network import NsNetwork
from .sequences import constant as constant_seq

_DEFAULT_GEN_HORIZON = 100_000


# -- tokens ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "name" | "punct" | "nl"
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<num>-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_\-]*)"
    r"|(?P<punct>[{}\[\]=:,();])"
)


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        produced = False
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                raise ProjectSyntaxError(
                    f"unexpected character {line[pos]!r}", lineno, pos + 1
                )
            kind = m.lastgroup
            text_ = m.group()
            if kind == "punct" and text_ == ";":
                tokens.append(_Token("nl", ";", lineno, pos + 1))
            else:
                tokens.append(_Token(kind, text_, lineno, pos + 1))
                produced = True
            pos = m.end()
        if produced:
            tokens.append(_Token("nl", "\n", lineno, len(line) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.k = 0

    def _here(self) -> tuple[int, int]:
        if self.k < len(self.tokens):
            tok = self.tokens[self.k]
        elif self.tokens:
            tok = self.tokens[-1]
        else:
            return 1, 1
        return tok.line, tok.col

    def fail(self, message: str):
        line, col = self._here()
        raise ProjectSyntaxError(message, line, col)

    def at_end(self) -> bool:
        return self.k >= len(self.tokens)

    def peek(self) -> _Token | None:
        return self.tokens[self.k] if self.k < len(self.tokens) else None

    def skip_nl(self) -> None:
        while not self.at_end() and self.tokens[self.k].kind == "nl":
            self.k += 1

    def end_statement(self) -> None:
        tok = self.peek()
        if tok is None:
            return
        if tok.kind == "nl":
            self.skip_nl()
            return
        if tok.kind == "punct" and tok.text == "}":
            return
        self.fail(f"unexpected {tok.text!r} at end of statement")

    def at_name(self, word: str | None = None) -> bool:
        tok = self.peek()
        return (
            tok is not None
            and tok.kind == "name"
            and (word is None or tok.text == word)
        )

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "punct" and tok.text == ch

    def take_name(self, word: str | None = None) -> str:
        tok = self.peek()
        if tok is None or tok.kind != "name" or (word is not None and tok.text != word):
            self.fail(f"expected {word or 'a name'}")
        self.k += 1
        return tok.text

    def take_punct(self, ch: str) -> None:
        tok = self.peek()
        if tok is None or tok.kind != "punct" or tok.text != ch:
            self.fail(f"expected {ch!r}")
        self.k += 1

    def take_number(self):
        tok = self.peek()
        if tok is None or tok.kind != "num":
            self.fail("expected a number")
        self.k += 1
        if re.search(r"[.eE]", tok.text):
            return float(tok.text)
        return int(tok.text)

    def take_int(self) -> int:
        value = self.take_number()
        if not isinstance(value, int):
            self.fail("expected an integer")
        return value


# -- spec values ------------------------------------------------------------------------


@dataclass(frozen=True)
class SetSpec:
    kind: str  # "finite" | "cofinite" | "mod" | "bits"
    members: tuple = ()
    modulus: int = 0
    residue: int = 0
    pre: tuple = ()
    cycle: tuple = ()

    def to_indexset(self) -> IndexSet:
        if self.kind == "finite":
            return IndexSet.finite(self.members)
        if self.kind == "cofinite":
            return IndexSet.cofinite(self.members)
        if self.kind == "mod":
            return IndexSet.residue_class(self.modulus, self.residue)
        return IndexSet.eventually_periodic(
            [bool(b) for b in self.pre], [bool(b) for b in self.cycle]
        )

    def render(self) -> str:
        if self.kind in ("finite", "cofinite"):
            inner = ", ".join(str(m) for m in self.members)
            return f"{self.kind}={{{inner}}}"
        if self.kind == "mod":
            return f"mod={self.modulus} : {self.residue}"
        cyc = "cycle=[%s]" % ", ".join(str(b) for b in self.cycle)
        if self.pre:
            return "pre=[%s] %s" % (", ".join(str(b) for b in self.pre), cyc)
        return cyc


@dataclass(frozen=True)
class OracleSpec:
    name: str
    residues: tuple = ()  # of (modulus, residue)
    pins: tuple = ()  # of (verdict "in"/"out", SetSpec)

    def to_oracle(self, audit: list | None = None) -> FilterOracle:
        pins = [
            (spec.to_indexset(), Membership(verdict)) for verdict, spec in self.pins
        ]
        return FilterOracle(self.residues, pins, audit=audit)


@dataclass(frozen=True)
class SeqSpec:
    kind: str  # "ep" | "gen"
    pre: tuple = ()
    cycle: tuple = ()
    gen: tuple = ()  # (name, arg, ...)
    nmax: int = 0

    def to_seq(self):
        if self.kind == "ep":
            return periodic(self.pre, self.cycle)
        return named_generator(self.gen[0], tuple(self.gen[1:]), self.nmax)

    def render(self) -> str:
        if self.kind == "ep":
            cyc = "cycle=[%s]" % ", ".join(_fmt(v) for v in self.cycle)
            if self.pre:
                return "pre=[%s] %s" % (", ".join(_fmt(v) for v in self.pre), cyc)
            return cyc
        name, *args = self.gen
        head = name if not args else "%s(%s)" % (name, ", ".join(_fmt(a) for a in args))
        return f"gen={head} nmax={self.nmax}"


@dataclass(frozen=True)
class ExtSpec:
    kind: str  # "ep" | "gen"
    pre: tuple = ()  # of ("tip"/"node", ident)
    cycle: tuple = ()
    gen: str = ""
    nmax: int = 0

    def render(self) -> str:
        if self.kind == "ep":
            def ref(r):
                return f"{r[0]}:{r[1]}"

            cyc = "cycle=[%s]" % ", ".join(ref(r) for r in self.cycle)
            if self.pre:
                return "pre=[%s] %s" % (", ".join(ref(r) for r in self.pre), cyc)
            return cyc
        out = f"gen={self.gen}"
        if self.nmax:
            out += f" nmax={self.nmax}"
        return out


@dataclass(frozen=True)
class FamilySpec:
    name: str
    prototypes: tuple
    assignment: SeqSpec


@dataclass(frozen=True)
class NetworkSpec:
    name: str
    family: str
    entries: tuple  # of (("r"|"e", branch), SeqSpec), sorted


@dataclass(frozen=True)
class QuerySpec:
    name: str
    family: str
    level: object
    extremity: ExtSpec


@dataclass
class Project:
    oracles: dict = field(default_factory=dict)
    graphs: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    networks: dict = field(default_factory=dict)
    queries: dict = field(default_factory=dict)

    # -- resolution -----------------------------------------------------------

    def default_oracle_name(self) -> str | None:
        if "main" in self.oracles:
            return "main"
        return min(self.oracles) if self.oracles else None

    def oracle(
        self,
        name: str | None = None,
        extra: str | None = None,
        audit: list | None = None,
    ) -> FilterOracle:
        if name is None:
            name = self.default_oracle_name()
        if name is None:
            spec = OracleSpec("default")
        elif name in self.oracles:
            spec = self.oracles[name]
        else:
            raise UnresolvedReference(f"no oracle named {name!r}")
        if extra:
            spec = amend_oracle_spec(spec, extra)
        return spec.to_oracle(audit)

    def family(self, name: str) -> GraphFamily:
        if name not in self.families:
            raise UnresolvedReference(f"no family named {name!r}")
        spec = self.families[name]
        protos = []
        for gname in spec.prototypes:
            if gname not in self.graphs:
                raise UnresolvedReference(
                    f"family {name!r} references unknown graph {gname!r}"
                )
            protos.append(self.graphs[gname])
        assignment = spec.assignment.to_seq()
        try:
            return GraphFamily(name, tuple(protos), assignment)
        except ValueError as exc:
            raise UnresolvedReference(f"family {name!r}: {exc}") from None

    def network(self, name: str) -> NsNetwork:
        if name not in self.networks:
            raise UnresolvedReference(f"no network named {name!r}")
        spec = self.networks[name]
        family = self.family(spec.family)
        entries = dict(spec.entries)
        branch_ids = set(family.prototypes[0].branches)
        for (kind, bid), _seq in spec.entries:
            if bid not in branch_ids:
                raise UnresolvedReference(
                    f"network {name!r} assigns {kind} to unknown branch {bid!r}"
                )
        data = {}
        for bid in sorted(branch_ids):
            r_spec = entries.get(("r", bid))
            if r_spec is None:
                raise UnresolvedReference(
                    f"network {name!r} gives no resistance for branch {bid!r}"
                )
            e_spec = entries.get(("e", bid))
            e_seq = e_spec.to_seq() if e_spec is not None else constant_seq(0.0)
            data[bid] = (r_spec.to_seq(), e_seq)
        return NsNetwork(name, family, data)

    def query(self, name: str) -> NsExtremity:
        if name not in self.queries:
            raise UnresolvedReference(f"no query named {name!r}")
        spec = self.queries[name]
        family = self.family(spec.family)
        ext = spec.extremity
        if ext.kind == "gen":
            n_max = ext.nmax or _DEFAULT_GEN_HORIZON
            if ext.gen == "omega-exceptional":
                return omega_exceptional_query(family, n_max)
            if ext.gen == "omega-tip":
                return omega_tip_query(family, n_max)
            raise UnresolvedReference(
                f"query {name!r}: unknown extremity generator {ext.gen!r}"
            )
        refs = periodic(ext.pre, ext.cycle)
        rep = pointwise(
            [refs, family.assignment],
            lambda ref, k: _resolve_ref(ref, family.prototypes[k], spec.level, name),
        )
        return ns_extremity(family, spec.level, rep, label=name)

    # -- rendering ------------------------------------------------------------

    def serialize(self) -> str:
        return serialize(self)


def _resolve_ref(ref, graph: StandardGraph, level, qname: str) -> Extremity:
    kind, ident = ref
    if kind == "tip":
        rank = OMEGA_ARROW if level is OMEGA else level - 1
        return Extremity("tip", ident, rank)
    rank = graph.node_rank(ident)
    if rank is None:
        raise UnresolvedReference(
            f"query {qname!r}: {ident!r} is not a node of graph {graph.name}"
        )
    return Extremity("node", ident, rank)


# -- block parsing -----------------------------------------------------------------------


def parse_project(text: str) -> Project:
    p = _Parser(_tokenize(text))
    project = Project()
    p.skip_nl()
    while not p.at_end():
        keyword = p.take_name()
        if keyword == "oracle":
            _parse_oracle_block(p, project)
        elif keyword == "graph":
            _parse_graph_block(p, project)
        elif keyword == "family":
            _parse_family_block(p, project)
        elif keyword == "network":
            _parse_network_block(p, project)
        elif keyword == "query":
            _parse_query_block(p, project)
        else:
            p.fail(f"unknown block kind {keyword!r}")
        p.skip_nl()
    return project


def _register(project: Project, table: dict, name: str, value, p: _Parser) -> None:
    if name in table:
        line, col = p._here()
        raise DuplicateId(f"{name!r} is declared twice", line, col)
    table[name] = value


def _open_block(p: _Parser) -> str:
    name = p.take_name()
    p.take_punct("{")
    p.skip_nl()
    return name


def _parse_oracle_block(p: _Parser, project: Project) -> None:
    name = _open_block(p)
    residues: list = []
    pins: list = []
    while not p.at_punct("}"):
        _parse_oracle_stmt(p, residues, pins)
        p.end_statement()
    p.take_punct("}")
    _register(
        project, project.oracles, name, OracleSpec(name, tuple(residues), tuple(pins)), p
    )


def _parse_oracle_stmt(p: _Parser, residues: list, pins: list) -> None:
    keyword = p.take_name()
    if keyword == "residue":
        p.take_name("mod")
        p.take_punct("=")
        modulus = p.take_int()
        p.take_punct(":")
        residue = p.take_int()
        residues.append((modulus, residue))
    elif keyword == "pin":
        verdict = p.take_name()
        if verdict not in ("in", "out"):
            p.fail("pin verdict must be 'in' or 'out'")
        pins.append((verdict, _parse_set(p)))
    else:
        p.fail(f"unknown oracle statement {keyword!r}")


def amend_oracle_spec(base: OracleSpec, statements: str) -> OracleSpec:
    """Apply ';'-separated oracle statements on top of an existing spec."""
    p = _Parser(_tokenize(statements))
    residues = list(base.residues)
    pins = list(base.pins)
    p.skip_nl()
    while not p.at_end():
        _parse_oracle_stmt(p, residues, pins)
        p.skip_nl()
    return OracleSpec(base.name, tuple(residues), tuple(pins))


def _parse_set(p: _Parser) -> SetSpec:
    if p.at_name("finite") or p.at_name("cofinite"):
        kind = p.take_name()
        p.take_punct("=")
        p.take_punct("{")
        members: list[int] = []
        while not p.at_punct("}"):
            members.append(p.take_int())
            if p.at_punct(","):
                p.take_punct(",")
        p.take_punct("}")
        return SetSpec(kind, members=tuple(sorted(set(members))))
    if p.at_name("mod"):
        p.take_name("mod")
        p.take_punct("=")
        modulus = p.take_int()
        p.take_punct(":")
        residue = p.take_int()
        return SetSpec("mod", modulus=modulus, residue=residue)
    if p.at_name("pre") or p.at_name("cycle"):
        pre, cycle = _parse_bracketed_pair(p, _take_bit)
        return SetSpec("bits", pre=pre, cycle=cycle)
    p.fail("expected an index-set (finite=, cofinite=, mod=, or pre=/cycle=)")


def _take_bit(p: _Parser) -> int:
    value = p.take_int()
    if value not in (0, 1):
        p.fail("bits must be 0 or 1")
    return value


def _parse_bracketed_pair(p: _Parser, take_item) -> tuple[tuple, tuple]:
    pre: list = []
    if p.at_name("pre"):
        p.take_name("pre")
        p.take_punct("=")
        pre = _parse_list(p, take_item)
    p.take_name("cycle")
    p.take_punct("=")
    cycle = _parse_list(p, take_item)
    if not cycle:
        p.fail("cycle must be nonempty")
    return tuple(pre), tuple(cycle)


def _parse_list(p: _Parser, take_item) -> list:
    p.take_punct("[")
    items: list = []
    while not p.at_punct("]"):
        items.append(take_item(p))
        if p.at_punct(","):
            p.take_punct(",")
    p.take_punct("]")
    return items


def _parse_seq(p: _Parser) -> SeqSpec:
    if p.at_name("gen"):
        p.take_name("gen")
        p.take_punct("=")
        name = p.take_name()
        args: list = []
        if p.at_punct("("):
            p.take_punct("(")
            while not p.at_punct(")"):
                args.append(p.take_number())
                if p.at_punct(","):
                    p.take_punct(",")
            p.take_punct(")")
        p.take_name("nmax")
        p.take_punct("=")
        nmax = p.take_int()
        return SeqSpec("gen", gen=(name, *args), nmax=nmax)
    pre, cycle = _parse_bracketed_pair(p, lambda q: q.take_number())
    return SeqSpec("ep", pre=pre, cycle=cycle)


def _take_ref(p: _Parser) -> tuple[str, str]:
    kind = p.take_name()
    if kind not in ("tip", "node"):
        p.fail("extremity references start with tip: or node:")
    p.take_punct(":")
    return (kind, p.take_name())


def _parse_ext(p: _Parser) -> ExtSpec:
    if p.at_name("gen"):
        p.take_name("gen")
        p.take_punct("=")
        name = p.take_name()
        if name not in ("omega-exceptional", "omega-tip"):
            p.fail(f"unknown extremity generator {name!r}")
        nmax = 0
        if p.at_name("nmax"):
            p.take_name("nmax")
            p.take_punct("=")
            nmax = p.take_int()
        return ExtSpec("gen", gen=name, nmax=nmax)
    pre, cycle = _parse_bracketed_pair(p, _take_ref)
    return ExtSpec("ep", pre=pre, cycle=cycle)


def _parse_graph_block(p: _Parser, project: Project) -> None:
    name = p.take_name()
    p.take_name("rank")
    p.take_punct("=")
    rank = _take_rank(p)
    scheme = None
    graded = False
    while not p.at_punct("{"):
        attr = p.take_name()
        if attr == "scheme":
            p.take_punct("=")
            p.take_name("tower")
            p.take_name("width")
            p.take_punct("=")
            scheme = TowerScheme(p.take_int())
        elif attr == "omega":
            p.take_punct("=")
            p.take_name("graded")
            graded = True
        else:
            p.fail(f"unknown graph attribute {attr!r}")
    p.take_punct("{")
    p.skip_nl()
    nodes0: list[str] = []
    branches: dict[str, tuple[str, str]] = {}
    tips: dict[int, set] = {}
    nodes: list[StandardNode] = []
    omega_tips: list[str] | None = None
    omega_nodes: list[StandardNode] = []
    while not p.at_punct("}"):
        keyword = p.take_name()
        if keyword == "nodes0":
            while p.at_name():
                nodes0.append(p.take_name())
        elif keyword == "branch":
            bid = p.take_name()
            u = p.take_name()
            v = p.take_name()
            if bid in branches:
                line, col = p._here()
                raise DuplicateId(f"branch {bid!r} is declared twice", line, col)
            branches[bid] = (u, v)
        elif keyword == "tips":
            rank_at = p.take_int()
            p.take_punct("=")
            pool = tips.setdefault(rank_at, set())
            while p.at_name():
                pool.add(p.take_name())
        elif keyword == "node":
            nodes.append(_parse_node_stmt(p, None))
        elif keyword == "omega-tips":
            omega_tips = omega_tips or []
            while p.at_name():
                omega_tips.append(p.take_name())
        elif keyword == "omega-node":
            omega_nodes.append(_parse_node_stmt(p, OMEGA))
        else:
            p.fail(f"unknown graph statement {keyword!r}")
        p.end_statement()
    p.take_punct("}")
    try:
        graph = StandardGraph(
            name,
            rank,
            nodes0,
            branches,
            tips={r: ids for r, ids in tips.items() if ids},
            nodes=nodes,
            scheme=scheme,
            omega_tips=omega_tips,
            omega_nodes=omega_nodes,
            graded_omega=graded,
        )
    except ValueError as exc:
        line, col = p._here()
        raise ProjectSyntaxError(str(exc), line, col) from None
    _register(project, project.graphs, name, graph, p)


def _take_rank(p: _Parser):
    tok = p.peek()
    if tok is not None and tok.kind == "name" and tok.text in ("omega", "omega-arrow"):
        p.k += 1
        return parse_rank(tok.text)
    return p.take_int()


def _parse_node_stmt(p: _Parser, forced_rank) -> StandardNode:
    ident = p.take_name()
    if forced_rank is None:
        p.take_name("rank")
        p.take_punct("=")
        rank = p.take_int()
    else:
        rank = forced_rank
    p.take_name("tips")
    p.take_punct("=")
    p.take_punct("{")
    owned: list[str] = []
    while not p.at_punct("}"):
        owned.append(p.take_name())
        if p.at_punct(","):
            p.take_punct(",")
    p.take_punct("}")
    exceptional = None
    if p.at_name("exceptional"):
        p.take_name("exceptional")
        p.take_punct("=")
        exceptional = p.take_name()
    return StandardNode.make(ident, rank, owned, exceptional)


def _parse_family_block(p: _Parser, project: Project) -> None:
    name = _open_block(p)
    prototypes: list[str] = []
    assignment = SeqSpec("ep", cycle=(0,))
    while not p.at_punct("}"):
        keyword = p.take_name()
        if keyword == "prototypes":
            while p.at_name():
                prototypes.append(p.take_name())
        elif keyword == "assignment":
            assignment = _parse_seq(p)
        else:
            p.fail(f"unknown family statement {keyword!r}")
        p.end_statement()
    p.take_punct("}")
    if not prototypes:
        p.fail(f"family {name!r} lists no prototypes")
    _register(
        project,
        project.families,
        name,
        FamilySpec(name, tuple(prototypes), assignment),
        p,
    )


def _parse_network_block(p: _Parser, project: Project) -> None:
    name = p.take_name()
    p.take_name("on")
    fam = p.take_name()
    p.take_punct("{")
    p.skip_nl()
    entries: dict = {}
    while not p.at_punct("}"):
        keyword = p.take_name()
        if keyword not in ("r", "e"):
            p.fail(f"unknown network statement {keyword!r}")
        bid = p.take_name()
        p.take_punct("=")
        seq = _parse_seq(p)
        if (keyword, bid) in entries:
            line, col = p._here()
            raise DuplicateId(
                f"network {name!r} sets {keyword} for {bid!r} twice", line, col
            )
        entries[(keyword, bid)] = seq
        p.end_statement()
    p.take_punct("}")
    _register(
        project,
        project.networks,
        name,
        NetworkSpec(name, fam, tuple(sorted(entries.items()))),
        p,
    )


def _parse_query_block(p: _Parser, project: Project) -> None:
    name = _open_block(p)
    fam = None
    level = None
    ext = None
    while not p.at_punct("}"):
        keyword = p.take_name()
        if keyword == "family":
            fam = p.take_name()
        elif keyword == "level":
            level = _take_rank(p)
        elif keyword == "extremity":
            ext = _parse_ext(p)
        else:
            p.fail(f"unknown query statement {keyword!r}")
        p.end_statement()
    p.take_punct("}")
    if fam is None or level is None or ext is None:
        p.fail(f"query {name!r} needs family, level and extremity")
    _register(project, project.queries, name, QuerySpec(name, fam, level, ext), p)


# -- serialization -----------------------------------------------------------------------


def serialize(project: Project) -> str:
    lines: list[str] = []
    for name in sorted(project.oracles):
        spec = project.oracles[name]
        lines.append(f"oracle {name} {{")
        for modulus, residue in spec.residues:
            lines.append(f"  residue mod={modulus} : {residue}")
        for verdict, sspec in spec.pins:
            lines.append(f"  pin {verdict} {sspec.render()}")
        lines.append("}")
        lines.append("")
    for name in sorted(project.graphs):
        lines.extend(_render_graph(project.graphs[name]))
        lines.append("")
    for name in sorted(project.families):
        spec = project.families[name]
        lines.append(f"family {name} {{")
        lines.append("  prototypes " + " ".join(spec.prototypes))
        lines.append(f"  assignment {spec.assignment.render()}")
        lines.append("}")
        lines.append("")
    for name in sorted(project.networks):
        spec = project.networks[name]
        lines.append(f"network {name} on {spec.family} {{")
        for (kind, bid), seq in spec.entries:
            lines.append(f"  {kind} {bid} = {seq.render()}")
        lines.append("}")
        lines.append("")
    for name in sorted(project.queries):
        spec = project.queries[name]
        lines.append(f"query {name} {{")
        lines.append(f"  family {spec.family}")
        lines.append(f"  level {rank_str(spec.level)}")
        lines.append(f"  extremity {spec.extremity.render()}")
        lines.append("}")
        lines.append("")
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"


def _render_graph(graph: StandardGraph) -> list[str]:
    header = f"graph {graph.name} rank={rank_str(graph.rank)}"
    if graph.scheme is not None:
        header += f" scheme=tower width={graph.scheme.width}"
    if graph.graded_omega:
        header += " omega=graded"
    lines = [header + " {"]
    if graph.nodes0:
        lines.append("  nodes0 " + " ".join(sorted(graph.nodes0)))
    for bid in sorted(graph.branches):
        u, v = graph.branches[bid]
        lines.append(f"  branch {bid} {u} {v}")
    for rank in sorted(graph._tip_layers):
        ids = graph._tip_layers[rank]
        if ids:
            lines.append(f"  tips {rank} = " + " ".join(sorted(ids)))
    explicit_nodes = sorted(
        (node for layer in graph._node_layers.values() for node in layer.values()),
        key=lambda n: (n.rank, n.ident),
    )
    for node in explicit_nodes:
        lines.append("  " + _render_node(node, "node", with_rank=True))
    if graph.omega_layer_explicit() and graph.omega_tips:
        lines.append("  omega-tips " + " ".join(sorted(graph.omega_tips)))
    for ident in sorted(graph.omega_nodes):
        lines.append("  " + _render_node(graph.omega_nodes[ident], "omega-node", False))
    lines.append("}")
    return lines


def _render_node(node: StandardNode, keyword: str, with_rank: bool) -> str:
    parts = [keyword, node.ident]
    if with_rank:
        parts.append(f"rank={node.rank}")
    parts.append("tips={%s}" % ", ".join(sorted(node.tips)))
    if node.exceptional is not None:
        parts.append(f"exceptional={node.exceptional}")
    return " ".join(parts)
