"""Reo channels and nodes as recursive processes, and connector composition.

Every channel end coinciding on node ``n`` gets an action ``n_k`` (the k-th
end declared at ``n``); the node side of that end is ``n_k'``.  Composition
puts all channel, node and boundary processes in parallel, fuses each pair
``n_k|n_k'`` into the node action ``n`` and blocks the unfused end actions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    ArityMismatch,
    DanglingNode,
    DuplicateChannel,
    ParseError,
    TopologyError,
    UnknownEnd,
)
from .multiactions import MultiAction, check_action
from .process import (
    Block,
    Comm,
    CommRule,
    Definition,
    Ref,
    Specification,
    act,
    alt,
    par,
    seq,
)

CHANNEL_KINDS = {
    "sync": "Sync",
    "lossysync": "LossySync",
    "syncdrain": "SyncDrain",
    "fifo": "Fifo",
}

# kind -> (sink-side ends, source-side ends); SyncDrain has two sources
_ARITY = {
    "Sync": 2,
    "LossySync": 2,
    "SyncDrain": 2,
    "Fifo": 2,
    "Replicator": 3,
    "Merger": 3,
    "PumpingStation": 2,
    "Boundary": 1,
}


def primitive(kind: str, *ends: str, name: str | None = None) -> Definition:
    """Recursive definition of a channel or node primitive.

    Ends are given in the order of the textual syntax, e.g.
    ``primitive("Merger", s1, s2, t)`` for two sink ends merged into ``t``.
    """
    if kind not in _ARITY:
        raise ValueError(f"unknown primitive {kind!r}")
    if len(ends) != _ARITY[kind]:
        raise ArityMismatch(f"{kind} takes {_ARITY[kind]} ends, got {len(ends)}")
    name = name or kind
    me = Ref(name)
    if kind in ("Sync", "SyncDrain", "PumpingStation", "Replicator"):
        body = seq(act(*ends), me)
    elif kind == "LossySync":
        a, b = ends
        body = seq(alt(act(a, b), act(a)), me)
    elif kind == "Fifo":
        a, b = ends
        body = seq(act(a), act(b), me)
    elif kind == "Merger":
        s1, s2, t = ends
        body = seq(alt(act(s1, t), act(s2, t)), me)
    else:
        body = seq(act(ends[0]), me)
    return Definition(name, body)


@dataclass(frozen=True)
class ChannelDecl:
    kind: str  # one of CHANNEL_KINDS values
    first: str
    second: str

    @property
    def directions(self) -> tuple[str, str]:
        """Role of each end seen from the channel: 'source' accepts data."""
        if self.kind == "SyncDrain":
            return ("source", "source")
        return ("source", "sink")


@dataclass
class ConnectorTopology:
    channels: list = field(default_factory=list)
    boundary: set = field(default_factory=set)

    def __post_init__(self):
        self.channels = list(self.channels)
        self.boundary = set(self.boundary)
        seen = set()
        for ch in self.channels:
            if ch.kind not in CHANNEL_KINDS.values():
                raise TopologyError(f"unknown channel kind {ch.kind!r}")
            check_action(ch.first)
            check_action(ch.second)
            key = (ch.kind, ch.first, ch.second)
            if ch.kind == "SyncDrain":
                key = (ch.kind, *sorted((ch.first, ch.second)))
            if key in seen:
                raise DuplicateChannel(f"channel {ch.kind} {ch.first} {ch.second} declared twice")
            seen.add(key)
        for n in self.boundary:
            check_action(n)

    def end_actions(self) -> list[tuple[str, str]]:
        """Per channel, the pair of generated end actions."""
        counts: dict[str, int] = {}
        out = []
        for ch in self.channels:
            pair = []
            for node in (ch.first, ch.second):
                counts[node] = counts.get(node, 0) + 1
                pair.append(f"{node}_{counts[node]}")
            out.append(tuple(pair))
        return out

    def channel_ends(self) -> list[tuple[tuple[str, str], tuple[str, str]]]:
        return [((e1, ch.first), (e2, ch.second))
                for ch, (e1, e2) in zip(self.channels, self.end_actions())]

    def nodes(self) -> list[str]:
        out: list[str] = []
        for ch in self.channels:
            for n in (ch.first, ch.second):
                if n not in out:
                    out.append(n)
        return out

    def node_of(self, end: str) -> str:
        for (e1, n1), (e2, n2) in self.channel_ends():
            if end == e1:
                return n1
            if end == e2:
                return n2
        raise UnknownEnd(f"{end!r} is not a channel end")


def connected(topo: ConnectorTopology, a: str, b: str) -> bool:
    """True iff ends ``a`` and ``b`` are the two ends of one channel."""
    ends = topo.end_actions()
    known = {e for pair in ends for e in pair}
    for x in (a, b):
        if x not in known:
            raise UnknownEnd(f"{x!r} is not a channel end")
    return a != b and any({a, b} == set(pair) for pair in ends)


def _bar(action: str) -> str:
    return action + "'"


def _node_processes(node, ins, outs):
    """Definitions implementing a node that takes from one of ``ins`` and
    offers to all of ``outs``, plus the internal link actions introduced."""
    defs, links = [], []

    def link():
        name = f"{node}_l{len(links) + 1}"
        links.append(name)
        return name

    def named(kind, *ends):
        base = f"{kind}_{node}"
        taken = {d.name for d in defs}
        name, k = base, 1
        while name in taken:
            k += 1
            name = f"{base}_{k}"
        defs.append(primitive(kind, *ends, name=name))

    ins, outs = list(ins), list(outs)
    if len(ins) == 1 and len(outs) == 1:
        named("PumpingStation", ins[0], outs[0])
        return defs, links
    while len(ins) > 1:
        if len(ins) == 2 and len(outs) == 1:
            named("Merger", ins[0], ins[1], outs[0])
            return defs, links
        out = link()
        named("Merger", ins[0], ins[1], out)
        ins = [_bar(out)] + ins[2:]
    while len(outs) > 2:
        out = link()
        named("Replicator", ins[0], outs[0], out)
        ins, outs = [_bar(out)], outs[1:]
    if len(outs) == 2:
        named("Replicator", ins[0], outs[0], outs[1])
    else:
        named("PumpingStation", ins[0], outs[0])
    return defs, links


def compose(topo: ConnectorTopology, root: str = "Connector") -> Specification:
    """Process of the whole connector as ``block(comm(P1 || ... || Pn))``."""
    ends = topo.end_actions()
    at_node: dict[str, list[tuple[str, str]]] = {}
    for ch, pair in zip(topo.channels, ends):
        for end, node, role in zip(pair, (ch.first, ch.second), ch.directions):
            at_node.setdefault(node, []).append((end, role))
    for n in sorted(topo.boundary):
        if n not in at_node:
            raise DanglingNode(f"boundary node {n!r} has no channel ends")

    node_defs: dict[str, list[Definition]] = {}
    rules: list[CommRule] = []
    blocked: set[str] = set()

    def fuse(action, node):
        rules.append(CommRule(MultiAction((action, _bar(action))), node))
        blocked.update((action, _bar(action)))

    for node, node_ends in at_node.items():
        for end, _ in node_ends:
            fuse(end, node)
        # a channel's sink end delivers into the node; its source end takes from it
        ins = [_bar(e) for e, role in node_ends if role == "sink"]
        outs = [_bar(e) for e, role in node_ends if role == "source"]
        defs = []
        if node in topo.boundary:
            if len(node_ends) == 1:
                defs.append(primitive("Boundary", _bar(node_ends[0][0]),
                                      name=f"Boundary_{node}"))
                node_defs[node] = defs
                continue
            if ins and outs:
                raise TopologyError(f"boundary node {node!r} has both sink and source ends")
            bnd = f"{node}_bnd"
            fuse(bnd, node)
            defs.append(primitive("Boundary", bnd, name=f"Boundary_{node}"))
            if not ins:
                ins = [_bar(bnd)]
            else:
                outs = [_bar(bnd)]
        elif not ins or not outs:
            raise DanglingNode(
                f"node {node!r} has only {'source' if not ins else 'sink'} ends "
                "and is not declared boundary")
        more, links = _node_processes(node, ins, outs)
        for link in links:
            fuse(link, node)
        node_defs[node] = defs + more

    definitions: dict[str, object] = {}
    components = []
    emitted: set[str] = set()

    def emit_node(node):
        if node not in emitted:
            emitted.add(node)
            for d in node_defs[node]:
                definitions[d.name] = d.body
                components.append(Ref(d.name))

    for i, (ch, (e1, e2)) in enumerate(zip(topo.channels, ends), start=1):
        emit_node(ch.first)
        d = primitive(ch.kind, e1, e2, name=f"{ch.kind}{i}")
        definitions[d.name] = d.body
        components.append(Ref(d.name))
        emit_node(ch.second)

    if root in definitions:
        raise TopologyError(f"root name {root!r} clashes with a component")
    body = Block(frozenset(blocked), Comm(frozenset(rules), par(*components)))
    return Specification({root: body, **definitions}, root)


_LINE_RE = re.compile(
    r"\s*(?P<kind>fifo|sync|lossysync)\s+(?P<a>\S+)\s*->\s*(?P<b>\S+)\s*$"
    r"|\s*(?P<drain>syncdrain)\s+(?P<c>\S+)\s*--\s*(?P<d>\S+)\s*$"
    r"|\s*boundary\s+(?P<nodes>.+)$")


def parse_topology(text: str) -> ConnectorTopology:
    """Parse the line-oriented topology format (``%`` starts a comment)."""
    channels, boundary = [], set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0]
        if not line.strip():
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise ParseError("expected a channel or boundary declaration", lineno,
                             len(line) - len(line.lstrip()) + 1)
        try:
            if m.group("kind"):
                channels.append(ChannelDecl(CHANNEL_KINDS[m.group("kind")],
                                            check_action(m.group("a")), check_action(m.group("b"))))
            elif m.group("drain"):
                channels.append(ChannelDecl("SyncDrain", check_action(m.group("c")),
                                            check_action(m.group("d"))))
            else:
                for n in m.group("nodes").split(","):
                    boundary.add(check_action(n.strip()))
        except TopologyError:
            raise
        except Exception as exc:
            raise ParseError(str(exc), lineno, 1) from None
    return ConnectorTopology(channels, boundary)


def format_topology(topo: ConnectorTopology) -> str:
    lines = []
    for ch in topo.channels:
        if ch.kind == "SyncDrain":
            lines.append(f"syncdrain {ch.first} -- {ch.second}")
        else:
            lines.append(f"{ch.kind.lower()} {ch.first} -> {ch.second}")
    if topo.boundary:
        lines.append("boundary " + ", ".join(sorted(topo.boundary)))
    return "\n".join(lines) + "\n"
