"""Synchronous and asynchronous regions of a transition system.

Two actions share a synchronous region when they occur in one label, or when
labels containing them leave a common state.  Both relations are symmetric,
so the regions are the connected components of an undirected graph over
actions, computed here with union-find.
"""
from __future__ import annotations

import logging
from typing import Iterable

from .semantics import LTS

log = logging.getLogger(__name__)


class UnionFind:
    """Disjoint sets over hashable items with path halving and union by size."""

    def __init__(self, items: Iterable = ()):
        self.parent = {}
        self.size = {}
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        self.add(x)
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return rx
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        return rx

    def union_all(self, items):
        items = list(items)
        for x in items[:1]:
            self.add(x)
        for y in items[1:]:
            self.union(items[0], y)

    def groups(self) -> list[frozenset]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return [frozenset(g) for g in out.values()]


def _region_forest(lts: LTS, extra: Iterable[str] = ()) -> UnionFind:
    uf = UnionFind(extra)
    enabled: dict[int, set[str]] = {}
    for s, label, _ in lts.transitions:
        for a in label.actions:
            uf.add(a)
        if label.actions:
            uf.union_all(label.actions)
            enabled.setdefault(s, set()).update(label.actions)
    for names in enabled.values():
        uf.union_all(sorted(names))
    return uf


def sync_region(lts: LTS, action: str) -> frozenset[str]:
    """Least action set containing ``action`` closed under co-occurrence and
    co-enabledness in the reachable states of ``lts``."""
    uf = _region_forest(lts, [action])
    root = uf.find(action)
    return frozenset(x for x in uf.parent if uf.find(x) == root)


def sync_regions(lts: LTS, actions: Iterable[str] = ()) -> frozenset[frozenset[str]]:
    """All synchronous regions; ``actions`` that label nothing become singletons."""
    regions = frozenset(_region_forest(lts, actions).groups())
    check_partition(regions)
    return regions


def check_partition(regions) -> None:
    seen: set[str] = set()
    for r in regions:
        if not r or seen & r:
            raise AssertionError("synchronous regions must be nonempty and disjoint")
        seen |= r


def _project(end: str, node: str, region_of: dict) -> str | None:
    if end in region_of:
        return end
    if node in region_of:
        return node
    return None


def async_regions(regions, topo) -> frozenset[tuple[str, str]]:
    """Channel-connected pairs whose ends lie in different synchronous regions.

    A channel end is matched against the region actions by its own end action
    first and by its node name second, so both raw and composed connector
    systems work.  Pairs are returned as sorted tuples.
    """
    region_of = {a: r for r in regions for a in r}
    pairs = set()
    for (e1, n1), (e2, n2) in topo.channel_ends():
        x, y = _project(e1, n1, region_of), _project(e2, n2, region_of)
        if x is None or y is None:
            log.warning("channel ends %s/%s do not occur in the transition system", e1, e2)
            continue
        if region_of[x] != region_of[y]:
            pairs.add(tuple(sorted((x, y))))
    return frozenset(pairs)


def format_regions(regions) -> list[str]:
    return sorted(",".join(sorted(r)) for r in regions)
