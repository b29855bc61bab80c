"""Strong bisimulation by signature-based partition refinement.

The refinement loop runs in the compiled ``_refine_ext`` kernel when it was
built, and in ``_refine_py`` otherwise.  Set ``PROCSPLIT_PURE_PYTHON=1`` to
force the fallback.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

from .multiactions import MultiAction
from .semantics import LTS

if os.environ.get("PROCSPLIT_PURE_PYTHON"):
    from ._refine_py import refine as _refine

    KERNEL = "python"
else:
    try:
        from ._refine_ext import refine as _refine

        KERNEL = "cython"
    except ImportError:  # extension not built
        from ._refine_py import refine as _refine

        KERNEL = "python"


@dataclass(frozen=True)
class Partition:
    blocks: tuple  # of frozenset[int]

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks:
            if not b or seen & b:
                raise ValueError("partition blocks must be nonempty and disjoint")
            seen |= b

    @classmethod
    def from_ids(cls, ids) -> Partition:
        groups: dict[int, set[int]] = {}
        for state, b in enumerate(ids):
            groups.setdefault(b, set()).add(state)
        return cls(tuple(frozenset(g) for _, g in sorted(groups.items())))

    def __len__(self):
        return len(self.blocks)


def _encode(ltss):
    """Disjoint union of several LTSs as integer arrays for the kernel."""
    label_ids: dict[MultiAction, int] = {}
    src, lab, dst, init = [], [], [], []
    offset = 0
    for lts in ltss:
        for s, label, t in lts.transitions:
            src.append(s + offset)
            lab.append(label_ids.setdefault(label, len(label_ids)))
            dst.append(t + offset)
        init.extend(1 if i in lts.terminating else 0 for i in range(lts.num_states))
        offset += lts.num_states
    return offset, src, lab, dst, init


def block_ids(*ltss: LTS, kernel=None) -> list[int]:
    """Bisimulation class of every state of the disjoint union of ``ltss``."""
    n, src, lab, dst, init = _encode(ltss)
    return (kernel or _refine)(n, src, lab, dst, init)


def coarsest_partition(lts: LTS) -> Partition:
    return Partition.from_ids(block_ids(lts))


@dataclass(frozen=True)
class Witness:
    """Common trace after which the two sides reach non-bisimilar states
    that differ in termination or in the labels they offer."""

    trace: tuple
    left_offers: frozenset
    right_offers: frozenset
    left_terminates: bool
    right_terminates: bool

    def __str__(self):
        def side(offers, term):
            items = sorted(str(a) for a in offers)
            if term:
                items.append("<terminated>")
            return "{" + ", ".join(items) + "}"

        steps = [str(a) for a in self.trace]
        steps.append(f"{side(self.left_offers, self.left_terminates)} vs "
                     f"{side(self.right_offers, self.right_terminates)}")
        return " -> ".join(steps)


@dataclass(frozen=True)
class Verdict:
    bisimilar: bool
    witness: Witness | None = None

    def __bool__(self):
        return self.bisimilar


def bisimilar(l1: LTS, l2: LTS) -> Verdict:
    """Decide strong bisimilarity of the initial states of ``l1`` and ``l2``."""
    ids = block_ids(l1, l2)
    off = l1.num_states
    if ids[l1.initial] == ids[off + l2.initial]:
        return Verdict(True)
    return Verdict(False, _witness(l1, l2, ids))


def _witness(l1: LTS, l2: LTS, ids) -> Witness:
    out1, out2 = l1.outgoing(), l2.outgoing()
    off = l1.num_states
    start = (l1.initial, l2.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        s, t = queue.popleft()
        offers1 = frozenset(a for a, _ in out1[s])
        offers2 = frozenset(a for a, _ in out2[t])
        term1, term2 = s in l1.terminating, t in l2.terminating
        if offers1 != offers2 or term1 != term2:
            trace = []
            node = (s, t)
            while parent[node] is not None:
                node, label = parent[node]
                trace.append(label)
            return Witness(tuple(reversed(trace)), offers1, offers2, term1, term2)
        for a, s2 in out1[s]:
            for b, t2 in out2[t]:
                pair = (s2, t2)
                if a == b and pair not in parent and ids[s2] != ids[off + t2]:
                    parent[pair] = ((s, t), a)
                    queue.append(pair)
    raise AssertionError("non-bisimilar states without a distinguishing pair")


def reduce(lts: LTS) -> LTS:
    """Quotient by the coarsest strong bisimulation.

    Quotient states are numbered by the smallest original state they contain.
    """
    ids = block_ids(lts)
    first: dict[int, int] = {}
    for state, b in enumerate(ids):
        first.setdefault(b, len(first))
    rep = [first[b] for b in ids]
    transitions = tuple(dict.fromkeys((rep[s], a, rep[t]) for s, a, t in lts.transitions))
    states = [None] * len(first)
    for state in range(lts.num_states):
        if states[rep[state]] is None:
            states[rep[state]] = lts.states[state]
    return LTS(tuple(states), rep[lts.initial], transitions,
               frozenset(rep[s] for s in lts.terminating))
