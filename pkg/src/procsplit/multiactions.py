"""Multi-actions: finite multisets of action names.

Actions are plain strings.  A :class:`MultiAction` keeps its actions as a
name-sorted tuple with repetitions, so commutativity, associativity and the
unit law of ``join`` hold by construction.  The empty multi-action is tau.
"""
from __future__ import annotations

import re
from collections import Counter
from typing import Iterable

from .errors import InvalidAction, ReservedSeparatorInAction

SEPARATOR = "#"
TAU_TEXT = "tau"

ACTION_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*\Z")


def check_action(name: str) -> str:
    """Validate a user-supplied action name and return it unchanged."""
    if not isinstance(name, str) or not name:
        raise InvalidAction(f"invalid action name {name!r}")
    if SEPARATOR in name:
        raise ReservedSeparatorInAction(
            f"action {name!r} contains the reserved separator {SEPARATOR!r}")
    if not ACTION_RE.match(name):
        raise InvalidAction(f"invalid action name {name!r}")
    return name


class MultiAction:
    """Immutable multiset of actions in canonical (sorted) form."""

    __slots__ = ("actions", "_hash")

    def __init__(self, actions: Iterable[str] = ()):
        if isinstance(actions, str):
            raise TypeError("MultiAction expects an iterable of action names")
        items = tuple(sorted(actions))
        for a in items:
            if not isinstance(a, str) or not a:
                raise InvalidAction(f"invalid action name {a!r}")
        object.__setattr__(self, "actions", items)
        object.__setattr__(self, "_hash", hash(items))

    @classmethod
    def of(cls, *names: str) -> MultiAction:
        return cls(names)

    def __setattr__(self, key, value):
        raise AttributeError("MultiAction is immutable")

    def __eq__(self, other):
        if not isinstance(other, MultiAction):
            return NotImplemented
        return self.actions == other.actions

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, MultiAction):
            return NotImplemented
        return (len(self.actions), self.actions) < (len(other.actions), other.actions)

    def __len__(self):
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def __contains__(self, action):
        return action in self.actions

    def __repr__(self):
        return f"MultiAction({str(self)!r})"

    def __str__(self):
        return "|".join(self.actions) if self.actions else TAU_TEXT

    def __reduce__(self):
        return (MultiAction, (self.actions,))

    def counts(self) -> Counter:
        return Counter(self.actions)


TAU = MultiAction()


def join(alpha: MultiAction, beta: MultiAction) -> MultiAction:
    """Multiset union of two multi-actions."""
    if not beta.actions:
        return alpha
    if not alpha.actions:
        return beta
    return MultiAction(alpha.actions + beta.actions)


def submulti(alpha: MultiAction, beta: MultiAction) -> bool:
    """True iff ``alpha`` is contained in ``beta`` with multiplicities."""
    if len(alpha) > len(beta):
        return False
    have = beta.counts()
    for a, n in alpha.counts().items():
        if have[a] < n:
            return False
    return True


def subtract(alpha: MultiAction, beta: MultiAction) -> MultiAction:
    """Multiset difference; removing an absent action is a no-op."""
    if not beta.actions or not alpha.actions:
        return alpha
    rest = alpha.counts()
    rest.subtract(beta.counts())
    return MultiAction(rest.elements())


def acts_of(alpha: MultiAction) -> frozenset[str]:
    return frozenset(alpha.actions)


def is_tau(alpha: MultiAction) -> bool:
    return not alpha.actions


def parse_multiaction(text: str) -> MultiAction:
    """Parse ``a|b|c`` or ``tau``; whitespace around names is ignored."""
    names = []
    for part in text.split("|"):
        part = part.strip()
        if part == TAU_TEXT:
            continue
        names.append(check_action(part))
    return MultiAction(names)
