"""Carriers: finite (or budget-enumerable) sets of elements over the object
set of a quantaloid.

A carrier knows its exact size, can enumerate itself in a fixed
deterministic order when that size is within budget, and can always draw a
seeded random element.  Checkers quantify over enumerations when they fit
and over samples otherwise; which one happened is recorded in the report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .report import BudgetError

# hard guard against accidental materialization of astronomic carriers
HARD_ENUM_CAP = 1 << 20


@dataclass(frozen=True)
class ElementBudget:
    """Limits on quantification domains, never on the structures themselves.

    max_list_len bounds tuple lengths in list-monad universes, max_depth the
    nesting the checkers build (TTX, TTTX), max_set_card the support of
    sampled subsets over non-enumerable bases.  Whenever a carrier exceeds
    max_enum (or the presheaf-specific px_max / ppx_max), checkers switch to
    sample_count seeded draws and say so in the report.
    """
    max_list_len: int = 2
    max_depth: int = 3
    max_set_card: int = 8
    sample_count: int = 500
    seed: int = 7
    px_max: int = 4096
    ppx_max: int = 65536
    max_enum: int = 4096
    sample_support: int = 3

    def rng(self, salt: int = 0) -> random.Random:
        return random.Random(self.seed * 1000003 + salt)

    def describe(self) -> str:
        return (f"budget(list<={self.max_list_len}, enum<={self.max_enum}, "
                f"samples={self.sample_count}, seed={self.seed})")


DEFAULT_BUDGET = ElementBudget()


class Carrier:
    def size(self) -> int:
        raise NotImplementedError

    def all(self) -> tuple:
        raise NotImplementedError

    def sample(self, rng):
        raise NotImplementedError

    def array_of(self, e) -> str:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def enumerable(self, limit: int) -> bool:
        return self.size() <= min(limit, HARD_ENUM_CAP)

    def as_set(self) -> "SetOverQ":
        els = self.all()
        return SetOverQ(els, tuple(self.array_of(e) for e in els))


@dataclass(frozen=True)
class SetOverQ(Carrier):
    """Explicit finite set with an array map into the objects of Q."""
    elements: tuple
    array: tuple
    _index: dict = field(init=False, compare=False, repr=False, hash=False,
                         default=None)

    def __post_init__(self):
        if len(self.elements) != len(self.array):
            raise ValueError("array must be parallel to elements")
        object.__setattr__(self, "_index",
                           {e: i for i, e in enumerate(self.elements)})

    def size(self) -> int:
        return len(self.elements)

    def all(self) -> tuple:
        return self.elements

    def sample(self, rng):
        return self.elements[rng.randrange(len(self.elements))]

    def array_of(self, e) -> str:
        return self.array[self._index[e]]

    def index(self, e) -> int:
        return self._index[e]

    def __contains__(self, e):
        return e in self._index

    def describe(self) -> str:
        return f"set({len(self.elements)})"

    def as_set(self) -> "SetOverQ":
        return self


def set_over(q, pairs) -> SetOverQ:
    """Build a SetOverQ from (element, object-label) pairs."""
    els, arr = [], []
    for e, a in pairs:
        if a not in q.objects:
            raise ValueError(f"array value {a!r} is not an object of {q.name}")
        els.append(e)
        arr.append(a)
    return SetOverQ(tuple(els), tuple(arr))


def discrete(q, labels) -> SetOverQ:
    """Carrier over a one-object quantaloid."""
    o = q.objects[0]
    return SetOverQ(tuple(labels), tuple(o for _ in labels))


def enum_or_none(carrier: Carrier, limit: int):
    if carrier.enumerable(limit):
        return carrier.all()
    return None


def draws(carrier: Carrier, rng, count: int):
    return [carrier.sample(rng) for _ in range(count)]


def require_enum(carrier: Carrier, limit: int, what: str) -> tuple:
    if not carrier.enumerable(limit):
        raise BudgetError(
            f"{what} has size {carrier.size()}, beyond budget {limit}")
    return carrier.all()
