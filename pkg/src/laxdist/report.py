"""Structured check reports.

Every checker in this package returns a Report: a list of named items, one
per axiom, each carrying a status, the quantification domain that was
actually used, and (on failure) the first witness in deterministic order.
Reports serialize to JSON deterministically: no timestamps, no object ids,
elements encoded through a canonical sort.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS_EXHAUSTIVE = "pass-exhaustive"
PASS_SAMPLED = "pass-sampled"
FAIL = "fail"
SKIPPED = "skipped"


class SchemaError(ValueError):
    """Malformed definition or table, as opposed to a failed axiom."""


class BudgetError(RuntimeError):
    """A carrier was asked to enumerate beyond its budget."""


def ekey(e):
    """Total order key over the element kinds we use (labels, tuples,
    frozensets, presheaves, pairs). Type tag first so mixed kinds sort."""
    if isinstance(e, str):
        return ("s", e)
    if isinstance(e, bool):
        return ("b", e)
    if isinstance(e, int):
        return ("i", e)
    if isinstance(e, tuple):
        return ("t", len(e), tuple(ekey(x) for x in e))
    if isinstance(e, frozenset):
        return ("f", len(e), tuple(sorted(ekey(x) for x in e)))
    # presheaf-like: anything exposing codomain/entries
    cod = getattr(e, "codomain", None)
    if cod is not None:
        return ("p", cod, tuple(sorted(ekey(x) for x in e.entries)))
    return ("r", repr(e))


def encode(e):
    """JSON-able encoding of an element, deterministic."""
    if isinstance(e, str):
        return e
    if isinstance(e, (bool, int)):
        return e
    if isinstance(e, tuple):
        return {"tuple": [encode(x) for x in e]}
    if isinstance(e, frozenset):
        return {"set": [encode(x) for x in sorted(e, key=ekey)]}
    cod = getattr(e, "codomain", None)
    if cod is not None:
        comps = sorted(e.entries, key=ekey)
        return {"presheaf": {"codomain": cod,
                             "components": [[encode(x), v] for x, v in comps]}}
    return {"repr": repr(e)}


@dataclass
class CheckItem:
    name: str
    status: str
    domain: str = ""
    strict: bool | None = None
    witness: dict | None = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status in (PASS_EXHAUSTIVE, PASS_SAMPLED)

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status, "domain": self.domain}
        if self.strict is not None:
            d["strict"] = self.strict
        if self.witness is not None:
            d["witness"] = self.witness
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    title: str
    items: list[CheckItem] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, *a, **kw) -> CheckItem:
        item = CheckItem(*a, **kw)
        self.items.append(item)
        return item

    def extend(self, other: "Report", prefix: str = ""):
        for it in other.items:
            self.items.append(CheckItem(prefix + it.name, it.status, it.domain,
                                        it.strict, it.witness, it.note))

    @property
    def ok(self) -> bool:
        return all(it.ok or it.status == SKIPPED for it in self.items)

    @property
    def all_strict(self) -> bool:
        return self.ok and all(it.strict for it in self.items
                               if it.strict is not None)

    def item(self, name: str) -> CheckItem:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"title": self.title,
                "meta": self.meta,
                "ok": self.ok,
                "items": [it.to_dict() for it in self.items]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def summary(self) -> str:
        lines = [self.title]
        for it in self.items:
            flag = "" if it.strict is None else (" [strict]" if it.strict else " [lax]")
            dom = f"  ({it.domain})" if it.domain else ""
            lines.append(f"  {it.status:<16} {it.name}{flag}{dom}")
        return "\n".join(lines)


def witness(**kw) -> dict:
    return {k: encode(v) for k, v in kw.items()}
