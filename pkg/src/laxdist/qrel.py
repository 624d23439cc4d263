"""Relations between carriers over a quantaloid.

A relation phi: X -/-> Y assigns to each pair an element
phi(x, y): |x| -> |y|.  Entries equal to bottom are never stored, and all
the algebra below is absorption-safe, so sparse storage is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .carriers import SetOverQ
from .report import SchemaError, ekey


@dataclass(frozen=True)
class FinMap:
    """Map of carriers, values aligned with src.elements."""
    src: SetOverQ
    dst: SetOverQ
    values: tuple

    def __call__(self, x):
        return self.values[self.src.index(x)]

    def then(self, g: "FinMap") -> "FinMap":
        return FinMap(self.src, g.dst, tuple(g(v) for v in self.values))

    def is_array_preserving(self) -> bool:
        return all(self.src.array_of(x) == self.dst.array_of(self(x))
                   for x in self.src.elements)

    def fibre(self, y) -> list:
        return [x for x, v in zip(self.src.elements, self.values) if v == y]


def fin_map(src: SetOverQ, dst: SetOverQ, fn) -> FinMap:
    return FinMap(src, dst, tuple(fn(x) for x in src.elements))


def identity_map(X: SetOverQ) -> FinMap:
    return FinMap(X, X, X.elements)


def all_maps(src: SetOverQ, dst: SetOverQ, array_preserving=True):
    """All maps src -> dst, in deterministic order."""
    choices = []
    for x in src.elements:
        if array_preserving:
            opts = [y for y in dst.elements
                    if dst.array_of(y) == src.array_of(x)]
        else:
            opts = list(dst.elements)
        if not opts:
            return
        choices.append(opts)
    for combo in itertools.product(*choices):
        yield FinMap(src, dst, combo)


class QRel:
    """Sparse relation X -/-> Y over a quantaloid."""

    def __init__(self, q, src: SetOverQ, dst: SetOverQ, entries=None):
        self.q = q
        self.src = src
        self.dst = dst
        self.entries = {}
        for (x, y), v in (entries or {}).items():
            hom = q.hom(src.array_of(x), dst.array_of(y))
            if v not in hom._set:
                raise SchemaError(
                    f"entry {v!r} at ({x!r},{y!r}) is not in "
                    f"hom({src.array_of(x)},{dst.array_of(y)})")
            if v != hom.bottom:
                self.entries[(x, y)] = v

    def at(self, x, y):
        v = self.entries.get((x, y))
        if v is None:
            return self.q.bottom(self.src.array_of(x), self.dst.array_of(y))
        return v

    def __eq__(self, other):
        return (isinstance(other, QRel) and self.src == other.src
                and self.dst == other.dst and self.entries == other.entries)

    def __hash__(self):
        return hash((self.src, self.dst,
                     tuple(sorted(self.entries.items(),
                                  key=lambda kv: ekey(kv[0])))))

    def __repr__(self):
        items = sorted(self.entries.items(), key=lambda kv: ekey(kv[0]))
        return f"QRel({items})"


def rel_from_fn(q, src, dst, fn) -> QRel:
    return QRel(q, src, dst, {(x, y): fn(x, y)
                              for x in src.elements for y in dst.elements})


def rel_bottom(q, src, dst) -> QRel:
    return QRel(q, src, dst, {})


def rel_leq(phi: QRel, psi: QRel) -> bool:
    if phi.src != psi.src or phi.dst != psi.dst:
        return False
    q, src, dst = phi.q, phi.src, phi.dst
    return all(q.leq(src.array_of(x), dst.array_of(y), v, psi.at(x, y))
               for (x, y), v in phi.entries.items())


def rel_join(phi: QRel, psi: QRel) -> QRel:
    q, src, dst = phi.q, phi.src, phi.dst
    out = dict(phi.entries)
    for (x, y), v in psi.entries.items():
        if (x, y) in out:
            out[(x, y)] = q.join(src.array_of(x), dst.array_of(y),
                                 out[(x, y)], v)
        else:
            out[(x, y)] = v
    return QRel(q, src, dst, out)


def rel_compose(psi: QRel, phi: QRel) -> QRel:
    """psi . phi for phi: X -/-> Y, psi: Y -/-> Z."""
    if phi.dst != psi.src:
        raise SchemaError("composition boundary mismatch")
    q, X, Y, Z = phi.q, phi.src, phi.dst, psi.dst
    by_y = {}
    for (y, z), b in psi.entries.items():
        by_y.setdefault(y, []).append((z, b))
    acc = {}
    for (x, y), a in phi.entries.items():
        rx, ry = X.array_of(x), Y.array_of(y)
        for z, b in by_y.get(y, ()):
            rz = Z.array_of(z)
            term = q.circ(rx, ry, rz, b, a)
            prev = acc.get((x, z))
            acc[(x, z)] = term if prev is None else q.join(rx, rz, prev, term)
    return QRel(q, X, Z, acc)


def graph(q, f: FinMap) -> QRel:
    """f_o: X -/-> Y with 1_|x| at (x, f x)."""
    if not f.is_array_preserving():
        raise SchemaError("graph needs an array-preserving map")
    return QRel(q, f.src, f.dst,
                {(x, f(x)): q.unit(f.src.array_of(x))
                 for x in f.src.elements})


def cograph(q, f: FinMap) -> QRel:
    """f^o: Y -/-> X with 1_|x| at (f x, x)."""
    if not f.is_array_preserving():
        raise SchemaError("cograph needs an array-preserving map")
    return QRel(q, f.dst, f.src,
                {(f(x), x): q.unit(f.src.array_of(x))
                 for x in f.src.elements})


def id_rel(q, X: SetOverQ) -> QRel:
    return graph(q, identity_map(X))


def whisker(psi: QRel, pre: FinMap | None = None, post: FinMap | None = None,
            pre_cograph=False, post_cograph=False) -> QRel:
    """Compose a relation with graphs (or cographs) of maps on either side."""
    q, out = psi.q, psi
    if pre is not None:
        r = cograph(q, pre) if pre_cograph else graph(q, pre)
        out = rel_compose(out, r)
    if post is not None:
        r = cograph(q, post) if post_cograph else graph(q, post)
        out = rel_compose(r, out)
    return out


def transpose(phi: QRel) -> QRel:
    """Entrywise transpose; only meaningful over a one-object quantaloid,
    where every entry lives in the single hom-set."""
    if not phi.q.is_quantale:
        raise SchemaError("transpose requires a one-object quantaloid")
    return QRel(phi.q, phi.dst, phi.src,
                {(y, x): v for (x, y), v in phi.entries.items()})


def all_relations(q, src: SetOverQ, dst: SetOverQ):
    """Every relation src -/-> dst; exponential, callers keep sizes small."""
    pairs = [(x, y) for x in src.elements for y in dst.elements]
    per_pair = [q.hom(src.array_of(x), dst.array_of(y)).elements
                for x, y in pairs]
    for combo in itertools.product(*per_pair):
        yield QRel(q, src, dst, dict(zip(pairs, combo)))


def sample_relation(q, src: SetOverQ, dst: SetOverQ, rng,
                    support: int = 4) -> QRel:
    entries = {}
    for _ in range(support):
        x = src.sample(rng)
        y = dst.sample(rng)
        hom = q.hom(src.array_of(x), dst.array_of(y))
        entries[(x, y)] = hom.elements[rng.randrange(len(hom.elements))]
    return QRel(q, src, dst, entries)
