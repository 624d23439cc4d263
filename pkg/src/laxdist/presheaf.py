"""Discrete presheaves over a quantaloid and their monad.

A presheaf on a carrier X with codomain object s is a family of morphisms
sigma_x: |x| -> s, one per element.  Stored sparsely: entries equal to
bottom are dropped, which is exact because every formula below (joins,
composites, meets against bottom) absorbs bottom.  The set PX of all
presheaves on X is itself a carrier; its exact size is computed even when
it is far beyond enumeration, in which case sampling produces sparse
presheaves with small support.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .carriers import Carrier, SetOverQ
from .qrel import FinMap, QRel, fin_map
from .report import (FAIL, PASS_EXHAUSTIVE, PASS_SAMPLED, SKIPPED,
                     BudgetError, Report, ekey, witness)


@dataclass(frozen=True)
class Presheaf:
    codomain: str
    entries: frozenset          # of (element, label), bottoms omitted

    def at(self, x):
        d = object.__getattribute__(self, "__dict__").get("_lookup")
        if d is None:
            d = dict(self.entries)
            object.__setattr__(self, "_lookup", d)
        return d.get(x)

    def support(self):
        return [x for x, _ in sorted(self.entries, key=lambda e: ekey(e[0]))]

    def __repr__(self):
        items = sorted(self.entries, key=lambda e: ekey(e[0]))
        return f"Presheaf({self.codomain}; {items})"


def make_presheaf(q, array_of, codomain: str, items) -> Presheaf:
    """Build a presheaf, joining duplicate keys and dropping bottoms."""
    kept = {}
    for x, v in items:
        prev = kept.get(x)
        kept[x] = v if prev is None else q.join(array_of(x), codomain,
                                                prev, v)
    return Presheaf(codomain, frozenset(
        (x, v) for x, v in kept.items()
        if v != q.bottom(array_of(x), codomain)))


def value(q, X, p: Presheaf, x):
    """Component of p at x, bottom when x is off the support."""
    v = p.at(x)
    return q.bottom(X.array_of(x), p.codomain) if v is None else v


def p_leq(q, X, p1: Presheaf, p2: Presheaf) -> bool:
    if p1.codomain != p2.codomain:
        return False
    return all(q.leq(X.array_of(x), p1.codomain, v, value(q, X, p2, x))
               for x, v in p1.entries)


def p_join(q, X, p1: Presheaf, p2: Presheaf) -> Presheaf:
    assert p1.codomain == p2.codomain
    out = dict(p1.entries)
    for x, v in p2.entries:
        if x in out:
            out[x] = q.join(X.array_of(x), p1.codomain, out[x], v)
        else:
            out[x] = v
    return Presheaf(p1.codomain, frozenset(out.items()))


def p_meet(q, X, p1: Presheaf, p2: Presheaf) -> Presheaf:
    """Binary meet; off-support components are bottom, so the support of the
    meet is inside the intersection of supports."""
    assert p1.codomain == p2.codomain
    items = []
    for x, v in p1.entries:
        w = p1.codomain
        other = p2.at(x)
        if other is not None:
            items.append((x, q.meet(X.array_of(x), w, v, other)))
    return make_presheaf(q, X.array_of, p1.codomain, items)


class PresheafCarrier(Carrier):
    """The set of all presheaves on a base carrier."""

    def __init__(self, q, base: Carrier, name=""):
        self.q = q
        self.base = base
        self.name = name or f"P({base.describe()})"
        self.sample_support = 3
        self._all = None
        self._size = None

    def size(self) -> int:
        if self._size is None:
            if not self.base.enumerable(1 << 20):
                self._size = 1 << 62   # exact size not computable; huge
            else:
                total = 0
                els = self.base.all()
                for s in self.q.objects:
                    prod = 1
                    for x in els:
                        prod *= len(self.q.hom(self.base.array_of(x), s)
                                    .elements)
                    total += prod
                self._size = total
        return self._size

    def all(self) -> tuple:
        if self._all is None:
            if not self.enumerable(1 << 20):
                raise BudgetError(f"{self.name} too large to enumerate "
                                  f"({self.size()})")
            els = self.base.all()
            out = []
            for s in self.q.objects:
                axes = [self.q.hom(self.base.array_of(x), s).elements
                        for x in els]
                for combo in itertools.product(*axes):
                    out.append(make_presheaf(self.q, self.base.array_of, s,
                                             zip(els, combo)))
            self._all = tuple(out)
        return self._all

    def sample(self, rng, support: int | None = None):
        if self._all is not None or self.enumerable(4096):
            els = self.all()
            return els[rng.randrange(len(els))]
        s = self.q.objects[rng.randrange(len(self.q.objects))]
        items = []
        for _ in range(support if support is not None else
                       self.sample_support):
            x = self.base.sample(rng)
            hom = self.q.hom(self.base.array_of(x), s).elements
            items.append((x, hom[rng.randrange(len(hom))]))
        return make_presheaf(self.q, self.base.array_of, s, items)

    def array_of(self, p) -> str:
        return p.codomain

    def describe(self) -> str:
        return f"P({self.base.describe()})"

    def leq(self, p1, p2):
        return p_leq(self.q, self.base, p1, p2)

    def value(self, p, x):
        return value(self.q, self.base, p, x)


def build_px(q, X: Carrier, limit: int | None = None) -> PresheafCarrier:
    px = PresheafCarrier(q, X)
    if limit is not None and not px.enumerable(limit):
        raise BudgetError(f"|PX| = {px.size()} exceeds budget {limit}")
    return px


# --- the monad structure ---------------------------------------------------

def yoneda(q, X: Carrier, x) -> Presheaf:
    """y_X(x): the unit presheaf concentrated at x."""
    s = X.array_of(x)
    return make_presheaf(q, X.array_of, s, [(x, q.unit(s))])


def yoneda_map(q, X: SetOverQ, PX: PresheafCarrier) -> FinMap:
    return fin_map(X, PX.as_set(), lambda x: yoneda(q, X, x))


def direct_image(q, array_of_dst, f, sigma: Presheaf) -> Presheaf:
    """f_! sigma along an array-preserving f (callable on the support)."""
    acc = {}
    s = sigma.codomain
    for x, v in sigma.entries:
        y = f(x)
        prev = acc.get(y)
        acc[y] = v if prev is None else q.join(array_of_dst(y), s, prev, v)
    return Presheaf(s, frozenset(acc.items()))


def inverse_image(q, src_elements, f, tau: Presheaf) -> Presheaf:
    """f^! tau: component at x is tau at f(x).  Needs the source enumerated."""
    items = [(x, tau.at(f(x))) for x in src_elements
             if tau.at(f(x)) is not None]
    return Presheaf(tau.codomain, frozenset(items))


def mult(q, X: Carrier, Sigma: Presheaf) -> Presheaf:
    """s_X: presheaf on PX to presheaf on X,
    (s_X Sigma)_x = join over sigma of Sigma_sigma . sigma_x.
    Support-driven: never enumerates PX.  X is the base the inner
    presheaves live on (only its array_of is used)."""
    acc = {}
    w = Sigma.codomain
    for sigma, outer in Sigma.entries:
        for x, v in sigma.entries:
            rx = X.array_of(x)
            term = q.circ(rx, sigma.codomain, w, outer, v)
            prev = acc.get(x)
            acc[x] = term if prev is None else q.join(rx, w, prev, term)
    return make_presheaf(q, X.array_of, w, acc.items())


def mate(q, X: Carrier, Y: Carrier, phi: QRel, y) -> Presheaf:
    """The presheaf phi(-, y) on X with codomain |y|."""
    items = [(x, v) for (x, yy), v in phi.entries.items() if yy == y]
    return Presheaf(Y.array_of(y), frozenset(items))


def mate_map(q, phi: QRel, PX: PresheafCarrier) -> FinMap:
    """Order-isomorphic transpose of a relation X -/-> Y into Y -> PX."""
    Y = phi.dst
    return fin_map(Y, PX.as_set(), lambda y: mate(q, phi.src, Y, phi, y))


def unmate(q, X: SetOverQ, Y: SetOverQ, g) -> QRel:
    """Inverse of mate: g sends y to a presheaf on X with codomain |y|."""
    entries = {}
    for y in Y.elements:
        p = g(y) if callable(g) else g[y]
        if p.codomain != Y.array_of(y):
            raise ValueError("mate image must have codomain |y|")
        for x, v in p.entries:
            entries[(x, y)] = v
    return QRel(q, X, Y, entries)


def kleisli_ext(q, phi: QRel, tau: Presheaf) -> Presheaf:
    """phi^kleisli(tau) = tau . phi, a presheaf on the source of phi."""
    acc = {}
    w = tau.codomain
    X, Y = phi.src, phi.dst
    for (x, y), a in phi.entries.items():
        t = tau.at(y)
        if t is None:
            continue
        rx, ry = X.array_of(x), Y.array_of(y)
        term = q.circ(rx, ry, w, t, a)
        prev = acc.get(x)
        acc[x] = term if prev is None else q.join(rx, w, prev, term)
    return make_presheaf(q, X.array_of, w, acc.items())


def counit_rel(q, X: SetOverQ, PX: PresheafCarrier) -> QRel:
    """eps_X: X -/-> PX, evaluation eps(x, sigma) = sigma_x."""
    pxs = PX.as_set()
    entries = {}
    for sigma in pxs.elements:
        for x, v in sigma.entries:
            entries[(x, sigma)] = v
    return QRel(q, X, pxs, entries)


# --- monad laws -------------------------------------------------------------

def check_presheaf_monad_laws(q, X: SetOverQ, budget) -> Report:
    """Unit laws exhaustively over PX; associativity over PPPX, exhaustive
    when it fits the budget and seeded-sparse-sampled otherwise.  Every
    executed comparison demands exact equality."""
    rep = Report(f"presheaf monad laws over {q.name} on |X|={X.size()}",
                 meta={"budget": budget.describe()})
    PX = build_px(q, X, budget.px_max)
    taus = PX.all()

    bad = next((t for t in taus
                if mult(q, X, yoneda(q, PX, t)) != t), None)
    rep.add("unit law s . y_PX = 1", FAIL if bad else PASS_EXHAUSTIVE,
            domain=f"all {len(taus)} presheaves", strict=bad is None,
            witness=witness(tau=bad) if bad else None)

    def y_image(t):
        return direct_image(q, PX.array_of, lambda x: yoneda(q, X, x), t)

    bad = next((t for t in taus
                if mult(q, X, y_image(t)) != t), None)
    rep.add("unit law s . P(y_X) = 1", FAIL if bad else PASS_EXHAUSTIVE,
            domain=f"all {len(taus)} presheaves", strict=bad is None,
            witness=witness(tau=bad) if bad else None)

    PPX = PresheafCarrier(q, PX)
    PPPX = PresheafCarrier(q, PPX)

    def assoc_gap(Sigma):
        lhs = mult(q, X, mult(q, PX, Sigma))
        rhs = mult(q, X, direct_image(q, PX.array_of,
                                      lambda S: mult(q, X, S), Sigma))
        return None if lhs == rhs else (Sigma, lhs, rhs)

    if PPPX.enumerable(budget.max_enum):
        bad = next(filter(None, map(assoc_gap, PPPX.all())), None)
        rep.add("associativity s . s_PX = s . P(s)",
                FAIL if bad else PASS_EXHAUSTIVE,
                domain=f"all {PPPX.size()} double presheaves",
                strict=bad is None,
                witness=witness(Sigma=bad[0], lhs=bad[1], rhs=bad[2])
                if bad else None)
    else:
        rng = budget.rng(salt=1)
        bad = None
        for _ in range(budget.sample_count):
            got = assoc_gap(PPPX.sample(rng, budget.sample_support))
            if got:
                bad = got
                break
        rep.add("associativity s . s_PX = s . P(s)",
                FAIL if bad else PASS_SAMPLED,
                domain=(f"{budget.sample_count} seeded sparse samples from "
                        f"PPPX (support <= {budget.sample_support})"),
                strict=None if bad is None else False,
                witness=witness(Sigma=bad[0], lhs=bad[1], rhs=bad[2])
                if bad else None)
    return rep


def check_kleisli_facts(q, X: SetOverQ, Y: SetOverQ, budget) -> Report:
    """Monotone composition of Kleisli extensions; the unit and mult
    interchange laws for inverse images."""
    from .qrel import all_maps, rel_leq, sample_relation

    rep = Report(f"presheaf Kleisli facts over {q.name}")
    PX = build_px(q, X, budget.px_max)
    PY = build_px(q, Y, budget.px_max)
    rng = budget.rng(salt=2)

    bad = None
    for _ in range(120):
        hi = sample_relation(q, X, Y, rng)
        lo = QRel(q, X, Y, {k: _lower(q, rng,
                                      q.hom(X.array_of(k[0]),
                                            Y.array_of(k[1])), v)
                            for k, v in hi.entries.items()})
        tau_hi = PY.sample(rng)
        tau_lo = lower_presheaf(q, Y, rng, tau_hi)
        lhs = kleisli_ext(q, lo, tau_lo)
        rhs = kleisli_ext(q, hi, tau_hi)
        if not p_leq(q, X, lhs, rhs):
            bad = (lo, tau_lo, lhs, rhs)
            break
    rep.add("kleisli extension monotone in both arguments",
            FAIL if bad else PASS_SAMPLED, domain="120 seeded lowerings",
            witness=witness(case=bad[:2]) if bad else None)

    maps = list(all_maps(X, Y))
    bad = None
    for f in maps:
        for x in X.elements:
            lhs = yoneda(q, X, x)
            rhs = inverse_image(q, X.elements, f, yoneda(q, Y, f(x)))
            if not p_leq(q, X, lhs, rhs):
                bad = (f.values, x)
                break
        if bad:
            break
    rep.add("y_X <= f^! . y_Y . f", FAIL if bad else PASS_EXHAUSTIVE,
            domain=f"{len(maps)} maps, all points",
            witness=witness(case=bad) if bad else None)

    PPY = PresheafCarrier(q, PY)
    bad = None
    if PPY.enumerable(budget.max_enum):
        sigmas, mode, dom = PPY.all(), PASS_EXHAUSTIVE, f"all {PPY.size()}"
    else:
        sigmas = [PPY.sample(rng, budget.sample_support)
                  for _ in range(budget.sample_count)]
        mode, dom = PASS_SAMPLED, f"{budget.sample_count} sparse samples"
    for f in maps:
        for Sigma in sigmas:
            lhs = inverse_image(q, X.elements, f, mult(q, Y, Sigma))
            pulled = direct_image(
                q, PX.array_of,
                lambda t: inverse_image(q, X.elements, f, t), Sigma)
            rhs = mult(q, X, pulled)
            if lhs != rhs:
                bad = (f.values, Sigma, lhs, rhs)
                break
        if bad:
            break
    rep.add("f^! . s_Y = s_X . P(f^!)", FAIL if bad else mode,
            domain=f"{len(maps)} maps x {dom} double presheaves",
            strict=bad is None,
            witness=witness(f=bad[0], Sigma=bad[1]) if bad else None)
    return rep


def _lower(q, rng, hom, v):
    below = [u for u in hom.elements if hom.leq(u, v)]
    return below[rng.randrange(len(below))]


def lower_presheaf(q, X, rng, p: Presheaf) -> Presheaf:
    items = [(x, _lower(q, rng, q.hom(X.array_of(x), p.codomain), v))
             for x, v in p.entries]
    return make_presheaf(q, X.array_of, p.codomain, items)


# --- change of base ---------------------------------------------------------

def base_change_carrier(phi_hom, X: SetOverQ) -> SetOverQ:
    """Same elements, arrays pushed through the object map of a lax hom."""
    return SetOverQ(X.elements,
                    tuple(phi_hom.on_obj(a) for a in X.array))


def theta_component(phi_hom, X: SetOverQ, sigma: Presheaf) -> Presheaf:
    """Apply a lax homomorphism entrywise to a presheaf.  The whole grid is
    used, not just the support: a lax hom may move bottom off bottom."""
    r = phi_hom.dst
    BX = base_change_carrier(phi_hom, X)
    q = phi_hom.src
    w = phi_hom.on_obj(sigma.codomain)
    items = []
    for x in X.elements:
        v = value(q, X, sigma, x)
        items.append((x, phi_hom.on_hom(X.array_of(x), sigma.codomain, v)))
    return make_presheaf(r, BX.array_of, w, items)


def check_theta_transform(phi_hom, X: SetOverQ, Y: SetOverQ,
                          budget) -> Report:
    """The lax-monad-morphism laws for the entrywise transform
    P_Q -> P_R(B -) induced by a lax homomorphism; all inequalities become
    equalities when the homomorphism is strict."""
    from .qrel import all_maps

    q, r = phi_hom.src, phi_hom.dst
    rep = Report(f"presheaf transform along {phi_hom.name}")
    PX = build_px(q, X, budget.px_max)
    BX = base_change_carrier(phi_hom, X)
    BY = base_change_carrier(phi_hom, Y)
    RPX = PresheafCarrier(r, BX)
    theta = lambda Z, s: theta_component(phi_hom, Z, s)

    strict = True
    bad = None
    for s1 in PX.all():
        for s2 in PX.all():
            if p_leq(q, X, s1, s2) and not p_leq(r, BX, theta(X, s1),
                                                 theta(X, s2)):
                bad = (s1, s2)
                break
        if bad:
            break
    rep.add("transform monotone", FAIL if bad else PASS_EXHAUSTIVE,
            domain=f"all {PX.size()}^2 pairs",
            witness=witness(case=bad) if bad else None)

    bad = None
    for x in X.elements:
        lhs = yoneda(r, BX, x)
        rhs = theta(X, yoneda(q, X, x))
        if not p_leq(r, BX, lhs, rhs):
            bad = x
            break
        if lhs != rhs:
            strict = False
    rep.add("lax unit square", FAIL if bad else PASS_EXHAUSTIVE,
            domain="all points", witness=witness(x=bad) if bad else None)

    bad = None
    maps = list(all_maps(X, Y))
    for f in maps:
        bf = FinMap(BX, BY, f.values)
        for sigma in PX.all():
            lhs = direct_image(r, BY.array_of, bf, theta(X, sigma))
            rhs = theta(Y, direct_image(q, Y.array_of, f, sigma))
            if not p_leq(r, BY, lhs, rhs):
                bad = (f.values, sigma, lhs, rhs)
                break
            if lhs != rhs:
                strict = False
        if bad:
            break
    rep.add("lax naturality", FAIL if bad else PASS_EXHAUSTIVE,
            domain=f"{len(maps)} maps x {PX.size()} presheaves",
            witness=witness(f=bad[0], sigma=bad[1]) if bad else None)

    PPX = PresheafCarrier(q, PX)
    if PPX.enumerable(budget.max_enum):
        sigmas, mode, dom = PPX.all(), PASS_EXHAUSTIVE, f"all {PPX.size()}"
    else:
        rng = budget.rng(salt=3)
        sigmas = [PPX.sample(rng, budget.sample_support)
                  for _ in range(budget.sample_count)]
        mode, dom = PASS_SAMPLED, f"{budget.sample_count} sparse samples"
    bad = None
    for Sigma in sigmas:
        # theta at the carrier PX, then P_R of theta_X, then mult over R
        t_outer = theta_component(phi_hom, PX.as_set(), Sigma)
        pushed = direct_image(r, RPX.array_of, lambda s: theta(X, s), t_outer)
        lhs = mult(r, BX, pushed)
        rhs = theta(X, mult(q, X, Sigma))
        if not p_leq(r, BX, lhs, rhs):
            bad = (Sigma, lhs, rhs)
            break
        if lhs != rhs:
            strict = False
    rep.add("lax multiplication square", FAIL if bad else mode,
            domain=f"{dom} double presheaves",
            witness=witness(Sigma=bad[0], lhs=bad[1], rhs=bad[2])
            if bad else None)
    for it in rep.items:
        it.strict = strict if rep.ok else None
    return rep
