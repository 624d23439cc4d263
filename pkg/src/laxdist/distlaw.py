"""Lax distributive laws of a lifted monad over the presheaf construction.

A law is a family of maps lambda_X: TPX -> PTX, one per carrier, given as
an evaluation function rather than a table: composite carriers like TPPX
are far too large to tabulate, so the checkers own all quantification and
downgrade an axiom to a sampled verdict when its domain leaves the budget.

Builtin laws: the identity transformation for the identity monad, the
tensor law for the list monad over a commutative quantale or a diagonal
quantaloid, the down-set law for the powerset monad over any quantale,
and the convergence law for the ultrafilter monad over a finite chain
(finite chains are exactly where the classical formula is evaluable,
and there every ultrafilter is principal).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .carriers import (DEFAULT_BUDGET, HARD_ENUM_CAP, Carrier, ElementBudget,
                       SetOverQ)
from .monads import (LiftedMonad, builtin_monad, lift_monad, q0_carrier,
                     universe_elements)
from .presheaf import (Presheaf, PresheafCarrier, direct_image,
                       lower_presheaf, make_presheaf, mult, p_leq,
                       value, yoneda)
from .qrel import all_maps
from .report import (FAIL, PASS_EXHAUSTIVE, PASS_SAMPLED, BudgetError,
                     Report, SchemaError, ekey, witness)

AXIOMS = ("a", "b", "c", "d", "e")
AXIOM_TITLES = {
    "a": "(a) naturality",
    "b": "(b) presheaf unit",
    "c": "(c) presheaf multiplication",
    "d": "(d) monad unit",
    "e": "(e) monad multiplication",
}


@dataclass(frozen=True)
class DistLaw:
    """A distributive law as a per-carrier evaluator.

    component(X, TX) returns the map lambda_X; its outputs are presheaves
    over TX.  claimed_strict lists the axiom letters the law is supposed
    to satisfy with equality, plus "monotone" when monotonicity is part
    of the claim.
    """

    name: str
    q: object
    monad: LiftedMonad
    component: object
    claimed_strict: frozenset = field(default_factory=frozenset)

    def at(self, X: Carrier, budget: ElementBudget):
        TX = self.monad.carrier(X, budget)
        return TX, self.component(X, TX)

    def apply(self, X: Carrier, z, budget: ElementBudget | None = None):
        _, ev = self.at(X, budget or DEFAULT_BUDGET)
        return ev(z)


LawReport = Report


# --- builtin laws ------------------------------------------------------------

def identity_law(q) -> DistLaw:
    lm = lift_monad(builtin_monad("identity"), q)

    def component(X, TX):
        return lambda z: z

    return DistLaw("identity", q, lm, component,
                   frozenset(AXIOMS) | {"monotone"})


def _value_quantale(q):
    base = q.meta.get("diagonal_of")
    if base is not None:
        return base
    if q.is_quantale:
        return q
    raise SchemaError(f"{q.name} is neither a quantale nor a diagonal "
                      "quantaloid")


def tensor_law(q) -> DistLaw:
    """Word law for the list monad: a tuple of presheaves goes to the
    presheaf on words whose component at (x_1..x_n) is the tensor of the
    factors' components.  Needs a commutative tensor for the presheaf
    multiplication axiom to hold on the nose."""
    v = _value_quantale(q)
    o = v.star
    lat = v.hom(o, o)
    for a in lat.elements:
        for b in lat.elements:
            if v.tensor(a, b) != v.tensor(b, a):
                raise SchemaError(f"tensor of {v.name} is not commutative "
                                  f"at ({a},{b})")
    lm = lift_monad(builtin_monad("list"), q)
    zeta = lm.zeta

    def component(X, TX):
        def ev(z):
            cod = zeta(tuple(s.codomain for s in z))
            supports = [sorted((x for x, _ in s.entries), key=ekey)
                        for s in z]
            count = 1
            for s in supports:
                count *= len(s)
            if count > HARD_ENUM_CAP:
                raise BudgetError(f"word law output would have {count} "
                                  "components")
            items = []
            for combo in itertools.product(*supports):
                val = v.tensor_all(s.at(x) for s, x in zip(z, combo))
                items.append((tuple(combo), val))
            return make_presheaf(q, TX.array_of, cod, items)
        return ev

    return DistLaw("tensor", q, lm, component,
                   frozenset(AXIOMS) | {"monotone"})


def delta_law(q) -> DistLaw:
    """Down-set law for the powerset monad over a quantale: the component
    of delta(F) at a subset A is the meet over A of the joined values of
    the members of F; at the empty set it is the empty meet, top."""
    if not q.is_quantale:
        raise SchemaError("the powerset law needs a one-object quantaloid")
    lm = lift_monad(builtin_monad("powerset"), q)
    o = q.star
    top = q.hom(o, o).top
    lat = q.hom(o, o)

    def component(X, TX):
        def ev(F):
            g = {}
            for s in F:
                for x, val in s.entries:
                    g[x] = val if x not in g else q.join(o, o, g[x], val)
            pts = sorted(g, key=ekey)
            if 1 << len(pts) > HARD_ENUM_CAP:
                raise BudgetError(f"powerset law output would have "
                                  f"2^{len(pts)} components")
            items = [(frozenset(), top)]
            for k in range(1, len(pts) + 1):
                for combo in itertools.combinations(pts, k):
                    m = g[combo[0]]
                    for x in combo[1:]:
                        m = lat.meet(m, g[x])
                    items.append((frozenset(combo), m))
            return make_presheaf(q, TX.array_of, o, items)
        return ev

    return DistLaw("delta", q, lm, component, frozenset({"monotone"}))


def beta_law(q) -> DistLaw:
    """Convergence law for the ultrafilter monad over a finite chain.

    The classical double meet-join formula needs a commutative completely
    distributive quantale; every finite chain qualifies, and on finite
    carriers all ultrafilters are principal, which collapses the formula
    to reading off the inner presheaf at the generating point.
    """
    if not q.is_quantale:
        raise SchemaError("the ultrafilter law needs a one-object "
                          "quantaloid")
    lat = q.hom(q.star, q.star)
    for a in lat.elements:
        for b in lat.elements:
            if not (lat.leq(a, b) or lat.leq(b, a)):
                raise SchemaError(f"the ultrafilter law needs a chain; "
                                  f"{a} and {b} are incomparable in "
                                  f"{q.name}")
    lm = lift_monad(builtin_monad("ultrafilter"), q)
    from .monads import Ultra

    def component(X, TX):
        def ev(z):
            s0 = z.point
            return make_presheaf(q, TX.array_of, s0.codomain,
                                 [(Ultra(x), v) for x, v in s0.entries])
        return ev

    return DistLaw("beta", q, lm, component, frozenset({"monotone"}))


_LAW_BUILDERS = {
    "identity": identity_law,
    "tensor": tensor_law,
    "delta": delta_law,
    "beta": beta_law,
}


def builtin_law(name: str, q) -> DistLaw:
    try:
        builder = _LAW_BUILDERS[name]
    except KeyError:
        raise SchemaError(f"unknown law {name!r}; choose from "
                          f"{sorted(_LAW_BUILDERS)}") from None
    return builder(q)


# --- the axiom checker -------------------------------------------------------

def _reduced(budget: ElementBudget) -> ElementBudget:
    """Sparser sampling for doubly composite carriers, so that evaluating
    a law on a sampled element stays cheap."""
    return replace(budget,
                   max_set_card=min(budget.max_set_card, 4),
                   sample_support=min(budget.sample_support, 2))


def _composite_universe(m: LiftedMonad, base: Carrier,
                        budget: ElementBudget, salt: int):
    """Universe of T(base), with reduced sparsity on the sampled path."""
    full = m.carrier(base, budget)
    if full.enumerable(budget.max_enum):
        return universe_elements(full, budget, salt)
    samp = m.carrier(base, _reduced(budget))
    rng = budget.rng(salt)
    els = [samp.sample(rng) for _ in range(budget.sample_count)]
    return (els, PASS_SAMPLED,
            f"{budget.sample_count} sparse samples of {samp.describe()}", "")


class _Site:
    """Everything the axioms need at one carrier."""

    def __init__(self, law: DistLaw, X: SetOverQ, budget: ElementBudget):
        self.X = X
        self.PX = PresheafCarrier(law.q, X)
        self.TX, self.lam = law.at(X, budget)
        self.TPX = law.monad.carrier(self.PX, budget)


def _compare(q, base, pairs):
    """Walk (input, lhs, rhs) triples; return (bad_witness, all_equal)."""
    equal = True
    for z, lhs, rhs in pairs:
        if not p_leq(q, base, lhs, rhs):
            return witness(input=z, lhs=lhs, rhs=rhs), equal
        if lhs != rhs:
            equal = False
    return None, equal


def check_law(law: DistLaw, carriers, maps=None,
              budget: ElementBudget | None = None) -> LawReport:
    """Axioms (a)-(e), monotonicity, array preservation, and the law's
    own strictness claims, over a universe of carriers and maps."""
    budget = budget or DEFAULT_BUDGET
    q, m = law.q, law.monad
    rep = Report(f"distributive law axioms for {law.name} over {q.name}",
                 meta={"budget": budget.describe()})
    carriers = list(carriers)
    sites = [_Site(law, X, budget) for X in carriers]
    if maps is None:
        maps = [(i, j, f)
                for i, si in enumerate(sites) for j, sj in enumerate(sites)
                for f in all_maps(si.X, sj.X)]
    else:
        index = {id(X): i for i, X in enumerate(carriers)}
        maps = [(index[id(f.src)], index[id(f.dst)], f) for f in maps]
    strict_at = {ax: True for ax in AXIOMS}

    # array preservation and axioms (b), (d) per carrier
    for i, s in enumerate(sites):
        tag = f" @X{i}"
        els, status, dom, note = universe_elements(s.TPX, budget, 100 + i)
        bad = None
        for z in els:
            out = s.lam(z)
            if out.codomain != s.TPX.array_of(z):
                bad = witness(input=z, output_codomain=out.codomain,
                              expected=s.TPX.array_of(z))
                break
        rep.add("array preservation" + tag, FAIL if bad else status,
                domain=dom, witness=bad, note=note)

        els, status, dom, note = universe_elements(s.TX, budget, 200 + i)
        bad, eq = _compare(q, s.TX, (
            (t, yoneda(q, s.TX, t),
             s.lam(m.fmap(lambda x: yoneda(q, s.X, x), t)))
            for t in els))
        strict_at["b"] &= eq
        rep.add(AXIOM_TITLES["b"] + tag, FAIL if bad else status,
                domain=dom, strict=None if bad else eq, witness=bad,
                note=note)

        els, status, dom, note = universe_elements(s.PX, budget, 300 + i)
        bad, eq = _compare(q, s.TX, (
            (sigma, direct_image(q, s.TX.array_of, m.unit, sigma),
             s.lam(m.unit(sigma)))
            for sigma in els))
        strict_at["d"] &= eq
        rep.add(AXIOM_TITLES["d"] + tag, FAIL if bad else status,
                domain=dom, strict=None if bad else eq, witness=bad,
                note=note)

    # axiom (a) per map
    for k, (i, j, f) in enumerate(maps):
        si, sj = sites[i], sites[j]
        els, status, dom, note = universe_elements(si.TPX, budget, 400 + k)
        f_sharp = lambda sig: direct_image(q, sj.X.array_of, f, sig)
        bad, eq = _compare(q, sj.TX, (
            (z, direct_image(q, sj.TX.array_of,
                             lambda t: m.fmap(f, t), si.lam(z)),
             sj.lam(m.fmap(f_sharp, z)))
            for z in els))
        strict_at["a"] &= eq
        rep.add(f"{AXIOM_TITLES['a']} @X{i}->X{j}#{k}",
                FAIL if bad else status, domain=dom,
                strict=None if bad else eq, witness=bad, note=note)
    if not maps:
        rep.add(AXIOM_TITLES["a"], PASS_EXHAUSTIVE,
                domain="no array-preserving maps in the universe")

    # axioms (c), (e), monotonicity per carrier
    for i, s in enumerate(sites):
        tag = f" @X{i}"
        PPX = PresheafCarrier(q, s.PX)
        PPX.sample_support = _reduced(budget).sample_support
        lam_px = law.component(s.PX, s.TPX)
        els, status, dom, note = _composite_universe(m, PPX, budget, 500 + i)
        bad, eq = _compare(q, s.TX, (
            (Z,
             mult(q, s.TX, direct_image(q, lambda p: p.codomain,
                                        s.lam, lam_px(Z))),
             s.lam(m.fmap(lambda SS: mult(q, s.X, SS), Z)))
            for Z in els))
        strict_at["c"] &= eq
        rep.add(AXIOM_TITLES["c"] + tag, FAIL if bad else status,
                domain=dom, strict=None if bad else eq, witness=bad,
                note=note)

        TTX = m.carrier(s.TX, budget)
        lam_tx = law.component(s.TX, TTX)
        els, status, dom, note = _composite_universe(m, s.TPX, budget,
                                                     600 + i)
        bad, eq = _compare(q, s.TX, (
            (W,
             direct_image(q, s.TX.array_of, m.mult,
                          lam_tx(m.fmap(s.lam, W))),
             s.lam(m.mult(W)))
            for W in els))
        strict_at["e"] &= eq
        rep.add(AXIOM_TITLES["e"] + tag, FAIL if bad else status,
                domain=dom, strict=None if bad else eq, witness=bad,
                note=note)

        pairs, pstatus, pdom = _kleisli_pairs(q, s.X, s.PX, budget, 700 + i)
        els, tstatus, tdom, tnote = universe_elements(s.TX, budget, 800 + i)
        bad = None
        for f, g in pairs:
            for t in els:
                lhs = s.lam(m.fmap(lambda x: f[x], t))
                rhs = s.lam(m.fmap(lambda x: g[x], t))
                if not p_leq(q, s.TX, lhs, rhs):
                    bad = witness(t=t, lhs=lhs, rhs=rhs)
                    break
            if bad:
                break
        both = (PASS_EXHAUSTIVE
                if pstatus == tstatus == PASS_EXHAUSTIVE else PASS_SAMPLED)
        rep.add("monotone" + tag, FAIL if bad else both,
                domain=f"{pdom} x {tdom}", witness=bad, note=tnote)

    claimed = sorted(law.claimed_strict & set(AXIOMS))
    broken = [ax for ax in claimed if not strict_at[ax]]
    if law.claimed_strict:
        rep.add("claimed strictness", FAIL if broken else PASS_EXHAUSTIVE,
                domain=f"claims: {','.join(sorted(law.claimed_strict))}",
                witness=witness(not_strict=",".join(broken))
                if broken else None)
    rep.meta["strict_at"] = [ax for ax in AXIOMS if strict_at[ax]]
    return rep


def _kleisli_pairs(q, X: SetOverQ, PX: PresheafCarrier,
                   budget: ElementBudget, salt: int):
    """Pointwise-ordered pairs of maps X -> PX: exhaustive as a product of
    ordered presheaf pairs when small, else seeded draws shrunk pointwise."""
    els = X.all()
    if PX.enumerable(budget.max_enum):
        pres = PX.all()
        pp = [(s, t) for s in pres for t in pres if p_leq(q, X, s, t)]
        if len(pp) ** max(len(els), 1) <= budget.max_enum:
            pairs = []
            for combo in itertools.product(pp, repeat=len(els)):
                pairs.append((dict(zip(els, (c[0] for c in combo))),
                              dict(zip(els, (c[1] for c in combo)))))
            return (pairs, PASS_EXHAUSTIVE,
                    f"all {len(pairs)} ordered map pairs")
    rng = budget.rng(salt)
    n = max(budget.sample_count // 5, 1)
    pairs = []
    for _ in range(n):
        g = {x: PX.sample(rng) for x in els}
        f = {x: lower_presheaf(q, X, rng, g[x]) for x in els}
        pairs.append((f, g))
    return pairs, PASS_SAMPLED, f"{n} sampled ordered map pairs"


# --- maximality --------------------------------------------------------------

def is_maximal(law: DistLaw, carriers,
               budget: ElementBudget | None = None) -> Report:
    """Whether the law equals the one induced by its own global fragment:
    lambda_X = (Ta)^! . zeta^! . zeta_! . lambda_Q0 . T(a_!) on every
    universe carrier, compared pointwise on the enumerated or sampled
    slice of TX together with the support of the left side."""
    budget = budget or DEFAULT_BUDGET
    q, m = law.q, law.monad
    rep = Report(f"maximality of {law.name} over {q.name}",
                 meta={"budget": budget.describe()})
    Q0 = q0_carrier(q)
    TQ0 = m.carrier(Q0, budget)
    lam_q0 = law.component(Q0, TQ0)
    for i, X in enumerate(carriers):
        TX, lam = law.at(X, budget)
        PX = PresheafCarrier(q, X)
        TPX = m.carrier(PX, budget)
        a_sharp = lambda sig: direct_image(q, Q0.array_of, X.array_of, sig)
        zs, status, dom, note = universe_elements(TPX, budget, 900 + i)
        ts, t_status, t_dom, _ = universe_elements(TX, budget, 950 + i)
        if t_status != PASS_EXHAUSTIVE:
            status = PASS_SAMPLED
        bad = None
        for z in zs:
            lhs = lam(z)
            glob = direct_image(q, Q0.array_of, m.zeta,
                                lam_q0(m.fmap(a_sharp, z)))
            if glob.codomain != lhs.codomain:
                bad = witness(input=z, lhs_codomain=lhs.codomain,
                              induced_codomain=glob.codomain)
                break
            points = list(ts)
            seen = set(map(ekey, points))
            for t, _v in lhs.entries:
                if ekey(t) not in seen:
                    points.append(t)
            for t in points:
                left = value(q, TX, lhs, t)
                right = value(q, Q0, glob, TX.array_of(t))
                if left != right:
                    bad = witness(input=z, at=t, law=left, induced=right)
                    break
            if bad:
                break
        rep.add(f"matches induced form @X{i}", FAIL if bad else status,
                domain=f"{dom} x {t_dom}", witness=bad, note=note)
    return rep
