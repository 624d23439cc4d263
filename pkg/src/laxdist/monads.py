"""Set-monads and their liftings to carriers over a quantaloid.

Four builtin monads are provided: identity, list (free monoid), powerset,
and the finite ultrafilter monad.  On finite sets every ultrafilter is
principal, so ultrafilters are stored as their generating point wrapped in
Ultra; membership tests read the filter literally, and the Kowalsky sum
collapses a principal ultrafilter of principal ultrafilters to its point.

A monad lifts to sets-with-arrays through an algebra structure zeta on the
set of objects: the array of a T-element t is zeta applied to the T-image
of the arrays of its constituents.  For the list monad this makes array
bookkeeping a fold; the list carrier itself is never truncated, only the
universes the law checkers quantify over are bounded by the budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .carriers import HARD_ENUM_CAP, Carrier, ElementBudget, SetOverQ
from .report import (FAIL, PASS_EXHAUSTIVE, PASS_SAMPLED, BudgetError,
                     Report, SchemaError, witness)


@dataclass(frozen=True)
class Ultra:
    """A principal ultrafilter, identified by its generating point."""
    point: object

    def __contains__(self, subset) -> bool:
        return self.point in subset

    def members(self, ground):
        """All sets in the filter, read literally over a finite ground set."""
        rest = [x for x in ground if x != self.point]
        for k in range(len(rest) + 1):
            for extra in itertools.combinations(rest, k):
                yield frozenset((self.point,) + extra)

    def __repr__(self):
        return f"principal({self.point!r})"


class SetMonad:
    """Structural operations of a monad on finite sets."""

    name = ""
    total = True   # does universe() enumerate the whole of TX?

    def unit(self, x):
        raise NotImplementedError

    def fmap(self, f, t):
        raise NotImplementedError

    def mult(self, tt):
        raise NotImplementedError

    def universe(self, xs, budget: ElementBudget):
        """Deterministic list of T-elements over the ground list xs."""
        raise NotImplementedError

    def usize(self, n: int, budget: ElementBudget) -> int:
        raise NotImplementedError

    def sample(self, base: Carrier, rng, budget: ElementBudget):
        raise NotImplementedError

    def describe(self, inner: str, budget: ElementBudget) -> str:
        return f"{self.name}({inner})"


class IdentityMonad(SetMonad):
    name = "identity"

    def unit(self, x):
        return x

    def fmap(self, f, t):
        return f(t)

    def mult(self, tt):
        return tt

    def universe(self, xs, budget):
        return list(xs)

    def usize(self, n, budget):
        return n

    def sample(self, base, rng, budget):
        return base.sample(rng)

    def describe(self, inner, budget):
        return inner


class ListMonad(SetMonad):
    """Free-monoid monad; universes are tuples up to the budget length."""

    name = "list"
    total = False

    def unit(self, x):
        return (x,)

    def fmap(self, f, t):
        return tuple(f(x) for x in t)

    def mult(self, tt):
        return tuple(x for t in tt for x in t)

    def universe(self, xs, budget):
        out = []
        for k in range(budget.max_list_len + 1):
            out.extend(itertools.product(xs, repeat=k))
        return out

    def usize(self, n, budget):
        return sum(n ** k for k in range(budget.max_list_len + 1))

    def sample(self, base, rng, budget):
        k = rng.randrange(budget.max_list_len + 1)
        return tuple(base.sample(rng) for _ in range(k))

    def describe(self, inner, budget):
        return f"tuples(len<={budget.max_list_len}, {inner})"


class PowersetMonad(SetMonad):
    name = "powerset"

    def unit(self, x):
        return frozenset([x])

    def fmap(self, f, t):
        return frozenset(f(x) for x in t)

    def mult(self, tt):
        return frozenset(x for t in tt for x in t)

    def universe(self, xs, budget):
        out = []
        for k in range(len(xs) + 1):
            out.extend(frozenset(c) for c in itertools.combinations(xs, k))
        return out

    def usize(self, n, budget):
        return 2 ** n

    def sample(self, base, rng, budget):
        if base.enumerable(budget.max_enum):
            els = base.all()
            return frozenset(x for x in els if rng.random() < 0.5)
        k = rng.randrange(budget.max_set_card + 1)
        return frozenset(base.sample(rng) for _ in range(k))


class UltrafilterMonad(SetMonad):
    """Finite ultrafilters: principal, hence in bijection with the points."""

    name = "ultrafilter"

    def unit(self, x):
        return Ultra(x)

    def fmap(self, f, t):
        return Ultra(f(t.point))

    def mult(self, tt):
        # Kowalsky sum: A belongs iff {u : A in u} belongs to tt, which for
        # principal filters collapses to membership in the inner point.
        return tt.point

    def universe(self, xs, budget):
        return [Ultra(x) for x in xs]

    def usize(self, n, budget):
        return n

    def sample(self, base, rng, budget):
        return Ultra(base.sample(rng))


_SET_MONADS = {
    "identity": IdentityMonad(),
    "list": ListMonad(),
    "powerset": PowersetMonad(),
    "ultrafilter": UltrafilterMonad(),
}


def builtin_monad(name: str) -> SetMonad:
    try:
        return _SET_MONADS[name]
    except KeyError:
        raise SchemaError(f"unknown monad {name!r}; choose from "
                          f"{sorted(_SET_MONADS)}") from None


def q0_carrier(q) -> SetOverQ:
    """The object set of q as a carrier with identity arrays."""
    objs = tuple(q.objects)
    return SetOverQ(objs, objs)


@dataclass(frozen=True)
class LiftedMonad:
    """A Set-monad together with an algebra structure zeta on the objects
    of a quantaloid, lifting it to sets-with-arrays."""

    set_monad: SetMonad
    q: object
    zeta: object        # callable on T-elements of object labels
    name: str = ""

    def array_for(self, base_array_of):
        m, z = self.set_monad, self.zeta
        return lambda t: z(m.fmap(base_array_of, t))

    def carrier(self, base: Carrier, budget: ElementBudget) -> "TCarrier":
        return TCarrier(self, base, budget)

    def unit(self, x):
        return self.set_monad.unit(x)

    def fmap(self, f, t):
        return self.set_monad.fmap(f, t)

    def mult(self, tt):
        return self.set_monad.mult(tt)

    def describe(self) -> str:
        return self.name or f"{self.set_monad.name}/{self.q.name}"


class TCarrier(Carrier):
    """Carrier of T-elements over a base carrier.

    For the list monad the enumerated universe is the budget-bounded slice
    of an infinite carrier; size() and all() describe that universe, and
    total is False to record the distinction.
    """

    def __init__(self, monad: LiftedMonad, base: Carrier,
                 budget: ElementBudget):
        self.monad = monad
        self.base = base
        self.budget = budget
        self.total = monad.set_monad.total
        self._array = monad.array_for(base.array_of)
        self._all = None

    def size(self) -> int:
        if not self.base.enumerable(HARD_ENUM_CAP):
            return 1 << 62
        n = self.monad.set_monad.usize(self.base.size(), self.budget)
        return min(n, 1 << 62)

    def all(self) -> tuple:
        if self._all is None:
            if not self.enumerable(HARD_ENUM_CAP):
                raise BudgetError(f"{self.describe()} too large to enumerate")
            self._all = tuple(self.monad.set_monad.universe(
                self.base.all(), self.budget))
        return self._all

    def sample(self, rng):
        if self.enumerable(self.budget.max_enum):
            els = self.all()
            return els[rng.randrange(len(els))]
        return self.monad.set_monad.sample(self.base, rng, self.budget)

    def array_of(self, t):
        return self._array(t)

    def describe(self) -> str:
        return self.monad.set_monad.describe(self.base.describe(),
                                             self.budget)


def standard_zeta(set_monad: SetMonad, q):
    """The canonical algebra structure on the objects of q.

    For a one-object quantaloid every monad folds to the single object.
    Over a diagonal quantaloid the objects form a monoid under the base
    quantale's tensor, giving the list monad its fold; the identity monad
    always lifts by the identity.
    """
    if isinstance(set_monad, IdentityMonad):
        return lambda t: t
    if len(q.objects) == 1:
        star = q.objects[0]
        return lambda t: star
    base = q.meta.get("diagonal_of")
    if base is not None and isinstance(set_monad, ListMonad):
        return lambda t: base.tensor_all(list(t))
    raise SchemaError(f"no canonical algebra structure for "
                      f"{set_monad.name} over {q.name}")


def check_zeta(set_monad: SetMonad, q, zeta, budget: ElementBudget) -> Report:
    """The two algebra laws for zeta on the object set, over the budgeted
    universe of T- and TT-elements of objects."""
    rep = Report(f"algebra structure on objects of {q.name}")
    objs = list(q.objects)
    bad = None
    for o in objs:
        if zeta(set_monad.unit(o)) != o:
            bad = o
            break
    rep.add("unit law", FAIL if bad else PASS_EXHAUSTIVE,
            domain=f"{len(objs)} objects",
            witness=witness(object=bad) if bad else None)

    bad = None
    tt_universe = set_monad.universe(set_monad.universe(objs, budget), budget)
    for tt in tt_universe:
        if zeta(set_monad.mult(tt)) != zeta(set_monad.fmap(zeta, tt)):
            bad = tt
            break
    status = PASS_EXHAUSTIVE if set_monad.total else PASS_SAMPLED
    rep.add("associativity law", FAIL if bad else status,
            domain=f"{len(tt_universe)} double elements",
            witness=witness(element=bad) if bad else None)
    return rep


def lift_monad(set_monad: SetMonad, q, zeta=None,
               budget: ElementBudget | None = None,
               name: str = "") -> LiftedMonad:
    """Lift a Set-monad over q via zeta, refusing invalid algebra data."""
    budget = budget or ElementBudget()
    if zeta is None:
        zeta = standard_zeta(set_monad, q)
    rep = check_zeta(set_monad, q, zeta, budget)
    if not rep.ok:
        bad = [it for it in rep.items if it.status == FAIL]
        raise SchemaError("zeta is not an algebra structure: "
                          f"{bad[0].name} fails at {bad[0].witness}")
    return LiftedMonad(set_monad, q, zeta,
                       name or f"{set_monad.name}/{q.name}")


def universe_elements(carrier: Carrier, budget: ElementBudget, salt: int):
    """Either the full enumerated universe or a seeded sample, with a
    domain string and the exhaustive/sampled status."""
    total = getattr(carrier, "total", True)
    if carrier.enumerable(budget.max_enum):
        els = list(carrier.all())
        status = PASS_EXHAUSTIVE if total else PASS_SAMPLED
        note = "" if total else "bounded universe of an infinite carrier"
        return els, status, f"all {len(els)} of {carrier.describe()}", note
    rng = budget.rng(salt)
    els = [carrier.sample(rng) for _ in range(budget.sample_count)]
    return (els, PASS_SAMPLED,
            f"{budget.sample_count} samples of {carrier.describe()}", "")


def check_monad_laws(lm: LiftedMonad, X: Carrier,
                     budget: ElementBudget) -> Report:
    """Unit and associativity laws plus array compatibility of e and m,
    quantified over budgeted universes."""
    rep = Report(f"monad laws for {lm.describe()} on {X.describe()}")
    m = lm.set_monad
    TX = lm.carrier(X, budget)
    TTX = lm.carrier(TX, budget)
    TTTX = lm.carrier(TTX, budget)

    els, status, dom, note = universe_elements(TX, budget, salt=11)
    bad_l = bad_r = None
    for t in els:
        if m.mult(m.unit(t)) != t:
            bad_l = bad_l or t
        if m.mult(m.fmap(m.unit, t)) != t:
            bad_r = bad_r or t
    rep.add("left unit law", FAIL if bad_l else status, domain=dom,
            witness=witness(element=bad_l) if bad_l else None, note=note)
    rep.add("right unit law", FAIL if bad_r else status, domain=dom,
            witness=witness(element=bad_r) if bad_r else None, note=note)

    els3, status3, dom3, note3 = universe_elements(TTTX, budget, salt=12)
    bad = None
    for z in els3:
        if m.mult(m.mult(z)) != m.mult(m.fmap(m.mult, z)):
            bad = z
            break
    rep.add("associativity law", FAIL if bad else status3, domain=dom3,
            witness=witness(element=bad) if bad else None, note=note3)

    bad = None
    for x in (X.all() if X.enumerable(budget.max_enum) else
              [X.sample(budget.rng(13)) for _ in range(budget.sample_count)]):
        if TX.array_of(m.unit(x)) != X.array_of(x):
            bad = x
            break
    rep.add("unit preserves arrays", FAIL if bad else PASS_EXHAUSTIVE,
            domain="all points" if bad is None else "",
            witness=witness(x=bad) if bad else None)

    els2, status2, dom2, note2 = universe_elements(TTX, budget, salt=14)
    bad = None
    for tt in els2:
        if TX.array_of(m.mult(tt)) != TTX.array_of(tt):
            bad = tt
            break
    rep.add("multiplication preserves arrays", FAIL if bad else status2,
            domain=dom2,
            witness=witness(element=bad) if bad else None, note=note2)
    return rep


def can_map(set_monad: SetMonad, w):
    """The canonical map T(X x Y) -> TX x TY with components T(pi1), T(pi2),
    applied to a single T-element of pairs."""
    return (set_monad.fmap(lambda p: p[0], w),
            set_monad.fmap(lambda p: p[1], w))


def _cospans(sizes):
    """Deterministic small cospans f: X -> Z <- Y : g, including empty legs
    and disjoint images, as triples of element lists plus the two maps."""
    out = []
    for nx, ny, nz in sizes:
        xs = [f"x{i}" for i in range(nx)]
        ys = [f"y{i}" for i in range(ny)]
        zs = [f"z{i}" for i in range(nz)]
        for fv in itertools.product(range(nz), repeat=nx):
            for gv in itertools.product(range(nz), repeat=ny):
                f = dict(zip(xs, (zs[i] for i in fv)))
                g = dict(zip(ys, (zs[i] for i in gv)))
                out.append((xs, ys, zs, f, g))
    return out


def check_BC(set_monad: SetMonad, budget: ElementBudget,
             sizes=None) -> Report:
    """Whether T sends pullback squares of small cospans to weak pullback
    squares: every compatible pair in TX x TY lifts to T(pullback)."""
    rep = Report(f"Beck-Chevalley for {set_monad.name}")
    sizes = sizes or [(0, 1, 1), (1, 1, 1), (1, 1, 2),
                      (2, 1, 2), (2, 2, 2), (2, 2, 1)]
    checked = 0
    bad = None
    for xs, ys, zs, f, g in _cospans(sizes):
        pairs = [(x, y) for x in xs for y in ys if f[x] == g[y]]
        TP = set_monad.universe(pairs, budget)
        TX = set_monad.universe(xs, budget)
        TY = set_monad.universe(ys, budget)
        lifted = {(set_monad.fmap(lambda p: p[0], w),
                   set_monad.fmap(lambda p: p[1], w)) for w in TP}
        for u in TX:
            fu = set_monad.fmap(lambda x: f[x], u)
            for v in TY:
                if fu != set_monad.fmap(lambda y: g[y], v):
                    continue
                checked += 1
                if (u, v) not in lifted:
                    bad = {"f": " ".join(f"{a}->{b}" for a, b in
                                         sorted(f.items())),
                           "g": " ".join(f"{a}->{b}" for a, b in
                                         sorted(g.items())),
                           "u": u, "v": v}
                    break
            if bad:
                break
        if bad:
            break
    status = PASS_EXHAUSTIVE if set_monad.total else PASS_SAMPLED
    rep.add("weak pullbacks preserved", FAIL if bad else status,
            domain=f"{len(_cospans(sizes))} cospans, "
                   f"{checked} compatible pairs",
            witness=witness(**bad) if bad else None)
    return rep


class NearConstantMonad(SetMonad):
    """Constant two-element functor away from the empty set, with T(empty)
    a singleton; a minimal genuine Beck-Chevalley violator.  (A literally
    constant functor sends every square to one whose legs are identities,
    which lifts trivially, so it cannot serve as a violator.)"""

    name = "near_constant"

    def unit(self, x):
        return "c0"

    def fmap(self, f, t):
        return t

    def mult(self, tt):
        return tt

    def universe(self, xs, budget):
        return ["c0"] if not xs else ["c0", "c1"]

    def usize(self, n, budget):
        return 1 if n == 0 else 2

    def sample(self, base, rng, budget):
        return "c0" if base.size() == 0 else ["c0", "c1"][rng.randrange(2)]


def bc_violator() -> SetMonad:
    return NearConstantMonad()
