"""Involutive quantales and their maps.

Two carrier kinds live behind one duck-typed interface.  FiniteInvQuantale
keeps full multiplication/involution tables over a validated lattice and
supports exhaustive law checking; EffectiveInvQuantale is an oracle for
carriers that are too large to enumerate (canonical element handles, an
order test, finite joins, multiplication, involution and a seeded
sampler), on which the same laws are asserted over finite probe pools.

A map p: Q -> X is represented contravariantly by its inverse image
homomorphism p*: X -> Q, optionally together with a direct image
p_!: Q -> X (left adjoint of p*).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace

from .suplattice import SupMap, left_adjoint, validate_lattice


@dataclass(frozen=True)
class Violation:
    """A failed law together with the witnessing elements."""
    law: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        msg = f"{self.law} fails at {self.witness}"
        return f"{msg} ({self.detail})" if self.detail else msg


class InvalidQuantale(ValueError):
    def __init__(self, violation):
        self.violation = violation
        super().__init__(str(violation))


class Undecidable(RuntimeError):
    """Raised when a question cannot be decided on an effective carrier."""


class FiniteInvQuantale:
    """An involutive quantale given by full tables over a finite lattice."""

    is_finite = True

    def __init__(self, carrier, mult_table, inv_table, unit=None, label=""):
        n = carrier.size
        self.carrier = carrier
        self.mult_table = tuple(tuple(row) for row in mult_table)
        self.inv_table = tuple(inv_table)
        self.unit = unit
        self.label = label
        if len(self.mult_table) != n or any(len(r) != n for r in self.mult_table):
            raise ValueError("multiplication table has wrong shape")
        if len(self.inv_table) != n:
            raise ValueError("involution table has wrong length")
        self._validated = False

    # -- carrier interface --------------------------------------------------

    @property
    def size(self):
        return self.carrier.size

    @property
    def elements(self):
        return range(self.size)

    @property
    def bottom(self):
        return self.carrier.bottom

    @property
    def top(self):
        return self.carrier.top

    def leq(self, a, b):
        return self.carrier.leq(a, b)

    def join(self, items):
        return self.carrier.join(items)

    def meet(self, items):
        return self.carrier.meet(items)

    def join2(self, a, b):
        return self.carrier.join2(a, b)

    def mult(self, a, b):
        return self.mult_table[a][b]

    def inv(self, a):
        return self.inv_table[a]

    def name_of(self, a):
        return self.carrier.names[a]

    def sample(self, rng):
        return rng.randrange(self.size)

    def probe_elements(self, rng=None, count=None):
        if count is None or count >= self.size or rng is None:
            return list(self.elements)
        return sorted(rng.sample(range(self.size), count))

    def __eq__(self, other):
        return (isinstance(other, FiniteInvQuantale)
                and self.carrier == other.carrier
                and self.mult_table == other.mult_table
                and self.inv_table == other.inv_table
                and self.unit == other.unit)

    def __hash__(self):
        return hash((self.carrier, self.mult_table, self.inv_table, self.unit))

    def __repr__(self):
        tag = self.label or f"size={self.size}"
        return f"FiniteInvQuantale({tag})"


class EffectiveInvQuantale:
    """Oracle interface for involutive quantales with non-enumerable carriers.

    Handles must be canonical: equal elements compare (and hash) equal.
    Subclasses provide bottom/leq/join/mult/inv, an optional unit, a seeded
    sampler, and may override curated_elements with structurally interesting
    handles that law checks and witness searches should always probe.
    """

    is_finite = False
    unit = None
    label = ""

    @property
    def bottom(self):
        raise NotImplementedError

    def leq(self, a, b):
        raise NotImplementedError

    def join(self, items):
        raise NotImplementedError

    def mult(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sample(self, rng):
        raise NotImplementedError

    def curated_elements(self):
        return [self.bottom]

    def name_of(self, a):
        return repr(a)

    def probe_elements(self, rng=None, count=40):
        """Deterministic probe pool: curated handles padded with samples."""
        rng = rng or random.Random(0)
        pool = []
        seen = set()
        for h in self.curated_elements():
            if h not in seen:
                seen.add(h)
                pool.append(h)
        attempts = 0
        while len(pool) < count and attempts < 20 * count:
            h = self.sample(rng)
            attempts += 1
            if h not in seen:
                seen.add(h)
                pool.append(h)
        return pool


def validate_quantale(q, rng=None, samples=None):
    """None if all involutive-quantale laws hold, else a Violation with witness.

    Finite carriers are checked exhaustively (associativity, bottom
    absorption, distributivity over binary joins, involution laws and the
    unit law when a unit is declared); effective carriers, or finite ones
    when `samples` is given, are checked on probe pools of that size.
    """
    if q.is_finite and samples is None:
        if getattr(q, "_validated", False):
            return None
        v = _validate_on(q, list(q.elements), exhaustive=True)
        if v is None:
            q._validated = True
        return v
    rng = rng or random.Random(0)
    pool = q.probe_elements(rng, samples or 40)
    return _validate_on(q, pool, exhaustive=False, rng=rng,
                        triples=(samples or 40) * 5)


def _validate_on(q, pool, exhaustive, rng=None, triples=None):
    bot = q.bottom
    for a in pool:
        if q.mult(a, bot) != bot:
            return Violation("bottom-absorb-right", (a,))
        if q.mult(bot, a) != bot:
            return Violation("bottom-absorb-left", (a,))
        if q.inv(q.inv(a)) != a:
            return Violation("involution-involutive", (a,))
    for a, b in itertools.product(pool, repeat=2):
        if q.leq(a, b) and not q.leq(q.inv(a), q.inv(b)):
            return Violation("involution-monotone", (a, b))
        if q.inv(q.mult(a, b)) != q.mult(q.inv(b), q.inv(a)):
            return Violation("involution-antimult", (a, b))
        if q.inv(q.join([a, b])) != q.join([q.inv(a), q.inv(b)]):
            return Violation("involution-join", (a, b))
    if exhaustive:
        triple_iter = itertools.product(pool, repeat=3)
    else:
        triple_iter = ((rng.choice(pool), rng.choice(pool), rng.choice(pool))
                       for _ in range(triples))
    for a, b, c in triple_iter:
        if q.mult(q.mult(a, b), c) != q.mult(a, q.mult(b, c)):
            return Violation("assoc", (a, b, c))
        if q.mult(a, q.join([b, c])) != q.join([q.mult(a, b), q.mult(a, c)]):
            return Violation("distrib-left", (a, b, c))
        if q.mult(q.join([b, c]), a) != q.join([q.mult(b, a), q.mult(c, a)]):
            return Violation("distrib-right", (a, b, c))
    if q.unit is not None:
        e = q.unit
        for a in pool:
            if q.mult(e, a) != a:
                return Violation("unit-left", (a,))
            if q.mult(a, e) != a:
                return Violation("unit-right", (a,))
    return None


def find_unit(q):
    """Search a finite carrier for a two-sided multiplicative unit."""
    for e in q.elements:
        if all(q.mult(e, a) == a and q.mult(a, e) == a for a in q.elements):
            return e
    return None


def validate_hom(h, source, target, rng=None, samples=None):
    """None if h: source -> target preserves joins, mult and involution.

    Exhaustive over a finite source; otherwise checked on a probe pool.
    """
    if source.is_finite and samples is None:
        pool = list(source.elements)
    else:
        rng = rng or random.Random(0)
        pool = source.probe_elements(rng, samples or 40)
    if h(source.bottom) != target.bottom:
        return Violation("hom-bottom", ())
    for a, b in itertools.product(pool, repeat=2):
        if h(source.join([a, b])) != target.join([h(a), h(b)]):
            return Violation("hom-join", (a, b))
        if h(source.mult(a, b)) != target.mult(h(a), h(b)):
            return Violation("hom-mult", (a, b))
    for a in pool:
        if h(source.inv(a)) != target.inv(h(a)):
            return Violation("hom-involution", (a,))
    return None


@dataclass(frozen=True)
class QuantaleMap:
    """A map p: source -> target, held as its inverse image p*: target -> source."""
    source: object
    target: object
    inverse_image: object
    direct_image: object = None
    name: str = ""

    def star(self, x):
        return self.inverse_image(x)

    def shriek(self, a):
        if self.direct_image is None:
            raise Undecidable(f"map {self.name or '?'} has no direct image")
        return self.direct_image(a)

    @staticmethod
    def from_table(source, target, table, direct_table=None, name=""):
        """Finite map from an inverse-image value table indexed by target elements."""
        table = tuple(table)
        direct = None
        if direct_table is not None:
            dt = tuple(direct_table)
            direct = dt.__getitem__
        return QuantaleMap(source, target, table.__getitem__, direct, name)

    def inverse_table(self):
        return tuple(self.inverse_image(x) for x in self.target.elements)

    def with_direct_image(self, fn):
        return replace(self, direct_image=fn)

    def star_sup_map(self):
        """p* as a SupMap between finite carriers."""
        return SupMap(self.target.carrier, self.source.carrier,
                      self.inverse_table())

    def __repr__(self):
        return f"QuantaleMap({self.name or 'unnamed'})"


def identity_map(q):
    return QuantaleMap(q, q, lambda x: x, lambda x: x, name="id")


def compose_maps(p, f):
    """The composite map p . f : R -> X of f: R -> Q and p: Q -> X.

    Inverse images compose in the reverse order; direct images compose
    covariantly when both are present.
    """
    if f.target is not p.source and f.target != p.source:
        raise ValueError("composition mismatch: f.target must be p.source")
    inverse = lambda x: f.inverse_image(p.inverse_image(x))
    direct = None
    if p.direct_image is not None and f.direct_image is not None:
        direct = lambda a: p.direct_image(f.direct_image(a))
    name = f"{p.name or '?'}.{f.name or '?'}"
    return QuantaleMap(f.source, p.target, inverse, direct, name)


def is_surjective(p, rng=None, samples=200):
    """Decide surjectivity of p: Q -> X.

    With a direct image, p is a surjection iff p_!(p*(x)) = x for all x;
    without one (and X finite) injectivity of p* is used, which agrees
    with the first criterion whenever the left adjoint exists.  For an
    effective X without a direct image the question is undecidable here.
    """
    X = p.target
    if p.direct_image is not None:
        if X.is_finite:
            return all(p.shriek(p.star(x)) == x for x in X.elements)
        rng = rng or random.Random(0)
        return all(p.shriek(p.star(x)) == x
                   for x in X.probe_elements(rng, samples))
    if X.is_finite:
        if p.source.is_finite:
            try:
                q = ensure_left_adjoint(p)
            except Exception:
                q = None
            if q is not None:
                return all(q.shriek(q.star(x)) == x for x in X.elements)
        values = [p.star(x) for x in X.elements]
        return len(set(values)) == len(values)
    raise Undecidable("surjectivity of a map into an effective carrier "
                      "requires a direct image")


def ensure_left_adjoint(p):
    """Return p carrying its direct image, computing it on finite carriers."""
    if p.direct_image is not None:
        return p
    if not (p.source.is_finite and p.target.is_finite):
        raise Undecidable("cannot compute a direct image on effective carriers")
    adj = left_adjoint(p.star_sup_map())  # raises NoLeftAdjoint with witness
    return p.with_direct_image(adj.values.__getitem__)


def finite_subquantale(ambient, seeds, max_size=64, label=""):
    """Close handles of an effective quantale under joins, mult and involution.

    Returns (quantale, handles) where handles[i] is the ambient element of
    the i-th quotient index.  The inclusion preserves joins, multiplication
    and involution by construction; meets inside the fragment may differ
    from ambient meets, which is fine for a quantale in its own right.
    """
    handles = []
    seen = set()

    def add(h):
        if h not in seen:
            seen.add(h)
            handles.append(h)

    add(ambient.bottom)
    for s in seeds:
        add(s)
    while True:
        frozen = list(handles)
        for a in frozen:
            add(ambient.inv(a))
            for b in frozen:
                add(ambient.join([a, b]))
                add(ambient.mult(a, b))
        if len(handles) == len(frozen):
            break
        if len(handles) > max_size:
            raise ValueError(f"subquantale closure exceeded {max_size} elements")
    n = len(handles)
    pairs = [(i, j) for i in range(n) for j in range(n)
             if ambient.leq(handles[i], handles[j])]
    names = [ambient.name_of(h) for h in handles]
    carrier = validate_lattice(pairs, size=n, names=names)
    index = {h: i for i, h in enumerate(handles)}
    mult = [[index[ambient.mult(handles[i], handles[j])] for j in range(n)]
            for i in range(n)]
    inv = [index[ambient.inv(handles[i])] for i in range(n)]
    unit = index.get(ambient.unit) if ambient.unit is not None else None
    if unit is None:
        q = FiniteInvQuantale(carrier, mult, inv, label=label)
        unit = find_unit(q)
    q = FiniteInvQuantale(carrier, mult, inv, unit=unit, label=label)
    v = validate_quantale(q)
    if v is not None:
        raise InvalidQuantale(v)
    return q, handles


def quantale_isomorphism(q1, q2):
    """A bijection of elements preserving order, mult and involution, or None.

    Brute force over permutations with an order-profile prefilter; meant
    for small quantales (quotients, toy examples).
    """
    if q1.size != q2.size:
        return None

    def profile(q, a):
        ups = sum(1 for b in q.elements if q.leq(a, b))
        downs = sum(1 for b in q.elements if q.leq(b, a))
        idem = q.mult(a, a) == a
        return (ups, downs, idem, q.inv(a) == a)

    p1 = [profile(q1, a) for a in q1.elements]
    p2 = [profile(q2, a) for a in q2.elements]
    if sorted(p1) != sorted(p2):
        return None
    candidates = [[b for b in q2.elements if p2[b] == p1[a]] for a in q1.elements]

    n = q1.size
    perm = [None] * n
    used = set()

    def ok_so_far(a):
        for b in range(n):
            if perm[b] is None:
                continue
            if q1.leq(a, b) != q2.leq(perm[a], perm[b]):
                return False
            if q1.leq(b, a) != q2.leq(perm[b], perm[a]):
                return False
            ab = q1.mult(a, b)
            if perm[ab] is not None and perm[ab] != q2.mult(perm[a], perm[b]):
                return False
            ba = q1.mult(b, a)
            if perm[ba] is not None and perm[ba] != q2.mult(perm[b], perm[a]):
                return False
        ia = q1.inv(a)
        if perm[ia] is not None and perm[ia] != q2.inv(perm[a]):
            return False
        return True

    def extend(a):
        if a == n:
            for x, y in itertools.product(range(n), repeat=2):
                if perm[q1.mult(x, y)] != q2.mult(perm[x], perm[y]):
                    return False
                if q1.leq(x, y) != q2.leq(perm[x], perm[y]):
                    return False
            return all(perm[q1.inv(x)] == q2.inv(perm[x]) for x in range(n))
        for b in candidates[a]:
            if b in used:
                continue
            perm[a] = b
            used.add(b)
            if ok_so_far(a) and extend(a + 1):
                return True
            used.discard(b)
            perm[a] = None
        return False

    if extend(0):
        return {a: perm[a] for a in range(n)}
    return None
