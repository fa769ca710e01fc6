"""Finite sup-lattices and join-preserving maps.

Elements are dense indices 0..n-1 and the order is stored as one bitmask
per element (bit j of up[i] set iff i <= j).  Least upper bounds come out
of a dictionary keyed by upper-set masks: m is the join of {i, j} exactly
when up[m] == up[i] & up[j], so validating "every pair has a join" costs
one dictionary lookup per pair instead of a cubic scan, and the same
trick (on lower-set masks) yields all meets once joins and a bottom are
known.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class LatticeError(ValueError):
    """Base class for structural problems with orders, lattices and maps."""


class NotAPartialOrder(LatticeError):
    def __init__(self, axiom, witness):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"not a partial order: {axiom} fails at {witness}")


class NoBottom(LatticeError):
    def __init__(self):
        super().__init__("no bottom element (no element below all others)")


class MissingJoin(LatticeError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"pair {witness} has no least upper bound")


class NotSupPreserving(LatticeError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"map does not preserve joins, witness {witness}")


class NoLeftAdjoint(LatticeError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"no left adjoint, adjunction fails at {witness}")


class NotMeetClosed(LatticeError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"family is not closed under meets, witness {witness}")


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FiniteSupLattice:
    """A finite complete lattice; build instances through validate_lattice."""

    __slots__ = ("size", "names", "up", "down", "bottom", "top",
                 "_join", "_meet", "_hash")

    def __init__(self, up, names, down, bottom, top, join_table, meet_table):
        self.size = len(up)
        self.up = up
        self.down = down
        self.names = names
        self.bottom = bottom
        self.top = top
        self._join = join_table
        self._meet = meet_table
        self._hash = hash((self.size, up))

    # -- order ------------------------------------------------------------

    def leq(self, i, j):
        return (self.up[i] >> j) & 1 == 1

    def join2(self, i, j):
        return self._join[i][j]

    def meet2(self, i, j):
        return self._meet[i][j]

    def join(self, items):
        out = self.bottom
        for i in items:
            out = self._join[out][i]
        return out

    def meet(self, items):
        out = self.top
        for i in items:
            out = self._meet[out][i]
        return out

    @property
    def elements(self):
        return range(self.size)

    def upset(self, i):
        return list(_bits(self.up[i]))

    def downset(self, i):
        return list(_bits(self.down[i]))

    def name_of(self, i):
        return self.names[i]

    # -- misc -------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FiniteSupLattice)
                and self.size == other.size and self.up == other.up)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FiniteSupLattice(size={self.size})"

    def leq_pairs(self):
        return [(i, j) for i in self.elements for j in _bits(self.up[i])]

    # -- constructors -----------------------------------------------------

    @staticmethod
    def chain(n, names=None):
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        return validate_lattice(pairs, size=n, names=names)

    @staticmethod
    def powerset(atoms):
        """Lattice of all subsets of the given atoms, element index = bitmask."""
        if isinstance(atoms, int):
            atoms = [str(i) for i in range(atoms)]
        k = len(atoms)
        n = 1 << k
        pairs = [(i, j) for i in range(n) for j in range(n) if i & ~j == 0]
        names = ["{" + ",".join(atoms[b] for b in _bits(i)) + "}" for i in range(n)]
        return validate_lattice(pairs, size=n, names=names)

    @staticmethod
    def product(left, right):
        nl, nr = left.size, right.size
        pairs = []
        for i, j in itertools.product(range(nl), range(nr)):
            for i2 in _bits(left.up[i]):
                for j2 in _bits(right.up[j]):
                    pairs.append((i * nr + j, i2 * nr + j2))
        names = [f"({left.names[i]},{right.names[j]})"
                 for i in range(nl) for j in range(nr)]
        return validate_lattice(pairs, size=nl * nr, names=names)

    @staticmethod
    def from_sets(family, names=None):
        """Lattice of an inclusion-ordered family of sets (must be a lattice)."""
        family = [frozenset(s) for s in family]
        n = len(family)
        pairs = [(i, j) for i in range(n) for j in range(n) if family[i] <= family[j]]
        return validate_lattice(pairs, size=n, names=names)


def _coerce_relation(leq, size, names):
    pairs = [(int(i), int(j)) for (i, j) in leq]
    if size is not None:
        n = size
    elif names is not None:
        n = len(names)
    elif pairs:
        n = max(max(i, j) for i, j in pairs) + 1
    else:
        raise LatticeError("cannot infer element count from an empty relation")
    return n, pairs


def validate_lattice(leq, size=None, names=None):
    """Validate a relation as a finite lattice and precompute join/meet tables.

    The relation is an iterable of (i, j) pairs meaning i <= j; reflexive
    pairs may be omitted.  Raises NotAPartialOrder / NoBottom / MissingJoin
    with a witness on failure.
    """
    n, pairs = _coerce_relation(leq, size, names)
    if n <= 0:
        raise LatticeError("lattice must have at least one element")
    up = [1 << i for i in range(n)]
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise LatticeError(f"element index out of range in pair ({i},{j})")
        up[i] |= 1 << j

    for i in range(n):
        for j in _bits(up[i]):
            if j != i and (up[j] >> i) & 1:
                raise NotAPartialOrder("antisymmetry", (i, j))
    for i in range(n):
        for j in _bits(up[i]):
            extra = up[j] & ~up[i]
            if extra:
                k = (extra & -extra).bit_length() - 1
                raise NotAPartialOrder("transitivity", (i, j, k))

    full = (1 << n) - 1
    bottom = next((i for i in range(n) if up[i] == full), None)
    if bottom is None:
        raise NoBottom()

    by_up = {up[i]: i for i in range(n)}  # injective by antisymmetry
    join_table = [[0] * n for _ in range(n)]
    for i in range(n):
        row = join_table[i]
        for j in range(i, n):
            m = by_up.get(up[i] & up[j])
            if m is None:
                raise MissingJoin((i, j))
            row[j] = m
            join_table[j][i] = m

    down = [0] * n
    for i in range(n):
        for j in _bits(up[i]):
            down[j] |= 1 << i
    top = next(i for i in range(n) if down[i] == full)
    by_down = {down[i]: i for i in range(n)}
    meet_table = [[0] * n for _ in range(n)]
    for i in range(n):
        row = meet_table[i]
        for j in range(i, n):
            m = by_down.get(down[i] & down[j])
            # cannot fail: a finite poset with bottom and all joins has all meets
            assert m is not None
            row[j] = m
            meet_table[j][i] = m

    if names is None:
        names = tuple(str(i) for i in range(n))
    else:
        names = tuple(names)
        if len(names) != n:
            raise LatticeError("names length does not match element count")
    return FiniteSupLattice(tuple(up), names, tuple(down), bottom, top,
                            tuple(tuple(r) for r in join_table),
                            tuple(tuple(r) for r in meet_table))


@dataclass(frozen=True)
class SupMap:
    """A function between lattices given by its value table (not yet checked)."""
    dom: FiniteSupLattice
    cod: FiniteSupLattice
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.dom.size:
            raise LatticeError("value table length does not match domain size")
        object.__setattr__(self, "values", tuple(self.values))

    def __call__(self, i):
        return self.values[i]

    def then(self, g):
        if g.dom != self.cod:
            raise LatticeError("composition mismatch")
        return SupMap(self.dom, g.cod, tuple(g.values[v] for v in self.values))

    @staticmethod
    def identity(lat):
        return SupMap(lat, lat, tuple(range(lat.size)))


def is_sup_map(f):
    """None if f preserves bottom and all binary joins, else a witness.

    The witness is () when the empty join (bottom) is not preserved and a
    pair (i, j) whose join is not preserved otherwise.
    """
    dom, cod = f.dom, f.cod
    if f.values[dom.bottom] != cod.bottom:
        return ()
    for i in range(dom.size):
        fi = f.values[i]
        for j in range(i + 1, dom.size):
            if f.values[dom.join2(i, j)] != cod.join2(fi, f.values[j]):
                return (i, j)
    return None


def right_adjoint(f):
    """The right adjoint f_* of a sup-map f, with f(l) <= m iff l <= f_*(m)."""
    w = is_sup_map(f)
    if w is not None:
        raise NotSupPreserving(w)
    dom, cod = f.dom, f.cod
    values = tuple(
        dom.join(l for l in dom.elements if cod.leq(f.values[l], m))
        for m in cod.elements)
    g = SupMap(cod, dom, values)
    for m in cod.elements:  # adjunction is guaranteed, keep a cheap self-check
        for l in dom.elements:
            assert cod.leq(f.values[l], m) == dom.leq(l, g.values[m])
    return g


def left_adjoint(f):
    """Left adjoint of a sup-map f: dom -> cod, i.e. g with g(m) <= l iff m <= f(l).

    The candidate g(m) = meet { l : m <= f(l) } is computed first and the
    adjunction then verified on all pairs; NoLeftAdjoint carries the first
    failing (m, l) pair, which is also the semiopenness counterexample
    reported by the openness checkers.
    """
    dom, cod = f.dom, f.cod
    values = tuple(
        dom.meet(l for l in dom.elements if cod.leq(m, f.values[l]))
        for m in cod.elements)
    for m in cod.elements:
        for l in dom.elements:
            if dom.leq(values[m], l) != cod.leq(m, f.values[l]):
                raise NoLeftAdjoint((m, l))
    return SupMap(cod, dom, values)


def preserves_all_meets(f):
    """None if f preserves top and binary meets (= all meets, finitely), else witness."""
    dom, cod = f.dom, f.cod
    if f.values[dom.top] != cod.top:
        return ()
    for i in range(dom.size):
        for j in range(i + 1, dom.size):
            if f.values[dom.meet2(i, j)] != cod.meet2(f.values[i], f.values[j]):
                return (i, j)
    return None


@dataclass(frozen=True)
class ClosureOperator:
    lattice: FiniteSupLattice
    values: tuple

    def __call__(self, i):
        return self.values[i]

    def closed_elements(self):
        return tuple(i for i in self.lattice.elements if self.values[i] == i)

    def validate(self):
        lat, j = self.lattice, self.values
        for a in lat.elements:
            if not lat.leq(a, j[a]):
                raise LatticeError(f"closure not inflationary at {a}")
            if j[j[a]] != j[a]:
                raise LatticeError(f"closure not idempotent at {a}")
            for b in lat.elements:
                if lat.leq(a, b) and not lat.leq(j[a], j[b]):
                    raise LatticeError(f"closure not monotone at ({a},{b})")
        closed = self.closed_elements()
        for a in closed:
            for b in closed:
                if lat.meet2(a, b) not in closed:
                    raise LatticeError(f"closed family not meet-closed at ({a},{b})")


def closure_from_closed_family(lat, closed):
    """Closure operator whose fixed points are exactly the meet-closed family."""
    cset = sorted(set(closed))
    if lat.top not in cset:
        raise NotMeetClosed("top")
    for a, b in itertools.combinations(cset, 2):
        if lat.meet2(a, b) not in cset:
            raise NotMeetClosed((a, b))
    values = tuple(lat.meet(c for c in cset if lat.leq(a, c)) for a in lat.elements)
    op = ClosureOperator(lat, values)
    assert set(op.closed_elements()) == set(cset)
    return op


def enumerate_sup_maps(dom, cod):
    """All join-preserving maps dom -> cod, by brute force (small lattices only)."""
    for values in itertools.product(range(cod.size), repeat=dom.size):
        if values[dom.bottom] != cod.bottom:
            continue
        f = SupMap(dom, cod, values)
        if is_sup_map(f) is None:
            yield f
