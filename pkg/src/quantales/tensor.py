"""Tensor products and direct sums of finite sup-lattices.

Tensor elements are bi-ideals: subsets of the cartesian grid of the factor
carriers that are down-closed and closed under joins in each coordinate
separately, including the empty join, which forces every tuple with a
bottom coordinate into every bi-ideal.  Order is inclusion, meets are
intersections, and joins close the union.  Pure tensors (least bi-ideal
through one tuple) join-generate everything, so full enumeration, when the
grid is within the configured bound, closes the pure tensors under binary
joins.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .suplattice import FiniteSupLattice, SupMap, is_sup_map, validate_lattice


class EnumerationBoundExceeded(RuntimeError):
    def __init__(self, grid, bound):
        super().__init__(
            f"grid of {grid} tuples exceeds the enumeration bound {bound}; "
            "only pure-tensor arithmetic is available")


class NotBimorphism(ValueError):
    def __init__(self, coordinate, witness):
        self.coordinate = coordinate
        self.witness = witness
        super().__init__(
            f"map does not preserve joins in coordinate {coordinate} "
            f"at {witness}")


@dataclass(frozen=True)
class BiIdeal:
    factors: tuple
    members: frozenset

    def leq(self, other):
        assert self.factors == other.factors
        return self.members <= other.members

    def meet(self, other):
        assert self.factors == other.factors
        return BiIdeal(self.factors, self.members & other.members)

    def __contains__(self, t):
        return t in self.members

    def check_invariants(self):
        """Down-closure and coordinatewise join-closure, by membership scan."""
        facs = self.factors
        for t in self.members:
            for i, lat in enumerate(facs):
                for u in lat.downset(t[i]):
                    if t[:i] + (u,) + t[i + 1:] not in self.members:
                        raise AssertionError(f"not down-closed at {t} coord {i}")
        by_rest = {}
        for t in self.members:
            for i in range(len(facs)):
                by_rest.setdefault((i, t[:i] + t[i + 1:]), []).append(t[i])
        for (i, rest), vals in by_rest.items():
            lat = facs[i]
            for u, v in itertools.combinations(vals, 2):
                t = rest[:i] + (lat.join2(u, v),) + rest[i:]
                if t not in self.members:
                    raise AssertionError(
                        f"not join-closed at coord {i}, rest {rest}")
        for t in itertools.product(*(range(l.size) for l in facs)):
            if any(t[i] == facs[i].bottom for i in range(len(facs))):
                if t not in self.members:
                    raise AssertionError(f"axis tuple {t} missing")


class TensorLattice:
    """Tensor product of a list of finite sup-lattices.

    Enumeration of all elements is available while the grid (product of
    carrier sizes) stays within `bound`; beyond it, pure tensors, meets,
    joins and order tests on explicitly constructed bi-ideals still work.
    """

    def __init__(self, factors, bound=4096):
        self.factors = tuple(factors)
        self.bound = bound
        self.grid_size = 1
        for lat in self.factors:
            self.grid_size *= lat.size
        self._axes = None
        self._elements = None

    def grid(self):
        return itertools.product(*(range(l.size) for l in self.factors))

    @property
    def axes(self):
        if self._axes is None:
            if self.grid_size > self.bound:
                raise EnumerationBoundExceeded(self.grid_size, self.bound)
            bots = tuple(l.bottom for l in self.factors)
            self._axes = frozenset(
                t for t in self.grid()
                if any(t[i] == bots[i] for i in range(len(t))))
        return self._axes

    def close(self, seed):
        """Least bi-ideal containing the seed tuples."""
        members = set(self.axes)
        facs = self.factors
        arity = len(facs)

        def down_close(pending):
            while pending:
                t = pending.pop()
                if t in members:
                    continue
                members.add(t)
                for i in range(arity):
                    for u in facs[i].downset(t[i]):
                        if u != t[i]:
                            t2 = t[:i] + (u,) + t[i + 1:]
                            if t2 not in members:
                                pending.append(t2)

        down_close(list(seed))
        while True:
            by_rest = {}
            for t in members:
                for i in range(arity):
                    by_rest.setdefault((i, t[:i] + t[i + 1:]), set()).add(t[i])
            new = []
            for (i, rest), vals in by_rest.items():
                lat = facs[i]
                vals = list(vals)
                for u, v in itertools.combinations(vals, 2):
                    w = lat.join2(u, v)
                    t = rest[:i] + (w,) + rest[i:]
                    if t not in members:
                        new.append(t)
            if not new:
                break
            down_close(new)
        return BiIdeal(self.factors, frozenset(members))

    def pure(self, t):
        """Least bi-ideal containing the tuple: its downset plus the axes."""
        facs = self.factors
        if any(t[i] == facs[i].bottom for i in range(len(t))):
            return self.bottom
        downs = [lat.downset(x) for lat, x in zip(facs, t)]
        return BiIdeal(self.factors,
                       self.axes | frozenset(itertools.product(*downs)))

    @property
    def bottom(self):
        return BiIdeal(self.factors, self.axes)

    @property
    def top(self):
        if self.grid_size > self.bound:
            raise EnumerationBoundExceeded(self.grid_size, self.bound)
        return BiIdeal(self.factors, frozenset(self.grid()))

    def join(self, ideals):
        ideals = list(ideals)
        if not ideals:
            return self.bottom
        united = set()
        for g in ideals:
            united |= g.members
        return self.close(united)

    def elements(self):
        """All bi-ideals, as joins of pure tensors (within the bound)."""
        if self._elements is None:
            if self.grid_size > self.bound:
                raise EnumerationBoundExceeded(self.grid_size, self.bound)
            pures = {self.pure(t) for t in self.grid()}
            found = set(pures)
            frontier = list(pures)
            while frontier:
                g = frontier.pop()
                for h in list(found):
                    u = self.join([g, h])
                    if u not in found:
                        found.add(u)
                        frontier.append(u)
            self._elements = sorted(
                found, key=lambda g: (len(g.members), sorted(g.members)))
        return self._elements

    def as_suplattice(self):
        """The enumerated tensor as a FiniteSupLattice plus the element list."""
        elems = self.elements()
        n = len(elems)
        pairs = [(i, j) for i in range(n) for j in range(n)
                 if elems[i].members <= elems[j].members]
        return validate_lattice(pairs, size=n), elems

    def index_of(self, ideal):
        return self.elements().index(ideal)


def pure_tensor(factors, t):
    return TensorLattice(factors).pure(tuple(t))


def tensor_lattice(factors, bound=4096):
    return TensorLattice(factors, bound=bound)


def check_bimorphism(b, factors, target):
    """None if b preserves joins (including empty) in every coordinate."""
    factors = tuple(factors)
    for i, lat in enumerate(factors):
        contexts = itertools.product(
            *(range(l.size) for k, l in enumerate(factors) if k != i))
        for rest in contexts:
            def at(v):
                return rest[:i] + (v,) + rest[i:]
            if b(at(lat.bottom)) != target.bottom:
                return (i, (rest, "empty"))
            for u in range(lat.size):
                for v in range(u + 1, lat.size):
                    if b(at(lat.join2(u, v))) != target.join2(b(at(u)), b(at(v))):
                        return (i, (rest, u, v))
    return None


def induced_from_bimorphism(b, factors, target, tensor=None):
    """Extend a verified bimorphism to a join-preserving map on the tensor.

    The extension sends a bi-ideal to the target join of b over its member
    tuples, which agrees with b on pure tensors.  Returns (fn, sup_map)
    where sup_map is materialized only when the tensor is enumerable.
    """
    factors = tuple(factors)
    w = check_bimorphism(b, factors, target)
    if w is not None:
        raise NotBimorphism(*w)
    T = tensor or TensorLattice(factors)

    def fn(ideal):
        return target.join(b(t) for t in ideal.members)

    sup_map = None
    if T.grid_size <= T.bound:
        lat, elems = T.as_suplattice()
        sup_map = SupMap(lat, target, tuple(fn(g) for g in elems))
        assert is_sup_map(sup_map) is None
        for t in T.grid():  # agreement on pure tensors
            assert fn(T.pure(t)) == b(t)
    return fn, sup_map


@dataclass(frozen=True)
class DirectSum:
    """Coproduct of sup-lattices: tuples under the coordinatewise order."""
    summands: tuple

    def lattice(self):
        lat = self.summands[0]
        for other in self.summands[1:]:
            lat = FiniteSupLattice.product(lat, other)
        return lat

    def index(self, t):
        idx = 0
        for lat, v in zip(self.summands, t):
            idx = idx * lat.size + v
        return idx

    def untuple(self, idx):
        out = []
        for lat in reversed(self.summands):
            out.append(idx % lat.size)
            idx //= lat.size
        return tuple(reversed(out))

    def injections(self):
        lat = self.lattice()
        maps = []
        for k, summand in enumerate(self.summands):
            values = []
            for v in range(summand.size):
                t = tuple(v if i == k else s.bottom
                          for i, s in enumerate(self.summands))
                values.append(self.index(t))
            maps.append(SupMap(summand, lat, tuple(values)))
        return maps

    def copair(self, maps, target):
        """The unique sup-map out of the sum restricting to the given maps."""
        if len(maps) != len(self.summands):
            raise ValueError("one map per summand required")
        lat = self.lattice()
        values = []
        for idx in range(lat.size):
            t = self.untuple(idx)
            values.append(target.join(m.values[v] for m, v in zip(maps, t)))
        return SupMap(lat, target, tuple(values))


def direct_sum(summands):
    return DirectSum(tuple(summands))


def swap_map(T_lm, T_ml, ideal):
    """Image of a bi-ideal under the symmetry L (x) M ~ M (x) L."""
    return BiIdeal(T_ml.factors, frozenset(t[::-1] for t in ideal.members))


def unit_iso(T):
    """For factors (2-chain, L): mutually inverse sup-maps to and from L.

    Sends a bi-ideal G to the join of { l : (top, l) in G } and an element
    l back to the pure tensor at (top, l).
    """
    two, L = T.factors
    if two.size != 2:
        raise ValueError("first factor must be the two-element lattice")
    lat, elems = T.as_suplattice()
    to_l = SupMap(lat, L, tuple(
        L.join(l for (o, l) in g.members if o == two.top) for g in elems))
    from_l = SupMap(L, lat, tuple(
        elems.index(T.pure((two.top, l))) for l in L.elements))
    return to_l, from_l


def associator(L, M, N, bound=4096):
    """Mutually inverse sup-maps between (L,M,N) flat and L (x) (M (x) N).

    The nested side is built over the enumerated inner tensor; both
    directions are returned as SupMaps over the enumerated carriers so the
    normalization between flat words and nested parenthesizations can be
    checked as an isomorphism.
    """
    flat = TensorLattice((L, M, N), bound=bound)
    inner = TensorLattice((M, N), bound=bound)
    inner_lat, inner_elems = inner.as_suplattice()
    outer = TensorLattice((L, inner_lat), bound=bound)

    flat_lat, flat_elems = flat.as_suplattice()
    outer_lat, outer_elems = outer.as_suplattice()

    def to_nested(g3):
        members = set()
        for l in range(L.size):
            for hi, h in enumerate(inner_elems):
                if all((l,) + mn in g3.members for mn in h.members):
                    members.add((l, hi))
        return BiIdeal(outer.factors, frozenset(members))

    def to_flat(k):
        members = set()
        for (l, hi) in k.members:
            for mn in inner_elems[hi].members:
                members.add((l,) + mn)
        return flat.close(members)

    fwd = SupMap(flat_lat, outer_lat,
                 tuple(outer_elems.index(to_nested(g)) for g in flat_elems))
    bwd = SupMap(outer_lat, flat_lat,
                 tuple(flat_elems.index(to_flat(k)) for k in outer_elems))
    return fwd, bwd
