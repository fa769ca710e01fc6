"""Quantic nuclei presented by relations, quotients, factorization, equalizers.

A binary relation R on a finite involutive quantale is first saturated by
a worklist fixpoint (closing pairs under involution and under left and
right multiplication by arbitrary elements; the right-multiplied pairs are
derivable from the other two clauses but are included so that downstream
condition enumerations can use them directly).  The elements alpha with
"r <= alpha iff s <= alpha" for every saturated pair form a meet-closed
family, and the closure operator it induces is the least involutive
quantic nucleus identifying the pairs of R.  Its fixed points carry the
quotient quantale, with multiplication (a, b) -> j(ab).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .quantale import FiniteInvQuantale, QuantaleMap, find_unit, \
    validate_hom, validate_quantale
from .suplattice import ClosureOperator, SupMap, is_sup_map, validate_lattice


class InternalInvariantViolation(RuntimeError):
    """The constructed nucleus failed its own laws; this signals a bug."""


class NoFactorization(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"map does not identify saturated pair {witness}")


@dataclass(frozen=True)
class RelationPresentation:
    quantale: FiniteInvQuantale
    pairs: frozenset

    def __post_init__(self):
        n = self.quantale.size
        object.__setattr__(self, "pairs",
                           frozenset((int(r), int(s)) for r, s in self.pairs))
        for r, s in self.pairs:
            if not (0 <= r < n and 0 <= s < n):
                raise ValueError(f"pair ({r},{s}) outside the carrier")


def saturate_relation(rel):
    """Least superset of the pairs closed under involution and one-sided products."""
    q = rel.quantale
    done = set()
    todo = deque(rel.pairs)
    while todo:
        pair = todo.popleft()
        if pair in done:
            continue
        done.add(pair)
        r, s = pair
        todo.append((q.inv(r), q.inv(s)))
        for a in q.elements:
            todo.append((q.mult(a, r), q.mult(a, s)))
            todo.append((q.mult(r, a), q.mult(s, a)))
    return frozenset(done)


def saturated_elements(q, saturated):
    """Elements seeing both sides of every saturated pair the same way."""
    out = frozenset(
        alpha for alpha in q.elements
        if all(q.leq(r, alpha) == q.leq(s, alpha) for r, s in saturated))
    assert q.top in out
    for a in out:  # meet-closure is forced by the defining condition
        for b in out:
            assert q.carrier.meet2(a, b) in out
    return out


@dataclass(frozen=True)
class Nucleus:
    quantale: FiniteInvQuantale
    values: tuple

    def __call__(self, a):
        return self.values[a]

    def closure(self):
        return ClosureOperator(self.quantale.carrier, self.values)

    def closed_elements(self):
        return tuple(a for a in self.quantale.elements if self.values[a] == a)

    def validate(self):
        """Closure laws plus j(a)j(b) <= j(ab) and j(a*) = j(a)*."""
        self.closure().validate()
        q, j = self.quantale, self.values
        for a in q.elements:
            if j[q.inv(a)] != q.inv(j[a]):
                raise InternalInvariantViolation(
                    f"involution not respected at {a}")
            for b in q.elements:
                if not q.leq(q.mult(j[a], j[b]), j[q.mult(a, b)]):
                    raise InternalInvariantViolation(
                        f"j(a)j(b) <= j(ab) fails at ({a},{b})")


def nucleus_from_relation(rel):
    """Least involutive quantic nucleus identifying the given pairs."""
    q = rel.quantale
    saturated = saturate_relation(rel)
    closed = saturated_elements(q, saturated)
    values = tuple(
        q.meet(c for c in closed if q.leq(a, c)) for a in q.elements)
    nuc = Nucleus(q, values)
    nuc.validate()
    for r, s in rel.pairs:
        if values[r] != values[s]:
            raise InternalInvariantViolation(f"pair ({r},{s}) not identified")
    return nuc


@dataclass(frozen=True)
class QuotientQuantale:
    quantale: FiniteInvQuantale
    base: FiniteInvQuantale
    nucleus: Nucleus
    closed: tuple
    hom: SupMap

    def embed(self, k):
        """The base element representing quotient index k."""
        return self.closed[k]

    def embed_sup_map(self):
        return SupMap(self.quantale.carrier, self.base.carrier, self.closed)

    def mono_map(self):
        """The regular mono into the base, inverse image = the quotient hom.

        Its direct image (left adjoint of the hom) need not exist; the
        embedding is the right adjoint and is available via embed().
        """
        return QuantaleMap(self.quantale, self.base,
                           self.hom.values.__getitem__,
                           name="quotient-mono")


def quotient(q, nuc):
    """The quotient quantale on the closed elements, with its surjective hom."""
    closed = tuple(sorted(nuc.closed_elements()))
    index = {c: k for k, c in enumerate(closed)}
    n = len(closed)
    pairs = [(i, j) for i in range(n) for j in range(n)
             if q.leq(closed[i], closed[j])]
    names = [q.name_of(c) for c in closed]
    carrier = validate_lattice(pairs, size=n, names=names)
    mult = [[index[nuc(q.mult(closed[i], closed[j]))] for j in range(n)]
            for i in range(n)]
    inv = [index[q.inv(closed[i])] for i in range(n)]
    quot = FiniteInvQuantale(carrier, mult, inv,
                             label=f"{q.label or 'Q'}/j")
    unit = find_unit(quot)
    quot = FiniteInvQuantale(carrier, mult, inv, unit=unit,
                             label=f"{q.label or 'Q'}/j")
    v = validate_quantale(quot)
    if v is not None:
        raise InternalInvariantViolation(f"quotient is not a quantale: {v}")
    hom_values = tuple(index[nuc(a)] for a in q.elements)
    hom = SupMap(q.carrier, carrier, hom_values)
    assert is_sup_map(hom) is None
    v = validate_hom(hom_values.__getitem__, q, quot)
    if v is not None:
        raise InternalInvariantViolation(f"quotient hom is not a hom: {v}")
    assert set(hom_values) == set(range(n))  # surjective by construction
    return QuotientQuantale(quot, q, nuc, closed, hom), hom


def quotient_by_relation(q, pairs):
    rel = RelationPresentation(q, frozenset(pairs))
    return quotient(q, nucleus_from_relation(rel))


def factor_sup_map(h, rel):
    """Factor a sup-map h through the quotient by rel, when possible.

    Returns (quotient, factored) with factored . hom == h; raises
    NoFactorization carrying a saturated pair that h fails to identify.
    """
    q = rel.quantale
    if h.dom != q.carrier:
        raise ValueError("map domain is not the quantale carrier")
    saturated = saturate_relation(rel)
    for r, s in sorted(saturated):
        if h.values[r] != h.values[s]:
            raise NoFactorization((r, s))
    qq, hom = quotient(q, nucleus_from_relation(rel))
    factored = SupMap(qq.quantale.carrier, h.cod,
                      tuple(h.values[c] for c in qq.closed))
    for a in q.elements:  # factored . hom == h
        if factored.values[hom.values[a]] != h.values[a]:
            raise InternalInvariantViolation(f"factorization wrong at {a}")
    assert is_sup_map(factored) is None
    return qq, factored


def equalizer(f, g):
    """Equalizer of two maps f, g: Q -> X as a quantic subspace of Q.

    The presenting relation pairs f*(x) with g*(x) for every x; the result
    is the quotient together with its regular mono into Q.
    """
    if f.source is not g.source and f.source != g.source:
        raise ValueError("equalizer needs maps with a common source")
    if f.target is not g.target and f.target != g.target:
        raise ValueError("equalizer needs maps with a common target")
    q, x = f.source, f.target
    pairs = frozenset((f.star(v), g.star(v)) for v in x.elements)
    qq, hom = quotient(q, nucleus_from_relation(RelationPresentation(q, pairs)))
    mono = qq.mono_map()
    for v in x.elements:  # f and g agree after the mono
        assert hom.values[f.star(v)] == hom.values[g.star(v)]
    return qq, mono
