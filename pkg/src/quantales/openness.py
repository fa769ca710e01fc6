"""Checkers for semiopenness, Frobenius reciprocity and related lemmas.

Every check returns a Check record: verdict, witness (re-verified against
the defining equation at construction time), and how the search ran
(exhaustive, or sampled with pool size and seed).  Finite carriers are
swept exhaustively while the evaluation count stays under a cap; effective
carriers are probed on deterministic pools of curated plus seeded-random
handles, so reruns with the recorded seed reproduce the verdict.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .quantale import ensure_left_adjoint, is_surjective
from .suplattice import NoLeftAdjoint

EXHAUSTIVE_CAP = 10 ** 6
DEFAULT_POOL = 50
DEFAULT_SEED = 0


class NotUnital(ValueError):
    pass


class NotALocale(ValueError):
    pass


class MissingDirectImage(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    witness: tuple | None = None
    witness_display: str | None = None
    mode: str = "exhaustive"
    pool: int | None = None
    seed: int | None = None
    evaluations: int = 0

    def to_json(self):
        return {
            "check": self.name,
            "ok": self.ok,
            "witness": _jsonable(self.witness),
            "witness_display": self.witness_display,
            "mode": self.mode,
            "pool": self.pool,
            "seed": self.seed,
            "evaluations": self.evaluations,
        }


def _jsonable(value):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    from .subspaces import RationalSubspace
    if isinstance(value, RationalSubspace):
        return {"dim": value.dim,
                "basis": [[str(x) for x in row] for row in value.basis]}
    return repr(value)


def _pools(p, pool, seed):
    """Candidate elements on each side plus the mode tag for the report."""
    Q, X = p.source, p.target
    rng = random.Random(seed)
    if Q.is_finite and X.is_finite:
        if Q.size * Q.size * X.size <= EXHAUSTIVE_CAP:
            return list(Q.elements), list(X.elements), "exhaustive", None
        qs = Q.probe_elements(rng, pool)
        return qs, list(X.elements), "sampled-capped", len(qs)
    qs = Q.probe_elements(rng, pool) if not Q.is_finite else list(Q.elements)
    xs = X.probe_elements(rng, pool) if not X.is_finite else list(X.elements)
    mode = "sampled"
    return qs, xs, mode, max(len(qs), len(xs))


def _display(p, a=None, x=None, b=None):
    parts = []
    if a is not None:
        parts.append(f"a={p.source.name_of(a)}")
    if x is not None:
        parts.append(f"x={p.target.name_of(x)}")
    if b is not None:
        parts.append(f"b={p.source.name_of(b)}")
    return ", ".join(parts)


def check_semiopen(p, pool=DEFAULT_POOL, seed=DEFAULT_SEED):
    """Equip p with a direct image, or report why none exists.

    On finite carriers the left adjoint of p* is computed outright (the
    witness of failure is an adjunction counterexample); a supplied direct
    image, finite or effective, is verified against the adjunction on the
    probe pools.  Returns (map_with_direct_image_or_None, Check).
    """
    Q, X = p.source, p.target
    if p.direct_image is None:
        if not (Q.is_finite and X.is_finite):
            raise MissingDirectImage(
                "an effective carrier needs a supplied direct image")
        try:
            enriched = ensure_left_adjoint(p)
        except NoLeftAdjoint as e:
            a, x = e.witness  # candidate p_!(a) <= x iff a <= p*(x) failed here
            chk = Check("semiopen", False, (a, x), _display(p, a=a, x=x),
                        "exhaustive")
            return None, chk
        return enriched, Check("semiopen", True, mode="exhaustive")
    qs, xs, mode, poolsize = _pools(p, pool, seed)
    count = 0
    for a in qs:
        sa = p.shriek(a)
        for x in xs:
            count += 1
            if X.leq(sa, x) != Q.leq(a, p.star(x)):
                assert X.leq(p.shriek(a), x) != Q.leq(a, p.star(x))
                return None, Check("semiopen", False, (a, x),
                                   _display(p, a=a, x=x), mode, poolsize,
                                   seed, count)
    return p, Check("semiopen", True, mode=mode, pool=poolsize, seed=seed,
                    evaluations=count)


def _require_direct(p):
    if p.direct_image is None:
        enriched, chk = check_semiopen(p)
        if enriched is None:
            raise MissingDirectImage(f"map is not semiopen: {chk.witness}")
        return enriched
    return p


def check_fr1(p, pool=DEFAULT_POOL, seed=DEFAULT_SEED):
    """p_!(a p*(x)) = p_!(a) x, exhaustively or on probe pools."""
    p = _require_direct(p)
    Q, X = p.source, p.target
    qs, xs, mode, poolsize = _pools(p, pool, seed)
    count = 0
    for a in qs:
        sa = p.shriek(a)
        for x in xs:
            count += 1
            if p.shriek(Q.mult(a, p.star(x))) != X.mult(sa, x):
                assert p.shriek(Q.mult(a, p.star(x))) != X.mult(p.shriek(a), x)
                return Check("fr1", False, (a, x), _display(p, a=a, x=x),
                             mode, poolsize, seed, count)
    return Check("fr1", True, mode=mode, pool=poolsize, seed=seed,
                 evaluations=count)


def check_fr1_right(p, pool=DEFAULT_POOL, seed=DEFAULT_SEED):
    """p_!(p*(x) a) = x p_!(a), the right-module version of fr1."""
    p = _require_direct(p)
    Q, X = p.source, p.target
    qs, xs, mode, poolsize = _pools(p, pool, seed)
    count = 0
    for a in qs:
        sa = p.shriek(a)
        for x in xs:
            count += 1
            if p.shriek(Q.mult(p.star(x), a)) != X.mult(x, sa):
                assert p.shriek(Q.mult(p.star(x), a)) != X.mult(x, p.shriek(a))
                return Check("fr1_right", False, (a, x), _display(p, a=a, x=x),
                             mode, poolsize, seed, count)
    return Check("fr1_right", True, mode=mode, pool=poolsize, seed=seed,
                 evaluations=count)


def check_fr2(p, pool=DEFAULT_POOL, seed=DEFAULT_SEED):
    """p_!(a p*(x) b) = p_!(a) x p_!(b); witness is the first failing triple."""
    p = _require_direct(p)
    Q, X = p.source, p.target
    qs, xs, mode, poolsize = _pools(p, pool, seed)
    count = 0
    for a in qs:
        sa = p.shriek(a)
        for x in xs:
            mid = Q.mult(a, p.star(x))
            sax = X.mult(sa, x)
            for b in qs:
                count += 1
                if p.shriek(Q.mult(mid, b)) != X.mult(sax, p.shriek(b)):
                    lhs = p.shriek(Q.mult(Q.mult(a, p.star(x)), b))
                    rhs = X.mult(X.mult(p.shriek(a), x), p.shriek(b))
                    assert lhs != rhs
                    return Check("fr2", False, (a, x, b),
                                 _display(p, a=a, x=x, b=b), mode, poolsize,
                                 seed, count)
    return Check("fr2", True, mode=mode, pool=poolsize, seed=seed,
                 evaluations=count)


def check_direct_image_involution(p, pool=DEFAULT_POOL, seed=DEFAULT_SEED):
    """p_!(a*) = p_!(a)*: direct images of semiopen maps preserve involution."""
    p = _require_direct(p)
    Q, X = p.source, p.target
    qs, _, mode, poolsize = _pools(p, pool, seed)
    for a in qs:
        if p.shriek(Q.inv(a)) != X.inv(p.shriek(a)):
            return Check("direct_image_involution", False, (a,),
                         _display(p, a=a), mode, poolsize, seed)
    return Check("direct_image_involution", True, mode=mode, pool=poolsize,
                 seed=seed, evaluations=len(qs))


@dataclass(frozen=True)
class FrobeniusReport:
    map_name: str
    semiopen: Check
    fr1: Check | None
    fr1_right: Check | None
    fr2: Check | None
    direct_image_involution: Check | None
    surjective: bool | None
    surjective_mode: str | None
    unit_identity: bool | None

    @property
    def weakly_open(self):
        return self.semiopen.ok and self.fr1 is not None and self.fr1.ok

    @property
    def open_by_sufficient_condition(self):
        """Weakly open surjections satisfying fr2 are stably weakly open."""
        return bool(self.weakly_open and self.surjective
                    and self.fr2 is not None and self.fr2.ok)

    @property
    def hypothesis_for_pullback(self):
        return bool(self.semiopen.ok and self.surjective
                    and self.fr1 and self.fr1.ok and self.fr2 and self.fr2.ok)

    def to_json(self):
        checks = [c.to_json() for c in
                  (self.semiopen, self.fr1, self.fr1_right, self.fr2,
                   self.direct_image_involution) if c is not None]
        return {
            "map": self.map_name,
            "checks": checks,
            "surjective": self.surjective,
            "surjective_mode": self.surjective_mode,
            "unit_identity": self.unit_identity,
            "weakly_open": self.weakly_open,
            "open_by_sufficient_condition": self.open_by_sufficient_condition,
        }


def frobenius_report(p, pool=DEFAULT_POOL, seed=DEFAULT_SEED):
    """Run the whole battery on one map and collect the verdicts."""
    enriched, semi = check_semiopen(p, pool, seed)
    if enriched is None:
        return FrobeniusReport(p.name, semi, None, None, None, None,
                               None, None, None)
    p = enriched
    fr1 = check_fr1(p, pool, seed)
    fr1r = check_fr1_right(p, pool, seed)
    fr2 = check_fr2(p, pool, seed)
    invc = check_direct_image_involution(p, pool, seed)
    mode = "exhaustive" if p.target.is_finite else "sampled"
    surj = is_surjective(p, random.Random(seed))
    unit_id = None
    e = p.target.unit
    if e is not None:
        unit_id = p.shriek(p.star(e)) == e
    return FrobeniusReport(p.name, semi, fr1, fr1r, fr2, invc,
                           surj, mode, unit_id)


@dataclass(frozen=True)
class WosReport:
    """The surjectivity-via-unit biconditional for weakly open maps."""
    map_name: str
    weakly_open: bool
    unit_identity: bool
    surjective: bool
    consistent: bool

    def to_json(self):
        return {"map": self.map_name, "weakly_open": self.weakly_open,
                "unit_identity": self.unit_identity,
                "surjective": self.surjective, "consistent": self.consistent}


def check_wos(p, pool=DEFAULT_POOL, seed=DEFAULT_SEED):
    """Evaluate p_!(p*(e)) = e against surjectivity; they must agree when
    the map is weakly open over a unital target."""
    if p.target.unit is None:
        raise NotUnital("target has no declared unit")
    p = _require_direct(p)
    fr1 = check_fr1(p, pool, seed)
    e = p.target.unit
    unit_identity = p.shriek(p.star(e)) == e
    surjective = is_surjective(p, random.Random(seed))
    consistent = (not fr1.ok) or (unit_identity == surjective)
    return WosReport(p.name, fr1.ok, unit_identity, surjective, consistent)


@dataclass(frozen=True)
class ImplicationReport:
    """fr2 plus the unit identity force fr1 and surjectivity."""
    map_name: str
    applicable: bool
    fr1_ok: bool | None
    surjective: bool | None

    @property
    def holds(self):
        return (not self.applicable) or bool(self.fr1_ok and self.surjective)

    def to_json(self):
        return {"map": self.map_name, "applicable": self.applicable,
                "fr1_ok": self.fr1_ok, "surjective": self.surjective,
                "holds": self.holds}


def check_fr2_implies_fr1(p, pool=DEFAULT_POOL, seed=DEFAULT_SEED):
    if p.target.unit is None:
        raise NotUnital("target has no declared unit")
    p = _require_direct(p)
    fr2 = check_fr2(p, pool, seed)
    e = p.target.unit
    unit_identity = p.shriek(p.star(e)) == e
    if not (fr2.ok and unit_identity):
        return ImplicationReport(p.name, False, None, None)
    fr1 = check_fr1(p, pool, seed)
    surj = is_surjective(p, random.Random(seed))
    return ImplicationReport(p.name, True, fr1.ok, surj)


def is_locale_quantale(q):
    """Multiplication is binary meet and the involution is the identity."""
    if not q.is_finite:
        return False
    return (all(q.inv(a) == a for a in q.elements)
            and all(q.mult(a, b) == q.carrier.meet2(a, b)
                    for a in q.elements for b in q.elements))


@dataclass(frozen=True)
class LocaleMeetReport:
    map_name: str
    fr2_ok: bool
    applicable: bool
    meet_preserved: bool | None
    witness: tuple | None

    def to_json(self):
        return {"map": self.map_name, "fr2_ok": self.fr2_ok,
                "applicable": self.applicable,
                "meet_preserved": self.meet_preserved,
                "witness": _jsonable(self.witness)}


def check_locale_meet_lemma(p, pool=DEFAULT_POOL, seed=DEFAULT_SEED):
    """For locale maps satisfying fr2, p_! preserves binary meets."""
    if not (is_locale_quantale(p.source) and is_locale_quantale(p.target)):
        raise NotALocale("both carriers must be locales viewed as quantales")
    p = _require_direct(p)
    fr2 = check_fr2(p, pool, seed)
    if not fr2.ok:
        return LocaleMeetReport(p.name, False, False, None, None)
    Q, X = p.source, p.target
    for a in Q.elements:
        for b in Q.elements:
            if p.shriek(Q.carrier.meet2(a, b)) != \
                    X.carrier.meet2(p.shriek(a), p.shriek(b)):
                return LocaleMeetReport(p.name, True, True, False, (a, b))
    return LocaleMeetReport(p.name, True, True, True, None)
