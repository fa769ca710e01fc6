"""JSON documents for lattices, quantales, maps and relation presentations.

Lattice:   {"elements": [names...], "leq": [[i, j], ...]}
Quantale:  {"lattice": <lattice>, "mult": [[i, j, k], ...],
            "inv": [[i, j], ...], "unit": i?}
Map:       {"source": <quantale>, "target": <quantale>,
            "inverse_image": [[x, q], ...], "name"?: str}
Relation:  {"pairs": [[r, s], ...]}

Reflexive leq pairs may be omitted; they are restored at load.  Loaders
raise FormatError for malformed documents; semantic failures (a relation
that is not a lattice, a table that is not a quantale, a table that is not
a homomorphism) surface as the validation errors of the owning modules.
"""

from __future__ import annotations

import hashlib
import json

from .quantale import FiniteInvQuantale, InvalidQuantale, QuantaleMap, \
    validate_hom, validate_quantale
from .suplattice import validate_lattice


class FormatError(ValueError):
    pass


def _require(doc, key, kind):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"missing key {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise FormatError(f"key {key!r} must be {kind.__name__}")
    return value


def _int_pairs(raw, what):
    out = []
    for entry in raw:
        if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
            raise FormatError(f"{what} entries must be pairs")
        i, j = entry
        if not (isinstance(i, int) and isinstance(j, int)):
            raise FormatError(f"{what} entries must hold integers")
        out.append((i, j))
    return out


def lattice_to_doc(lat):
    pairs = [[i, j] for (i, j) in lat.leq_pairs() if i != j]
    return {"elements": list(lat.names), "leq": pairs}


def lattice_from_doc(doc):
    names = _require(doc, "elements", list)
    if not all(isinstance(n, str) for n in names):
        raise FormatError("element names must be strings")
    pairs = _int_pairs(_require(doc, "leq", list), "leq")
    n = len(names)
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise FormatError(f"leq pair ({i},{j}) out of range")
    return validate_lattice(pairs, size=n, names=names)


def quantale_to_doc(q):
    doc = {
        "lattice": lattice_to_doc(q.carrier),
        "mult": [[i, j, q.mult(i, j)] for i in q.elements for j in q.elements],
        "inv": [[i, q.inv(i)] for i in q.elements],
    }
    if q.unit is not None:
        doc["unit"] = q.unit
    return doc


def quantale_from_doc(doc, validate=True, label=""):
    carrier = lattice_from_doc(_require(doc, "lattice", dict))
    n = carrier.size
    mult = [[None] * n for _ in range(n)]
    for entry in _require(doc, "mult", list):
        if not (isinstance(entry, (list, tuple)) and len(entry) == 3):
            raise FormatError("mult entries must be triples")
        i, j, k = entry
        if not all(isinstance(v, int) and 0 <= v < n for v in (i, j, k)):
            raise FormatError(f"mult triple {entry} out of range")
        if mult[i][j] is not None:
            raise FormatError(f"duplicate mult entry for ({i},{j})")
        mult[i][j] = k
    for i in range(n):
        for j in range(n):
            if mult[i][j] is None:
                raise FormatError(f"mult entry for ({i},{j}) missing")
    inv = [None] * n
    for i, j in _int_pairs(_require(doc, "inv", list), "inv"):
        if not (0 <= i < n and 0 <= j < n):
            raise FormatError(f"inv pair ({i},{j}) out of range")
        if inv[i] is not None:
            raise FormatError(f"duplicate inv entry for {i}")
        inv[i] = j
    if any(v is None for v in inv):
        raise FormatError("inv table incomplete")
    unit = doc.get("unit")
    if unit is not None and not (isinstance(unit, int) and 0 <= unit < n):
        raise FormatError("unit out of range")
    q = FiniteInvQuantale(carrier, mult, inv, unit=unit, label=label)
    if validate:
        v = validate_quantale(q)
        if v is not None:
            raise InvalidQuantale(v)
    return q


def map_to_doc(m):
    if not (m.source.is_finite and m.target.is_finite):
        raise FormatError("only maps between finite carriers are serializable")
    doc = {
        "source": quantale_to_doc(m.source),
        "target": quantale_to_doc(m.target),
        "inverse_image": [[x, m.star(x)] for x in m.target.elements],
    }
    if m.name:
        doc["name"] = m.name
    return doc


def map_from_doc(doc, validate=True):
    source = quantale_from_doc(_require(doc, "source", dict),
                               validate=validate, label="source")
    target = quantale_from_doc(_require(doc, "target", dict),
                               validate=validate, label="target")
    table = [None] * target.size
    for x, q in _int_pairs(_require(doc, "inverse_image", list),
                           "inverse_image"):
        if not (0 <= x < target.size and 0 <= q < source.size):
            raise FormatError(f"inverse_image pair ({x},{q}) out of range")
        if table[x] is not None:
            raise FormatError(f"duplicate inverse_image entry for {x}")
        table[x] = q
    if any(v is None for v in table):
        raise FormatError("inverse_image table incomplete")
    name = doc.get("name", "")
    m = QuantaleMap.from_table(source, target, table, name=name)
    if validate:
        v = validate_hom(m.inverse_image, target, source)
        if v is not None:
            raise InvalidQuantale(v)
    return m


def relation_from_doc(doc, quantale):
    pairs = _int_pairs(_require(doc, "pairs", list), "pairs")
    n = quantale.size
    for r, s in pairs:
        if not (0 <= r < n and 0 <= s < n):
            raise FormatError(f"relation pair ({r},{s}) out of range")
    from .nucleus import RelationPresentation
    return RelationPresentation(quantale, frozenset(pairs))


def relation_to_doc(rel):
    return {"pairs": [[r, s] for r, s in sorted(rel.pairs)]}


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}: {e}") from e


def save_json(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def sniff_kind(doc):
    """Which document kind a JSON object represents, by its key shape."""
    if not isinstance(doc, dict):
        raise FormatError("top-level JSON value must be an object")
    if "inverse_image" in doc:
        return "map"
    if "mult" in doc:
        return "quantale"
    if "leq" in doc:
        return "lattice"
    if "pairs" in doc:
        return "relation"
    raise FormatError("unrecognized document shape")
