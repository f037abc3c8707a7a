"""Catalog of the nine 2-dimensional integrable systems and their fixed loci.

Static data: base weight e, symplectic weight k, the torus-fixed components
with tangent weights and local equations, the oriented flow curves between
them, and the fiber characters of the tautological bundles at very stable
points.  Everything downstream reads from here, so the catalog is
checksummed and audited rather than recomputed.

Field names of the record types double as the JSON schema, hence camelCase.
"""

from dataclasses import dataclass
import hashlib
import json

from .exactalg import QuantumProduct


PARABOLIC = "parabolic"
PAINLEVE = "painleve"

SURFACE_NAMES = (
    "T*E", "S_{Z/2}", "S^VI", "S_{Z/3}", "S^IV",
    "S_{Z/4}", "S^II", "S_{Z/6}", "S^I",
)


@dataclass
class FixedPointRecord:
    # Tangent weights at the component are (-negWeight | posWeight); a
    # negative negWeight marks a bottom whose tangent weights are both
    # positive (no weight gap).  posWeight == symplecticWeight + negWeight.
    id: str
    dimension: int       # 0 isolated point, 1 core curve
    negWeight: int
    posWeight: int
    localEq: object      # (a, b) meaning x^a y^b, or None where not recorded
    coreMult: object     # m_p(1); None for the non-weight-gap bottoms
    veryStable: bool
    fiberRow: dict       # very-stable id q -> (c, b): the character of V_q
                         # restricted here is c * [b]_{t^(posWeight/b)}
    procesqueAtE: object # {exponent: coeff} character of this point's
                         # tautological bundle at the identity fixed point


@dataclass
class SurfaceModel:
    name: str
    family: str          # PARABOLIC or PAINLEVE
    baseWeight: int      # e
    symplecticWeight: int  # k
    fixedComponents: list
    curveAdjacency: list  # (src, dst) pairs, oriented away from the flow source


# ---------------------------------------------------------------------------
# fiber characters of tautological bundles at very stable points
#
# _FIBER[e][i][j] = (c, b) where i is the core multiplicity of the
# restriction point, j the core multiplicity of the bundle's point, and the
# restricted character is c * [b]_{t^(w_i/b)} with w_i the positive tangent
# weight at the restriction point.

_FIBER = {
    1: {1: {1: (1, 1)}},
    2: {2: {2: (2, 1), 1: (1, 1)},
        1: {2: (1, 2), 1: (1, 1)}},
    3: {3: {3: (3, 1), 1: (1, 1)},
        1: {3: (1, 3), 1: (1, 1)}},
    4: {4: {4: (4, 1), 2: (2, 1), 1: (1, 1)},
        2: {4: (2, 2), 2: (2, 1), 1: (1, 1)},
        1: {4: (1, 4), 2: (1, 2), 1: (1, 1)}},
    6: {6: {6: (6, 1), 3: (3, 1), 2: (2, 1), 1: (1, 1)},
        3: {6: (3, 2), 3: (3, 1), 2: (1, 2), 1: (1, 1)},
        2: {6: (2, 3), 3: (1, 3), 2: (2, 1), 1: (1, 1)},
        1: {6: (1, 6), 3: (1, 3), 2: (1, 2), 1: (1, 1)}},
}

# the one wobbly point whose identity-fiber character is not [m_p]_t:
# x^2 y^4 on the e=6 surface
_EXCEPTIONAL_IDENTITY_FIBER = {0: 1, 1: 1, 3: 1, 4: 1}


def _bracket(n, a=1):
    """[n]_{t^a} as a dict; local to avoid importing polynomial helpers."""
    return {i * a: 1 for i in range(n)}


def _parabolic(name, e, legs):
    """Build a parabolic surface (k = 1).

    legs: list of (prefix, [(a, b), ...]) walking outward from the core;
    the i-th point of a leg has tangent weights (-(i+1) | i+2) and id
    prefix + letter.
    """
    core = FixedPointRecord("C", 1, 0, 1, None, e, True, {}, _bracket(e))
    records = [core]
    edges = []
    for prefix, eqs in legs:
        prev = "C"
        for i, (a, b) in enumerate(eqs):
            pid = prefix + "abcde"[i] if len(eqs) > 1 else prefix
            vst = a == 0
            proc = _bracket(b, i + 2) if vst else _bracket(b)
            if name == "S_{Z/6}" and (a, b) == (2, 4):
                proc = dict(_EXCEPTIONAL_IDENTITY_FIBER)
            records.append(
                FixedPointRecord(pid, 0, i + 1, i + 2, (a, b), b, vst, {}, proc))
            edges.append((prev, pid))
            prev = pid
    records.sort(key=lambda r: r.id)
    vst_recs = [r for r in records if r.veryStable]
    for r in vst_recs:
        r.fiberRow = {q.id: _FIBER[e][r.coreMult][q.coreMult] for q in vst_recs}
    return SurfaceModel(name, PARABOLIC, e, 1, records, edges)


def _painleve(name, e, k, bottom, n_tops):
    """Build a Painlevé surface: a bottom with two positive tangent weights
    and n_tops very stable points at weights (-1 | k+1)."""
    a1, a2 = bottom
    records = [FixedPointRecord("B", 0, -a1, a2, None, None, False, {}, None)]
    edges = []
    for i in range(n_tops):
        tid = "T%d" % (i + 1)
        records.append(FixedPointRecord(tid, 0, 1, k + 1, None, 1, True, {}, None))
        edges.append(("B", tid))
    return SurfaceModel(name, PAINLEVE, e, k, records, edges)


def catalog():
    """All nine surfaces, ordered by base weight then family."""
    te = _parabolic("T*E", 1, [])
    sz2 = _parabolic("S_{Z/2}", 2, [("P1", [(0, 1)]), ("P2", [(0, 1)]),
                                    ("P3", [(0, 1)]), ("P4", [(0, 1)])])
    sz3 = _parabolic("S_{Z/3}", 3, [("L1", [(1, 2), (0, 1)]),
                                    ("L2", [(1, 2), (0, 1)]),
                                    ("L3", [(1, 2), (0, 1)])])
    sz4 = _parabolic("S_{Z/4}", 4, [("L1", [(2, 3), (1, 2), (0, 1)]),
                                    ("L2", [(2, 3), (1, 2), (0, 1)]),
                                    ("S1", [(0, 2)])])
    sz6 = _parabolic("S_{Z/6}", 6, [("L1", [(4, 5), (3, 4), (2, 3), (1, 2), (0, 1)]),
                                    ("M1", [(2, 4), (0, 2)]),
                                    ("S1", [(0, 3)])])
    # S^VI is the Painlevé compactification isomorphic to the e=2 parabolic
    # surface: same fixed-locus data, its own name and family flag.
    svi = _parabolic("S^VI", 2, [("P1", [(0, 1)]), ("P2", [(0, 1)]),
                                 ("P3", [(0, 1)]), ("P4", [(0, 1)])])
    svi.family = PAINLEVE
    siv = _painleve("S^IV", 3, 2, (1, 1), 3)
    sii = _painleve("S^II", 4, 3, (1, 2), 2)
    si = _painleve("S^I", 6, 5, (2, 3), 1)
    return [te, sz2, svi, sz3, siv, sz4, sii, sz6, si]


_BY_NAME = None


def get_surface(name):
    global _BY_NAME
    if _BY_NAME is None:
        _BY_NAME = {s.name: s for s in catalog()}
    if name not in _BY_NAME:
        raise ValueError("unknown surface %r; expected one of %s"
                         % (name, ", ".join(SURFACE_NAMES)))
    return _BY_NAME[name]


def get_record(surface, component_id):
    for r in surface.fixedComponents:
        if r.id == component_id:
            return r
    raise ValueError("surface %s has no component %r (have: %s)"
                     % (surface.name, component_id,
                        ", ".join(r.id for r in surface.fixedComponents)))


def isolated_records(surface):
    return [r for r in surface.fixedComponents if r.dimension == 0]


def core_record(surface):
    """The 1-dimensional component, or None (bare Painlevé surfaces)."""
    for r in surface.fixedComponents:
        if r.dimension == 1:
            return r
    return None


def surface_mult(surface, component_id):
    """Equivariant multiplicity m_F(t) of a fixed component.

    Returns a polynomial dict for weight-gap components.  For a bottom with
    two positive tangent weights the multiplicity equals the virtual one and
    is not a polynomial; it is returned as a QuantumProduct
    (1-t^e) / ((1-t^a1)(1-t^a2)).
    """
    r = get_record(surface, component_id)
    if r.negWeight < 0:
        return QuantumProduct(num=(surface.baseWeight,),
                              den=(-r.negWeight, r.posWeight))
    if r.dimension == 1:
        return _bracket(surface.baseWeight)
    return _bracket(r.coreMult, r.posWeight)


def has_weight_gap(record):
    return record.negWeight >= 0


# ---------------------------------------------------------------------------
# JSON export and checksum

def _poly_json(p):
    if p is None:
        return None
    return {str(e): p[e] for e in sorted(p)}


def record_json(r):
    return {
        "id": r.id,
        "dimension": r.dimension,
        "negWeight": r.negWeight,
        "posWeight": r.posWeight,
        "localEq": list(r.localEq) if r.localEq is not None else None,
        "coreMult": r.coreMult,
        "veryStable": r.veryStable,
        "fiberRow": {q: {"c": c, "b": b} for q, (c, b) in sorted(r.fiberRow.items())},
        "procesqueAtE": _poly_json(r.procesqueAtE),
    }


def surface_json(s):
    return {
        "name": s.name,
        "family": s.family,
        "baseWeight": s.baseWeight,
        "symplecticWeight": s.symplecticWeight,
        "fixedComponents": [record_json(r) for r in s.fixedComponents],
        "curveAdjacency": [[a, b] for a, b in s.curveAdjacency],
    }


def catalog_json():
    return {"surfaces": [surface_json(s) for s in catalog()]}


def catalog_checksum():
    blob = json.dumps(catalog_json(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# Frozen digest of the audited transcription; audit_catalog() recomputes it.
CATALOG_SHA256 = "31fc38892f303abb5c639dfc378c3326fb0cd9140c6bd6ee824e4a91c6122176"


# ---------------------------------------------------------------------------
# audit

def audit_catalog():
    """Check every structural invariant of the catalog; returns the models."""
    models = catalog()
    assert tuple(s.name for s in models) == SURFACE_NAMES
    for s in models:
        e, k = s.baseWeight, s.symplecticWeight
        ids = [r.id for r in s.fixedComponents]
        assert ids == sorted(ids) and len(set(ids)) == len(ids), s.name
        cores = [r for r in s.fixedComponents if r.dimension == 1]
        if s.family == PARABOLIC:
            assert len(cores) == 1 and k == 1, s.name
        by_id = {r.id: r for r in s.fixedComponents}
        vst_ids = {r.id for r in s.fixedComponents if r.veryStable}
        for r in s.fixedComponents:
            assert r.posWeight == k + r.negWeight, (s.name, r.id)
            if r.localEq is not None:
                a, b = r.localEq
                # weight balance of the local equation x^a y^b
                assert -a * r.negWeight + b * r.posWeight == e, (s.name, r.id)
                assert r.veryStable == (a == 0), (s.name, r.id)
                if r.dimension == 0:
                    assert r.coreMult == b, (s.name, r.id)
            if r.fiberRow:
                assert r.veryStable and set(r.fiberRow) == vst_ids, (s.name, r.id)
            for q, (c, b) in r.fiberRow.items():
                assert r.posWeight % b == 0, (s.name, r.id, q)
                assert c * b == by_id[q].coreMult, (s.name, r.id, q)
                # symmetry of the fiber table
                assert c == by_id[q].fiberRow[r.id][0], (s.name, r.id, q)
        # b_ij * w_i == b_ji * w_j, where b_ij is the b of chi(V_i|_j) and
        # w_i the positive weight at the bundle's own point
        tabled = {r.id for r in s.fixedComponents if r.fiberRow}
        for i in tabled:
            for j in tabled:
                b_ij = by_id[j].fiberRow[i][1]
                b_ji = by_id[i].fiberRow[j][1]
                assert b_ij * by_id[i].posWeight == b_ji * by_id[j].posWeight, \
                    (s.name, i, j)
        for src, dst in s.curveAdjacency:
            p, q = by_id[src], by_id[dst]
            if p.localEq is not None and q.localEq is not None:
                # x-power at the source equals y-power at the flow target
                assert p.localEq[0] == q.localEq[1], (s.name, src, dst)
        # outward-terminal isolated points are very stable
        sources = {a for a, _ in s.curveAdjacency}
        for r in isolated_records(s):
            if r.id not in sources and r.negWeight >= 0:
                assert r.veryStable, (s.name, r.id)
    assert get_surface("S^I").baseWeight == 6
    assert get_surface("S^II").baseWeight == 4
    assert get_surface("S^IV").baseWeight == 3
    svi = surface_json(get_surface("S^VI"))
    sz2 = surface_json(get_surface("S_{Z/2}"))
    for key in ("fixedComponents", "curveAdjacency", "baseWeight",
                "symplecticWeight"):
        assert svi[key] == sz2[key]
    assert catalog_checksum() == CATALOG_SHA256, catalog_checksum()
    return models


def test():
    models = audit_catalog()
    assert len(models) == 9
    sz3 = get_surface("S_{Z/3}")
    assert surface_mult(sz3, "C") == {0: 1, 1: 1, 2: 1}
    assert surface_mult(sz3, "L1a") == {0: 1, 2: 1}          # [2]_{t^2}
    assert surface_mult(sz3, "L1b") == {0: 1}
    sz4 = get_surface("S_{Z/4}")
    assert surface_mult(sz4, "L1a") == {0: 1, 2: 1, 4: 1}    # [3]_{t^2}
    assert surface_mult(sz4, "L1b") == {0: 1, 3: 1}          # [2]_{t^3}
    sz6 = get_surface("S_{Z/6}")
    assert surface_mult(sz6, "C") == {i: 1 for i in range(6)}
    si = get_surface("S^I")
    mb = surface_mult(si, "B")
    assert mb == QuantumProduct(num=(6,), den=(2, 3))
    assert [r.id for r in get_surface("S^IV").fixedComponents] == \
        ["B", "T1", "T2", "T3"]
    te = get_surface("T*E")
    assert [r.id for r in te.fixedComponents] == ["C"]
    assert te.fixedComponents[0].fiberRow == {"C": (1, 1)}
    # identity-point fibers: the core row of the fiber table in low terms
    assert get_surface("S_{Z/6}").fixedComponents[0].procesqueAtE == \
        {i: 1 for i in range(6)}
    m1a = get_record(sz6, "M1a")
    assert m1a.procesqueAtE == {0: 1, 1: 1, 3: 1, 4: 1}
    l1e = get_record(sz6, "L1e")
    assert l1e.fiberRow["S1"] == (1, 3) and l1e.fiberRow["M1b"] == (1, 2)
    print("surfaces ok")


if __name__ == "__main__":
    test()
