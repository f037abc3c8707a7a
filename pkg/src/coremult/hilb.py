"""Fixed-locus calculus for Hilbert schemes of points on the catalog surfaces.

Components of the torus-fixed locus of Hilb^n are indexed by multipartitions:
dicts mapping a fixed-component id of the surface to a partition, of total
size n.  This module computes tangent characters, virtual and genuine
equivariant multiplicities in closed form, the flow order, tidality
verdicts and the dimension generating function.
"""

from dataclasses import dataclass
from math import factorial

from .exactalg import (
    QuantumProduct, poly_mul, poly_str, power_bracket, qp_str,
    quantum_int, quantum_multinomial, rat_to_str,
)
from .partitions import (
    arm, boxes, dominates, enumerate_multipartitions, is_partition, leg,
    mp_norm, mp_size, transpose,
)
from .surfaces import PARABOLIC, get_record, surface_mult


@dataclass
class TangentCharacter:
    positivePart: tuple    # sorted weights of T+, all > 0
    nonPositivePart: tuple # sorted strictly negative weights
    zeroCount: int         # fixed directions (along the component)


@dataclass
class HitchinBase:
    weights: tuple

    def __post_init__(self):
        self.weights = tuple(sorted(self.weights))
        assert all(w > 0 for w in self.weights)


@dataclass
class ComponentReport:
    multipartition: dict
    weightGap: bool
    veryStable: bool
    mu: QuantumProduct
    mPoly: object    # coefficient dict when a closed form exists, else None
    mNonEq: object   # integer when the weight gap holds, else None
    dimension: int


def hilb_base(surface, n):
    """Base weights of Hilb^n: e, 2e, ..., ne."""
    e = surface.baseWeight
    return HitchinBase(tuple(e * i for i in range(1, n + 1)))


def check_multipartition(surface, mp):
    """Validate and normalize: drop empty parts, check ids and partitions."""
    out = {}
    for pid, lam in mp.items():
        get_record(surface, pid)
        lam = tuple(lam)
        if not is_partition(lam):
            raise ValueError("not a partition at %s: %r" % (pid, lam))
        if lam:
            out[pid] = lam
    return out


def tangent_character(surface, mp):
    """Tangent weights of Hilb^n at a fixed component, as three buckets.

    Each box s of the partition at a point with tangent weights (-l | w)
    contributes the pair of exponents
        l*arm(s) + w*(leg(s)+1)   and   -l*(arm(s)+1) - w*leg(s),
    arm counted along x and leg along y.  Zero exponents (directions along
    the component itself) are only counted.
    """
    mp = check_multipartition(surface, mp)
    pos, neg, zero = [], [], 0
    for pid, lam in mp.items():
        rec = get_record(surface, pid)
        l, w = rec.negWeight, rec.posWeight
        for s in boxes(lam):
            a, b = arm(lam, s), leg(lam, s)
            for x in (l * a + w * (b + 1), -l * (a + 1) - w * b):
                if x > 0:
                    pos.append(x)
                elif x < 0:
                    neg.append(x)
                else:
                    zero += 1
    assert len(pos) + len(neg) + zero == 2 * mp_size(mp)
    return TangentCharacter(tuple(sorted(pos)), tuple(sorted(neg)), zero)


def weight_gap(surface, mp):
    """True unless the multipartition touches a component with a tangent
    weight strictly between 0 and the symplectic weight (the bottoms of the
    Painlevé surfaces)."""
    mp = check_multipartition(surface, mp)
    return all(get_record(surface, pid).negWeight >= 0 for pid in mp)


def is_very_stable(surface, mp):
    """A component is very stable iff the partition is empty at every wobbly
    point, a column at every very stable isolated point, and arbitrary on
    the core curve."""
    mp = check_multipartition(surface, mp)
    for pid, lam in mp.items():
        rec = get_record(surface, pid)
        if rec.dimension == 1:
            continue
        if not rec.veryStable:
            return False
        if any(part != 1 for part in lam):
            return False
    return True


def virtual_mult(surface, mp, n):
    """Virtual equivariant multiplicity as a factored rational function:
    prod_{i<=n} (1 - t^{ie}) over prod_{w in T+} (1 - t^w)."""
    mp = check_multipartition(surface, mp)
    if mp_size(mp) != n:
        raise ValueError("multipartition has size %d, not %d" % (mp_size(mp), n))
    tc = tangent_character(surface, mp)
    e = surface.baseWeight
    return QuantumProduct(num=tuple(e * i for i in range(1, n + 1)),
                          den=tc.positivePart)


def very_stable_mult(surface, mp, n):
    """Genuine equivariant multiplicity of a very stable component, in the
    manifestly polynomial closed form: a quantum multinomial over the part
    sizes in base t^e, times per-point quantum binomials in base t^{w_p},
    times the staircase product m_p(t)^{(|lambda(p)|)}."""
    mp = check_multipartition(surface, mp)
    if mp_size(mp) != n:
        raise ValueError("multipartition has size %d, not %d" % (mp_size(mp), n))
    if not is_very_stable(surface, mp):
        raise ValueError("component is wobbly; closed form applies to very "
                         "stable components only")
    e = surface.baseWeight
    out = quantum_multinomial(n, [mp_size({p: mp[p]}) for p in mp], a=e)
    for pid, lam in sorted(mp.items()):
        rec = get_record(surface, pid)
        out = poly_mul(out, quantum_multinomial(
            sum(lam), transpose(lam), a=rec.posWeight))
        out = poly_mul(out, power_bracket(surface_mult(surface, pid), sum(lam)))
    return out


def noneq_mult(surface, mp, n):
    """Classical (non-equivariant) multiplicity: the multinomial coefficient
    of the concatenated conjugate parts times prod_p m_p^{|lambda(p)|}."""
    mp = check_multipartition(surface, mp)
    if mp_size(mp) != n:
        raise ValueError("multipartition has size %d, not %d" % (mp_size(mp), n))
    if not weight_gap(surface, mp):
        raise ValueError("multiplicity is undefined without the weight gap")
    columns = []
    for lam in mp.values():
        columns.extend(transpose(lam))
    out = factorial(n)
    for c in columns:
        out //= factorial(c)
    for pid, lam in mp.items():
        out *= get_record(surface, pid).coreMult ** sum(lam)
    return out


def flow_leq(surface, a, b):
    """Flow order on fixed components of Hilb^n for the parabolic family."""
    if surface.family != PARABOLIC:
        raise ValueError("the flow order is only described for the parabolic "
                         "family; %s is not in it" % surface.name)
    return dominates(check_multipartition(surface, a),
                     check_multipartition(surface, b), surface)


def component_dimension(surface, mp):
    mp = check_multipartition(surface, mp)
    for pid, lam in mp.items():
        if get_record(surface, pid).dimension == 1:
            return lam[0]
    return 0


def component_report(surface, mp):
    mp = check_multipartition(surface, mp)
    n = mp_size(mp)
    wg = weight_gap(surface, mp)
    vst = is_very_stable(surface, mp)
    return ComponentReport(
        multipartition=mp,
        weightGap=wg,
        veryStable=vst,
        mu=virtual_mult(surface, mp, n),
        mPoly=very_stable_mult(surface, mp, n) if vst else None,
        mNonEq=noneq_mult(surface, mp, n) if wg else None,
        dimension=component_dimension(surface, mp),
    )


# ---------------------------------------------------------------------------
# tidality

TIDAL_FUNCTIONS = ("multiplicity", "dimension", "stable-multiplicity")


@dataclass
class TidalityReport:
    surface: str
    n: int
    function: str
    tidal: bool
    witness: object  # (lower mp, upper mp, lower value, upper value) or None


def tidality_report(surface, n, function):
    """Scan all comparable pairs of fixed components for a violation of
    monotonicity (a tidal function weakly decreases along the flow order).

    multiplicity: m on weight-gap components; stable-multiplicity: m
    restricted to very stable components; dimension: lambda(C)_1 on
    weight-gap components.  On the Painlevé surfaces only the weight-gap
    part of the fixed locus is scanned, where the flow order restricts to
    componentwise dominance.
    """
    if function not in TIDAL_FUNCTIONS:
        raise ValueError("unknown tidal function %r" % (function,))
    if n > 6:
        raise ValueError("tidality scan is capped at n = 6")
    domain = [mp for mp in enumerate_multipartitions(surface, n)
              if weight_gap(surface, mp)]
    if function == "stable-multiplicity":
        domain = [mp for mp in domain if is_very_stable(surface, mp)]
    if function == "dimension":
        value = {i: component_dimension(surface, mp)
                 for i, mp in enumerate(domain)}
    else:
        value = {i: noneq_mult(surface, mp, n) for i, mp in enumerate(domain)}
    for i, lo in enumerate(domain):
        for j, hi in enumerate(domain):
            if i == j or value[i] >= value[j]:
                continue
            if dominates(lo, hi, surface):
                return TidalityReport(surface.name, n, function, False,
                                      (lo, hi, value[i], value[j]))
    return TidalityReport(surface.name, n, function, True, None)


# ---------------------------------------------------------------------------
# dimension generating function

def dn_poly(surface, n):
    """D_n(q) = sum over fixed components of q^{lambda(C)_1}, as a dict."""
    if surface.family != PARABOLIC:
        raise ValueError("D_n is defined for the parabolic family; %s is not "
                         "in it" % surface.name)
    out = {}
    for mp in enumerate_multipartitions(surface, n):
        d = component_dimension(surface, mp)
        out[d] = out.get(d, 0) + 1
    return out


# ---------------------------------------------------------------------------
# base changes and covers

def delta_pi(base, base_prime):
    """Virtual-multiplicity correction of a base change: the factored ratio
    prod (1 - t^{e'_i}) / prod (1 - t^{e_i})."""
    if len(base.weights) != len(base_prime.weights):
        raise ValueError("bases have different lengths: %d vs %d"
                         % (len(base.weights), len(base_prime.weights)))
    return QuantumProduct(num=base_prime.weights, den=base.weights)


def cover_correction_2d(record, d):
    """Multiplicity correction of a degree-d cover at an isolated point with
    m_p(t) = [b]_{t^w}: the factor [d]_{t^{w b}}."""
    if record.dimension != 0:
        raise ValueError("cover correction applies to isolated points")
    if record.coreMult is None:
        raise ValueError("point %s has no bracket-form multiplicity" % record.id)
    return quantum_int(d, record.posWeight * record.coreMult)


# ---------------------------------------------------------------------------
# report serialization

def mp_str(mp):
    if not mp:
        return "()"
    return ";".join("%s:(%s)" % (pid, ",".join(str(x) for x in lam))
                    for pid, lam in sorted(mp.items()))


def _poly_json(p):
    if p is None:
        return None
    return {str(e): rat_to_str(c) if not isinstance(c, int) else c
            for e, c in sorted(p.items())}


def _qp_json(q):
    return {"coeff": q.coeff if isinstance(q.coeff, int) else rat_to_str(q.coeff),
            "shift": q.shift, "num": list(q.num), "den": list(q.den)}


def report_json(rep):
    return {
        "multipartition": {pid: list(lam)
                           for pid, lam in sorted(rep.multipartition.items())},
        "weightGap": rep.weightGap,
        "veryStable": rep.veryStable,
        "mu": _qp_json(rep.mu),
        "mPoly": _poly_json(rep.mPoly),
        "mNonEq": rep.mNonEq,
        "dimension": rep.dimension,
    }


CSV_HEADER = "multipartition,weightGap,veryStable,mu,mPoly,mNonEq,dimension"


def reports_csv(reports):
    lines = [CSV_HEADER]
    for r in reports:
        lines.append(",".join([
            '"%s"' % mp_str(r.multipartition),
            str(r.weightGap).lower(),
            str(r.veryStable).lower(),
            '"%s"' % qp_str(r.mu),
            '"%s"' % (poly_str(r.mPoly) if r.mPoly is not None else ""),
            str(r.mNonEq) if r.mNonEq is not None else "",
            str(r.dimension),
        ]))
    return "\n".join(lines) + "\n"


def test():
    from .exactalg import qp_to_poly
    from .surfaces import get_surface

    te = get_surface("T*E")
    sz2 = get_surface("S_{Z/2}")
    sz3 = get_surface("S_{Z/3}")

    tc = tangent_character(te, {"C": (1, 1)})
    assert tc.positivePart == (1, 2)
    assert tc.nonPositivePart == (-1,)
    assert tc.zeroCount == 1

    sii = get_surface("S^II")
    assert not weight_gap(sii, {"B": (1,)})
    si = get_surface("S^I")
    assert weight_gap(si, {"T1": (2, 1)})

    assert is_very_stable(te, {"C": (3, 2)})
    assert not is_very_stable(sz2, {"P1": (2,)})
    assert not is_very_stable(sz3, {"L1a": (1,)})

    assert virtual_mult(sz3, {"L1a": (1,)}, 1) == \
        QuantumProduct(num=(3,), den=(2,))
    assert qp_to_poly(virtual_mult(sz2, {"C": (1,)}, 1)) == {0: 1, 1: 1}
    assert qp_to_poly(virtual_mult(te, {"C": (2,)}, 2)) == {0: 1, 1: 1}

    assert very_stable_mult(te, {"C": (2,)}, 2) == {0: 1, 1: 1}
    assert very_stable_mult(sz2, {"C": (1,), "P1": (1,)}, 2) == \
        poly_mul({0: 1, 1: 1}, {0: 1, 2: 1})
    siv = get_surface("S^IV")
    assert very_stable_mult(siv, {"T1": (1, 1), "T2": (1,)}, 3) == \
        quantum_multinomial(3, (2, 1), a=3)

    assert noneq_mult(sz3, {"L1a": (1,), "L2a": (1,)}, 2) == 8
    assert noneq_mult(te, {"C": (4,)}, 4) == 24
    assert noneq_mult(te, {"C": (1, 1, 1, 1)}, 4) == 1
    assert noneq_mult(sz2, {"C": (2,)}, 2) == 8

    assert flow_leq(te, {"C": (2,)}, {"C": (1, 1)})
    assert not flow_leq(te, {"C": (1, 1)}, {"C": (2,)})
    big = {"C": (5, 1, 1, 1)}
    flat = {"C": (4, 4)}
    assert not flow_leq(te, big, flat) and not flow_leq(te, flat, big)
    try:
        flow_leq(si, {}, {})
        assert False
    except ValueError:
        pass

    assert dn_poly(sz2, 1) == {0: 4, 1: 1}
    assert dn_poly(te, 2) == {1: 1, 2: 1}
    assert dn_poly(te, 0) == {0: 1}

    assert delta_pi(HitchinBase((3,)), HitchinBase((6,))) == \
        QuantumProduct(num=(6,), den=(3,))
    assert cover_correction_2d(get_record(sz3, "L1a"), 2) == {0: 1, 4: 1}

    rep = tidality_report(sz3, 2, "multiplicity")
    assert not rep.tidal and rep.witness is not None
    assert tidality_report(te, 3, "multiplicity").tidal
    assert tidality_report(sz3, 2, "dimension").tidal

    r = component_report(sz2, {"C": (1,), "P1": (1,)})
    assert r.veryStable and r.mNonEq == 4 and r.dimension == 1
    assert r.mPoly is not None and sum(r.mPoly.values()) == r.mNonEq
    print("hilb ok")


if __name__ == "__main__":
    test()
