"""Euler-pairing symmetry checks and identity-fiber characters.

Column ideals — intersections of punctual ideals with one-column partitions
at very stable points — carry two natural graded invariants: the fiber
character of the partially symmetrized tautological bundle of one ideal at
the fixed point of another, and the genuine multiplicity of the component
containing the ideal.  The product (fiber character) x (multiplicity)
x (symmetric algebra of the base) computes an equivariant Euler pairing,
and swapping the two ideals must not change it.  This module computes both
sides of that pairing exactly, together with a third, manifestly symmetric
expression summed over contingency matrices, and reports agreement.

It also restricts partially symmetrized bundles of arbitrary isolated
multipartitions to the distinguished column ideal at the identity point of
the core, producing a polynomial that is sandwiched between the virtual
and genuine multiplicities on the ray t > 1.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .commalg import CaseSpec, equivariant_mult_hilb2
from .exactalg import (
    DEFAULT_RAY_SAMPLES, QuantumProduct, poly_add, poly_eval, poly_mul,
    poly_str, poly_subst_power, power_bracket, quantum_multinomial,
)
from .hilb import (
    check_multipartition, is_very_stable, very_stable_mult, virtual_mult,
)
from .partitions import mp_size, theta_matrices, transpose, weak_compositions
from .surfaces import get_record, surface_mult


# ---------------------------------------------------------------------------
# column ideals

@dataclass
class VeryStableIdeal:
    """Intersection of punctual column ideals at very stable points.

    points holds component ids; the entry for the core curve may repeat,
    each occurrence standing for a distinct unnamed point on the curve,
    while isolated ids must be distinct.  exponents[i] is the column height
    at points[i], so the local partition there is (1^exponents[i]).
    """

    surface: object
    points: tuple
    exponents: tuple

    def __post_init__(self):
        self.points = tuple(self.points)
        self.exponents = tuple(self.exponents)
        if len(self.points) != len(self.exponents) or not self.points:
            raise ValueError("need one positive exponent per support point")
        if any(x < 1 for x in self.exponents):
            raise ValueError("column heights must be positive")
        isolated = []
        for pid in self.points:
            rec = get_record(self.surface, pid)
            if not rec.veryStable:
                raise ValueError("support point %s on %s is wobbly"
                                 % (pid, self.surface.name))
            if rec.dimension == 0:
                isolated.append(pid)
        if len(set(isolated)) != len(isolated):
            raise ValueError("isolated support points must be distinct")

    @property
    def n(self):
        return sum(self.exponents)

    def records(self):
        return [get_record(self.surface, pid) for pid in self.points]

    def has_core_support(self):
        return any(r.dimension == 1 for r in self.records())


def ideal_json(ideal):
    return {"surface": ideal.surface.name,
            "points": list(ideal.points),
            "exponents": list(ideal.exponents)}


# ---------------------------------------------------------------------------
# renormalized symmetrization characters

def renorm_character(exponents, n, b):
    """Character of the S_n-invariants of V^(tensor n) (x) R_n(t^b), where V
    has weight multiset `exponents` and R_n is the n-dimensional graded
    regular-like representation in base t^b.

    INPUT:  exponents — sequence of nonnegative integers (size = dim V)
            n >= 0, b >= 1
    OUTPUT: sum over weak compositions kappa of n with one part per
            exponent of t^{sum_i exponents[i]*kappa[i]} [n choose kappa]_{t^b}
    """
    a = tuple(exponents)
    if any(x < 0 for x in a):
        raise ValueError("exponents must be nonnegative")
    if n < 0 or b < 1:
        raise ValueError("need n >= 0 and b >= 1")
    return dict(_renorm(a, n, b))


@lru_cache(maxsize=None)
def _renorm(a, n, b):
    out = {}
    for kappa in weak_compositions(n, len(a)):
        shift = sum(x * k for x, k in zip(a, kappa))
        out = poly_add(out, poly_mul({shift: 1},
                                     quantum_multinomial(n, kappa, a=b)))
    return out


def g_poly(n, c):
    """Sum of the quantum multinomials [n choose kappa]_t over all weak
    compositions kappa of n with exactly c parts.  Counts the weight-0
    part of the renormalized character of a trivial c-dimensional space."""
    if c < 1:
        raise ValueError("need at least one part")
    out = {}
    for kappa in weak_compositions(n, c):
        out = poly_add(out, quantum_multinomial(n, kappa))
    return out


def _fiber_exponents(c, b, w):
    """Weight multiset of a fiber with character c*[b]_{t^(w/b)}."""
    if w % b:
        raise ValueError("bracket step %d does not divide tangent weight %d"
                         % (b, w))
    step = w // b
    return tuple(i * step for i in range(b)) * c


def _fiber_pair(at_rec, bundle_rec, surface):
    row = at_rec.fiberRow
    if bundle_rec.id not in row:
        raise ValueError("no fiber data for the bundle at %s restricted to "
                         "%s on %s" % (bundle_rec.id, at_rec.id, surface.name))
    return row[bundle_rec.id]


# ---------------------------------------------------------------------------
# fibers of partially symmetrized bundles

def procesque_fiber(bundle, point):
    """Fiber character of the partially symmetrized tautological bundle of
    the column ideal `bundle` at the fixed point of the column ideal
    `point`.

    Sums over contingency matrices A with row sums bundle.exponents and
    column sums point.exponents; each column j contributes a quantum
    multinomial in base t^{w_j} and each cell (i, j) a renormalized
    symmetrization character of the (i at j) fiber data.
    """
    if bundle.surface is not point.surface:
        raise ValueError("ideals live on different surfaces")
    if bundle.n != point.n:
        raise ValueError("ideals have different lengths %d and %d"
                         % (bundle.n, point.n))
    recs_b, recs_p = bundle.records(), point.records()
    cells = [[_fiber_pair(q, p, point.surface) for q in recs_p]
             for p in recs_b]
    lam, mu = bundle.exponents, point.exponents
    out = {}
    for A in theta_matrices(lam, mu):
        term = {0: 1}
        for j, qrec in enumerate(recs_p):
            w = qrec.posWeight
            col = tuple(A[i][j] for i in range(len(lam)))
            term = poly_mul(term, quantum_multinomial(mu[j], col, a=w))
            for i in range(len(lam)):
                if A[i][j]:
                    c, b = cells[i][j]
                    term = poly_mul(term, dict(_renorm(
                        _fiber_exponents(c, b, w), A[i][j], w)))
        out = poly_add(out, term)
    return out


def column_mult(ideal):
    """Genuine equivariant multiplicity of the component containing a
    column ideal: [n choose exponents]_{t^e} times the staircase product
    m_p(t)^{(height)} over the support."""
    e = ideal.surface.baseWeight
    out = quantum_multinomial(ideal.n, ideal.exponents, a=e)
    for pid, height in zip(ideal.points, ideal.exponents):
        out = poly_mul(out, power_bracket(
            surface_mult(ideal.surface, pid), height))
    return out


def symmetric_theta_terms(bundle, point):
    """Per-matrix summands of the manifestly symmetric pairing expression

        [n choose A]_{t^e} prod_{ij} ([e/s_ij]_{t^{s_ij}})^{(a_ij)}
                                      G_{a_ij, c_ij}(t^{s_ij}),

    with s_ij = w_j / b_ij the common bracket step of the cell.  The data
    invariants b_ij w_i = b_ji w_j and c_ij = c_ji make each summand
    literally invariant under swapping the two ideals."""
    if bundle.surface is not point.surface:
        raise ValueError("ideals live on different surfaces")
    e = bundle.surface.baseWeight
    recs_b, recs_p = bundle.records(), point.records()
    lam, mu = bundle.exponents, point.exponents
    terms = []
    for A in theta_matrices(lam, mu):
        entries = [a for row in A for a in row]
        term = quantum_multinomial(bundle.n, entries, a=e)
        for i in range(len(lam)):
            for j in range(len(mu)):
                if not A[i][j]:
                    continue
                c, b = _fiber_pair(recs_p[j], recs_b[i], point.surface)
                w = recs_p[j].posWeight
                if w % b or e % (w // b):
                    raise ValueError("fiber data at (%s, %s) is not graded "
                                     "over the base" % (recs_b[i].id,
                                                        recs_p[j].id))
                s = w // b
                term = poly_mul(term, power_bracket(
                    {k * s: 1 for k in range(e // s)}, A[i][j]))
                term = poly_mul(term, poly_subst_power(
                    g_poly(A[i][j], c), s))
        terms.append((A, term))
    return terms


# ---------------------------------------------------------------------------
# the pairing report

@dataclass
class EulerCharacter:
    """A pairing value numerator * base, with base a factored product form
    (the symmetric algebra of the Hitchin base) that is never expanded."""
    numerator: dict
    base: QuantumProduct


@dataclass
class PairingReport:
    bundleIdeal: VeryStableIdeal
    pointIdeal: VeryStableIdeal
    fiberAtI: dict            # fiber of P_J at I
    fiberAtJ: dict            # fiber of P_I at J
    mI: dict
    mJ: dict
    leftSide: EulerCharacter  # fiberAtI * mI * Sym(base)
    rightSide: EulerCharacter
    thetaTerms: list          # (matrix, summand) pairs, symmetric route
    thetaSum: dict
    sidesEqual: bool
    thetaMatches: bool
    extrapolated: bool        # core-curve support beyond the cotangent case


def pairing_check(I, J):
    """Compute both sides of the equivariant Euler pairing of the column
    ideals I and J, plus the symmetric contingency-matrix expression as an
    independent third route, and report agreement.

    For purely isolated supports the equality of the two sides is a
    theorem, so disagreement raises; supports on the core curve of a
    surface that also has isolated points are extrapolation and are only
    flagged."""
    fiber_at_I = procesque_fiber(J, I)
    fiber_at_J = procesque_fiber(I, J)
    m_I, m_J = column_mult(I), column_mult(J)
    e, n = I.surface.baseWeight, I.n
    sym_base = QuantumProduct(den=tuple(e * i for i in range(1, n + 1)))
    left = EulerCharacter(poly_mul(fiber_at_I, m_I), sym_base)
    right = EulerCharacter(poly_mul(fiber_at_J, m_J), sym_base)
    terms = symmetric_theta_terms(I, J)
    theta = {}
    for _, term in terms:
        theta = poly_add(theta, term)
    equal = left.numerator == right.numerator
    matches = theta == left.numerator and theta == right.numerator
    has_isolated = any(r.dimension == 0 for r in I.surface.fixedComponents)
    extrapolated = has_isolated and (I.has_core_support()
                                     or J.has_core_support())
    if not extrapolated and not (equal and matches):
        raise AssertionError("pairing symmetry failed for %s vs %s on %s"
                             % (I.points, J.points, I.surface.name))
    return PairingReport(I, J, fiber_at_I, fiber_at_J, m_I, m_J, left, right,
                         terms, theta, equal, matches, extrapolated)


def pairing_json(rep, theta_audit=False):
    out = {
        "bundleIdeal": ideal_json(rep.bundleIdeal),
        "pointIdeal": ideal_json(rep.pointIdeal),
        "fiberAtI": _poly_json(rep.fiberAtI),
        "fiberAtJ": _poly_json(rep.fiberAtJ),
        "mI": _poly_json(rep.mI),
        "mJ": _poly_json(rep.mJ),
        "leftSide": _side_json(rep.leftSide),
        "rightSide": _side_json(rep.rightSide),
        "thetaSum": _poly_json(rep.thetaSum),
        "sidesEqual": rep.sidesEqual,
        "thetaMatches": rep.thetaMatches,
        "extrapolated": rep.extrapolated,
    }
    if theta_audit:
        out["thetaTerms"] = [{"matrix": [list(row) for row in A],
                              "term": _poly_json(term)}
                             for A, term in rep.thetaTerms]
    return out


def _poly_json(p):
    return {str(k): p[k] for k in sorted(p)}


def _side_json(side):
    return {"numerator": _poly_json(side.numerator),
            "symBase": {"coeff": side.base.coeff, "shift": side.base.shift,
                        "num": list(side.base.num),
                        "den": list(side.base.den)}}


# ---------------------------------------------------------------------------
# identity-point fibers for arbitrary isolated supports

def chi_I(surface, mp):
    """Fiber character at the reduced column ideal of the identity point of
    the core, for the partially symmetrized bundle of an isolated-support
    multipartition (wobbly points allowed).

    The value is [n choose all conjugate parts]_{t^e} times one
    renormalized character in base t^e per conjugate part, fed by the
    stored identity-point fiber of each support point."""
    mp = check_multipartition(surface, mp)
    e = surface.baseWeight
    n = mp_size(mp)
    cols, factors = [], []
    for pid in sorted(mp):
        rec = get_record(surface, pid)
        if rec.dimension != 0:
            raise ValueError("support must be isolated; %s is the core" % pid)
        if rec.procesqueAtE is None:
            raise ValueError("no identity-point fiber data for %s on %s"
                             % (pid, surface.name))
        weights = tuple(sorted(w for w, c in rec.procesqueAtE.items()
                               for _ in range(c)))
        for part in transpose(mp[pid]):
            cols.append(part)
            factors.append(dict(_renorm(weights, part, e)))
    out = quantum_multinomial(n, cols, a=e)
    for f in factors:
        out = poly_mul(out, f)
    return out


# ---------------------------------------------------------------------------
# the multiplicity sandwich on the ray t > 1

@dataclass
class SandwichReport:
    multipartition: dict
    veryStable: bool
    rows: tuple          # (t, virtual, fiber, genuine) per sample
    leftEqual: bool      # virtual == fiber at every sample
    rightEqual: bool     # fiber == genuine at every sample
    holds: bool          # virtual <= fiber <= genuine at every sample


def _qp_eval(q, t):
    t = Fraction(t)
    val = Fraction(q.coeff) * t ** q.shift
    for x in q.num:
        val *= 1 - t ** x
    for x in q.den:
        val /= 1 - t ** x
    return val


def _genuine_mult_small(surface, mp, n):
    """Genuine multiplicity for n <= 2: closed form when very stable,
    otherwise the length-2 associated-graded engine."""
    if is_very_stable(surface, mp):
        return very_stable_mult(surface, mp, n)
    if n == 1:
        (pid,) = mp
        return surface_mult(surface, pid)
    pts = []
    chart = ""
    for pid in sorted(mp):
        rec = get_record(surface, pid)
        a, b = rec.localEq
        pts.append((a, b, rec.negWeight, rec.posWeight))
    if len(pts) == 1:
        chart = "U2" if mp[sorted(mp)[0]] == (2,) else "U1"
        kind = "punctual"
    else:
        kind = "separated"
    spec = CaseSpec(kind, tuple(pts), chart, surface.baseWeight)
    return equivariant_mult_hilb2(spec)


def sandwich_check(surface, mp, samples=DEFAULT_RAY_SAMPLES):
    """Evaluate virtual <= identity-fiber <= genuine at sample points on
    the ray t > 1 for an isolated-support multipartition of size <= 2.

    Sample-based evidence for the sandwich, exact arithmetic at each
    sample; equality on both sides is expected exactly for very stable
    components."""
    mp = check_multipartition(surface, mp)
    n = mp_size(mp)
    if n > 2:
        raise ValueError("genuine multiplicities are only computed for "
                         "lengths 1 and 2")
    samples = tuple(Fraction(x) for x in samples)
    if not samples or any(x <= 1 for x in samples):
        raise ValueError("samples must lie on the ray t > 1")
    chi = chi_I(surface, mp)
    mu = virtual_mult(surface, mp, n)
    m = _genuine_mult_small(surface, mp, n)
    rows = tuple((t, _qp_eval(mu, t), poly_eval(chi, t), poly_eval(m, t))
                 for t in samples)
    return SandwichReport(
        multipartition=mp,
        veryStable=is_very_stable(surface, mp),
        rows=rows,
        leftEqual=all(v == f for _, v, f, _ in rows),
        rightEqual=all(f == g for _, _, f, g in rows),
        holds=all(v <= f <= g for _, v, f, g in rows),
    )


def sandwich_json(rep):
    return {
        "multipartition": {pid: list(lam)
                           for pid, lam in sorted(rep.multipartition.items())},
        "veryStable": rep.veryStable,
        "rows": [{"t": str(t), "virtual": str(v), "fiber": str(f),
                  "genuine": str(g)} for t, v, f, g in rep.rows],
        "leftEqual": rep.leftEqual,
        "rightEqual": rep.rightEqual,
        "holds": rep.holds,
    }


# ---------------------------------------------------------------------------
# tests

def test():
    from .surfaces import get_surface

    te = get_surface("T*E")
    sz2 = get_surface("S_{Z/2}")
    sz3 = get_surface("S_{Z/3}")
    sz6 = get_surface("S_{Z/6}")

    # small symmetrization characters
    assert g_poly(1, 2) == {0: 2}
    assert g_poly(3, 1) == {0: 1}
    assert g_poly(2, 2) == {0: 3, 1: 1}          # 2 + [2]_t
    assert renorm_character((0, 3), 1, 5) == {0: 1, 3: 1}
    # trivial V of rank c reduces to G_{n,c}(t^b)
    assert renorm_character((0, 0), 3, 2) == poly_subst_power(g_poly(3, 2), 2)

    # factored closed form: V = c[b]_{t^a} with base a*b
    for (a, b, c, n) in [(2, 3, 1, 2), (1, 2, 2, 3), (3, 2, 2, 2)]:
        lhs = renorm_character(_fiber_exponents(c, b, a * b), n, a * b)
        rhs = poly_mul(power_bracket({i * a: 1 for i in range(b)}, n),
                       poly_subst_power(g_poly(n, c), a))
        assert lhs == rhs

    # restriction of the rank-2 core bundle to an isolated point: [2]_t
    core = VeryStableIdeal(sz2, ("C",), (1,))
    point = VeryStableIdeal(sz2, ("P1",), (1,))
    assert procesque_fiber(core, point) == {0: 1, 1: 1}
    rep = pairing_check(core, point)
    assert rep.extrapolated and rep.sidesEqual and rep.thetaMatches

    # the trivial self-pairing on the cotangent surface: 1 / (1 - t)
    one = VeryStableIdeal(te, ("C",), (1,))
    rep = pairing_check(one, one)
    assert not rep.extrapolated
    assert rep.leftSide.numerator == {0: 1}
    assert rep.leftSide.base == QuantumProduct(den=(1,))

    # contingency sum vs the naive product of multinomials, length 3
    I = VeryStableIdeal(te, ("C", "C"), (1, 2))
    rep = pairing_check(I, I)
    t3 = {0: 1, 1: 1, 2: 1}
    naive = poly_mul(t3, t3)
    assert rep.thetaSum == poly_add(t3, poly_mul(t3, {0: 1, 1: 1}))
    assert rep.thetaSum != naive

    # ordered pairs of isolated-support column ideals, length <= 2
    for surface in (sz2, sz3, sz6):
        ids = [r.id for r in surface.fixedComponents
               if r.dimension == 0 and r.veryStable]
        ideals = [VeryStableIdeal(surface, (p,), (n,))
                  for p in ids for n in (1, 2)]
        ideals += [VeryStableIdeal(surface, (p, q), (1, 1))
                   for p in ids for q in ids if p < q]
        for I in ideals:
            for J in ideals:
                if I.n == J.n:
                    pairing_check(I, J)

    # mixed core + isolated supports agree too, flagged as extrapolation
    I = VeryStableIdeal(sz6, ("C", "C"), (1, 1))
    J = VeryStableIdeal(sz6, ("M1b",), (2,))
    rep = pairing_check(I, J)
    assert rep.extrapolated and rep.sidesEqual and rep.thetaMatches

    # identity-point fibers: very stable columns recover the multiplicity
    assert chi_I(sz2, {"P1": (1, 1)}) == very_stable_mult(sz2, {"P1": (1, 1)}, 2)
    assert chi_I(sz3, {"L1a": (1,)}) == {0: 1, 1: 1}
    assert chi_I(sz6, {"M1a": (1,)}) == {0: 1, 1: 1, 3: 1, 4: 1}

    # the sandwich at the wobbly midpoint of the three-legged surface
    rep = sandwich_check(sz3, {"L1a": (1,)})
    assert not rep.veryStable and rep.holds
    assert not rep.leftEqual and not rep.rightEqual
    assert rep.rows[1][1:] == (Fraction(7, 3), Fraction(3), Fraction(5))

    rep = sandwich_check(sz2, {"P1": (1,)})
    assert rep.veryStable and rep.leftEqual and rep.rightEqual

    print("mirror ok")


if __name__ == "__main__":
    test()
