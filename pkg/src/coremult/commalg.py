"""Genuine equivariant multiplicities on the Hilbert square via associated graded modules.

The length-2 locus around a fixed isolated point (or pair of points) is cut out
inside a smooth torus chart by two equations f, g.  Filtering by the ideal I of
positive-weight chart variables gives graded pieces

    gr^d = I^d / (I^d ∩ (f, g) + I^{d+1}),

each a module over the coefficient ring R spanned by the nonpositive-weight
chart variables.  The equivariant multiplicity is the sum over d of the graded
K-classes of the torsion-free quotients of these pieces.  Everything here is
exact rational arithmetic; no Gröbner shortcuts are taken on trust — every
basis is S-polynomial audited and the graded dimension counts can be replayed
against dense linear algebra.

Monomial order: block order with the positive-weight variables in the leading
block (graded reverse lexicographic within a block), coefficient variables
next, auxiliary variables last.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
import heapq
import itertools
import random

from .exactalg import poly_add, poly_mul, poly_sub, quantum_int

# ---- rings -------------------------------------------------------------


@dataclass(frozen=True)
class ChartRing:
    """A polynomial ring with named variables, torus weights and a block order."""

    names: tuple
    weights: tuple
    blocks: tuple

    def index(self, name):
        return self.names.index(name)


def ring_make(names, weights, blocks=None):
    if blocks is None:
        blocks = (tuple(range(len(names))),)
    return ChartRing(tuple(names), tuple(int(w) for w in weights),
                     tuple(tuple(b) for b in blocks))


def mono_key(ring, m):
    """Sort key realizing the block order (bigger key = bigger monomial)."""
    parts = []
    for block in ring.blocks:
        deg = 0
        for i in block:
            deg += m[i]
        parts.append(deg)
        for i in reversed(block):
            parts.append(-m[i])
    return tuple(parts)


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mono_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_weight(ring, m):
    return sum(e * w for e, w in zip(m, ring.weights))


# ---- sparse polynomials ------------------------------------------------
# A polynomial is a dict {exponent tuple: Fraction}; the empty dict is 0.


def mp_const(ring, c):
    c = Fraction(c)
    return {} if c == 0 else {(0,) * len(ring.names): c}


def mp_var(ring, name, k=1, coeff=1):
    e = [0] * len(ring.names)
    e[ring.index(name)] = k
    return {tuple(e): Fraction(coeff)}


def mp_add(p, q):
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def mp_scale(p, c):
    c = Fraction(c)
    if not c:
        return {}
    return {m: v * c for m, v in p.items()}


def mp_sub(p, q):
    return mp_add(p, mp_scale(q, -1))


def mp_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def mp_mono_mul(p, mono, coeff):
    coeff = Fraction(coeff)
    if not coeff:
        return {}
    return {mono_mul(m, mono): c * coeff for m, c in p.items()}


def mp_pow(ring, p, k):
    out = mp_const(ring, 1)
    for _ in range(k):
        out = mp_mul(out, p)
    return out


def mp_lt(ring, p):
    m = max(p, key=lambda mm: mono_key(ring, mm))
    return m, p[m]


def mp_weight(ring, p):
    """Torus weight of a homogeneous polynomial (None for 0)."""
    if not p:
        return None
    ws = {mono_weight(ring, m) for m in p}
    assert len(ws) == 1, "inhomogeneous polynomial"
    return ws.pop()


def mp_normalize(ring, p):
    """Rescale to integer coefficients with content 1 and positive leading one."""
    if not p:
        return p
    den = 1
    for c in p.values():
        den = den * c.denominator // gcd(den, c.denominator)
    num = 0
    for c in p.values():
        num = gcd(num, abs(c.numerator * (den // c.denominator)))
    scale = Fraction(den, num)
    if mp_lt(ring, p)[1] < 0:
        scale = -scale
    return mp_scale(p, scale)


def mp_pdeg(m, pvars):
    return sum(m[i] for i in pvars)


def mp_phomog_parts(p, pvars):
    """Split into homogeneous parts by total degree in the given variables."""
    parts = {}
    for m, c in p.items():
        parts.setdefault(mp_pdeg(m, pvars), {})[m] = c
    return parts


def mp_divexact(ring, p, d):
    """Exact division p/d (raises if the division leaves a remainder)."""
    if not p:
        return {}
    dm, dc = mp_lt(ring, d)
    out = {}
    work = dict(p)
    while work:
        m, c = mp_lt(ring, work)
        assert mono_divides(dm, m), "inexact division"
        q = mono_sub(m, dm)
        out[q] = c / dc
        work = mp_sub(work, mp_mono_mul(d, q, c / dc))
    return out


def mp_eval(p, point):
    """Evaluate at a tuple of rationals."""
    total = Fraction(0)
    for m, c in p.items():
        v = c
        for e, x in zip(m, point):
            if e:
                v = v * x ** e
        total += v
    return total


# ---- vectors over a ring and Buchberger with syzygy tracking ------------
# A vector is a dict {position: polynomial}; ideals are rank-1 modules at
# position 0.  Leading terms compare monomials first, position as tiebreak.


def vec_scale(v, c):
    c = Fraction(c)
    if not c:
        return {}
    return {p: mp_scale(q, c) for p, q in v.items()}


def vec_add(v, w):
    out = {p: dict(q) for p, q in v.items()}
    for p, q in w.items():
        s = mp_add(out.get(p, {}), q)
        if s:
            out[p] = s
        else:
            out.pop(p, None)
    return out


def vec_sub(v, w):
    return vec_add(v, vec_scale(w, -1))


def vec_mono_mul(v, mono, coeff):
    coeff = Fraction(coeff)
    if not coeff:
        return {}
    return {p: mp_mono_mul(q, mono, coeff) for p, q in v.items()}


def vec_lt(ring, v):
    best = None
    for pos, poly in v.items():
        m, c = mp_lt(ring, poly)
        k = (mono_key(ring, m), -pos)
        if best is None or k > best[0]:
            best = (k, pos, m, c)
    return best[1], best[2], best[3]


def vec_weight(ring, v, weights):
    """Torus weight of a homogeneous vector given generator weights (None for 0)."""
    if not v:
        return None
    ws = set()
    for pos, poly in v.items():
        for m in poly:
            ws.add(mono_weight(ring, m) + weights[pos])
    assert len(ws) == 1, "inhomogeneous vector"
    return ws.pop()


def _heap_key(ring, m, pos):
    """Min-heap key: smallest entry is the biggest monomial, lowest position."""
    parts = []
    for block in ring.blocks:
        deg = 0
        for i in block:
            deg += m[i]
        parts.append(-deg)
        for i in reversed(block):
            parts.append(m[i])
    parts.append(pos)
    return tuple(parts)


def vec_reduce(ring, v, basis, track=False, lts=None):
    """Full normal form of v against basis; optionally track quotients."""
    if lts is None:
        lts = [vec_lt(ring, b) for b in basis]
    bypos = {}
    for i, (bp, bm, bc) in enumerate(lts):
        bypos.setdefault(bp, []).append((i, bm, bc))
    quots = [{} for _ in basis] if track else None
    rem = {}
    work = {p: dict(q) for p, q in v.items()}
    heap = [(_heap_key(ring, m, pos), pos, m)
            for pos, poly in work.items() for m in poly]
    heapq.heapify(heap)
    while heap:
        _, pos, m = heapq.heappop(heap)
        poly = work.get(pos)
        if poly is None:
            continue
        c = poly.get(m)
        if not c:
            poly.pop(m, None)
            continue
        hit = None
        for i, bm, bc in bypos.get(pos, ()):
            if mono_divides(bm, m):
                hit = (i, bm, bc)
                break
        if hit is None:
            rem.setdefault(pos, {})[m] = c
            del poly[m]
            continue
        i, bm, bc = hit
        q = mono_sub(m, bm)
        qc = c / bc
        for bpos, bpoly in basis[i].items():
            tgt = work.setdefault(bpos, {})
            for bm2, bc2 in bpoly.items():
                mm = mono_mul(bm2, q)
                old = tgt.get(mm, 0)
                s = old - qc * bc2
                if s:
                    if not old:
                        heapq.heappush(heap, (_heap_key(ring, mm, bpos),
                                              bpos, mm))
                    tgt[mm] = s
                else:
                    tgt.pop(mm, None)
        if track:
            quots[i][q] = quots[i].get(q, 0) + qc
    if track:
        return rem, quots
    return rem


def _spair(ring, bi, bj, lti, ltj):
    mi, mj = lti[1], ltj[1]
    lcm = mono_lcm(mi, mj)
    sp = vec_sub(vec_mono_mul(bi, mono_sub(lcm, mi), 1),
                 vec_mono_mul(bj, mono_sub(lcm, mj), 1))
    return sp, mono_sub(lcm, mi), mono_sub(lcm, mj)


def _chain_skip(lts, pos, i, j, lcm):
    """Chain criterion: pair (i, j) is redundant given a third leading term
    dividing their lcm with both sub-lcms strictly smaller.  Strictness makes
    the skipped-pair relation well-founded, so no cycle of pairs can excuse
    each other."""
    mi, mj = lts[i][1], lts[j][1]
    rng = range(len(lcm))
    for k, (kpos, km, _) in enumerate(lts):
        if kpos != pos or k == i or k == j:
            continue
        divides, eq_i, eq_j = True, True, True
        for x in rng:
            kx, lx = km[x], lcm[x]
            if kx > lx:
                divides = False
                break
            if eq_i and kx != lx and mi[x] != lx:
                eq_i = False
            if eq_j and kx != lx and mj[x] != lx:
                eq_j = False
        if divides and not eq_i and not eq_j:
            return True
    return False


def module_buchberger(ring, cols, track=False, audit=True, components=None):
    """Gröbner basis of the module generated by cols.

    Returns (basis, reps, syzygies).  With track set, reps[i] expresses
    basis[i] in the input columns and syzygies (in input coordinates) are the
    S-pair relations of the final basis over every pair the chain criterion
    cannot discharge — still a generating set of the syzygy module — gathered
    in the closing pass that re-reduces those pairs, which doubles as the
    S-polynomial audit.  Without track the closing pass still runs unless
    audit is off.
    Passing components restricts rep/syzygy bookkeeping to those input
    indices (enough when only some coordinates of the syzygies are wanted).
    """
    if track and components is None:
        components = range(len(cols))
    keep = set(components) if track else set()
    basis, reps, lts = [], [], []
    for idx, c in enumerate(cols):
        if not c:
            continue
        pos, m, lc = vec_lt(ring, c)
        basis.append(vec_scale(c, 1 / lc))
        lts.append((pos, m, Fraction(1)))
        if track:
            reps.append({idx: mp_const(ring, Fraction(1) / lc)}
                        if idx in keep else {})
        else:
            reps.append(None)

    def combine(i, j, qi, qj, quots):
        rep = _rep_sub(ring, _rep_mul(reps[i], {qi: Fraction(1)}),
                       _rep_mul(reps[j], {qj: Fraction(1)}))
        for k, qk in enumerate(quots):
            if qk:
                rep = _rep_sub(ring, rep, _rep_mul(reps[k], qk))
        return rep

    heap = []
    for j in range(len(basis)):
        for i in range(j):
            if lts[i][0] == lts[j][0]:
                lcm = mono_lcm(lts[i][1], lts[j][1])
                heapq.heappush(heap, (mono_key(ring, lcm), lts[i][0], i, j))
    while heap:
        _, _, i, j = heapq.heappop(heap)
        lcm = mono_lcm(lts[i][1], lts[j][1])
        if _chain_skip(lts, lts[i][0], i, j, lcm):
            continue
        sp, qi, qj = _spair(ring, basis[i], basis[j], lts[i], lts[j])
        if track:
            rem, quots = vec_reduce(ring, sp, basis, track=True, lts=lts)
        else:
            rem = vec_reduce(ring, sp, basis, lts=lts)
        if not rem:
            continue
        pos, m, lc = vec_lt(ring, rem)
        basis.append(vec_scale(rem, 1 / lc))
        lts.append((pos, m, Fraction(1)))
        reps.append(_rep_scale(combine(i, j, qi, qj, quots), 1 / lc)
                    if track else None)
        new = len(basis) - 1
        for k in range(new):
            if lts[k][0] == pos:
                lcm = mono_lcm(lts[k][1], m)
                heapq.heappush(heap, (mono_key(ring, lcm), pos, k, new))

    syzygies = []
    if track or audit:
        for j in range(len(basis)):
            for i in range(j):
                if lts[i][0] != lts[j][0]:
                    continue
                lcm = mono_lcm(lts[i][1], lts[j][1])
                if _chain_skip(lts, lts[i][0], i, j, lcm):
                    continue
                sp, qi, qj = _spair(ring, basis[i], basis[j], lts[i], lts[j])
                if track:
                    rem, quots = vec_reduce(ring, sp, basis, track=True,
                                            lts=lts)
                else:
                    rem = vec_reduce(ring, sp, basis, lts=lts)
                assert not rem, "S-polynomial audit failed"
                if track:
                    rep = combine(i, j, qi, qj, quots)
                    if any(rep.values()):
                        syzygies.append(rep)
    return basis, reps, syzygies


def _rep_mul(rep, poly):
    return {idx: mp_mul(p, poly) for idx, p in rep.items()}


def _rep_scale(rep, c):
    return {idx: mp_scale(p, c) for idx, p in rep.items()}


def _rep_neg(rep):
    return _rep_scale(rep, -1)


def _rep_sub(ring, a, b):
    out = {idx: dict(p) for idx, p in a.items()}
    for idx, p in b.items():
        s = mp_sub(out.get(idx, {}), p)
        if s:
            out[idx] = s
        else:
            out.pop(idx, None)
    return out


def module_member(ring, v, gb):
    return not vec_reduce(ring, v, gb)


def module_syzygies(ring, cols, components=None):
    """Generators of the syzygy module of the given columns.

    With components set, only those coordinates of the syzygies are kept
    (their span still generates the projection of the syzygy module).
    """
    cols = list(cols)
    if components is None:
        components = range(len(cols))
    keep = set(components)
    gb, reps, syzygies = module_buchberger(ring, cols, track=True,
                                           components=keep)
    out = [s for s in syzygies if any(s.values())]
    for i, c in enumerate(cols):
        if not c:
            if i in keep:
                out.append({i: mp_const(ring, 1)})
            continue
        rem, quots = vec_reduce(ring, c, gb, track=True)
        assert not rem, "generator failed to reduce against its own basis"
        sig = {i: mp_const(ring, 1)} if i in keep else {}
        for k, qk in enumerate(quots):
            if qk:
                sig = _rep_sub(ring, sig, _rep_mul(reps[k], qk))
        if any(sig.values()):
            out.append(sig)
    return out


def ideal_gb(ring, polys, audit=True):
    cols = [{0: p} for p in polys if p]
    gb, _, _ = module_buchberger(ring, cols, audit=audit)
    return [g[0] for g in gb]


def ideal_member(ring, p, gb):
    return not vec_reduce(ring, {0: p}, [{0: g} for g in gb])


# ---- case descriptors and chart equations --------------------------------


@dataclass(frozen=True)
class CaseSpec:
    """A length-2 computation: two separate support points, or one doubled.

    points holds (a, b, l, w) per support point — local equation x^a y^b,
    x-weight −l, y-weight w.  For punctual cases chart "U1" is the
    neighbourhood of the broken-pair ideal and "U2" of the fat-point ideal.
    """

    kind: str
    points: tuple
    chart: str = ""
    e: int = 0

    def __post_init__(self):
        assert self.kind in ("separated", "punctual")
        n = {"separated": 2, "punctual": 1}[self.kind]
        assert len(self.points) == n, "wrong number of support points"
        for (a, b, l, w) in self.points:
            assert a >= 0 and b >= 1 and l >= 1 and w >= 1, "weights out of range"
            assert -a * l + b * w == self.e, "weight balance violated"
        if self.kind == "punctual":
            assert self.chart in ("U1", "U2"), "chart must be U1 or U2"
        else:
            assert self.chart == ""


def chart_ring(spec):
    """Chart coordinate ring and the indices of its positive-weight variables."""
    if spec.kind == "separated":
        (a1, b1, l1, w1), (a2, b2, l2, w2) = spec.points
        ring = ring_make(("y1", "y2", "x1", "x2"), (w1, w2, -l1, -l2),
                         ((0, 1), (2, 3)))
        return ring, (0, 1)
    a, b, l, w = spec.points[0]
    if spec.chart == "U2":
        ring = ring_make(("t", "xi", "s", "u0"), (w, w + l, -l, -2 * l),
                         ((0, 1), (2, 3)))
    else:
        ring = ring_make(("t", "w0", "s", "eta"), (w, 2 * w, -l, -l - w),
                         ((0, 1), (2, 3)))
    return ring, (0, 1)


def build_theta_ideal(spec):
    """The two chart equations cutting out the length-2 locus.

    Separated support gives them directly.  Punctual support is expressed in
    symmetrized coordinates x₁=(s+ε)/2, x₂=(s−ε)/2, y₁=(t+δ)/2, y₂=(t−δ)/2 and
    the even combinations ε², εδ, δ² are rewritten in the blowup chart; any odd
    power of ε or δ surviving would flag a transcription bug.
    """
    ring, _ = chart_ring(spec)
    if spec.kind == "separated":
        (a1, b1, _, _), (a2, b2, _, _) = spec.points
        m1 = mp_mul(mp_var(ring, "x1", a1), mp_var(ring, "y1", b1))
        m2 = mp_mul(mp_var(ring, "x2", a2), mp_var(ring, "y2", b2))
        f = mp_add(m1, m2)
        g = mp_mul(m1, m2)
    else:
        a, b, _, _ = spec.points[0]
        aux = ring_make(("S", "E", "T", "D"), (0, 0, 0, 0))
        half = Fraction(1, 2)
        x1 = mp_add(mp_var(aux, "S", coeff=half), mp_var(aux, "E", coeff=half))
        x2 = mp_sub(mp_var(aux, "S", coeff=half), mp_var(aux, "E", coeff=half))
        y1 = mp_add(mp_var(aux, "T", coeff=half), mp_var(aux, "D", coeff=half))
        y2 = mp_sub(mp_var(aux, "T", coeff=half), mp_var(aux, "D", coeff=half))
        h1 = mp_add(mp_mul(mp_pow(aux, x1, a), mp_pow(aux, y1, b)),
                    mp_mul(mp_pow(aux, x2, a), mp_pow(aux, y2, b)))
        h2 = mp_mul(mp_pow(aux, mp_mul(x1, x2), a), mp_pow(aux, mp_mul(y1, y2), b))
        f = _to_chart(ring, spec.chart, h1)
        g = _to_chart(ring, spec.chart, h2)
    f, g = mp_normalize(ring, f), mp_normalize(ring, g)
    assert mp_weight(ring, f) is not None and mp_weight(ring, g) is not None
    return f, g


def _to_chart(ring, chart, p):
    out = {}
    for (i_s, i_e, i_t, i_d), c in p.items():
        if (i_e + i_d) % 2:
            raise ValueError("odd difference-variable power: not a symmetric function")
        half = (i_e + i_d) // 2
        if chart == "U2":
            mono = (i_t, i_d, i_s, half)      # (t, xi, s, u0)
        else:
            mono = (i_t, half, i_s, i_e)      # (t, w0, s, eta)
        out[mono] = out.get(mono, 0) + c
        if not out[mono]:
            del out[mono]
    return out


# ---- lowest forms of the chart ideal -------------------------------------


def initial_form_ideal(ring, f, g, pvars):
    """Generators of the ideal of lowest positive-variable-degree forms of (f, g).

    Each generator is rescaled by an auxiliary variable T tracking the defect
    from its lowest form; saturating by T (one Buchberger run after adjoining
    U with UT = 1 and eliminating U) recovers lowest forms of all
    combinations, and T = 0 reads them off.  The output generators are
    homogeneous in the positive variables.
    """
    if all(len(mp_phomog_parts(p, pvars)) == 1 for p in (f, g)):
        raw = [f, g]          # already their own lowest forms
    else:
        n = len(ring.names)
        # U_ must head its own block so U_-free basis elements cut out the
        # elimination ideal; everything else (T_ included) is happier in one
        # graded block — towers of blocks blow the basis up several-fold.
        big = ring_make(("U_",) + ring.names + ("T_",),
                        (0,) + ring.weights + (0,),
                        ((0,), tuple(range(1, n + 2))))

        def rees(p):
            out = {}
            dmin = min(mp_pdeg(m, pvars) for m in p)
            for m, c in p.items():
                out[(0,) + m + (mp_pdeg(m, pvars) - dmin,)] = c
            return out

        rel = mp_sub(mp_const(big, 1), mp_mul(mp_var(big, "U_"),
                                              mp_var(big, "T_")))
        gb = ideal_gb(big, [rees(f), rees(g), rel])
        raw = []
        for p in gb:
            if any(m[0] for m in p):
                continue
            q = {m[1:n + 1]: c for m, c in p.items() if m[n + 1] == 0}
            if q:
                raw.append(q)

    forms = {}
    for p in raw:
        for part in mp_phomog_parts(p, pvars).values():
            part = mp_normalize(ring, part)
            key = tuple(sorted(part.items()))
            forms[key] = part
    out = sorted(forms.values(), key=lambda p: (min(mp_pdeg(m, pvars) for m in p),
                                                mono_key(ring, mp_lt(ring, p)[0])))
    # Forward prune in ascending degree: a homogeneous form is only ever
    # generated by forms of its own degree or lower, so membership against
    # the kept-so-far ideal is enough and keeps the basis recomputation small.
    pruned, gb = [], []
    for p in out:
        if gb and ideal_member(ring, p, gb):
            continue
        pruned.append(p)
        gb = ideal_gb(ring, pruned, audit=False)
    for p in pruned:
        assert min(mp_pdeg(m, pvars) for m in p) >= 1
        assert mp_weight(ring, p) is not None
    return pruned


# ---- graded pieces as modules over the coefficient ring -------------------


@dataclass
class GradedModule:
    """Free cover R^G with torus-weighted generators and relation columns over R."""

    ring: ChartRing
    weights: tuple
    relations: list


def coefficient_ring(ring, pvars):
    rvars = [i for i in range(len(ring.names)) if i not in pvars]
    return ring_make(tuple(ring.names[i] for i in rvars),
                     tuple(ring.weights[i] for i in rvars)), tuple(rvars)


def graded_piece(ring, pvars, in_forms, d):
    """Degree-d piece of the associated graded module, presented over R."""
    rring, rvars = coefficient_ring(ring, pvars)
    basis = sorted(
        (m for m in _pvar_monos(ring, pvars, d)),
        key=lambda m: mono_key(ring, m), reverse=True)
    index = {m: i for i, m in enumerate(basis)}
    weights = tuple(mono_weight(ring, m) for m in basis)
    relations = []
    for q in in_forms:
        dq = min(mp_pdeg(m, pvars) for m in q)
        if dq > d:
            continue
        for nu in _pvar_monos(ring, pvars, d - dq):
            col = {}
            for m, c in mp_mono_mul(q, nu, 1).items():
                pm = tuple(m[i] if i in pvars else 0 for i in range(len(m)))
                rm = tuple(m[i] for i in rvars)
                pos = index[pm]
                entry = col.setdefault(pos, {})
                entry[rm] = entry.get(rm, 0) + c
                if not entry[rm]:
                    del entry[rm]
            col = {p: e for p, e in col.items() if e}
            if col:
                assert vec_weight(rring, col, weights) is not None
                relations.append(col)
    return GradedModule(rring, weights, relations)


def _pvar_monos(ring, pvars, d):
    n = len(ring.names)
    if len(pvars) == 1:
        e = [0] * n
        e[pvars[0]] = d
        yield tuple(e)
        return
    i, j = pvars
    for k in range(d + 1):
        e = [0] * n
        e[i], e[j] = k, d - k
        yield tuple(e)


# ---- torsion-free quotient ------------------------------------------------

_SPEC_RNG = random.Random(10007)
SPECIALIZATION_POINTS = tuple(
    tuple(Fraction(_SPEC_RNG.randint(2, 19), _SPEC_RNG.randint(23, 47))
          for _ in range(2))
    for _ in range(10))


def _bareiss_rank(ring, rows):
    """Fraction-free rank of a polynomial matrix; also returns the pivot minor."""
    m = [[dict(e) for e in row] for row in rows]
    nr, nc = len(m), len(m[0]) if m else 0
    prev = mp_const(ring, 1)
    rank = 0
    minor = mp_const(ring, 1)
    for step in range(min(nr, nc)):
        piv = None
        for i in range(step, nr):
            for j in range(step, nc):
                if m[i][j]:
                    size = (len(m[i][j]), sum(sum(mm) for mm in m[i][j]))
                    if piv is None or size < piv[0]:
                        piv = (size, i, j)
        if piv is None:
            break
        _, pi, pj = piv
        m[step], m[pi] = m[pi], m[step]
        for row in m:
            row[step], row[pj] = row[pj], row[step]
        pivot = m[step][step]
        for i in range(step + 1, nr):
            for j in range(step + 1, nc):
                num = mp_sub(mp_mul(m[i][j], pivot), mp_mul(m[i][step], m[step][j]))
                m[i][j] = mp_divexact(ring, num, prev) if num else {}
            m[i][step] = {}
        prev = pivot
        minor = pivot
        rank += 1
    return rank, minor


def _rank_at_point(rows, point):
    m = [[mp_eval(e, point) for e in row] for row in rows]
    nr, nc = len(m), len(m[0]) if m else 0
    rank = 0
    row = 0
    for col in range(nc):
        piv = next((i for i in range(row, nr) if m[i][col]), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        for i in range(row + 1, nr):
            if m[i][col]:
                c = m[i][col] * inv
                for j in range(col, nc):
                    m[i][j] -= c * m[row][j]
        row += 1
        rank += 1
        if row == nr:
            break
    return rank


def _certified_rank(ring, mod, budget=6):
    rows = [[col.get(i, {}) for col in mod.relations]
            for i in range(len(mod.weights))]
    rank, minor = _bareiss_rank(ring, rows)
    confirmed, skipped = 0, 0
    for point in SPECIALIZATION_POINTS:
        point = point[:len(ring.names)]
        r = _rank_at_point(rows, point)
        if r > rank:
            raise RuntimeError("specialized rank exceeds symbolic rank")
        if r == rank:
            confirmed += 1
            if confirmed == 2:
                return rank, minor
        else:
            skipped += 1
            if skipped > budget:
                break
    raise RuntimeError("rank certification failed within retry budget")


def torsion_free_quotient(mod):
    """Quotient of R^G/N by its torsion: saturate N at a maximal nonzero minor."""
    cols = [c for c in mod.relations if c]
    if not cols:
        return GradedModule(mod.ring, mod.weights, [])
    mod = GradedModule(mod.ring, mod.weights, cols)
    rank, minor = _certified_rank(mod.ring, mod)
    if rank == len(mod.weights):
        return GradedModule(mod.ring, (), [])
    current = cols
    for _ in range(len(mod.weights) + 2):
        gb, _, _ = module_buchberger(mod.ring, current, audit=False)
        ext = _module_colon(mod.ring, current, len(mod.weights), minor)
        if all(module_member(mod.ring, v, gb) for v in ext):
            return GradedModule(mod.ring, mod.weights, gb)
        current = [v for v in ext if v]
    raise RuntimeError("torsion saturation did not stabilize")


def _module_colon(ring, cols, ngens, f):
    """Generators of (N : f) for the column module N inside R^ngens."""
    cols = list(cols)
    fcols = [{i: dict(f)} for i in range(ngens)]
    syz = module_syzygies(ring, cols + fcols,
                          components=set(range(len(cols), len(cols) + ngens)))
    out = []
    for s in syz:
        v = {}
        for idx, p in s.items():
            if idx >= len(cols) and p:
                v[idx - len(cols)] = p
        if v:
            out.append(v)
    return out


# ---- graded K-classes ------------------------------------------------------


def _column_weight(ring, col, weights):
    return vec_weight(ring, col, weights)


def minimal_presentation(mod):
    """Remove generators hit by unit relation entries, then redundant relations."""
    ring = mod.ring
    zero = (0,) * len(ring.names)
    weights = dict(enumerate(mod.weights))
    cols = [dict(c) for c in mod.relations if c]
    while True:
        pivot = None
        for ci, col in enumerate(cols):
            for pos, p in col.items():
                if set(p) == {zero}:
                    pivot = (ci, pos, p[zero])
                    break
            if pivot:
                break
        if not pivot:
            break
        ci, pos, unit = pivot
        col = cols.pop(ci)
        base = {q: mp_scale(pp, Fraction(-1) / unit)
                for q, pp in col.items() if q != pos}
        for other in cols:
            if pos not in other:
                continue
            coeff = other.pop(pos)
            for q, pp in base.items():
                s = mp_add(other.get(q, {}), mp_mul(coeff, pp))
                if s:
                    other[q] = s
                else:
                    other.pop(q, None)
        del weights[pos]
        cols = [c for c in cols if c]
    remap = {pos: i for i, pos in enumerate(sorted(weights))}
    new_weights = tuple(weights[pos] for pos in sorted(weights))
    cols = [{remap[p]: q for p, q in c.items()} for c in cols]
    cols = _prune_redundant(ring, cols)
    return GradedModule(ring, new_weights, cols)


def _prune_redundant(ring, vecs):
    vecs = [v for v in vecs if v]
    changed = True
    while changed:
        changed = False
        for i in range(len(vecs)):
            rest = vecs[:i] + vecs[i + 1:]
            if not rest:
                break
            gb, _, _ = module_buchberger(ring, rest, audit=False)
            if module_member(ring, vecs[i], gb):
                vecs = rest
                changed = True
                break
    return vecs


def graded_class(mod):
    """K-class from a length ≤ 2 graded free resolution; also reports freeness."""
    ring = mod.ring
    mp = minimal_presentation(mod)
    cls = {}
    for w in mp.weights:
        cls[w] = cls.get(w, 0) + 1
    if not mp.relations:
        return {k: v for k, v in cls.items() if v}, True
    zero = (0,) * len(ring.names)
    for col in mp.relations:
        w = _column_weight(ring, col, mp.weights)
        cls[w] = cls.get(w, 0) - 1
    colweights = tuple(_column_weight(ring, c, mp.weights) for c in mp.relations)
    syz = _prune_redundant(ring, module_syzygies(ring, mp.relations))
    for s in syz:
        for p in s.values():
            assert zero not in p, "non-minimal relations escaped pruning"
        w = vec_weight(ring, s, colweights)
        cls[w] = cls.get(w, 0) + 1
    if syz:
        deeper = _prune_redundant(ring, module_syzygies(ring, syz))
        if deeper:
            raise RuntimeError("resolution longer than two steps: grading bug")
    return {k: v for k, v in cls.items() if v}, False


# ---- dense replay of graded dimension counts -------------------------------


def _monos_of_weight(ring, value):
    """All monomials of the (negatively weighted) coefficient ring of a weight."""
    ws = ring.weights
    out = []
    if len(ws) == 1:
        if value == 0:
            out.append((0,))
        elif value % ws[0] == 0 and value // ws[0] >= 0:
            out.append((value // ws[0],))
        return out
    for e1 in range(0, abs(value) // abs(ws[0]) + 1 if value else 1):
        rem = value - e1 * ws[0]
        if rem == 0:
            out.append((e1, 0))
        elif rem % ws[1] == 0 and rem // ws[1] > 0:
            out.append((e1, rem // ws[1]))
    return out


def module_hilbert_gb(mod, weight_values):
    """Per-weight dimensions of R^G/N via leading-term counting."""
    ring = mod.ring
    gb, _, _ = module_buchberger(ring, mod.relations, audit=False) \
        if mod.relations else ([], None, None)
    lts = {}
    for g in gb:
        pos, m, _ = vec_lt(ring, g)
        lts.setdefault(pos, []).append(m)
    counts = {}
    for chi in weight_values:
        n = 0
        for i, w in enumerate(mod.weights):
            for m in _monos_of_weight(ring, chi - w):
                if not any(mono_divides(lm, m) for lm in lts.get(i, [])):
                    n += 1
        counts[chi] = n
    return counts


def module_hilbert_dense(mod, weight_values):
    """Per-weight dimensions of R^G/N via dense row reduction over Q."""
    ring = mod.ring
    counts = {}
    colweights = [_column_weight(ring, c, mod.weights) for c in mod.relations]
    for chi in weight_values:
        basis = []
        for i, w in enumerate(mod.weights):
            basis.extend((m, i) for m in _monos_of_weight(ring, chi - w))
        index = {b: k for k, b in enumerate(basis)}
        rows = []
        for col, cw in zip(mod.relations, colweights):
            for nu in _monos_of_weight(ring, chi - cw):
                row = [Fraction(0)] * len(basis)
                for pos, poly in col.items():
                    for m, c in poly.items():
                        row[index[(mono_mul(m, nu), pos)]] += c
                rows.append(row)
        counts[chi] = len(basis) - _dense_rank(rows)
    return counts


def _dense_rank(rows):
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    lead = 0
    for col in range(ncols):
        piv = next((i for i in range(lead, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[lead], rows[piv] = rows[piv], rows[lead]
        inv = 1 / rows[lead][col]
        for i in range(len(rows)):
            if i != lead and rows[i][col]:
                c = rows[i][col] * inv
                for j in range(col, ncols):
                    rows[i][j] -= c * rows[lead][j]
        lead += 1
        rank += 1
        if lead == len(rows):
            break
    return rank


def oracle_check(mod, degree_cap=12):
    """Replay graded dimension counts densely on all slices within the degree cap."""
    ring = mod.ring
    if not mod.weights:
        return True
    values = set()
    for w in mod.weights:
        for m in itertools.product(range(degree_cap + 1), repeat=len(ring.names)):
            if sum(m) <= degree_cap:
                values.add(w + mono_weight(ring, m))
    ok = []
    for chi in sorted(values, reverse=True):
        if any(any(sum(m) > degree_cap for m in _monos_of_weight(ring, chi - w))
               for w in mod.weights):
            continue
        ok.append(chi)
    gbc = module_hilbert_gb(mod, ok)
    dnc = module_hilbert_dense(mod, ok)
    return gbc == dnc


# ---- the multiplicity pipeline ---------------------------------------------


@dataclass
class Hilb2Report:
    case: CaseSpec
    polynomial: dict
    perDegreeClasses: list
    freenessFlags: list
    oracleChecked: bool


def hilb2_report(spec, oracle=False, oracle_cap=12):
    """Equivariant multiplicity of the chart's length-2 ideal, degree by degree."""
    ring, pvars = chart_ring(spec)
    f, g = build_theta_ideal(spec)
    forms = initial_form_ideal(ring, f, g, pvars)
    bsum = sum(p[1] for p in spec.points)
    cap = 4 * (bsum + 2) if spec.kind == "separated" else 4 * (2 * spec.points[0][1] + 2)
    classes, flags = [], []
    oracle_ok = True
    zeros = 0
    d = 0
    while True:
        piece = graded_piece(ring, pvars, forms, d)
        tf = torsion_free_quotient(piece)
        cls, free = graded_class(tf)
        if oracle:
            oracle_ok = oracle_ok and oracle_check(tf, oracle_cap)
        classes.append(cls)
        flags.append(free)
        zeros = zeros + 1 if not cls else 0
        if zeros == 2:
            break
        d += 1
        if d > cap:
            raise RuntimeError("degree cap reached without termination")
    total = {}
    for cls in classes:
        total = poly_add(total, cls)
    total = {k: int(v) for k, v in total.items() if v}
    assert all(Fraction(v).denominator == 1 for v in total.values())
    assert total.get(0) == 1, "constant term must be 1"
    return Hilb2Report(spec, total, classes, flags, oracle_ok if oracle else False)


def equivariant_mult_hilb2(spec):
    return hilb2_report(spec).polynomial


def equivariant_mult_point(a, b, l, w):
    """Equivariant multiplicity of a single fixed point with local equation x^a y^b."""
    assert a >= 0 and b >= 1 and l >= 1 and w >= 1
    ring = ring_make(("y", "x"), (w, -l), ((0,), (1,)))
    pvars = (0,)
    form = mp_mul(mp_var(ring, "x", a), mp_var(ring, "y", b))
    total = {}
    zeros = 0
    d = 0
    while zeros < 2 and d <= 4 * (b + 2):
        piece = graded_piece(ring, pvars, [form], d)
        cls, _ = graded_class(torsion_free_quotient(piece))
        total = poly_add(total, cls)
        zeros = zeros + 1 if not cls else 0
        d += 1
    return {k: int(v) for k, v in total.items() if v}


# ---- JSON ------------------------------------------------------------------


def case_json(spec):
    out = {"kind": spec.kind,
           "points": [{"a": a, "b": b, "l": l, "w": w}
                      for (a, b, l, w) in spec.points],
           "symplecticWeight": spec.e}
    if spec.chart:
        out["chart"] = spec.chart
    return out


def case_from_json(obj):
    pts = tuple((p["a"], p["b"], p["l"], p["w"]) for p in obj["points"])
    return CaseSpec(obj["kind"], pts, obj.get("chart", ""),
                    obj["symplecticWeight"])


def report_json(rep):
    return {
        "case": case_json(rep.case),
        "polynomial": {str(k): v for k, v in sorted(rep.polynomial.items())},
        "perDegreeClasses": [{str(k): int(v) for k, v in sorted(c.items())}
                             for c in rep.perDegreeClasses],
        "freenessFlags": list(rep.freenessFlags),
        "oracleChecked": rep.oracleChecked,
    }


# ---- tests ------------------------------------------------------------------


def _qi(n, a):
    return quantum_int(n, a)


def test():
    # chart equations: symmetrization against the worked cases
    u2 = lambda a, b, l, w, e: CaseSpec("punctual", ((a, b, l, w),), "U2", e)
    u1 = lambda a, b, l, w, e: CaseSpec("punctual", ((a, b, l, w),), "U1", e)
    ring, _ = chart_ring(u2(0, 1, 1, 2, 2))
    f, g = build_theta_ideal(u2(0, 1, 1, 2, 2))
    assert f == mp_var(ring, "t")
    assert g == mp_sub(mp_var(ring, "t", 2), mp_mul(mp_var(ring, "u0"),
                                                    mp_var(ring, "xi", 2)))
    f, _ = build_theta_ideal(u2(0, 2, 1, 2, 4))
    assert f == mp_add(mp_var(ring, "t", 2), mp_mul(mp_var(ring, "u0"),
                                                    mp_var(ring, "xi", 2)))
    ring1, _ = chart_ring(u1(1, 2, 1, 2, 3))
    f, _ = build_theta_ideal(u1(1, 2, 1, 2, 3))
    sw0 = mp_mul(mp_var(ring1, "s"), mp_var(ring1, "w0"))
    st2 = mp_mul(mp_var(ring1, "s"), mp_var(ring1, "t", 2))
    etw = mp_mul(mp_var(ring1, "eta"), mp_mul(mp_var(ring1, "w0"),
                                              mp_var(ring1, "t", 1)))
    assert f == mp_add(mp_add(sw0, st2), mp_scale(etw, 2))

    # lowest forms for the mixed-support case: degree-1 form s·w0, and the
    # degree-4 combination that kills t^4
    spec = u1(1, 2, 1, 2, 3)
    ring, pvars = chart_ring(spec)
    f, g = build_theta_ideal(spec)
    forms = initial_form_ideal(ring, f, g, pvars)
    degs = sorted(min(mp_pdeg(m, pvars) for m in p) for p in forms)
    assert degs[0] == 1
    piece = graded_piece(ring, pvars, forms, 3)
    cls3, _ = graded_class(torsion_free_quotient(piece))
    assert cls3 == {6: 1}
    piece = graded_piece(ring, pvars, forms, 4)
    cls4, _ = graded_class(torsion_free_quotient(piece))
    assert cls4 == {}

    # single-point multiplicities
    assert equivariant_mult_point(0, 1, 1, 2) == {0: 1}
    assert equivariant_mult_point(0, 2, 1, 2) == _qi(2, 2)
    assert equivariant_mult_point(1, 2, 1, 2) == _qi(2, 2)
    assert equivariant_mult_point(4, 5, 1, 2) == _qi(5, 2)

    # doubled point, equation y: broken pair is trivial, fat point is [2]
    assert equivariant_mult_hilb2(u1(0, 1, 1, 2, 2)) == {0: 1}
    assert equivariant_mult_hilb2(u2(0, 1, 1, 2, 2)) == _qi(2, 3)
    assert equivariant_mult_hilb2(u2(0, 1, 1, 6, 6)) == _qi(2, 7)

    # equation y^2
    assert equivariant_mult_hilb2(u1(0, 2, 1, 2, 4)) == _qi(4, 2)
    assert equivariant_mult_hilb2(u2(0, 2, 1, 2, 4)) == poly_mul(_qi(2, 2), _qi(4, 3))

    # equation x y^2 at the smallest weights, both charts
    rep = hilb2_report(u1(1, 2, 1, 2, 3), oracle=True)
    assert rep.polynomial == _qi(4, 2)
    assert rep.oracleChecked and all(rep.freenessFlags)
    rep = hilb2_report(u2(1, 2, 1, 2, 3), oracle=True)
    expect = poly_add(poly_add(_qi(5, 3), {2: 1, 5: 1, 8: 1}),
                      poly_sub({4: 1, 7: 1}, {3: 1, 5: 1}))
    assert rep.polynomial == expect
    assert rep.oracleChecked
    assert min(rep.polynomial.values()) >= 0

    # equation y^3 both charts against the closed forms
    assert equivariant_mult_hilb2(u1(0, 3, 1, 2, 6)) == poly_mul(_qi(3, 2), _qi(3, 4))
    y3 = poly_add(poly_mul(_qi(3, 2), _qi(6, 3)),
                  poly_mul(poly_sub({18: 1}, {16: 1}), _qi(2, 3)))
    assert equivariant_mult_hilb2(u2(0, 3, 1, 2, 6)) == y3

    # separated pairs: equal and distinct lowest y-degrees
    sep = CaseSpec("separated", ((0, 1, 1, 2), (0, 1, 1, 2)), "", 2)
    assert equivariant_mult_hilb2(sep) == {0: 1, 2: 1}
    sep = CaseSpec("separated", ((0, 1, 3, 4), (0, 2, 1, 2)), "", 4)
    assert equivariant_mult_hilb2(sep) == _qi(4, 2)
    sep = CaseSpec("separated", ((2, 3, 1, 2), (0, 1, 3, 4)), "", 4)
    assert equivariant_mult_hilb2(sep) == poly_mul(_qi(1, 4), _qi(6, 2))

    # JSON round trip
    spec = u2(1, 2, 1, 2, 3)
    assert case_from_json(case_json(spec)) == spec
    rj = report_json(hilb2_report(spec))
    assert rj["polynomial"]["0"] == 1 and rj["oracleChecked"] is False

    print("ok")


if __name__ == "__main__":
    test()
