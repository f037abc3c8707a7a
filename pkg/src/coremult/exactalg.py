"""Exact scalar and polynomial arithmetic.

Sparse Laurent polynomials in one formal variable t are plain dicts mapping
integer exponent -> nonzero coefficient (int or Fraction).  Products of
quantum numbers are kept in factored form (QuantumProduct) so that
evaluation at t=1 can cancel before expanding.  No floats anywhere.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod


# ---------------------------------------------------------------------------
# rationals

def rat_to_str(x):
    """Serialize a rational as "p/q" (q omitted when 1)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def rat_from_str(s):
    return Fraction(s)


# ---------------------------------------------------------------------------
# Laurent polynomials as {exponent: coefficient}

def _norm(p):
    """Drop zero coefficients, demote integral Fractions to int."""
    out = {}
    for e, c in p.items():
        if isinstance(c, Fraction) and c.denominator == 1:
            c = c.numerator
        if c != 0:
            out[e] = c
    return out


def poly_add(p, q):
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
    return _norm(out)


def poly_neg(p):
    return {e: -c for e, c in p.items()}


def poly_sub(p, q):
    return poly_add(p, poly_neg(q))


def poly_scale(p, c):
    if c == 0:
        return {}
    return _norm({e: c * v for e, v in p.items()})


def poly_mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return _norm(out)


def poly_eval(p, x):
    """Evaluate at an exact point x (Fraction or int)."""
    x = Fraction(x)
    return sum((Fraction(c) * x ** e for e, c in p.items()), Fraction(0))


def poly_subst_power(p, a):
    """t -> t^a."""
    assert a != 0
    return {e * a: c for e, c in p.items()}


def poly_degree(p):
    return max(p) if p else None


def poly_valuation(p):
    return min(p) if p else None


def poly_is_palindromic(p):
    """coeff(lo + hi - k) == coeff(k) for all k."""
    if not p:
        return True
    lo, hi = min(p), max(p)
    return all(p.get(lo + hi - e) == c for e, c in p.items())


def poly_divmod(p, d):
    """Sparse division p = d*quot + rem.  Laurent inputs allowed: both are
    shifted to valuation 0, divided as ordinary polynomials, shifted back."""
    if not d:
        raise ZeroDivisionError("division by zero polynomial")
    if not p:
        return {}, {}
    vp, vd = poly_valuation(p), poly_valuation(d)
    big = {e - vp: c for e, c in p.items()}
    div = {e - vd: c for e, c in d.items()}
    deg = poly_degree(div)
    lc = div[deg]
    quot = {}
    while big and poly_degree(big) >= deg:
        e = poly_degree(big)
        c = Fraction(big[e]) / lc
        quot[e - deg] = c
        for de, dc in div.items():
            big[e - deg + de] = big.get(e - deg + de, 0) - c * dc
        big = _norm(big)
    quot = _norm({e + vp - vd: c for e, c in quot.items()})
    rem = _norm({e + vp: c for e, c in big.items()})
    return quot, rem


def poly_str(p, var="t"):
    if not p:
        return "0"
    bits = []
    for e in sorted(p):
        c = p[e]
        if e == 0:
            bits.append(str(c))
        else:
            pw = var if e == 1 else "%s^%d" % (var, e)
            if c == 1:
                bits.append(pw)
            elif c == -1:
                bits.append("-" + pw)
            else:
                bits.append("%s*%s" % (c, pw))
    s = "+".join(bits).replace("+-", "-")
    return s


# ---------------------------------------------------------------------------
# quantum products: c * t^w * prod(1 - t^n_i) / prod(1 - t^d_j)

@dataclass(frozen=True)
class QuantumProduct:
    coeff: int = 1
    shift: int = 0
    num: tuple = ()
    den: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(sorted(self.num)))
        object.__setattr__(self, "den", tuple(sorted(self.den)))
        assert all(n >= 1 for n in self.num)
        assert all(d >= 1 for d in self.den)


@dataclass(frozen=True)
class NotPolynomial:
    """Witness that a QuantumProduct is not a Laurent polynomial."""
    remainder: dict
    divisor_exponent: int


class Pole:
    def __repr__(self):
        return "Pole"

    def __eq__(self, other):
        return isinstance(other, Pole)

    def __hash__(self):
        return hash("Pole")


POLE = Pole()


def qp_mul(a, b):
    return QuantumProduct(a.coeff * b.coeff, a.shift + b.shift,
                          a.num + b.num, a.den + b.den)


def qp_cancel(q):
    """Remove factors common to numerator and denominator multisets."""
    num = list(q.num)
    den = []
    for d in q.den:
        if d in num:
            num.remove(d)
        else:
            den.append(d)
    return QuantumProduct(q.coeff, q.shift, tuple(num), tuple(den))


def qp_subst_power(q, a):
    """t -> t^a on the factored form."""
    assert a >= 1
    return QuantumProduct(q.coeff, q.shift * a,
                          tuple(n * a for n in q.num),
                          tuple(d * a for d in q.den))


def qp_quantum_int(n, a=1):
    """[n]_{t^a} as a factored quotient (1-t^{na})/(1-t^a)."""
    assert n >= 1 and a >= 1
    return QuantumProduct(1, 0, (n * a,), (a,))


def qp_to_poly(q):
    """Expand a QuantumProduct; NotPolynomial (with the failing remainder)
    when some denominator factor does not divide out."""
    q = qp_cancel(q)
    p = {q.shift: q.coeff}
    for n in q.num:
        p = poly_mul(p, {0: 1, n: -1})
    for d in q.den:
        p, rem = poly_divmod(p, {0: 1, d: -1})
        if rem:
            return NotPolynomial(remainder=rem, divisor_exponent=d)
    return p


def qp_eval_at_one(q):
    """Cancellation-aware value at t=1: Rational, or POLE when the
    denominator wins."""
    q = qp_cancel(q)
    if len(q.num) > len(q.den):
        return Fraction(0)
    if len(q.num) < len(q.den):
        return POLE
    return Fraction(q.coeff) * Fraction(prod(q.num), prod(q.den))


def qp_str(q):
    head = "%d*t^%d" % (q.coeff, q.shift) if q.shift else str(q.coeff)
    ns = "".join("(1-t^%d)" % n for n in q.num)
    ds = "".join("(1-t^%d)" % d for d in q.den)
    s = head + ("*" + ns if ns else "")
    return s + ("/" + ds if ds else "")


# ---------------------------------------------------------------------------
# quantum integers / factorials / multinomials as polynomials

def quantum_int(n, a):
    """[n]_{t^a} = 1 + t^a + ... + t^{a(n-1)}.

    INPUT:  n >= 1, a >= 1
    OUTPUT: LaurentPoly dict
    """
    if n < 1 or a < 1:
        raise ValueError("quantum_int requires n >= 1 and a >= 1")
    return {i * a: 1 for i in range(n)}


def quantum_factorial(n, a=1):
    """[n]!_{t^a} = prod_{i=1..n} [i]_{t^a}; empty product for n = 0."""
    if n < 0 or a < 1:
        raise ValueError("quantum_factorial requires n >= 0 and a >= 1")
    p = {0: 1}
    for i in range(1, n + 1):
        p = poly_mul(p, quantum_int(i, a))
    return p


def quantum_multinomial(n, parts, a=1, pad=False):
    """[n choose parts]_{t^a} = [n]!_{t^a} / prod_i [parts_i]!_{t^a}.

    With pad=True a deficit n - sum(parts) is made up by implicit parts of
    size 1 (which do not change the value); otherwise sum(parts) must be n.
    """
    parts = [p for p in parts if p != 0]
    if any(p < 0 for p in parts):
        raise ValueError("parts must be nonnegative")
    s = sum(parts)
    if s != n and not (pad and s < n):
        raise ValueError("parts must sum to n (got %d for n=%d)" % (s, n))
    num = quantum_factorial(n, a)
    for p in parts:
        num, rem = poly_divmod(num, quantum_factorial(p, a))
        assert not rem  # q-multinomials are polynomials
    return num


def power_bracket(p, b):
    """p(t)^{(b)} := prod_{i=1..b} p(t^i); empty product for b = 0."""
    assert b >= 0
    out = {0: 1}
    for i in range(1, b + 1):
        out = poly_mul(out, poly_subst_power(p, i))
    return out


def qp_power_bracket(q, b):
    """Factored-form version of p(t)^{(b)}."""
    assert b >= 0
    out = QuantumProduct()
    for i in range(1, b + 1):
        out = qp_mul(out, qp_subst_power(q, i))
    return out


# ---------------------------------------------------------------------------
# generating series for fixed-component counts

SERIES_NMAX_CAP = 12


def series_expand_P(r, n_max):
    """Coefficients P_0(q),...,P_nMax(q) of
    prod_{m>=1} 1/((1-s^m q^m)^r (1-s^m q^{m+1})), exact in s up to s^nMax.

    INPUT:  r >= 0 isolated-point count, n_max <= 12
    OUTPUT: list of q-polynomials (dicts), index = s-exponent
    """
    if n_max < 0 or n_max > SERIES_NMAX_CAP:
        raise ValueError("n_max must lie in 0..%d" % SERIES_NMAX_CAP)
    if r < 0:
        raise ValueError("r must be nonnegative")
    # series as list of q-polys indexed by s-exponent, truncated at n_max
    series = [{0: 1}] + [{} for _ in range(n_max)]
    for m in range(1, n_max + 1):
        # expand 1/((1-s^m q^m)^r (1-s^m q^{m+1})) to order s^n_max
        factor = [{} for _ in range(n_max + 1)]
        kmax = n_max // m
        for k in range(kmax + 1):          # from the r-fold factor
            ck = comb(r - 1 + k, k) if r > 0 else (1 if k == 0 else 0)
            if ck == 0:
                continue
            for l in range(kmax - k + 1):  # from the single factor
                se = m * (k + l)
                qe = m * k + (m + 1) * l
                factor[se][qe] = factor[se].get(qe, 0) + ck
        new = [{} for _ in range(n_max + 1)]
        for i in range(n_max + 1):
            if not series[i]:
                continue
            for j in range(n_max + 1 - i):
                if factor[j]:
                    new[i + j] = poly_add(new[i + j],
                                          poly_mul(series[i], factor[j]))
        series = new
    return series


# ---------------------------------------------------------------------------
# sample-based comparison on the ray t > 1

DEFAULT_RAY_SAMPLES = (Fraction(3, 2), Fraction(2), Fraction(3))


@dataclass(frozen=True)
class RayComparison:
    verdict: str          # Less / Equal / LessOrEqualOnSamples / Mixed / ...
    samples: tuple        # (t, p(t), q(t)) triples
    leading: str          # which side dominates as t -> infinity


def _leading_side(p, q):
    d = poly_sub(q, p)
    if not d:
        return "equal"
    return "second" if d[poly_degree(d)] > 0 else "first"


def poly_compare_on_ray(p, q, samples=DEFAULT_RAY_SAMPLES):
    """Compare two polynomials on the ray t > 1 at finitely many samples
    plus leading-term behaviour.  Sample-based evidence, not a proof."""
    samples = tuple(samples)
    if not samples:
        raise ValueError("samples must be nonempty")
    assert all(Fraction(x) > 1 for x in samples)
    rows = tuple((Fraction(x), poly_eval(p, x), poly_eval(q, x))
                 for x in samples)
    signs = {(pv > qv) - (pv < qv) for _, pv, qv in rows}
    leading = _leading_side(p, q)
    if signs == {0}:
        verdict = "Equal" if p == q else "EqualOnSamples"
    elif signs <= {-1, 0}:
        if signs == {-1} and leading == "second":
            verdict = "Less"
        else:
            verdict = "LessOrEqualOnSamples"
    elif signs <= {0, 1}:
        if signs == {1} and leading == "first":
            verdict = "Greater"
        else:
            verdict = "GreaterOrEqualOnSamples"
    else:
        verdict = "Mixed"
    return RayComparison(verdict=verdict, samples=rows, leading=leading)


def test():
    assert quantum_int(3, 1) == {0: 1, 1: 1, 2: 1}
    assert quantum_int(1, 7) == {0: 1}
    assert quantum_int(2, 2) == {0: 1, 2: 1}
    assert quantum_multinomial(4, [2, 2]) == {0: 1, 1: 1, 2: 2, 3: 1, 4: 1}
    q = QuantumProduct(1, 0, (3,), (2,))
    assert isinstance(qp_to_poly(q), NotPolynomial)
    assert qp_eval_at_one(q) == Fraction(3, 2)
    assert series_expand_P(4, 1)[1] == {1: 4, 2: 1}
    print("exactalg ok")


if __name__ == "__main__":
    test()
