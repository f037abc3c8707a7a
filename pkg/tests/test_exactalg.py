"""Exact polynomial and quantum-product arithmetic."""

import random
from fractions import Fraction

import sympy

from coremult.exactalg import (
    NotPolynomial,
    QuantumProduct,
    SERIES_NMAX_CAP,
    poly_compare_on_ray,
    poly_divmod,
    poly_eval,
    poly_is_palindromic,
    poly_mul,
    poly_str,
    poly_subst_power,
    poly_valuation,
    power_bracket,
    qp_cancel,
    qp_eval_at_one,
    qp_mul,
    qp_to_poly,
    quantum_factorial,
    quantum_int,
    quantum_multinomial,
    rat_from_str,
    rat_to_str,
    series_expand_P,
)
from coremult.exactalg import test as embedded_test

_t = sympy.Symbol("t")


def _to_sympy(p):
    return sympy.Poly.from_dict({(k,): v for k, v in p.items()}, _t)


def _from_sympy(expr):
    poly = sympy.Poly(sympy.expand(expr), _t)
    return {k[0]: int(v) for k, v in poly.terms()}


def test_embedded():
    embedded_test()


def test_quantum_int_values():
    assert quantum_int(0, 1) == {}
    assert quantum_int(1, 5) == {0: 1}
    assert quantum_int(4, 1) == {0: 1, 1: 1, 2: 1, 3: 1}
    assert quantum_int(3, 2) == {0: 1, 2: 1, 4: 1}
    assert poly_eval(quantum_int(7, 3), 1) == 7


def test_quantum_multinomial_against_sympy():
    # independent route: expand prod (1 - t^{a i}) ratios with sympy
    for n, parts, a in [(4, (2, 2), 1), (5, (3, 2), 1), (6, (2, 2, 2), 1),
                        (5, (1, 1, 3), 2), (7, (4, 3), 3)]:
        num = sympy.Integer(1)
        for i in range(1, n + 1):
            num *= 1 - _t ** (a * i)
        den = sympy.Integer(1)
        for p in parts:
            for i in range(1, p + 1):
                den *= 1 - _t ** (a * i)
        expect = _from_sympy(sympy.cancel(num / den))
        assert quantum_multinomial(n, parts, a=a) == expect, (n, parts, a)


def test_quantum_multinomial_symmetry_and_shape():
    for n, parts in [(4, (2, 2)), (6, (3, 2, 1)), (5, (4, 1))]:
        m = quantum_multinomial(n, parts)
        assert m == quantum_multinomial(n, tuple(reversed(parts)))
        assert poly_is_palindromic(m)
        assert m.get(0) == 1


def test_quantum_factorial_chain():
    for n in range(1, 7):
        chain = quantum_int(1, 1)
        for i in range(1, n + 1):
            chain = poly_mul(chain, quantum_int(i, 1))
        assert chain == quantum_factorial(n, 1)


def test_poly_divmod_matches_sympy():
    rng = random.Random(0)
    for _ in range(25):
        a = {i: rng.randint(-3, 3) for i in range(rng.randint(1, 6))}
        b = {0: 1, rng.randint(1, 3): rng.choice([-1, 1])}
        a = {k: v for k, v in a.items() if v}
        q, r = poly_divmod(a, b)
        sq, sr = sympy.div(_to_sympy(a), _to_sympy(b), _t)
        assert _to_sympy(q) == sq and _to_sympy(r) == sr


def test_poly_divmod_exact_quantum_quotients():
    q, r = poly_divmod(quantum_int(6, 1), quantum_int(3, 1))
    assert r == {} and q == {0: 1, 3: 1}
    q, r = poly_divmod(quantum_int(6, 2), quantum_int(2, 2))
    assert r == {} and q == quantum_int(3, 4)


def test_poly_basics():
    assert poly_valuation({3: 1, 5: -2}) == 3
    assert poly_subst_power({0: 1, 1: 2}, 3) == {0: 1, 3: 2}
    assert poly_str({0: 1, 2: -1, 5: 3}) == "1 - t^2 + 3t^5"
    assert poly_str({}) == "0"
    assert not poly_is_palindromic({0: 1, 1: 2})
    assert poly_is_palindromic({2: 1, 3: 4, 4: 1})


def test_power_bracket():
    # [m]_{t} with a polynomial base: substitute then telescope
    base = {0: 1, 2: 1}
    assert power_bracket(base, 1) == base
    direct = poly_mul(base, {0: 1, 4: 1})  # (1+t^2)(1+t^4) has sum t^0..t^6
    assert power_bracket(base, 2) == direct


def test_quantum_product_cancellation():
    q = QuantumProduct(1, 0, (6, 3), (2, 3))
    c = qp_cancel(q)
    assert qp_to_poly(c) == poly_mul(quantum_int(3, 2), {0: 1})
    assert qp_eval_at_one(q) == Fraction(3)
    q = QuantumProduct(1, 0, (3,), (2,))
    assert isinstance(qp_to_poly(q), NotPolynomial)
    assert qp_eval_at_one(q) == Fraction(3, 2)


def test_qp_mul_shift_and_coeff():
    a = QuantumProduct(2, 1, (2,), ())
    b = QuantumProduct(1, 3, (3,), (1,))
    ab = qp_mul(a, b)
    assert (ab.coeff, ab.shift) == (2, 4)
    assert sorted(ab.num) == [2, 3] and ab.den == (1,)


def test_rat_round_trip():
    for s in ("3/2", "-7", "0", "22/7"):
        assert rat_to_str(rat_from_str(s)) == s
    assert rat_from_str("3/2") == Fraction(3, 2)


def test_series_expand_P_against_direct_product():
    # independent expansion of prod_{m>=1} 1/((1-s^m q^m)^r (1-s^m q^{m+1}))
    # as nested dicts {n: {k: coeff}}
    def direct(r, n_max):
        series = {0: {0: 1}}
        for m in range(1, n_max + 1):
            for _ in range(r):
                series = _mul_geom(series, m, m, n_max)
            series = _mul_geom(series, m, m + 1, n_max)
        return series

    def _mul_geom(series, s_pow, q_pow, n_max):
        out = {}
        for n, poly in series.items():
            j = 0
            while n + j * s_pow <= n_max:
                tgt = out.setdefault(n + j * s_pow, {})
                for k, c in poly.items():
                    kk = k + j * q_pow
                    tgt[kk] = tgt.get(kk, 0) + c
                j += 1
        return {n: {k: c for k, c in p.items() if c} for n, p in out.items()}

    for r in (0, 2, 4):
        got = series_expand_P(r, 6)
        want = direct(r, 6)
        for n in range(7):
            assert got[n] == want.get(n, {}), (r, n)


def test_series_cap_enforced():
    assert SERIES_NMAX_CAP == 12
    try:
        series_expand_P(1, SERIES_NMAX_CAP + 1)
        assert False
    except ValueError:
        pass


def test_poly_compare_on_ray():
    cmp = poly_compare_on_ray({0: 1, 1: 1}, {0: 1, 2: 1})
    # t + 1 < t^2 + 1 for all t > 1
    assert cmp.verdict == "<"
    cmp = poly_compare_on_ray({0: 2}, {0: 2})
    assert cmp.verdict == "="
