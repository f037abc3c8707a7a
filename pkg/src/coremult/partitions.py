"""Partitions, colored multipartitions, dominance orders, contingency matrices.

Partitions are tuples of weakly decreasing positive integers.  A colored
multipartition is a dict {component id: partition} over the fixed components
of a surface model; empty partitions are never stored, so plain dict
equality is the right notion of equality.
"""

from itertools import product
from math import comb

from .exactalg import poly_mul, quantum_int, quantum_factorial

MULTIPARTITION_CAP = 10


# ---------------------------------------------------------------------------
# single partitions

def is_partition(parts):
    parts = tuple(parts)
    return all(p >= 1 for p in parts) and all(
        parts[i] >= parts[i + 1] for i in range(len(parts) - 1))


def transpose(lam):
    """Conjugate partition."""
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


def boxes(lam):
    """Cells (i, j) with i along the first row direction, j the row index."""
    return [(i, j) for j, p in enumerate(lam) for i in range(p)]


def arm(lam, s):
    i, j = s
    return lam[j] - i - 1


def leg(lam, s):
    i, j = s
    return transpose(lam)[i] - j - 1


def hook(lam, s):
    return arm(lam, s) + leg(lam, s) + 1


def partitions_of(n, max_part=None):
    """All partitions of n, largest part first (reverse lexicographic)."""
    if max_part is None:
        max_part = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return out


# ---------------------------------------------------------------------------
# multipartitions over a surface's fixed components

def mp_norm(mp):
    return {c: tuple(p) for c, p in mp.items() if tuple(p)}


def mp_size(mp):
    return sum(sum(p) for p in mp.values())


def enumerate_multipartitions(surface, n):
    """All colored multipartitions of n on the surface's fixed components,
    exactly once, in a deterministic order (components in catalog order,
    per-component partitions in reverse lexicographic order)."""
    if n < 0 or n > MULTIPARTITION_CAP:
        raise ValueError("n must lie in 0..%d" % MULTIPARTITION_CAP)
    comps = [r.id for r in surface.fixedComponents]
    out = []
    for sizes in _compositions_lex(n, len(comps)):
        for choice in product(*[partitions_of(s) for s in sizes]):
            out.append(mp_norm(dict(zip(comps, choice))))
    return out


def _compositions_lex(n, c):
    if c == 0:
        return [()] if n == 0 else []
    if c == 1:
        return [(n,)]
    out = []
    for first in range(n, -1, -1):
        for rest in _compositions_lex(n - first, c - 1):
            out.append((first,) + rest)
    return out


def component_order(surface):
    """Strict flow order on fixed components: transitive closure of the
    surface's oriented T-curve edges, as a set of (lower, higher) pairs."""
    edges = set(surface.curveAdjacency)
    closure = set(edges)
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in edges:
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return closure


def dominates(a, b, surface):
    """Multipartition dominance (equivalently, b lies above a in the flow
    order on fixed components of the Hilbert scheme).

    Mass only ever travels up the oriented T-curve tree, so the flow into
    each component F is forced: it equals the up-set mass difference
    updiff(F) = (mass of b at or above F) - (mass of a at or above F).
    a dominates b iff every updiff is nonnegative and, within each
    component, every row-prefix of b exceeds the matching prefix of a by
    at most the forced inflow.  These conditions imply the naive
    "mass strictly below F + row prefix" double-sum inequalities and are
    exactly the transitive closure of the one-box/T-curve moves (checked
    exhaustively against dominance_moves up to n = 4 on every core
    diagram shape)."""
    a, b = mp_norm(a), mp_norm(b)
    n = mp_size(a)
    if mp_size(b) != n:
        raise ValueError("multipartitions must have the same total size")
    below = component_order(surface)
    ids = [r.id for r in surface.fixedComponents]
    updiff = {}
    for f in ids:
        ua = sum(sum(a.get(g, ())) for g in ids if g == f or (f, g) in below)
        ub = sum(sum(b.get(g, ())) for g in ids if g == f or (f, g) in below)
        updiff[f] = ub - ua
        if updiff[f] < 0:
            return False
    for f in ids:
        pa, pb = a.get(f, ()), b.get(f, ())
        for k in range(1, len(pb) + 1):
            if sum(pb[:k]) > sum(pa[:k]) + updiff[f]:
                return False
    return True


def dominance_moves(a, surface):
    """Multipartitions one move below a: a one-box dominance drop inside a
    single component, or a size-1 part pushed along an oriented T-curve."""
    a = mp_norm(a)
    out = []
    seen = set()

    def emit(mp):
        mp = mp_norm(mp)
        key = tuple(sorted(mp.items()))
        if key not in seen:
            seen.add(key)
            out.append(mp)

    # move (i): one box down within one component
    for comp, lam in a.items():
        for new in _one_box_drops(lam):
            mp = dict(a)
            mp[comp] = new
            emit(mp)
    # move (ii): a part equal to 1 travels along a T-curve edge
    for src, dst in surface.curveAdjacency:
        lam = a.get(src, ())
        if 1 in lam:
            shrunk = list(lam)
            shrunk.remove(1)
            grown = list(a.get(dst, ()))
            if grown:
                grown[0] += 1
            else:
                grown = [1]
            mp = dict(a)
            mp[src] = tuple(shrunk)
            mp[dst] = tuple(grown)
            emit(mp)
    return out


def _one_box_drops(lam):
    found = []
    l = len(lam)
    for j1 in range(l):
        for j2 in range(j1 + 1, l + 1):
            new = list(lam) + [0]
            new[j1] -= 1
            new[j2] += 1
            # weakly decreasing before stripping the trailing zero slot,
            # otherwise a "drop" could silently re-sort into a raise
            if any(new[i] < new[i + 1] for i in range(len(new) - 1)):
                continue
            new = tuple(p for p in new if p > 0)
            if new != lam and new not in found:
                found.append(new)
    return found


# ---------------------------------------------------------------------------
# compositions and contingency matrices

def weak_compositions(n, c):
    """All length-c tuples of nonnegative integers summing to n;
    there are binom(n+c-1, c-1) of them."""
    if n < 0 or c < 0:
        raise ValueError("need n >= 0, c >= 0")
    return _compositions_lex(n, c)


def theta_matrices(lam, mu):
    """All nonnegative integer matrices with row sums lam and column
    sums mu (the double-coset contingency tables)."""
    lam, mu = tuple(lam), tuple(mu)
    if sum(lam) != sum(mu):
        raise ValueError("row and column totals differ")

    def rec(rows, cols):
        if not rows:
            return [()] if all(c == 0 for c in cols) else []
        out = []
        for row in _bounded_compositions(rows[0], cols):
            rest_cols = tuple(c - r for c, r in zip(cols, row))
            for tail in rec(rows[1:], rest_cols):
                out.append((row,) + tail)
        return out

    return rec(lam, mu)


def _bounded_compositions(n, bounds):
    if not bounds:
        return [()] if n == 0 else []
    out = []
    for first in range(min(n, bounds[0]), -1, -1):
        for rest in _bounded_compositions(n - first, bounds[1:]):
            out.append((first,) + rest)
    return out


def weak_composition_count(n, c):
    return comb(n + c - 1, c - 1) if c > 0 else (1 if n == 0 else 0)


def test():
    assert transpose((3, 1)) == (2, 1, 1)
    assert transpose(transpose((4, 2, 2, 1))) == (4, 2, 2, 1)
    assert partitions_of(3) == [(3,), (2, 1), (1, 1, 1)]
    # column statistic bookkeeping: prod over boxes of [below(s)+1] equals
    # the product of column factorials
    for lam in [(3, 1), (2, 2, 1), (4,)]:
        lhs = {0: 1}
        for s in boxes(lam):
            lhs = poly_mul(lhs, quantum_int(leg(lam, s) + 1, 1))
        rhs = {0: 1}
        for c in transpose(lam):
            rhs = poly_mul(rhs, quantum_factorial(c, 1))
        assert lhs == rhs, lam
    assert weak_compositions(1, 2) == [(1, 0), (0, 1)]
    assert len(theta_matrices((2, 1), (1, 1, 1))) == 3
    assert len(theta_matrices((1, 1), (1, 1))) == 2
    print("partitions ok")


if __name__ == "__main__":
    test()
