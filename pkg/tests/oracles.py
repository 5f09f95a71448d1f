"""Independent oracles used by the test suite.

These deliberately avoid the library's own solution paths: feasibility is
decided by Fourier-Motzkin elimination instead of simplex, and brute-force
enumeration replaces backtracking wherever it is affordable.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations


def fm_feasible(ineqs, dim):
    """Fourier-Motzkin feasibility over the rationals.

    ``ineqs`` is a list of (coefficients, rhs) meaning coef·x >= rhs.
    Equalities must be passed as two opposite inequalities.
    """
    cons = [([Fraction(c) for c in coef], Fraction(rhs)) for coef, rhs in ineqs]
    for var in range(dim):
        lower, upper, rest = [], [], []
        for coef, rhs in cons:
            c = coef[var]
            if c > 0:
                # x_var >= (rhs - other)/c
                lower.append(([x / c for x in coef], rhs / c))
            elif c < 0:
                upper.append(([x / c for x in coef], rhs / c))
            else:
                rest.append((coef, rhs))
        new = rest
        for lc, lr in lower:
            for uc, ur in upper:
                # lower bound <= upper bound
                coef = [l - u for l, u in zip(lc, uc)]
                coef[var] = Fraction(0)
                new.append((coef, lr - ur))
        cons = new
    return all(rhs <= 0 for coef, rhs in cons)


def fm_positive_combination_exists(vectors, target_basis, dim):
    """Whether positive a_i exist with sum a_i v_i in span(target_basis).

    Encoded with variables (a_1..a_k, b_1..b_m), a_i >= 1, and the span
    condition as equalities; decided purely by Fourier-Motzkin.
    """
    k, m = len(vectors), len(target_basis)
    if k == 0:
        return True
    nvars = k + m
    ineqs = []
    for i in range(k):
        coef = [Fraction(0)] * nvars
        coef[i] = Fraction(1)
        ineqs.append((coef, Fraction(1)))
    for c in range(dim):
        coef = [Fraction(vectors[i][c]) for i in range(k)]
        coef += [-Fraction(target_basis[j][c]) for j in range(m)]
        ineqs.append((list(coef), Fraction(0)))
        ineqs.append(([-x for x in coef], Fraction(0)))
    return fm_feasible(ineqs, nvars)


def brute_force_isomorphisms(t1, t2):
    """All (vertex_map, edge_map) isomorphisms t1 -> t2 by raw enumeration.

    Checks weights, leg attachments (legs are fixed pointwise), and oriented
    slopes.  Exponential; only for tiny types.
    """
    vs1 = [v for v, _ in t1.graph.vertices]
    vs2 = [v for v, _ in t2.graph.vertices]
    es1 = [e for e, _, _ in t1.graph.edges]
    es2 = [e for e, _, _ in t2.graph.edges]
    if len(vs1) != len(vs2) or len(es1) != len(es2):
        return []
    w1 = dict(t1.graph.vertices)
    w2 = dict(t2.graph.vertices)
    ends1 = {e: (u, v) for e, u, v in t1.graph.edges}
    ends2 = {e: (u, v) for e, u, v in t2.graph.edges}
    out = []
    for vperm in permutations(vs2):
        vmap = dict(zip(vs1, vperm))
        if any(w1[v] != w2[vmap[v]] for v in vs1):
            continue
        legs_ok = True
        for (l1, a1), (l2, a2) in zip(t1.graph.legs, t2.graph.legs):
            if l1 != l2 or vmap[a1] != a2 or t1.slopes[l1] != t2.slopes[l2]:
                legs_ok = False
                break
        if not legs_ok:
            continue
        for eperm in permutations(es2):
            emap = dict(zip(es1, eperm))
            ok = True
            for e in es1:
                u, v = ends1[e]
                u2, v2 = ends2[emap[e]]
                s1 = t1.slopes[e]
                s2 = t2.slopes[emap[e]]
                if (vmap[u], vmap[v]) == (u2, v2) and s1 == s2:
                    continue
                if (vmap[u], vmap[v]) == (v2, u2) and s1 == tuple(-x for x in s2):
                    continue
                ok = False
                break
            if ok:
                out.append((vmap, emap))
    return out


def affine_hull_dim(points):
    """Dimension of the affine hull of rational points, by row reduction."""
    if not points:
        return -1
    base = points[0]
    rows = [[Fraction(x) - Fraction(y) for x, y in zip(p, base)] for p in points[1:]]
    dim = 0
    cols = len(base)
    pivot_rows = []
    for c in range(cols):
        piv = None
        for r in rows:
            if r[c] != 0 and id(r) not in pivot_rows:
                piv = r
                break
        if piv is None:
            continue
        pivot_rows.append(id(piv))
        dim += 1
        for r in rows:
            if r is not piv and r[c] != 0:
                f = r[c] / piv[c]
                for j in range(cols):
                    r[j] -= f * piv[j]
    return dim
