"""Exact rational linear algebra, integer lattice operations and LP feasibility.

Everything in here works over ``fractions.Fraction`` (for rational data) or
plain Python integers (for lattice data).  There is deliberately no floating
point anywhere: the geometric predicates built on top of this module are
equality predicates, and a tolerance would make them meaningless.

Vectors are plain tuples, matrices are tuples of row tuples.  All functions
are pure; values are never mutated after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import DependentGenerators, DimMismatch, ZeroVector

Vec = tuple  # tuple of Fraction (or int coercible)
IVec = tuple  # tuple of int
Mat = tuple  # tuple of row tuples


# ---------------------------------------------------------------------------
# vector / matrix helpers
# ---------------------------------------------------------------------------

def frac(x) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def vec(entries: Iterable) -> Vec:
    return tuple(frac(x) for x in entries)


def ivec(entries: Iterable) -> IVec:
    out = []
    for x in entries:
        f = frac(x)
        if f.denominator != 1:
            raise ValueError(f"expected integer entry, got {x!r}")
        out.append(int(f))
    return tuple(out)


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_scale(c, a: Vec) -> Vec:
    return tuple(c * x for x in a)


def vec_dot(a: Vec, b: Vec):
    return sum((x * y for x, y in zip(a, b, strict=True)), Fraction(0))


def vec_is_zero(a: Vec) -> bool:
    return all(x == 0 for x in a)


def zero_vec(n: int) -> Vec:
    return (Fraction(0),) * n


def mat_rows(m: Sequence[Sequence]) -> Mat:
    return tuple(tuple(row) for row in m)


def mat_identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a and b and len(a[0]) != len(b):
        raise DimMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0]) if b else 0}")
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols))
        for i in range(len(a))
    )


def mat_vec(a: Mat, x: Vec) -> Vec:
    if a and len(a[0]) != len(x):
        raise DimMismatch(f"matrix has {len(a[0])} columns, vector has {len(x)}")
    return tuple(sum((row[k] * x[k] for k in range(len(x))), Fraction(0)) for row in a)


def mat_transpose(a: Mat) -> Mat:
    if not a:
        return ()
    return tuple(tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0])))


def mat_columns(a: Mat, width: int | None = None) -> list:
    """Columns of ``a`` as vectors; ``width`` disambiguates empty matrices."""
    if not a:
        return [() for _ in range(width or 0)] if width else []
    return [tuple(row[j] for row in a) for j in range(len(a[0]))]


def det(a: Mat) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination (small matrices)."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimMismatch("determinant of a non-square matrix")
    m = [[frac(x) for x in row] for row in a]
    sign = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    out = Fraction(sign)
    for i in range(n):
        out *= m[i][i]
    return out


# ---------------------------------------------------------------------------
# rational Gaussian elimination: rank, solve, kernel
# ---------------------------------------------------------------------------

def _rref(rows: Sequence[Vec]):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [list(map(frac, r)) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m], pivots


def rank(rows: Sequence[Vec]) -> int:
    if not rows:
        return 0
    _, pivots = _rref(rows)
    return len(pivots)


def solve_linear(a: Sequence[Vec], b: Vec) -> Optional[Vec]:
    """One rational solution of ``a x = b``, or None if inconsistent."""
    if not a:
        return None if any(x != 0 for x in b) else ()
    ncols = len(a[0])
    aug = [tuple(row) + (bi,) for row, bi in zip(a, b, strict=True)]
    red, pivots = _rref(aug)
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        if c == ncols:  # pivot in the constant column: 0 = 1
            return None
        x[c] = red[r][ncols]
    return tuple(x)


def kernel_rational(a: Sequence[Vec], ncols: int) -> list:
    """Basis of the rational kernel of the row system ``a`` on R^ncols."""
    if not a:
        return [tuple(Fraction(1 if i == j else 0) for j in range(ncols)) for i in range(ncols)]
    red, pivots = _rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][fcol]
        basis.append(tuple(v))
    return basis


# ---------------------------------------------------------------------------
# integer lattice operations
# ---------------------------------------------------------------------------

def primitive_vector(v: IVec) -> IVec:
    """Divide an integer vector by the gcd of its entries.

    The result has content 1 and the same direction.
    """
    if all(x == 0 for x in v):
        raise ZeroVector("primitive_vector of the zero vector")
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return tuple(x // g for x in v)


def smith_normal_form(m: Sequence[Sequence[int]]):
    """Smith normal form ``u·m·v = s`` with unimodular ``u``, ``v``.

    ``s`` is diagonal with nonnegative entries satisfying d1 | d2 | ...
    Pivots are chosen with minimal absolute value to keep intermediate
    entries small; inputs here are tiny so no modular tricks are needed.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    s = [[int(x) for x in row] for row in m]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        s[dst] = [x + q * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for row in s:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]

    n = min(rows, cols)
    for t in range(n):
        while True:
            # minimal-absolute-value nonzero pivot in the remaining block
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if s[i][j] != 0 and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best != (t, t):
                if best[0] != t:
                    swap_rows(t, best[0])
                if best[1] != t:
                    swap_cols(t, best[1])
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t] != 0:
                    add_row(t, i, -(s[i][t] // s[t][t]))
                    if s[i][t] != 0:
                        dirty = True
            for j in range(t + 1, cols):
                if s[t][j] != 0:
                    add_col(t, j, -(s[t][j] // s[t][t]))
                    if s[t][j] != 0:
                        dirty = True
            if not dirty:
                break
        if s[t][t] < 0:
            negate_row(t)

    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for t in range(n - 1):
            a, b = s[t][t], s[t + 1][t + 1]
            if a != 0 and b % a != 0:
                add_col(t + 1, t, 1)  # puts b into column t below the pivot
                # re-clear the 2x2 block at (t, t+1)
                while s[t + 1][t] != 0:
                    if s[t][t] != 0:
                        q = s[t + 1][t] // s[t][t]
                        add_row(t, t + 1, -q)
                    if s[t + 1][t] != 0:
                        swap_rows(t, t + 1)
                if s[t][t + 1] != 0:
                    add_col(t, t + 1, -(s[t][t + 1] // s[t][t]))
                if s[t][t] < 0:
                    negate_row(t)
                if s[t + 1][t + 1] < 0:
                    negate_row(t + 1)
                changed = True
    return mat_rows(u), mat_rows(s), mat_rows(v)


def elementary_divisors(m: Sequence[Sequence[int]]) -> list:
    _, s, _ = smith_normal_form(m)
    out = []
    for i in range(min(len(s), len(s[0]) if s else 0)):
        if s[i][i] != 0:
            out.append(s[i][i])
    return out


def is_saturated(sub_basis: Sequence[IVec], ambient_dim: int) -> bool:
    """Whether the sublattice spanned equals its rational span ∩ Z^ambient_dim.

    Decided via elementary divisors: the sublattice is saturated iff they are
    all 1.  Raises DependentGenerators on dependent input.
    """
    if not sub_basis:
        return True
    for b in sub_basis:
        if len(b) != ambient_dim:
            raise DimMismatch(f"generator has length {len(b)}, ambient is {ambient_dim}")
    mat = [tuple(b) for b in sub_basis]
    divisors = elementary_divisors(mat)
    if len(divisors) < len(sub_basis):
        raise DependentGenerators("generators are linearly dependent")
    return all(d == 1 for d in divisors)


def integer_solve(a: Sequence[IVec], b: IVec) -> Optional[IVec]:
    """One integer solution of ``a x = b`` or None (via Smith normal form)."""
    if not a:
        return None
    rows, cols = len(a), len(a[0])
    u, s, v = smith_normal_form(a)
    ub = mat_vec(u, vec(b))
    y = [Fraction(0)] * cols
    for i in range(rows):
        d = s[i][i] if i < cols else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % d != 0:
                return None
            y[i] = ub[i] / d
    x = mat_vec(v, tuple(y))
    return tuple(int(c) for c in x)


def integer_kernel(a: Sequence[IVec], ncols: int) -> list:
    """Integer basis of the kernel of the row system ``a`` (columns of v)."""
    if not a:
        return [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    _, s, v = smith_normal_form(a)
    r = len(elementary_divisors(a))
    return [tuple(v[i][j] for i in range(ncols)) for j in range(r, ncols)]


def unimodular_inverse(u: Mat) -> Mat:
    """Exact integer inverse of a unimodular matrix."""
    n = len(u)
    ident = mat_identity(n)
    cols = []
    for j in range(n):
        col = solve_linear([vec(row) for row in u], vec(tuple(ident[i][j] for i in range(n))))
        assert col is not None
        cols.append(col)
    inv = tuple(tuple(int(cols[j][i]) for j in range(n)) for i in range(n))
    return inv


def affine_apply(linear: Mat, offset: Vec, x: Vec) -> Vec:
    return vec_add(mat_vec(linear, x), offset)


def affine_compose(outer_lin: Mat, outer_off: Vec, inner_lin: Mat, inner_off: Vec):
    """The affine map x -> outer(inner(x)) as a (linear, offset) pair."""
    return mat_mul(outer_lin, inner_lin), vec_add(mat_vec(outer_lin, inner_off), vec(outer_off))


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A rational linear subspace given by an independent basis."""

    ambient_dim: int
    basis: tuple

    def __post_init__(self):
        for b in self.basis:
            if len(b) != self.ambient_dim:
                raise DimMismatch("basis vector has wrong length")
        if self.basis and rank(self.basis) != len(self.basis):
            raise DependentGenerators("subspace basis is dependent")

    @staticmethod
    def from_spanning(vectors: Sequence[Vec], ambient_dim: int) -> "Subspace":
        red, pivots = _rref([vec(v) for v in vectors]) if vectors else ([], [])
        basis = tuple(red[i] for i in range(len(pivots)))
        return Subspace(ambient_dim, basis)

    @property
    def dim(self) -> int:
        return len(self.basis)


def span_membership(v: Vec, s: Subspace) -> bool:
    """Whether ``v`` lies in the rational span of ``s.basis``."""
    if len(v) != s.ambient_dim:
        raise DimMismatch(f"vector has length {len(v)}, subspace ambient is {s.ambient_dim}")
    if vec_is_zero(v):
        return True
    if not s.basis:
        return False
    cols = [vec(b) for b in s.basis]
    a = mat_transpose(mat_rows(cols))
    return solve_linear(a, vec(v)) is not None


# ---------------------------------------------------------------------------
# exact LP: two-phase simplex with Bland's rule
# ---------------------------------------------------------------------------

def _simplex_standard(obj: list, a: list, b: list):
    """Maximize obj·x subject to a x = b, x >= 0.  Assumes b >= 0.

    Classic two-phase dense simplex over Fractions with Bland's rule, so it
    always terminates.  Returns ('optimal', x, value), ('infeasible', ...)
    or ('unbounded', ...).
    """
    m, n = len(a), len(obj)
    if m == 0:
        if any(c > 0 for c in obj):
            return 'unbounded', None, None
        return 'optimal', (Fraction(0),) * n, Fraction(0)
    # phase 1: minimize the sum of artificial variables
    tab = [list(a[i]) + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [b[i]]
           for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(-1)] * m  # maximize -(sum of artificials)

    def run(costrow):
        while True:
            # reduced costs: c_j - c_B · column_j
            zrow = []
            for j in range(len(tab[0]) - 1):
                red = costrow[j] - sum(costrow[basis[i]] * tab[i][j] for i in range(m))
                zrow.append(red)
            enter = next((j for j, rc in enumerate(zrow) if rc > 0), None)
            if enter is None:
                return 'optimal'
            ratios = [(tab[i][-1] / tab[i][enter], basis[i], i)
                      for i in range(m) if tab[i][enter] > 0]
            if not ratios:
                return 'unbounded'
            best = min(ratios, key=lambda t: (t[0], t[1]))
            piv = best[2]
            pv = tab[piv][enter]
            tab[piv] = [x / pv for x in tab[piv]]
            for i in range(m):
                if i != piv and tab[i][enter] != 0:
                    f = tab[i][enter]
                    tab[i] = [x - f * y for x, y in zip(tab[i], tab[piv])]
            basis[piv] = enter

    status = run(cost)
    phase1_value = sum(cost[basis[i]] * tab[i][-1] for i in range(m))
    if status != 'optimal' or phase1_value != 0:
        return 'infeasible', None, None
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            swap = next((j for j in range(n) if tab[i][j] != 0), None)
            if swap is not None:
                pv = tab[i][swap]
                tab[i] = [x / pv for x in tab[i]]
                for k in range(m):
                    if k != i and tab[k][swap] != 0:
                        f = tab[k][swap]
                        tab[k] = [x - f * y for x, y in zip(tab[k], tab[i])]
                basis[i] = swap
    # drop artificial columns; rows with a basic artificial are 0 = 0
    keep_rows = [i for i in range(m) if basis[i] < n]
    tab2 = [tab[i][:n] + [tab[i][-1]] for i in keep_rows]
    basis2 = [basis[i] for i in keep_rows]
    tab.clear()
    tab.extend(tab2)
    basis.clear()
    basis.extend(basis2)
    m = len(tab)

    cost2 = list(obj)
    status = run(cost2)
    if status == 'unbounded':
        return 'unbounded', None, None
    x = [Fraction(0)] * n
    for i in range(m):
        x[basis[i]] = tab[i][-1]
    value = sum(obj[j] * x[j] for j in range(n))
    return 'optimal', tuple(x), value


def lp_maximize(objective: Vec, eqs: Sequence, ineqs: Sequence, nonneg: Sequence[bool]):
    """Maximize objective·x st eq rows (coef, rhs): coef·x = rhs and
    ineq rows: coef·x >= rhs, with x_i >= 0 where nonneg[i] else free.

    Returns (status, x, value) with exact Fractions.
    """
    nvars = len(objective)
    # column layout: one column per nonneg var, two (p, m) per free var,
    # then one surplus column per inequality.
    colmap = []  # (var index, sign)
    for i in range(nvars):
        colmap.append((i, 1))
        if not nonneg[i]:
            colmap.append((i, -1))
    nsurplus = len(ineqs)
    ncols = len(colmap) + nsurplus

    rows, rhs = [], []
    for coef, r in eqs:
        row = [frac(coef[i]) * sgn for i, sgn in colmap] + [Fraction(0)] * nsurplus
        rows.append(row)
        rhs.append(frac(r))
    for k, (coef, r) in enumerate(ineqs):
        row = [frac(coef[i]) * sgn for i, sgn in colmap] + [Fraction(0)] * nsurplus
        row[len(colmap) + k] = Fraction(-1)  # coef·x - s = rhs, s >= 0
        rows.append(row)
        rhs.append(frac(r))
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    obj = [frac(objective[i]) * sgn for i, sgn in colmap] + [Fraction(0)] * nsurplus
    status, xcols, value = _simplex_standard(obj, rows, rhs)
    if status != 'optimal':
        return status, None, None
    x = [Fraction(0)] * nvars
    for (i, sgn), xv in zip(colmap, xcols[:len(colmap)]):
        x[i] += sgn * xv
    return 'optimal', tuple(x), value


def feasible_point(eqs: Sequence, ineqs: Sequence, dim: int,
                   strict: Sequence[int] = (), nonneg: Sequence[bool] | None = None):
    """A rational point satisfying the system, or None.

    ``eqs``/``ineqs`` are (coefficient vector, rhs) pairs meaning coef·x = rhs
    resp. coef·x >= rhs over free variables (unless ``nonneg`` is given).
    Inequalities listed in ``strict`` must hold strictly; strictness is
    decided exactly by maximizing a common slack bounded by 1.
    """
    if nonneg is None:
        nonneg = [False] * dim
    strict = set(strict)
    # variables: x_0..x_{dim-1}, t
    eqs2 = [(tuple(c) + (0,), r) for c, r in eqs]
    ineqs2 = []
    for k, (c, r) in enumerate(ineqs):
        tcoef = -1 if k in strict else 0
        ineqs2.append((tuple(c) + (tcoef,), r))
    ineqs2.append(((0,) * dim + (-1,), -1))  # t <= 1
    obj = (0,) * dim + (1,)
    status, x, value = lp_maximize(obj, eqs2, ineqs2, list(nonneg) + [True])
    if status != 'optimal':
        return None
    if strict and value <= 0:
        return None
    return tuple(x[:dim])


def strict_positive_combination(vectors: Sequence[Vec], target: Subspace):
    """Positive integers a_i with sum(a_i * v_i) in ``target``, if any exist.

    The strict positivity a_i > 0 is encoded as a_i >= 1, which is equivalent
    by homogeneity of the constraint (target is a linear subspace, so any
    positive solution scales to one with entries >= 1).  The returned
    certificate is integer-scaled with the common denominator cleared.
    Returns None when no positive combination exists.
    """
    k = len(vectors)
    for v in vectors:
        if len(v) != target.ambient_dim:
            raise DimMismatch("vector/target dimension mismatch")
    if k == 0:
        return []
    nb = len(target.basis)
    dim = target.ambient_dim
    # variables: s_0..s_{k-1} >= 0 (a_i = 1 + s_i), b_0..b_{nb-1} free
    eqs = []
    for c in range(dim):
        coef = [frac(vectors[i][c]) for i in range(k)]
        coef += [-frac(target.basis[j][c]) for j in range(nb)]
        rhs = -sum((frac(vectors[i][c]) for i in range(k)), Fraction(0))
        eqs.append((tuple(coef), rhs))
    nonneg = [True] * k + [False] * nb
    point = feasible_point(eqs, [], k + nb, strict=(), nonneg=nonneg)
    if point is None:
        return None
    a = [1 + point[i] for i in range(k)]
    denom = 1
    for x in a:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in a]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    assert all(x > 0 for x in ints)
    combo = zero_vec(dim)
    for ai, v in zip(ints, vectors):
        combo = vec_add(combo, vec_scale(ai, vec(v)))
    assert span_membership(combo, target)
    return ints
