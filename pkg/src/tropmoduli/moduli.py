"""Strata of the moduli space of parameterized tropical curves.

A combinatorial type cuts out a stratum inside R^{|E|} x (R^dim)^{|V|}: one
length coordinate per edge, one position block per vertex, the edge
relations as equalities and strict positivity of the lengths.  This module
builds those systems, decides nonemptiness and dimension exactly,
enumerates types with fixed invariants, classifies walls (weightless almost
3-valent types), resolves 4-valent vertices, and assembles the node/wall
incidence graph used for wall-crossing arguments.

Isomorphisms of types fix every leg (the leg order is part of the data),
so canonical forms are computed by refinement coloring on
(weight, valence, incident slopes, leg positions) followed by minimization
over the remaining vertex orderings.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from typing import Optional

from .errors import (
    MixedInvariants,
    NonzeroSlopeContraction,
    NotAlmost3Valent,
    SeedNotInGraph,
    UnbalancedType,
)
from .exact_linalg import (
    feasible_point,
    integer_kernel,
    integer_solve,
    kernel_rational,
    lp_maximize,
    rank,
    vec,
)
from .tropcurve import (
    CombinatorialType,
    WeightedGraph,
    check_balanced,
    extended_degree,
    genus,
    is_stable,
)


# ---------------------------------------------------------------------------
# stratum systems
# ---------------------------------------------------------------------------

@dataclass
class StratumDescriptor:
    """Linear system cutting M_Theta inside R^{|E|} x (R^dim)^{|V|}.

    Coordinates: edge lengths in sorted edge-id order, then vertex position
    blocks in sorted vertex-id order.  Equalities are the edge relations;
    the inequalities are strict positivity of every length coordinate.
    """

    type: CombinatorialType
    edge_order: tuple
    vertex_order: tuple
    ambient_dim: int
    equalities: tuple  # rows over the ambient coordinates (rhs 0)

    def coordinate_names(self):
        names = [f"len[{e}]" for e in self.edge_order]
        for v in self.vertex_order:
            names += [f"pos[{v}][{c}]" for c in range(self.type.dim)]
        return names

    def length_index(self, e) -> int:
        return self.edge_order.index(e)

    def position_index(self, v, c) -> int:
        return len(self.edge_order) + self.vertex_order.index(v) * self.type.dim + c

    def length_inequalities(self):
        rows = []
        for i in range(len(self.edge_order)):
            row = [0] * self.ambient_dim
            row[i] = 1
            rows.append((tuple(row), Fraction(0)))
        return rows

    def interior_point(self):
        """A point with all lengths strictly positive, or None if empty."""
        ineqs = self.length_inequalities()
        return feasible_point([(r, Fraction(0)) for r in self.equalities],
                              ineqs, self.ambient_dim, strict=range(len(ineqs)))

    def is_empty(self) -> bool:
        return self.interior_point() is None

    def dim(self) -> Optional[int]:
        if self.is_empty():
            return None
        if not self.equalities:
            return self.ambient_dim
        return self.ambient_dim - rank([vec(r) for r in self.equalities])


def stratum(t: CombinatorialType) -> StratumDescriptor:
    """Equality/inequality system of the stratum of a balanced type."""
    rep = check_balanced(t)
    if not rep.ok:
        raise UnbalancedType(f"unbalanced at {[v for v, _ in rep.failures]}")
    edge_order = tuple(sorted(e for e, _, _ in t.graph.edges))
    vertex_order = tuple(sorted(t.graph.vertex_ids()))
    ambient = len(edge_order) + t.dim * len(vertex_order)
    vpos = {v: len(edge_order) + i * t.dim for i, v in enumerate(vertex_order)}
    epos = {e: i for i, e in enumerate(edge_order)}
    rows = []
    for eid, u, v in sorted(t.graph.edges):
        s = t.slopes[eid]
        for c in range(t.dim):
            row = [0] * ambient
            row[epos[eid]] -= s[c]
            row[vpos[v] + c] += 1
            row[vpos[u] + c] -= 1
            rows.append(tuple(row))
    return StratumDescriptor(type=t, edge_order=edge_order, vertex_order=vertex_order,
                             ambient_dim=ambient, equalities=tuple(rows))


def dim_stratum(t: CombinatorialType) -> Optional[int]:
    """Dimension of the stratum, or None when it is empty."""
    return stratum(t).dim()


def sample_stratum(t: CombinatorialType, n: int, rng) -> list:
    """n exact rational points of the stratum (strictly positive lengths).

    The first samples walk along each kernel direction of the equality
    system from an interior point, so the affine hull of the output equals
    the stratum's affine hull; the rest are random kernel combinations.
    """
    desc = stratum(t)
    x0 = desc.interior_point()
    if x0 is None:
        return []
    kernel = kernel_rational([vec(r) for r in desc.equalities], desc.ambient_dim) \
        if desc.equalities else \
        [vec(tuple(1 if i == j else 0 for j in range(desc.ambient_dim)))
         for i in range(desc.ambient_dim)]

    nlen = len(desc.edge_order)

    def step_limit(direction):
        # largest lam with x0 + lam*direction keeping lengths positive, halved
        lam = Fraction(1)
        for i in range(nlen):
            d = direction[i]
            if d < 0:
                lam = min(lam, -x0[i] / d / 2)
        return lam

    samples = [tuple(x0)]
    for k in kernel:
        lam = step_limit(k)
        if lam > 0:
            samples.append(tuple(x + lam * d for x, d in zip(x0, k)))
        if len(samples) >= n:
            return samples[:n]
    while len(samples) < n:
        direction = [Fraction(0)] * desc.ambient_dim
        for k in kernel:
            c = Fraction(rng.randint(-5, 5))
            direction = [d + c * x for d, x in zip(direction, k)]
        lam = step_limit(direction)
        if lam > 0 or all(d == 0 for d in direction):
            samples.append(tuple(x + lam * d for x, d in zip(x0, direction)))
    return samples[:n]


# ---------------------------------------------------------------------------
# canonical labeling and isomorphisms
# ---------------------------------------------------------------------------

_CANONICAL_PERM_CAP = 40320  # 8!; types here are far smaller after refinement


def _refine_colors(t: CombinatorialType):
    g = t.graph
    legs_at = {}
    for pos, (lid, v) in enumerate(g.legs):
        legs_at.setdefault(v, []).append(pos)
    color = {}
    for v, w in g.vertices:
        out_slopes = sorted(
            t.slope_of_item(item) for item in g.star_items(v) if item[0] == "edge")
        color[v] = (w, tuple(legs_at.get(v, ())), tuple(out_slopes))
    while True:
        ranks = {c: i for i, c in enumerate(sorted(set(color.values())))}
        neigh = {}
        for v, _ in g.vertices:
            sig = []
            for item in g.star_items(v):
                if item[0] != "edge":
                    continue
                _, eid, forward = item
                a, b = g.edge_ends(eid)
                other = b if forward else a
                sig.append((t.slope_of_item(item), ranks[color[other]]))
            neigh[v] = (ranks[color[v]], tuple(sorted(sig)))
        if len(set(neigh.values())) == len(set(color.values())):
            # partition stabilized (refinement cannot split further)
            stable = all(
                (color[a] == color[b]) == (neigh[a] == neigh[b])
                for a, _ in g.vertices for b, _ in g.vertices
            )
            if stable:
                return color
        color = neigh


def _serialize(t: CombinatorialType, order: dict):
    g = t.graph
    vlines = tuple(w for _, w in sorted(((order[v], w) for v, w in g.vertices)))
    llines = tuple((order[v], t.slopes[lid]) for lid, v in g.legs)
    erecs = []
    for eid, u, v in g.edges:
        iu, iv = order[u], order[v]
        s = t.slopes[eid]
        if iu == iv:
            s = min(s, tuple(-x for x in s))
            erecs.append((iu, iv, s))
        elif iu < iv:
            erecs.append((iu, iv, s))
        else:
            erecs.append((iv, iu, tuple(-x for x in s)))
    return (t.dim, vlines, llines, tuple(sorted(erecs)))


@dataclass(frozen=True)
class CanonicalForm:
    key: tuple
    string: str
    vertex_map: dict   # original id -> canonical id
    edge_map: dict     # original id -> canonical id
    type: CombinatorialType

    def __hash__(self):
        return hash(self.string)


def canonical_form(t: CombinatorialType) -> CanonicalForm:
    """Deterministic canonical representative of the isomorphism class.

    Minimizes the serialized form over all vertex orderings compatible with
    the refinement coloring; legs keep their positions, vertices become
    v0..vk and edges e0..em in serialization order.
    """
    color = _refine_colors(t)
    classes = {}
    for v in sorted(color):
        classes.setdefault(color[v], []).append(v)
    class_list = [classes[c] for c in sorted(classes)]
    total = 1
    for cl in class_list:
        f = 1
        for i in range(2, len(cl) + 1):
            f *= i
        total *= f
    if total > _CANONICAL_PERM_CAP:
        raise RuntimeError(f"canonical labeling would branch over {total} orderings")

    best = None
    best_order = None
    for perm_combo in product(*[permutations(cl) for cl in class_list]):
        order = {}
        idx = 0
        for group in perm_combo:
            for v in group:
                order[v] = idx
                idx += 1
        key = _serialize(t, order)
        if best is None or key < best:
            best = key
            best_order = order

    vmap = {v: f"v{best_order[v]}" for v in best_order}
    # canonical edge ids in serialization order
    erecs = []
    for eid, u, v in t.graph.edges:
        iu, iv = best_order[u], best_order[v]
        s = t.slopes[eid]
        if iu == iv:
            rec = (iu, iv, min(s, tuple(-x for x in s)))
        elif iu < iv:
            rec = (iu, iv, s)
        else:
            rec = (iv, iu, tuple(-x for x in s))
        erecs.append((rec, eid))
    erecs.sort(key=lambda r: (r[0], r[1]))
    emap = {eid: f"e{i}" for i, (_, eid) in enumerate(erecs)}

    new_vertices = tuple(sorted(((vmap[v], w) for v, w in t.graph.vertices),
                                key=lambda x: int(x[0][1:])))
    new_edges = []
    for (rec, eid) in erecs:
        iu, iv, s = rec
        new_edges.append((emap[eid], f"v{iu}", f"v{iv}"))
    new_legs = tuple((f"l{i}", vmap[v]) for i, (lid, v) in enumerate(t.graph.legs))
    new_slopes = {}
    for i, (lid, _) in enumerate(t.graph.legs):
        new_slopes[f"l{i}"] = t.slopes[lid]
    for (rec, eid) in erecs:
        new_slopes[emap[eid]] = rec[2]
    canon = CombinatorialType(
        WeightedGraph(new_vertices, tuple(new_edges), new_legs), new_slopes, t.dim)
    return CanonicalForm(key=best, string=repr(best), vertex_map=vmap, edge_map=emap,
                         type=canon)


def canonical_string(t: CombinatorialType) -> str:
    return canonical_form(t).string


@dataclass(frozen=True)
class TypeIso:
    """Isomorphism of combinatorial types: vertex and edge bijections.

    Legs are fixed pointwise (the leg order is part of the data).
    """

    vertex_map: tuple  # sorted (old, new) pairs
    edge_map: tuple

    @staticmethod
    def make(vmap: dict, emap: dict) -> "TypeIso":
        return TypeIso(tuple(sorted(vmap.items())), tuple(sorted(emap.items())))

    def vdict(self):
        return dict(self.vertex_map)

    def edict(self):
        return dict(self.edge_map)

    def compose(self, other: "TypeIso") -> "TypeIso":
        """self after other (apply other first)."""
        ov, oe = other.vdict(), other.edict()
        sv, se = self.vdict(), self.edict()
        return TypeIso.make({k: sv[v] for k, v in ov.items()},
                            {k: se[e] for k, e in oe.items()})

    def invert(self) -> "TypeIso":
        return TypeIso.make({v: k for k, v in self.vertex_map},
                            {e: k for k, e in self.edge_map})


def is_type_isomorphism(t1: CombinatorialType, t2: CombinatorialType, iso: TypeIso) -> bool:
    vmap, emap = iso.vdict(), iso.edict()
    g1, g2 = t1.graph, t2.graph
    if sorted(vmap) != sorted(g1.vertex_ids()) or sorted(vmap.values()) != sorted(g2.vertex_ids()):
        return False
    if sorted(emap) != sorted(e for e, _, _ in g1.edges) or \
            sorted(emap.values()) != sorted(e for e, _, _ in g2.edges):
        return False
    w2 = dict(g2.vertices)
    for v, w in g1.vertices:
        if w2[vmap[v]] != w:
            return False
    if len(g1.legs) != len(g2.legs):
        return False
    for (l1, v1), (l2, v2) in zip(g1.legs, g2.legs):
        if vmap[v1] != v2 or t1.slopes[l1] != t2.slopes[l2]:
            return False
    ends2 = {e: (u, v) for e, u, v in g2.edges}
    for e, u, v in g1.edges:
        u2, v2 = ends2[emap[e]]
        s1, s2 = t1.slopes[e], t2.slopes[emap[e]]
        if (vmap[u], vmap[v]) == (u2, v2) and s1 == s2:
            continue
        if (vmap[u], vmap[v]) == (v2, u2) and s1 == tuple(-x for x in s2):
            continue
        return False
    return True


def automorphisms(t: CombinatorialType) -> list:
    """All isomorphisms t -> t fixing the legs pointwise.

    Backtracks over color-compatible vertex bijections, then enumerates all
    edge bijections within parallel slope classes.
    """
    color = _refine_colors(t)
    g = t.graph
    vs = sorted(g.vertex_ids())
    candidates = {v: [u for u in vs if color[u] == color[v]] for v in vs}
    legs_at = {}
    for lid, v in g.legs:
        legs_at.setdefault(v, []).append(lid)

    pair_edges = {}
    for e, u, v in g.edges:
        key = (min(u, v), max(u, v))
        pair_edges.setdefault(key, []).append(e)

    def slope_along(e, a, b):
        u, v = g.edge_ends(e)
        s = t.slopes[e]
        if (a, b) == (u, v):
            return s
        return tuple(-x for x in s)

    isos = []

    def extend(i, vmap):
        if i == len(vs):
            # vertex map fixed; check incidence counts, then enumerate edge maps
            groups = []
            for (a, b), edges in sorted(pair_edges.items()):
                ta, tb = vmap[a], vmap[b]
                tkey = (min(ta, tb), max(ta, tb))
                targets = pair_edges.get(tkey, [])
                if len(targets) != len(edges):
                    return
                if a == b:
                    bys = {}
                    for e in edges:
                        s = t.slopes[e]
                        bys.setdefault(min(s, tuple(-x for x in s)), []).append(e)
                    byt = {}
                    for e in targets:
                        s = t.slopes[e]
                        byt.setdefault(min(s, tuple(-x for x in s)), []).append(e)
                else:
                    bys = {}
                    for e in edges:
                        bys.setdefault(slope_along(e, a, b), []).append(e)
                    byt = {}
                    for e in targets:
                        byt.setdefault(slope_along(e, vmap[a], vmap[b]), []).append(e)
                if sorted((k, len(v)) for k, v in bys.items()) != \
                        sorted((k, len(v)) for k, v in byt.items()):
                    return
                for key in sorted(bys):
                    groups.append((sorted(bys[key]), sorted(byt[key])))
            for perm_combo in product(*[permutations(tgt) for _, tgt in groups]):
                emap = {}
                for (src, _), tgt_perm in zip(groups, perm_combo):
                    for e, e2 in zip(src, tgt_perm):
                        emap[e] = e2
                isos.append(TypeIso.make(dict(vmap), emap))
            return
        v = vs[i]
        for u in candidates[v]:
            if u in vmap.values():
                continue
            if sorted(legs_at.get(v, [])) != sorted(legs_at.get(u, [])):
                continue
            vmap[v] = u
            extend(i + 1, vmap)
            del vmap[v]

    extend(0, {})
    out = [iso for iso in isos if is_type_isomorphism(t, t, iso)]
    return sorted(out, key=lambda i: (i.vertex_map, i.edge_map))


# ---------------------------------------------------------------------------
# wall classification
# ---------------------------------------------------------------------------

class WallClassification(str, Enum):
    WEIGHTLESS_3VALENT = "weightless_3valent"
    WEIGHTLESS_ALMOST_3VALENT = "weightless_almost_3valent"
    OTHER = "other"


@dataclass(frozen=True)
class WallClass:
    classification: WallClassification
    four_valent_vertex: Optional[str] = None


def classify(t: CombinatorialType) -> WallClass:
    """Weightless 3-valent / weightless almost 3-valent / other."""
    g = t.graph
    if any(w != 0 for _, w in g.vertices):
        return WallClass(WallClassification.OTHER)
    valences = {v: g.valence(v) for v in g.vertex_ids()}
    four = [v for v, val in valences.items() if val == 4]
    three = [v for v, val in valences.items() if val == 3]
    if len(three) == len(valences):
        return WallClass(WallClassification.WEIGHTLESS_3VALENT)
    if len(four) == 1 and len(three) == len(valences) - 1:
        return WallClass(WallClassification.WEIGHTLESS_ALMOST_3VALENT, four[0])
    return WallClass(WallClassification.OTHER)


# ---------------------------------------------------------------------------
# contraction, adjacency, resolution
# ---------------------------------------------------------------------------

def contract_any_slope(t: CombinatorialType, edges) -> CombinatorialType:
    """Weighted contraction of an edge subset, regardless of slopes.

    This is the closure-limit operation (lengths of the contracted edges go
    to zero and their endpoints merge); contracting a loop deletes it and
    adds one to the weight of its vertex.  Genus is preserved.
    """
    edges = set(edges)
    g = t.graph
    known = {e for e, _, _ in g.edges}
    if not edges <= known:
        raise KeyError(f"unknown edges {sorted(edges - known)}")
    parent = {v: v for v in g.vertex_ids()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, u, v in g.edges:
        if e in edges and u != v:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    comp = {}
    for v in g.vertex_ids():
        comp.setdefault(find(v), []).append(v)
    name = {r: min(vs) for r, vs in comp.items()}

    weights = {}
    for r, vs in comp.items():
        w = sum(dict(g.vertices)[v] for v in vs)
        internal = sum(1 for e, u, v in g.edges
                       if e in edges and find(u) == r and find(v) == r)
        w += internal - (len(vs) - 1)  # first Betti number of the contracted piece
        weights[name[r]] = w

    new_edges, new_slopes = [], {}
    for e, u, v in g.edges:
        if e in edges:
            continue
        new_edges.append((e, name[find(u)], name[find(v)]))
        new_slopes[e] = t.slopes[e]
    new_legs = tuple((lid, name[find(v)]) for lid, v in g.legs)
    for lid, _ in g.legs:
        new_slopes[lid] = t.slopes[lid]
    graph = WeightedGraph(tuple(sorted(weights.items())), tuple(sorted(new_edges)), new_legs)
    return CombinatorialType(graph, new_slopes, t.dim)


def contract(t: CombinatorialType, edges) -> CombinatorialType:
    """Weighted contraction of zero-slope edges (the datum contraction).

    Nonzero-slope edges are refused here; the closure-limit variant that
    merges endpoint positions is contract_any_slope.
    """
    for e in edges:
        if any(x != 0 for x in t.slopes[e]):
            raise NonzeroSlopeContraction(f"edge {e!r} has nonzero slope")
    return contract_any_slope(t, edges)


def is_adjacent(sub: CombinatorialType, super_: CombinatorialType) -> bool:
    """Whether some edge subset of ``super_`` contracts onto ``sub`` up to iso.

    Uses the closure-limit contraction (any slopes); the empty subset makes
    every type adjacent to itself.
    """
    if len(sub.graph.edges) > len(super_.graph.edges):
        return False
    want = canonical_form(sub).key
    need = len(super_.graph.edges) - len(sub.graph.edges)
    eids = sorted(e for e, _, _ in super_.graph.edges)
    from itertools import combinations
    for subset in combinations(eids, need):
        if canonical_form(contract_any_slope(super_, subset)).key == want:
            return True
    return False


def _fresh_id(base: str, taken) -> str:
    cand = base
    while cand in taken:
        cand += "'"
    return cand


def resolve_4valent(t: CombinatorialType, v: str) -> list:
    """The <= 3 weightless 3-valent resolutions of a 4-valent vertex.

    Splits the four star items at ``v`` into the three pairings, joins the
    halves by a new edge whose slope is forced by balancing, and
    deduplicates up to isomorphism.
    """
    cls = classify(t)
    if cls.classification != WallClassification.WEIGHTLESS_ALMOST_3VALENT or \
            cls.four_valent_vertex != v:
        raise NotAlmost3Valent(
            f"type is {cls.classification.value} with 4-valent vertex {cls.four_valent_vertex!r}")
    g = t.graph
    items = sorted(g.star_items(v))
    assert len(items) == 4
    taken_v = set(g.vertex_ids())
    taken_e = {e for e, _, _ in g.edges}
    va = _fresh_id(f"{v}a", taken_v)
    vb = _fresh_id(f"{v}b", taken_v | {va})
    new_edge = _fresh_id("eres", taken_e)

    out = {}
    for first in ((0, 1), (0, 2), (0, 3)):
        side_a = set(first)
        assign = {i: (va if i in side_a else vb) for i in range(4)}
        vertices = tuple(sorted([(x, w) for x, w in g.vertices if x != v] +
                                [(va, 0), (vb, 0)]))
        edges = []
        slopes = {}
        for e, a, b in g.edges:
            if a != v and b != v:
                edges.append((e, a, b))
                slopes[e] = t.slopes[e]
                continue
            fwd = items.index(("edge", e, True)) if ("edge", e, True) in items else None
            rev = items.index(("edge", e, False)) if ("edge", e, False) in items else None
            na = assign[fwd] if a == v and fwd is not None else a
            nb = assign[rev] if b == v and rev is not None else b
            edges.append((e, na, nb))
            slopes[e] = t.slopes[e]
        legs = []
        for lid, x in g.legs:
            if x == v:
                pos = items.index(("leg", lid))
                legs.append((lid, assign[pos]))
            else:
                legs.append((lid, x))
            slopes[lid] = t.slopes[lid]
        total_a = tuple(
            sum(t.slope_of_item(items[i])[c] for i in side_a) for c in range(t.dim))
        slopes[new_edge] = tuple(-x for x in total_a)  # slope along va -> vb
        edges.append((new_edge, va, vb))
        res = CombinatorialType(
            WeightedGraph(vertices, tuple(sorted(edges)), tuple(legs)), slopes, t.dim)
        assert check_balanced(res).ok
        assert classify(res).classification == WallClassification.WEIGHTLESS_3VALENT
        cf = canonical_form(res)
        out.setdefault(cf.string, res)
    result = [out[k] for k in sorted(out)]
    assert 1 <= len(result) <= 3
    return result


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _integer_box_solutions(particular, kernel, bound):
    """All integer vectors particular + sum(c_i * kernel_i) within |x_e| <= bound.

    Bounds for each coefficient come from exact LP relaxations, so the
    recursion is complete; kernel ranks here are the first Betti number of
    the graph, which is tiny.
    """
    ne = len(particular)
    if not kernel:
        return [tuple(particular)] if all(abs(x) <= bound for x in particular) else []
    sols = []

    def recurse(fixed_coeffs, base):
        level = len(fixed_coeffs)
        if level == len(kernel):
            if all(abs(x) <= bound for x in base):
                sols.append(tuple(base))
            return
        # optimize c_level over the LP relaxation of the remaining freedom
        nfree = len(kernel) - level
        eqs = []
        ineqs = []
        for e in range(ne):
            coef = tuple(kernel[level + j][e] for j in range(nfree))
            ineqs.append((coef, -bound - base[e]))                      # base + K c >= -B
            ineqs.append((tuple(-x for x in coef), base[e] - bound))    # -(base + K c) >= -B
        lo_obj = tuple(-1 if j == 0 else 0 for j in range(nfree))
        hi_obj = tuple(1 if j == 0 else 0 for j in range(nfree))
        status_hi, _, val_hi = lp_maximize(hi_obj, eqs, ineqs, [False] * nfree)
        status_lo, _, val_lo = lp_maximize(lo_obj, eqs, ineqs, [False] * nfree)
        if status_hi != 'optimal' or status_lo != 'optimal':
            return  # infeasible box (or unbounded, impossible for independent kernels)
        import math
        lo = math.ceil(-val_lo)
        hi = math.floor(val_hi)
        for c in range(lo, hi + 1):
            new_base = [b + c * k for b, k in zip(base, kernel[level])]
            recurse(fixed_coeffs + [c], new_base)

    recurse([], list(particular))
    return sols


def enumerate_types(g: int, n: int, degree, max_edges: int, dim: Optional[int] = None):
    """All stable balanced types with the given invariants, up to isomorphism.

    Extended degree is n zero legs followed by ``degree`` (nonzero slopes);
    only types with nonempty stratum are returned, in canonical order.
    Edge slopes are bounded coordinatewise by the total absolute leg degree
    (any type with a nonempty stratum obeys the bound: positions provide a
    potential per coordinate, so every edge slope is a flow value across a
    potential cut and is at most the total source strength).
    """
    degree = tuple(tuple(int(x) for x in s) for s in degree)
    if dim is None:
        if not degree:
            raise ValueError("dim is required when the degree is empty")
        dim = len(degree[0])
    for s in degree:
        if len(s) != dim:
            raise ValueError("degree slopes of mixed dimension")
        if all(x == 0 for x in s):
            raise ValueError("degree must consist of nonzero slopes")
    ext = tuple((0,) * dim for _ in range(n)) + degree
    L = len(ext)
    bound = [sum(abs(s[c]) for s in ext) for c in range(dim)]

    found = {}
    max_nv = 2 * g - 2 + L
    for nv in range(1, min(max_nv, max_edges + 1) + 1 if max_nv >= 1 else 0):
        vids = [f"v{i}" for i in range(nv)]
        pairs = [(i, j) for i in range(nv) for j in range(i, nv)]
        for ne in range(max(nv - 1, 0), min(max_edges, nv - 1 + g) + 1):
            for emulti in combinations_with_replacement(pairs, ne):
                edges = tuple((f"e{k}", f"v{i}", f"v{j}") for k, (i, j) in enumerate(emulti))
                wsum = g - (ne - nv + 1)
                if wsum < 0:
                    continue
                probe = WeightedGraph(tuple((v, 0) for v in vids), edges, ())
                if not probe.is_connected():
                    continue
                end_count = {v: 0 for v in vids}
                for _, u, v in edges:
                    end_count[u] += 1
                    end_count[v] += 1
                for weights in _compositions(wsum, nv):
                    deficits = sum(
                        max(0, 3 - 2 * w - end_count[v])
                        for v, w in zip(vids, weights))
                    if deficits > L:
                        continue
                    for assign in product(range(nv), repeat=L):
                        legs = tuple((f"l{i}", vids[a]) for i, a in enumerate(assign))
                        graph = WeightedGraph(
                            tuple(zip(vids, weights)), edges, legs)
                        if not is_stable(graph):
                            continue
                        for t in _balanced_types(graph, ext, dim, bound):
                            cf = canonical_form(t)
                            if cf.string in found:
                                continue
                            if stratum(cf.type).is_empty():
                                continue
                            found[cf.string] = cf.type
    return [found[k] for k in sorted(found)]


def _balanced_types(graph: WeightedGraph, ext, dim, bound):
    """Slope assignments making ``graph`` balanced with the given leg slopes."""
    non_loops = [e for e, u, v in graph.edges if u != v]
    loops = [e for e, u, v in graph.edges if u == v]
    vids = sorted(graph.vertex_ids())
    vindex = {v: i for i, v in enumerate(vids)}
    a_rows = []
    for v in vids:
        row = [0] * len(non_loops)
        for k, e in enumerate(non_loops):
            u, w = graph.edge_ends(e)
            if u == v:
                row[k] += 1
            if w == v:
                row[k] -= 1
        a_rows.append(tuple(row))
    legs_at = {}
    for i, (lid, v) in enumerate(graph.legs):
        legs_at.setdefault(v, []).append(i)

    per_coord = []
    kernel = integer_kernel(a_rows, len(non_loops)) if non_loops else []
    for c in range(dim):
        b = tuple(-sum(ext[i][c] for i in legs_at.get(v, ())) for v in vids)
        if not non_loops:
            if any(x != 0 for x in b):
                return
            per_coord.append([()])
            continue
        p = integer_solve(a_rows, b)
        if p is None:
            return
        sols = _integer_box_solutions(p, kernel, bound[c])
        if not sols:
            return
        per_coord.append(sorted(sols))

    leg_slopes = {f"l{i}": ext[i] for i in range(len(ext))}
    for combo in product(*per_coord):
        slopes = dict(leg_slopes)
        for k, e in enumerate(non_loops):
            slopes[e] = tuple(combo[c][k] for c in range(dim))
        for e in loops:
            slopes[e] = (0,) * dim  # nonzero loop slopes force empty strata
        yield CombinatorialType(graph, slopes, dim)


# ---------------------------------------------------------------------------
# wall graph
# ---------------------------------------------------------------------------

@dataclass
class WallGraph:
    nodes: tuple       # (node id, CombinatorialType)
    walls: tuple       # (wall id, CombinatorialType, tuple of incident node ids)
    node_key: dict     # canonical key -> node id

    def node_ids(self):
        return [nid for nid, _ in self.nodes]

    def node_type(self, nid):
        for i, t in self.nodes:
            if i == nid:
                return t
        raise SeedNotInGraph(f"unknown node {nid!r}")

    def incident_walls(self, nid):
        return [wid for wid, _, res in self.walls if nid in res]

    def wall_nodes(self, wid):
        for i, _, res in self.walls:
            if i == wid:
                return res
        raise SeedNotInGraph(f"unknown wall {wid!r}")


def wall_graph(types) -> WallGraph:
    """Node/wall incidence graph of weightless 3-valent types.

    Walls are the almost 3-valent types obtained by contracting one
    non-loop edge of a node; a wall's incidences are the resolutions that
    appear in the node set.
    """
    if not types:
        return WallGraph((), (), {})
    invariants = set()
    for t in types:
        if classify(t).classification != WallClassification.WEIGHTLESS_3VALENT:
            raise MixedInvariants("wall graph nodes must be weightless and 3-valent")
        invariants.add((genus(t.graph), t.dim, extended_degree(t)))
    if len(invariants) > 1:
        raise MixedInvariants(f"mixed invariants: {sorted(invariants)}")

    canon_nodes = {}
    for t in types:
        cf = canonical_form(t)
        canon_nodes.setdefault(cf.string, cf.type)
    node_list = [canon_nodes[k] for k in sorted(canon_nodes)]
    node_ids = {canonical_form(t).string: f"n{i}" for i, t in enumerate(node_list)}

    walls = {}
    for t in node_list:
        for e, u, v in t.graph.edges:
            if u == v:
                continue
            w = contract_any_slope(t, {e})
            cls = classify(w)
            if cls.classification != WallClassification.WEIGHTLESS_ALMOST_3VALENT:
                continue
            cf = canonical_form(w)
            if cf.string in walls:
                continue
            res = resolve_4valent(cf.type, classify(cf.type).four_valent_vertex)
            incident = sorted({node_ids[canonical_form(r).string]
                               for r in res if canonical_form(r).string in node_ids})
            walls[cf.string] = (cf.type, tuple(incident))
    wall_list = tuple(
        (f"w{i}", walls[k][0], walls[k][1]) for i, k in enumerate(sorted(walls)))
    nodes = tuple((node_ids[canonical_form(t).string], t) for t in node_list)
    return WallGraph(nodes=nodes, walls=wall_list,
                     node_key={canonical_form(t).string: nid for nid, t in nodes})


def connected_through_walls(wg: WallGraph, t1: CombinatorialType, t2: CombinatorialType):
    """(connected, path) where the path alternates node, wall, node ids."""
    k1 = canonical_form(t1).string
    k2 = canonical_form(t2).string
    if k1 not in wg.node_key or k2 not in wg.node_key:
        raise SeedNotInGraph("queried type is not a node of the wall graph")
    start, goal = wg.node_key[k1], wg.node_key[k2]
    if start == goal:
        return True, (start,)
    prev = {start: None}
    queue = [start]
    while queue:
        nid = queue.pop(0)
        for wid in wg.incident_walls(nid):
            for other in wg.wall_nodes(wid):
                if other not in prev:
                    prev[other] = (nid, wid)
                    if other == goal:
                        path = [other]
                        cur = other
                        while prev[cur] is not None:
                            pn, pw = prev[cur]
                            path.extend([pw, pn])
                            cur = pn
                        return True, tuple(reversed(path))
                    queue.append(other)
    return False, None
