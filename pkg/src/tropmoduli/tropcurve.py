"""Abstract and parameterized tropical curves.

A tropical curve is a connected weighted multigraph with positive edge
lengths and an ordered list of legs (half-edges of infinite length).  A
combinatorial type adds an integer slope vector per oriented edge and leg;
a parameterized curve adds vertex positions satisfying the edge relation
position(v) - position(u) = length(e) * slope(u -> v) exactly.

Slopes are stored once per edge, along the stored (u, v) orientation; the
reverse orientation is the negation.  Legs are always oriented away from
their vertex.  Loops contribute both orientations to the star of their
vertex, so they never affect balancing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CycleInconsistency, Disconnected, UnbalancedType, Unstabilizable
from .exact_linalg import frac, ivec, vec, vec_add, vec_is_zero, vec_scale, vec_sub


@dataclass(frozen=True)
class WeightedGraph:
    """Weighted multigraph with ordered legs.

    vertices: ((id, weight), ...); edges: ((id, u, v), ...) with loops
    allowed; legs: ((id, vertex), ...) where the tuple order is the leg
    order and is significant.
    """

    vertices: tuple
    edges: tuple
    legs: tuple

    def __post_init__(self):
        ids = [v for v, _ in self.vertices]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate vertex ids")
        if not ids:
            raise ValueError("a graph needs at least one vertex")
        vset = set(ids)
        eids = [e for e, _, _ in self.edges]
        if len(set(eids)) != len(eids):
            raise ValueError("duplicate edge ids")
        for e, u, v in self.edges:
            if u not in vset or v not in vset:
                raise ValueError(f"edge {e!r} has unknown endpoint")
        lids = [l for l, _ in self.legs]
        if len(set(lids)) != len(lids):
            raise ValueError("duplicate leg ids")
        for l, v in self.legs:
            if v not in vset:
                raise ValueError(f"leg {l!r} attached to unknown vertex")

    def weight(self, v) -> int:
        for vid, w in self.vertices:
            if vid == v:
                return w
        raise KeyError(v)

    def vertex_ids(self):
        return [v for v, _ in self.vertices]

    def edge_ends(self, e):
        for eid, u, v in self.edges:
            if eid == e:
                return u, v
        raise KeyError(e)

    def star_items(self, v):
        """Oriented edge-ends and legs with tail v, as hashable items.

        Edge items are ("edge", id, forward) where forward means the stored
        orientation starts at v; a loop yields both items.
        """
        items = []
        for eid, a, b in self.edges:
            if a == v:
                items.append(("edge", eid, True))
            if b == v:
                items.append(("edge", eid, False))
        for lid, a in self.legs:
            if a == v:
                items.append(("leg", lid))
        return items

    def valence(self, v) -> int:
        return len(self.star_items(v))

    def is_connected(self) -> bool:
        ids = self.vertex_ids()
        adj = {v: set() for v in ids}
        for _, u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen = set()
        stack = [ids[0]]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x])
        return len(seen) == len(ids)


class CombinatorialType:
    """Weighted leg-ordered graph with a slope vector per edge and leg."""

    def __init__(self, graph: WeightedGraph, slopes: dict, dim: int):
        self.graph = graph
        self.dim = dim
        self.slopes = {}
        for eid, _, _ in graph.edges:
            if eid not in slopes:
                raise ValueError(f"missing slope for edge {eid!r}")
        for lid, _ in graph.legs:
            if lid not in slopes:
                raise ValueError(f"missing slope for leg {lid!r}")
        for key, s in slopes.items():
            s = ivec(s)
            if len(s) != dim:
                raise ValueError(f"slope for {key!r} has wrong dimension")
            self.slopes[key] = s

    def __eq__(self, other):
        return isinstance(other, CombinatorialType) and \
            self.graph == other.graph and self.dim == other.dim and self.slopes == other.slopes

    def __repr__(self):
        return f"CombinatorialType({len(self.graph.vertices)}v/{len(self.graph.edges)}e/{len(self.graph.legs)}l, dim={self.dim})"

    def slope_of_item(self, item):
        """Slope oriented away from the item's tail vertex."""
        if item[0] == "leg":
            return self.slopes[item[1]]
        _, eid, forward = item
        s = self.slopes[eid]
        return s if forward else tuple(-x for x in s)


@dataclass
class TropicalCurve:
    graph: WeightedGraph
    lengths: dict  # edge id -> positive Fraction

    def __post_init__(self):
        for eid, _, _ in self.graph.edges:
            if eid not in self.lengths:
                raise ValueError(f"missing length for edge {eid!r}")
            self.lengths[eid] = frac(self.lengths[eid])
            if self.lengths[eid] <= 0:
                raise ValueError(f"length of {eid!r} must be positive")


class ParameterizedTropicalCurve:
    """Tropical curve plus vertex positions realizing the slopes exactly."""

    def __init__(self, curve: TropicalCurve, positions: dict, slopes: dict, dim: int):
        self.curve = curve
        self.dim = dim
        self.type = CombinatorialType(curve.graph, slopes, dim)
        self.positions = {v: vec(p) for v, p in positions.items()}
        for v in curve.graph.vertex_ids():
            if v not in self.positions:
                raise ValueError(f"missing position for vertex {v!r}")
            if len(self.positions[v]) != dim:
                raise ValueError(f"position of {v!r} has wrong dimension")

    @property
    def graph(self):
        return self.curve.graph

    def edge_relation_violations(self):
        """Edges where position(v) - position(u) != length * slope(u->v)."""
        bad = []
        for eid, u, v in self.graph.edges:
            expect = vec_scale(self.curve.lengths[eid], vec(self.type.slopes[eid]))
            if vec_sub(self.positions[v], self.positions[u]) != expect:
                bad.append(eid)
        return bad

    def is_valid(self) -> bool:
        return not self.edge_relation_violations() and check_balanced(self.type).ok


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def genus(g: WeightedGraph) -> int:
    """|E| - |V| + 1 + total weight, for connected graphs."""
    if not g.is_connected():
        raise Disconnected("genus requires a connected graph")
    return len(g.edges) - len(g.vertices) + 1 + sum(w for _, w in g.vertices)


def is_stable(g: WeightedGraph) -> bool:
    """Every vertex satisfies |Star(v)| + 2 weight(v) >= 3 (a loop counts twice)."""
    return all(g.valence(v) + 2 * w >= 3 for v, w in g.vertices)


@dataclass
class BalanceReport:
    failures: tuple  # ((vertex id, deficit vector), ...)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_balanced(t: CombinatorialType) -> BalanceReport:
    """Vertex-wise balancing: the outgoing slopes at each vertex sum to zero."""
    failures = []
    for v, _ in t.graph.vertices:
        total = (Fraction(0),) * t.dim
        for item in t.graph.star_items(v):
            total = vec_add(total, vec(t.slope_of_item(item)))
        if not vec_is_zero(total):
            failures.append((v, tuple(int(x) for x in total)))
    return BalanceReport(tuple(failures))


def extended_degree(t: CombinatorialType) -> tuple:
    """Leg slopes in leg order."""
    return tuple(t.slopes[lid] for lid, _ in t.graph.legs)


@dataclass(frozen=True)
class Degree:
    extended: tuple
    reduced: tuple

    @staticmethod
    def of_type(t: CombinatorialType) -> "Degree":
        ext = extended_degree(t)
        return Degree(ext, tuple(s for s in ext if any(x != 0 for x in s)))


def realize(t: CombinatorialType, lengths: dict, root_position,
            root=None) -> ParameterizedTropicalCurve:
    """Propagate positions from the root along a spanning tree.

    Fails with CycleInconsistency when a non-tree edge (or a loop with
    nonzero slope) closes inconsistently; the witness cycle is attached to
    the exception.
    """
    report = check_balanced(t)
    if not report.ok:
        raise UnbalancedType(f"unbalanced at {[v for v, _ in report.failures]}")
    curve = TropicalCurve(t.graph, dict(lengths))
    ids = sorted(t.graph.vertex_ids())
    if root is None:
        root = ids[0]
    positions = {root: vec(root_position)}
    tree_path = {root: ()}  # vertex -> edge ids from root
    queue = [root]
    non_tree = []
    visited_edges = set()
    while queue:
        u = queue.pop(0)
        for item in sorted(t.graph.star_items(u)):
            if item[0] != "edge":
                continue
            _, eid, forward = item
            if eid in visited_edges:
                continue
            a, b = t.graph.edge_ends(eid)
            other = b if u == a and forward else a
            if a == b:  # loop
                visited_edges.add(eid)
                if not vec_is_zero(vec(t.slopes[eid])):
                    raise CycleInconsistency(
                        f"loop {eid!r} has nonzero slope", cycle=(eid,))
                continue
            if other in positions:
                non_tree.append(eid)
                visited_edges.add(eid)
                continue
            visited_edges.add(eid)
            step = vec_scale(curve.lengths[eid], vec(t.slope_of_item(item)))
            positions[other] = vec_add(positions[u], step)
            tree_path[other] = tree_path[u] + (eid,)
            queue.append(other)
    if len(positions) != len(ids):
        raise Disconnected("type graph is not connected")
    for eid in non_tree:
        a, b = t.graph.edge_ends(eid)
        expect = vec_scale(curve.lengths[eid], vec(t.slopes[eid]))
        if vec_sub(positions[b], positions[a]) != expect:
            cycle = tree_path[a] + (eid,) + tuple(reversed(tree_path[b]))
            raise CycleInconsistency(
                f"edge {eid!r} closes a cycle with nonzero slope sum", cycle=cycle)
    return ParameterizedTropicalCurve(curve, positions, dict(t.slopes), t.dim)


def type_of(p: ParameterizedTropicalCurve) -> CombinatorialType:
    """Forget lengths and positions."""
    return CombinatorialType(p.graph, dict(p.type.slopes), p.dim)


# ---------------------------------------------------------------------------
# stabilization
# ---------------------------------------------------------------------------

@dataclass
class StabilizationResult:
    graph: WeightedGraph
    slopes: dict
    edge_chains: dict       # surviving edge id -> tuple of original edge ids
    kept_vertices: tuple


def stabilize_type(t: CombinatorialType) -> StabilizationResult:
    """Prune and smooth a type until stable, tracking edge provenance.

    Rules (applied deterministically, smallest vertex id first):
      - prune a weight-0 leg-free vertex of valence 1 whose edge has slope 0;
      - smooth a weight-0 leg-free vertex with exactly two edge-ends on two
        distinct edges whose outgoing slopes cancel, concatenating them.
    Vertices carrying legs are never smoothed (legs are marked points).
    Raises Unstabilizable if the result is empty or still unstable.
    """
    weights = {v: w for v, w in t.graph.vertices}
    ends = {e: (u, v) for e, u, v in t.graph.edges}
    slopes = {e: t.slopes[e] for e in ends}
    leg_slopes = {l: t.slopes[l] for l, _ in t.graph.legs}
    legs_at = {}
    for lid, v in t.graph.legs:
        legs_at.setdefault(v, []).append(lid)
    chains = {e: (e,) for e in ends}

    def incident(v):
        out = []
        for e, (a, b) in ends.items():
            if a == v:
                out.append((e, True))
            if b == v:
                out.append((e, False))
        return out

    while True:
        acted = False
        for v in sorted(weights):
            if weights[v] != 0 or v in legs_at:
                continue
            inc = incident(v)
            if len(inc) == 1:
                e, forward = inc[0]
                if all(x == 0 for x in slopes[e]):
                    del ends[e], slopes[e], chains[e]
                    del weights[v]
                    acted = True
                    break
            elif len(inc) == 2:
                (e1, f1), (e2, f2) = inc
                if e1 == e2:
                    continue  # a loop; smoothing does not apply
                s1 = slopes[e1] if f1 else tuple(-x for x in slopes[e1])
                s2 = slopes[e2] if f2 else tuple(-x for x in slopes[e2])
                if any(x + y != 0 for x, y in zip(s1, s2)):
                    continue
                a = ends[e1][1] if f1 else ends[e1][0]
                b = ends[e2][1] if f2 else ends[e2][0]
                new_id = min(e1, e2)
                chain = chains[e1] + chains[e2]
                for e in (e1, e2):
                    del ends[e], slopes[e], chains[e]
                ends[new_id] = (a, b)
                slopes[new_id] = s2  # slope along a -> b through the old vertex
                chains[new_id] = chain
                del weights[v]
                acted = True
                break
        if not acted:
            break

    if not weights:
        raise Unstabilizable("stabilization emptied the curve")
    graph = WeightedGraph(
        vertices=tuple(sorted((v, w) for v, w in weights.items())),
        edges=tuple(sorted((e, u, v) for e, (u, v) in ends.items())),
        legs=t.graph.legs,
    )
    if not is_stable(graph):
        bad = [v for v, w in graph.vertices if graph.valence(v) + 2 * w < 3]
        raise Unstabilizable(f"no stable model: vertices {bad} cannot be removed")
    all_slopes = dict(slopes)
    all_slopes.update(leg_slopes)
    return StabilizationResult(graph=graph, slopes=all_slopes,
                               edge_chains=dict(chains), kept_vertices=tuple(sorted(weights)))


def stabilize(p: ParameterizedTropicalCurve) -> ParameterizedTropicalCurve:
    """Stabilization of a parameterized curve; positions are restricted,
    merged edges get the sum of the lengths of their chain."""
    res = stabilize_type(p.type)
    lengths = {e: sum((p.curve.lengths[o] for o in chain), Fraction(0))
               for e, chain in res.edge_chains.items()}
    positions = {v: p.positions[v] for v in res.kept_vertices}
    curve = TropicalCurve(res.graph, lengths)
    return ParameterizedTropicalCurve(curve, positions, res.slopes, p.dim)
