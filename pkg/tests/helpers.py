"""Shared builders for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from tropmoduli.family import AffineFn, AffineMapN, Contraction, FaceCurveData, FamilyDatum
from tropmoduli.polyhedral import (
    Face,
    FaceInclusion,
    PIAMap,
    Polyhedron,
    PolyhedralComplex,
    SemistablePairData,
    Stratum,
)
from tropmoduli.tropcurve import CombinatorialType, WeightedGraph


def point_complex(fid="P0"):
    return PolyhedralComplex([Face(id=fid, rank=0, chart=Polyhedron(0))], [])


def segment_complex(length=1, ids=("V0", "V1", "E")):
    v0, v1, e = ids
    seg = Polyhedron(1, [((1,), 0), ((-1,), -Fraction(length))])
    pt = Polyhedron(0)
    faces = [Face(v0, 0, pt), Face(v1, 0, pt), Face(e, 1, seg)]
    incs = [
        FaceInclusion(sub=v0, super=e, linear=((),), offset=(Fraction(0),)),
        FaceInclusion(sub=v1, super=e, linear=((),), offset=(Fraction(length),)),
    ]
    return PolyhedralComplex(faces, incs)


def fan_complex(k, origin="O"):
    """k abstract rays glued at a common vertex."""
    ray = lambda: Polyhedron(1, [((1,), 0)])
    faces = [Face(origin, 0, Polyhedron(0))]
    incs = []
    for i in range(k):
        rid = f"R{i}"
        faces.append(Face(rid, 1, ray()))
        incs.append(FaceInclusion(sub=origin, super=rid, linear=((),), offset=(Fraction(0),)))
    return PolyhedralComplex(faces, incs)


def fan_map(c, directions):
    """PIAMap on a fan: ray i maps with derivative directions[i], origin to 0."""
    dim = len(directions[0]) if directions else 2
    per_face = {"O": (tuple(() for _ in range(dim)), (Fraction(0),) * dim)}
    for i, d in enumerate(directions):
        per_face[f"R{i}"] = (tuple((x,) for x in d), (Fraction(0),) * dim)
    return PIAMap(source=c, target_dim=dim, per_face=per_face)


def quadrant_complex():
    pt = Polyhedron(0)
    ray = Polyhedron(1, [((1,), 0)])
    quad = Polyhedron(2, [((1, 0), 0), ((0, 1), 0)])
    faces = [Face("O", 0, pt), Face("X", 1, ray), Face("Y", 1, ray), Face("Q", 2, quad)]
    incs = [
        FaceInclusion("O", "X", ((),), (Fraction(0),)),
        FaceInclusion("O", "Y", ((),), (Fraction(0),)),
        FaceInclusion("O", "Q", ((), ()), (Fraction(0), Fraction(0))),
        FaceInclusion("X", "Q", ((1,), (0,)), (Fraction(0), Fraction(0))),
        FaceInclusion("Y", "Q", ((0,), (1,)), (Fraction(0), Fraction(0))),
    ]
    return PolyhedralComplex(faces, incs)


def segment_pair_data(length=1):
    return SemistablePairData(
        vertical_components=("D0", "D1"),
        horizontal_components=(),
        strata=(
            Stratum("S01", ("D0", "D1"), (), Fraction(length)),
            Stratum("T0", ("D0",), (), Fraction(length)),
            Stratum("T1", ("D1",), (), Fraction(length)),
        ),
        order=(("S01", "T0"), ("S01", "T1")),
    )


def ray_pair_data():
    return SemistablePairData(
        vertical_components=("D0",),
        horizontal_components=("H0",),
        strata=(
            Stratum("S", ("D0",), ("H0",), Fraction(1)),
            Stratum("T", ("D0",), (), Fraction(1)),
        ),
        order=(("S", "T"),),
    )


def triangle_pair_data(length=1):
    l = Fraction(length)
    return SemistablePairData(
        vertical_components=("D0", "D1", "D2"),
        horizontal_components=(),
        strata=(
            Stratum("Sall", ("D0", "D1", "D2"), (), l),
            Stratum("S01", ("D0", "D1"), (), l),
            Stratum("S02", ("D0", "D2"), (), l),
            Stratum("S12", ("D1", "D2"), (), l),
            Stratum("T0", ("D0",), (), l),
            Stratum("T1", ("D1",), (), l),
            Stratum("T2", ("D2",), (), l),
        ),
        order=(
            ("Sall", "S01"), ("Sall", "S02"), ("Sall", "S12"),
            ("S01", "T0"), ("S01", "T1"),
            ("S02", "T0"), ("S02", "T2"),
            ("S12", "T1"), ("S12", "T2"),
        ),
    )


def random_pair_data(rng: random.Random, max_components=5, max_strata=12):
    """A random valid SemistablePairData built from a simplicial-complex model.

    Maximal supports are random subsets of verticals with horizontal
    decorations; strata are all sub-supports, merged globally by support,
    so the exactly-one-cover condition holds by construction.  Lengths are
    unified along the comparability classes forced by shared vertical pairs.
    """
    nv = rng.randint(1, max(1, max_components - 1))
    nh = rng.randint(0, max_components - nv)
    verticals = tuple(f"D{i}" for i in range(nv))
    horizontals = tuple(f"H{i}" for i in range(nh))
    supports = set()
    used_verticals = set()
    for _ in range(rng.randint(1, 3)):
        vs = set(rng.sample(verticals, rng.randint(1, nv)))
        if used_verticals and not vs & used_verticals:
            vs.add(rng.choice(sorted(used_verticals)))  # keep the skeleton connected
        used_verticals |= vs
        hs = frozenset(h for h in horizontals if rng.random() < 0.4)
        supports.add((frozenset(vs), hs))
    # close under sub-supports (nonempty vertical part)
    closed = set()
    for vs, hs in supports:
        vlist = sorted(vs)
        hlist = sorted(hs)
        for vmask in range(1, 2 ** len(vlist)):
            sub_v = frozenset(v for i, v in enumerate(vlist) if vmask >> i & 1)
            for hmask in range(2 ** len(hlist)):
                sub_h = frozenset(h for i, h in enumerate(hlist) if hmask >> i & 1)
                closed.add((sub_v, sub_h))
    closed = sorted(closed, key=lambda s: (sorted(s[0]), sorted(s[1])))
    if len(closed) > max_strata:
        return None
    ids = {}
    for i, sup in enumerate(closed):
        ids[sup] = f"S{i}"
    order = []
    for a in closed:
        for b in closed:
            if a != b and b[0] <= a[0] and b[1] <= a[1]:
                order.append((ids[a], ids[b]))
    # unify lengths along comparable pairs sharing >= 2 verticals
    parent = {sup: sup for sup in closed}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for a in closed:
        for b in closed:
            if a != b and b[0] <= a[0] and b[1] <= a[1] and len(b[0]) >= 2:
                union(a, b)
    lengths = {}
    strata = []
    for sup in closed:
        root = find(sup)
        if root not in lengths:
            lengths[root] = Fraction(rng.randint(1, 6), rng.randint(1, 4))
        strata.append(Stratum(ids[sup], tuple(sorted(sup[0])), tuple(sorted(sup[1])),
                              lengths[root]))
    return SemistablePairData(verticals, horizontals, tuple(strata), tuple(order))


# ---------------------------------------------------------------------------
# family fixtures: the 4-valent cross wall and its resolutions
# ---------------------------------------------------------------------------

CROSS_DEGREE = ((1, 0), (0, 1), (-1, 0), (0, -1))


def cross_type():
    g = WeightedGraph((("v", 0),), (),
                      (("l0", "v"), ("l1", "v"), ("l2", "v"), ("l3", "v")))
    return CombinatorialType(
        g, {"l0": (1, 0), "l1": (0, 1), "l2": (-1, 0), "l3": (0, -1)}, 2)


def resolution_type(partner: int):
    """Resolution of the cross pairing leg 0 with leg ``partner`` (1, 2 or 3)."""
    slopes = dict(zip(("l0", "l1", "l2", "l3"), CROSS_DEGREE))
    side_a = {"l0", f"l{partner}"}
    legs = tuple((l, "va" if l in side_a else "vb") for l in ("l0", "l1", "l2", "l3"))
    total_a = tuple(sum(slopes[l][c] for l in sorted(side_a)) for c in range(2))
    slopes["e"] = tuple(-x for x in total_a)
    g = WeightedGraph((("va", 0), ("vb", 0)), (("e", "va", "vb"),), legs)
    return CombinatorialType(g, slopes, 2)


def const_positionN(values, rank):
    return AffineMapN(tuple((0,) * rank for _ in values), tuple(Fraction(v) for v in values))


def point_family():
    base = point_complex()
    g = WeightedGraph((("v", 0),), (), (("l0", "v"), ("l1", "v"), ("l2", "v")))
    t = CombinatorialType(g, {"l0": (1, 0), "l1": (0, 1), "l2": (-1, -1)}, 2)
    data = FaceCurveData(type=t, lengths={}, positions={"v": const_positionN((0, 0), 0)})
    return FamilyDatum(base=base, dim=2,
                       extended_degree=((1, 0), (0, 1), (-1, -1)),
                       face_data={"P0": data}, contractions={})


def ray_wall_family(partners=(1,), edge_offset=0):
    """Cross wall over the fan vertex; resolution ``partners[i]`` over ray i.

    The new edge has length t + edge_offset on each ray (offset 0 is the
    valid family; offset -1 reproduces the invalid variant).
    """
    base = fan_complex(len(partners))
    face_data = {
        "O": FaceCurveData(type=cross_type(), lengths={},
                           positions={"v": const_positionN((0, 0), 0)})
    }
    contractions = {}
    for i, partner in enumerate(partners):
        t = resolution_type(partner)
        s = t.slopes["e"]
        face_data[f"R{i}"] = FaceCurveData(
            type=t,
            lengths={"e": AffineFn((1,), Fraction(edge_offset))},
            positions={
                "va": const_positionN((0, 0), 1),
                "vb": AffineMapN(((s[0],), (s[1],)), (Fraction(0), Fraction(0))),
            },
        )
        contractions[("O", f"R{i}")] = Contraction(
            vertex_map={"va": "v", "vb": "v"}, edge_map={})
    return FamilyDatum(base=base, dim=2, extended_degree=CROSS_DEGREE,
                       face_data=face_data, contractions=contractions)


def two_ray_resolution_family(derivatives=((1, 0), (-1, 0))):
    """The same resolution type over both rays and the vertex, with constant
    edge length 1 and vertex position derivative ``derivatives[i]`` on ray i."""
    base = fan_complex(len(derivatives))
    t = resolution_type(1)
    s = t.slopes["e"]  # h(vb) = h(va) + 1 * s
    face_data = {
        "O": FaceCurveData(
            type=t,
            lengths={"e": AffineFn((), Fraction(1))},
            positions={"va": const_positionN((0, 0), 0),
                       "vb": const_positionN(s, 0)},
        )
    }
    contractions = {}
    for i, d in enumerate(derivatives):
        face_data[f"R{i}"] = FaceCurveData(
            type=t,
            lengths={"e": AffineFn((0,), Fraction(1))},
            positions={
                "va": AffineMapN(((d[0],), (d[1],)), (Fraction(0), Fraction(0))),
                "vb": AffineMapN(((d[0],), (d[1],)), (Fraction(s[0]), Fraction(s[1]))),
            },
        )
        contractions[("O", f"R{i}")] = Contraction(
            vertex_map={"va": "va", "vb": "vb"}, edge_map={"e": "e"})
    return FamilyDatum(base=base, dim=2, extended_degree=CROSS_DEGREE,
                       face_data=face_data, contractions=contractions)


def sample_chart_points(poly: Polyhedron, n: int, rng: random.Random):
    """Deterministic rational points of a chart: convex vertex combos plus rays."""
    verts, rays, lines = poly.vrep()
    pts = []
    verts = list(verts)
    for _ in range(n):
        weights = [Fraction(rng.randint(0, 5)) for _ in verts]
        if sum(weights) == 0:
            weights[rng.randrange(len(verts))] = Fraction(1)
        total = sum(weights)
        pt = tuple(
            sum(w * v[i] for w, v in zip(weights, verts)) / total
            for i in range(poly.ambient_dim)
        )
        for r in rays:
            c = Fraction(rng.randint(0, 3))
            pt = tuple(p + c * x for p, x in zip(pt, r))
        for l in lines:
            c = Fraction(rng.randint(-3, 3))
            pt = tuple(p + c * x for p, x in zip(pt, l))
        pts.append(pt)
    return pts
