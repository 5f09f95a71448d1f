"""Families of parameterized tropical curves over a polyhedral complex.

A family assigns to every face of the base complex a combinatorial type,
an affine length function per edge and an affine position map per vertex,
together with weighted contractions along face inclusions.  Validation
checks the fiber condition on an affine-hull generating set of rational
points per face, the length/position compatibilities along inclusions, and
the zero-locus condition (an edge is contracted exactly when its length
vanishes identically on the sub-face).

The induced moduli map assigns to each face the affine lift of the
stabilized fiber into the stratum coordinates of its canonical type; wall
verdicts implement the harmonic / quasi-harmonic / locally combinatorially
surjective trichotomy at a face, and closure propagation saturates a seed
set of maximal strata through walls.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from .errors import InvalidFamily, NoCofacets, PointNotInComplex, SeedNotInGraph
from .exact_linalg import (
    affine_apply,
    affine_compose,
    frac,
    rank,
    solve_linear,
    vec,
    vec_add,
    vec_scale,
    vec_sub,
)
from .moduli import (
    WallClassification,
    WallGraph,
    canonical_form,
    classify,
    dim_stratum,
    resolve_4valent,
    stratum,
)
from .polyhedral import (
    Harmonicity,
    PIAMap,
    PolyhedralComplex,
    ValidationReport,
    harmonicity_at,
    validate_complex,
)
from .tropcurve import (
    CombinatorialType,
    ParameterizedTropicalCurve,
    TropicalCurve,
    check_balanced,
    extended_degree,
    stabilize_type,
)


# ---------------------------------------------------------------------------
# data model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineFn:
    """Integral affine function on a face chart: x -> linear . x + offset."""

    linear: tuple  # integer row over the chart coordinates
    offset: Fraction

    def __call__(self, x):
        return sum((a * xi for a, xi in zip(self.linear, x)), Fraction(0)) + self.offset

    def is_zero(self) -> bool:
        return self.offset == 0 and all(a == 0 for a in self.linear)

    def compose_embed(self, linear, offset) -> "AffineFn":
        """Restrict along an affine embedding of another chart."""
        lin, off = affine_compose((self.linear,), (self.offset,), linear, vec(offset))
        return AffineFn(tuple(lin[0]), off[0])


@dataclass(frozen=True)
class AffineMapN:
    """Integral affine map from a face chart to N_R."""

    linear: tuple  # dim rows, each an integer row over chart coordinates
    offset: tuple  # dim rationals

    def __call__(self, x):
        return affine_apply(self.linear, vec(self.offset), vec(x))

    def compose_embed(self, linear, offset) -> "AffineMapN":
        lin, off = affine_compose(self.linear, vec(self.offset), linear, vec(offset))
        return AffineMapN(tuple(tuple(r) for r in lin), tuple(off))


@dataclass
class FaceCurveData:
    type: CombinatorialType
    lengths: dict    # edge id -> AffineFn
    positions: dict  # vertex id -> AffineMapN


@dataclass
class Contraction:
    """Weighted contraction from the super-face graph onto the sub-face graph.

    ``vertex_map`` is total; ``edge_map`` lists the surviving edges only.
    """

    vertex_map: dict
    edge_map: dict


@dataclass
class FamilyDatum:
    base: PolyhedralComplex
    dim: int
    extended_degree: tuple
    face_data: dict      # face id -> FaceCurveData
    contractions: dict   # (sub id, super id) -> Contraction


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _generating_points(chart):
    """Vertices, an interior point, and interior +- ray/line displacements.

    These affinely span a full-dimensional chart, so affine identities that
    hold on them hold on the whole face.
    """
    verts, rays, lines = chart.vrep()
    pts = [vec(v) for v in verts]
    inner = chart.interior_point() if chart.ambient_dim > 0 else chart.feasible_point()
    if inner is not None:
        inner = vec(inner)
        pts.append(inner)
        for r in rays:
            pts.append(vec_add(inner, vec(r)))
        for l in lines:
            pts.append(vec_add(inner, vec(l)))
            pts.append(vec_sub(inner, vec(l)))
    return pts


def validate_family(f: FamilyDatum) -> ValidationReport:
    """Definition-style family validation, one report entry per violation."""
    report = ValidationReport()
    base_report = validate_complex(f.base)
    for v in base_report.violations:
        report.add("base", v.subject, str(v))
    if not base_report.ok:
        return report

    for fid in sorted(f.base.faces):
        if fid not in f.face_data:
            report.add("coverage", fid, "face without curve data")
    for key in sorted(f.base.inclusions):
        if key not in f.contractions:
            report.add("coverage", f"{key[0]}->{key[1]}", "inclusion without contraction")
    if not base_report.ok or any(v.axiom == "coverage" for v in report.violations):
        return report

    # per-face fiber conditions
    for fid in sorted(f.base.faces):
        data = f.face_data[fid]
        face = f.base.face(fid)
        t = data.type
        if t.dim != f.dim:
            report.add("1", fid, f"type lives in Z^{t.dim}, family in Z^{f.dim}")
            continue
        if extended_degree(t) != f.extended_degree:
            report.add("degree", fid, "extended degree differs from the family degree")
        bal = check_balanced(t)
        if not bal.ok:
            report.add("1", fid, f"type unbalanced at {[v for v, _ in bal.failures]}")
        missing = [e for e, _, _ in t.graph.edges if e not in data.lengths]
        missing += [v for v in t.graph.vertex_ids() if v not in data.positions]
        if missing:
            report.add("1", fid, f"missing affine data for {missing}")
            continue
        shape_bad = False
        for e, fn in data.lengths.items():
            if len(fn.linear) != face.rank:
                report.add("1", fid, f"length of {e!r} has linear part of wrong arity")
                shape_bad = True
        for u, mp in data.positions.items():
            if len(mp.linear) != f.dim or any(len(r) != face.rank for r in mp.linear) \
                    or len(mp.offset) != f.dim:
                report.add("1", fid, f"position of {u!r} has affine data of wrong shape")
                shape_bad = True
        if shape_bad:
            continue

        pts = _generating_points(face.chart)
        verts, rays, lines = face.chart.vrep()
        inner = face.chart.interior_point() if face.rank > 0 else face.chart.feasible_point()
        for e, u, v in t.graph.edges:
            fn = data.lengths[e]
            # nonnegative on the face: vertex values and recession signs
            for w in verts:
                if fn(vec(w)) < 0:
                    report.add("1", fid, f"length of {e!r} is negative at vertex {w}")
                    break
            for r in rays:
                if sum(a * x for a, x in zip(fn.linear, r)) < 0:
                    report.add("1", fid, f"length of {e!r} decreases along a ray")
                    break
            for l in lines:
                if sum(a * x for a, x in zip(fn.linear, l)) != 0:
                    report.add("1", fid, f"length of {e!r} is unbounded below along a line")
                    break
            if inner is not None and fn(inner) <= 0:
                report.add("1", fid, f"length of {e!r} vanishes on the interior")
            # edge relation as an identity, checked on the generating set
            slope = vec(t.slopes[e])
            for x in pts:
                lhs = vec_sub(data.positions[v](x), data.positions[u](x))
                if lhs != vec_scale(fn(x), slope):
                    report.add("1", fid,
                               f"edge relation fails for {e!r} at {tuple(map(str, x))}")
                    break

    # inclusion conditions (2), (3) and the zero-locus iff
    for (sub, sup), inc in sorted(f.base.inclusions.items()):
        phi = f.contractions[(sub, sup)]
        tsub = f.face_data[sub].type
        tsup = f.face_data[sup].type
        subject = f"{sub}->{sup}"
        gsub, gsup = tsub.graph, tsup.graph
        vm = phi.vertex_map
        if sorted(vm) != sorted(gsup.vertex_ids()) or \
                not set(vm.values()) <= set(gsub.vertex_ids()):
            report.add("contraction", subject, "vertex map is not total onto known vertices")
            continue
        surviving = set(phi.edge_map)
        sup_edges = {e for e, _, _ in gsup.edges}
        sub_edges = {e for e, _, _ in gsub.edges}
        if not surviving <= sup_edges or \
                sorted(phi.edge_map.values()) != sorted(sub_edges):
            report.add("contraction", subject, "edge map is not a bijection onto the sub-face edges")
            continue
        if len(gsub.legs) != len(gsup.legs):
            report.add("contraction", subject, "leg counts differ")
            continue
        for (l_sup, v_sup), (l_sub, v_sub) in zip(gsup.legs, gsub.legs):
            if vm[v_sup] != v_sub:
                report.add("contraction", subject,
                           f"leg {l_sup!r} does not map to the matching leg vertex")
        ends_sub = {e: (u, v) for e, u, v in gsub.edges}
        for e, u, v in gsup.edges:
            if e not in phi.edge_map:
                if vm[u] != vm[v]:
                    report.add("contraction", subject,
                               f"contracted edge {e!r} has endpoints in different classes")
                continue
            eu, ev = ends_sub[phi.edge_map[e]]
            s_sup = tsup.slopes[e]
            s_sub = tsub.slopes[phi.edge_map[e]]
            if (vm[u], vm[v]) == (eu, ev):
                ok = s_sup == s_sub
            elif (vm[u], vm[v]) == (ev, eu):
                ok = s_sup == tuple(-x for x in s_sub)
            else:
                report.add("contraction", subject,
                           f"edge {e!r} does not map onto its image's endpoints")
                continue
            if not ok and eu == ev:
                ok = s_sup in (s_sub, tuple(-x for x in s_sub))
            if not ok:
                report.add("contraction", subject, f"slope of {e!r} changes under contraction")
        # weighted contraction: preimage classes connected, weights add up
        classes = {}
        for u in gsup.vertex_ids():
            classes.setdefault(vm[u], set()).add(u)
        wsup = dict(gsup.vertices)
        wsub = dict(gsub.vertices)
        for x, cls in sorted(classes.items()):
            internal = [(e, u, v) for e, u, v in gsup.edges
                        if e not in phi.edge_map and u in cls and v in cls]
            seen = {min(cls)}
            changed = True
            while changed:
                changed = False
                for _, u, v in internal:
                    if (u in seen) != (v in seen):
                        seen |= {u, v}
                        changed = True
            if seen != cls:
                report.add("contraction", subject, f"preimage of {x!r} is not connected")
                continue
            b1 = len(internal) - (len(cls) - 1)
            if wsub[x] != sum(wsup[u] for u in cls) + b1:
                report.add("contraction", subject,
                           f"weight of {x!r} is not the contracted genus")

        sub_pts = _generating_points(f.base.face(sub).chart)
        lens_sub = f.face_data[sub].lengths
        lens_sup = f.face_data[sup].lengths
        pos_sub = f.face_data[sub].positions
        pos_sup = f.face_data[sup].positions
        for e, u, v in gsup.edges:
            restricted = lens_sup[e].compose_embed(inc.linear, inc.offset)
            if e in phi.edge_map:
                target = lens_sub[phi.edge_map[e]]
                if any(restricted(x) != target(x) for x in sub_pts):
                    report.add("2", subject, f"length of {e!r} disagrees on the sub-face")
                if restricted.is_zero():
                    report.add("zero-locus", subject,
                               f"surviving edge {e!r} has identically vanishing length")
            else:
                if not restricted.is_zero():
                    report.add("zero-locus", subject,
                               f"contracted edge {e!r} has nonvanishing length on the sub-face")
        for u in gsup.vertex_ids():
            restricted = pos_sup[u].compose_embed(inc.linear, inc.offset)
            target = pos_sub[vm[u]]
            if any(restricted(x) != target(x) for x in sub_pts):
                report.add("3", subject, f"position of {u!r} disagrees on the sub-face")
    return report


# ---------------------------------------------------------------------------
# fibers
# ---------------------------------------------------------------------------

def locate(base: PolyhedralComplex, fid: str, coords):
    """Resolve a point given in some face's chart to the face whose interior
    holds it; returns (face id, chart coordinates)."""
    face = base.face(fid)
    x = vec(coords)
    if len(x) != face.rank:
        raise PointNotInComplex(f"point has {len(x)} coordinates, face rank is {face.rank}")
    if not face.chart.contains(x):
        raise PointNotInComplex(f"point {tuple(map(str, x))} is outside face {fid!r}")
    if face.rank == 0 or face.chart.contains(x, strict=True):
        return fid, x
    for sub in base.subface_ids(fid):
        inc = base.inclusions[(sub, fid)]
        sub_rank = base.face(sub).rank
        rows = [vec(r) for r in inc.linear]
        sol = solve_linear(rows, vec_sub(x, vec(inc.offset))) if sub_rank else \
            (() if vec_sub(x, vec(inc.offset)) == vec((0,) * face.rank) else None)
        if sol is None:
            continue
        if rows and affine_apply(inc.linear, vec(inc.offset), sol) != x:
            continue
        if base.face(sub).chart.contains(sol):
            return locate(base, sub, sol)
    raise PointNotInComplex(
        f"boundary point {tuple(map(str, x))} of {fid!r} is not covered by a sub-face")


def fiber(f: FamilyDatum, fid: str, coords) -> ParameterizedTropicalCurve:
    """The parameterized tropical curve over a rational point of the base."""
    where, x = locate(f.base, fid, coords)
    data = f.face_data[where]
    lengths = {}
    for e, _, _ in data.type.graph.edges:
        val = data.lengths[e](x)
        if val <= 0:
            raise InvalidFamily(
                f"length of {e!r} is {val} at an interior point of {where!r}")
        lengths[e] = val
    positions = {u: data.positions[u](x) for u in data.type.graph.vertex_ids()}
    curve = TropicalCurve(data.type.graph, lengths)
    return ParameterizedTropicalCurve(curve, positions, dict(data.type.slopes), f.dim)


# ---------------------------------------------------------------------------
# the induced map to moduli
# ---------------------------------------------------------------------------

@dataclass
class FaceLift:
    face: str
    type: CombinatorialType        # canonical representative of the stabilized fiber type
    canonical: str
    linear: tuple                  # stratum-coordinate rows over the chart
    offset: tuple
    stab_chains: dict              # stabilized edge id -> chain of original edges
    canon_vertex_map: dict         # stabilized vertex id -> canonical id
    canon_edge_map: dict           # stabilized edge id -> canonical id

    def rank(self) -> int:
        return rank([vec(r) for r in self.linear]) if self.linear else 0


@dataclass
class InducedMap:
    family: FamilyDatum
    lifts: dict  # face id -> FaceLift


def _face_lift(f: FamilyDatum, fid: str) -> FaceLift:
    data = f.face_data[fid]
    face_rank = f.base.face(fid).rank
    stab = stabilize_type(data.type)
    stab_type = CombinatorialType(stab.graph, stab.slopes, f.dim)
    cf = canonical_form(stab_type)
    inv_edge = {new: old for old, new in cf.edge_map.items()}
    inv_vert = {new: old for old, new in cf.vertex_map.items()}
    rows, offs = [], []
    for ce in sorted(inv_edge, key=lambda e: int(e[1:])):
        chain = stab.edge_chains[inv_edge[ce]]
        lin = [0] * face_rank
        off = Fraction(0)
        for gamma in chain:
            fn = data.lengths[gamma]
            lin = [a + b for a, b in zip(lin, fn.linear)]
            off += fn.offset
        rows.append(tuple(lin))
        offs.append(off)
    for cv in sorted(inv_vert, key=lambda v: int(v[1:])):
        mp = data.positions[inv_vert[cv]]
        for c in range(f.dim):
            rows.append(tuple(mp.linear[c]))
            offs.append(frac(mp.offset[c]))
    return FaceLift(face=fid, type=cf.type, canonical=cf.string,
                    linear=tuple(rows), offset=tuple(offs),
                    stab_chains=dict(stab.edge_chains),
                    canon_vertex_map=dict(cf.vertex_map),
                    canon_edge_map=dict(cf.edge_map))


def induced_alpha(f: FamilyDatum) -> InducedMap:
    """Per-face affine lifts of the stabilized fibers into stratum coordinates.

    Stabilization is constant over a face interior (pruned and smoothed
    pieces are determined by the type and the identically-vanishing
    lengths), so the lift rows are sums of length functions along the
    smoothing chains followed by the surviving position rows.
    """
    report = validate_family(f)
    if not report.ok:
        raise InvalidFamily(str(report))
    return InducedMap(family=f, lifts={fid: _face_lift(f, fid) for fid in sorted(f.base.faces)})


# ---------------------------------------------------------------------------
# wall verdicts
# ---------------------------------------------------------------------------

class WallVerdictKind(str, Enum):
    HARMONIC = "harmonic"
    QUASI_HARMONIC = "quasi_harmonic"
    LOCALLY_COMBINATORIALLY_SURJECTIVE = "locally_combinatorially_surjective"
    INCONCLUSIVE = "inconclusive"


@dataclass
class WallVerdict:
    face: str
    verdict: WallVerdictKind
    certificate: Optional[tuple] = None   # LP coefficients for (quasi-)harmonic
    witnesses: dict = field(default_factory=dict)  # resolution canonical -> cofacet face
    uncovered: tuple = ()                 # canonical strings of unattained strata
    detail: str = ""


def _stabilized_contraction(f: FamilyDatum, sub: str, sup: str, stab_sub, stab_super):
    """Map stabilized super-face edges/vertices onto the stabilized sub-face.

    Returns (vertex map, edge map) or None when the contraction does not
    restrict to an isomorphism of the stabilized types (the fiber types
    genuinely differ).
    """
    phi = f.contractions[(sub, sup)]
    sub_chain_of = {}
    for stab_edge, chain in stab_sub.edge_chains.items():
        for gamma in chain:
            sub_chain_of[gamma] = stab_edge
    emap = {}
    used = {}
    for stab_edge, chain in stab_super.edge_chains.items():
        images = [phi.edge_map[g] for g in chain if g in phi.edge_map]
        if not images:
            return None  # the whole chain contracts: types differ over the wall
        targets = {sub_chain_of.get(img) for img in images}
        if len(targets) != 1 or None in targets:
            return None
        target = targets.pop()
        used.setdefault(target, []).extend(images)
        emap[stab_edge] = target
    if sorted(emap.values()) != sorted(stab_sub.edge_chains):
        return None
    for target, images in used.items():
        if sorted(images) != sorted(stab_sub.edge_chains[target]):
            return None
    vmap = {}
    kept_sub = set(stab_sub.kept_vertices)
    for u in stab_super.kept_vertices:
        img = phi.vertex_map[u]
        if img not in kept_sub:
            return None
        vmap[u] = img
    if sorted(vmap.values()) != sorted(kept_sub):
        return None
    return vmap, emap


def wall_verdict(f: FamilyDatum, w: str) -> WallVerdict:
    """Trichotomy of the induced map at a face of the base.

    When every cofacet carries the same stabilized type as the face, the
    lifted map is tested for (quasi-)harmonicity; otherwise, if the face's
    type is a weightless almost 3-valent wall, local combinatorial
    surjectivity is decided against the wall's resolutions.  Situations
    outside the theorem's hypotheses are reported as inconclusive.
    """
    f.base.face(w)
    alpha = induced_alpha(f)
    cofacet_incs = f.base.cofacet_inclusions(w)
    if not cofacet_incs:
        raise NoCofacets(f"face {w!r} has no codimension-one cofacets")
    lift_w = alpha.lifts[w]
    cofacets = [inc.super for inc in cofacet_incs]
    same_type = all(alpha.lifts[c].canonical == lift_w.canonical for c in cofacets)

    if same_type:
        stab_w = stabilize_type(f.face_data[w].type)
        ncoords = len(lift_w.linear)
        per_face = {w: (lift_w.linear, lift_w.offset)}
        for inc in cofacet_incs:
            sup = inc.super
            stab_sup = stabilize_type(f.face_data[sup].type)
            maps = _stabilized_contraction(f, w, sup, stab_w, stab_sup)
            if maps is None:
                return WallVerdict(
                    face=w, verdict=WallVerdictKind.INCONCLUSIVE,
                    detail=f"cofacet {sup!r} has an isomorphic type not matched "
                           f"by the contraction")
            vmap, emap = maps
            data = f.face_data[sup]
            face_rank = f.base.face(sup).rank
            rows, offs = [], []
            inv_edge = {new: old for old, new in lift_w.canon_edge_map.items()}
            inv_vert = {new: old for old, new in lift_w.canon_vertex_map.items()}
            rev_emap = {sub_e: sup_e for sup_e, sub_e in emap.items()}
            rev_vmap = {sub_v: sup_v for sup_v, sub_v in vmap.items()}
            for ce in sorted(inv_edge, key=lambda e: int(e[1:])):
                sup_edge = rev_emap[inv_edge[ce]]
                lin = [0] * face_rank
                off = Fraction(0)
                for gamma in stab_sup.edge_chains[sup_edge]:
                    fn = data.lengths[gamma]
                    lin = [a + b for a, b in zip(lin, fn.linear)]
                    off += fn.offset
                rows.append(tuple(lin))
                offs.append(off)
            for cv in sorted(inv_vert, key=lambda v: int(v[1:])):
                mp = data.positions[rev_vmap[inv_vert[cv]]]
                for c in range(f.dim):
                    rows.append(tuple(mp.linear[c]))
                    offs.append(frac(mp.offset[c]))
            # the rewritten lift must restrict to the face lift exactly
            lin_r, off_r = affine_compose(rows, vec(offs), inc.linear, vec(inc.offset))
            if tuple(tuple(r) for r in lin_r) != tuple(tuple(r) for r in lift_w.linear) \
                    or vec(off_r) != vec(lift_w.offset):
                raise InvalidFamily(
                    f"lift over {sup!r} does not restrict to the lift over {w!r}")
            per_face[sup] = (tuple(rows), tuple(offs))
        local = PIAMap(source=f.base, target_dim=ncoords, per_face=per_face)
        res = harmonicity_at(local, w)
        if res.verdict == Harmonicity.HARMONIC:
            return WallVerdict(face=w, verdict=WallVerdictKind.HARMONIC,
                               certificate=res.certificate)
        if res.verdict == Harmonicity.QUASI_HARMONIC_ONLY:
            return WallVerdict(face=w, verdict=WallVerdictKind.QUASI_HARMONIC,
                               certificate=res.certificate)
        return WallVerdict(
            face=w, verdict=WallVerdictKind.INCONCLUSIVE, certificate=None,
            detail="not quasi-harmonic: no positive combination of the star "
                   "derivatives lies in the image span")

    wall_type = lift_w.type
    cls = classify(wall_type)
    if cls.classification != WallClassification.WEIGHTLESS_ALMOST_3VALENT:
        return WallVerdict(
            face=w, verdict=WallVerdictKind.INCONCLUSIVE,
            detail=f"cofacet types differ but the face type is "
                   f"{cls.classification.value}; the dichotomy does not apply")
    resolutions = resolve_4valent(wall_type, cls.four_valent_vertex)
    required = [r for r in resolutions if not stratum(r).is_empty()]
    attained = {}
    for inc in cofacet_incs:
        attained.setdefault(alpha.lifts[inc.super].canonical, inc.super)
    witnesses = {}
    uncovered = []
    for r in required:
        key = canonical_form(r).string
        if key in attained:
            witnesses[key] = attained[key]
        else:
            uncovered.append(key)
    if not uncovered:
        return WallVerdict(face=w,
                           verdict=WallVerdictKind.LOCALLY_COMBINATORIALLY_SURJECTIVE,
                           witnesses=witnesses)
    return WallVerdict(face=w, verdict=WallVerdictKind.INCONCLUSIVE,
                       witnesses=witnesses, uncovered=tuple(sorted(uncovered)),
                       detail=f"{len(uncovered)} adjacent strata are not attained")


# ---------------------------------------------------------------------------
# image strata and closure propagation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImageStratum:
    canonical: str
    type: CombinatorialType
    image_dim: int
    stratum_dim: Optional[int]
    full_dimensional: bool


def image_strata(f: FamilyDatum) -> list:
    """Group faces by stabilized target type; report image ranks per type.

    ``full_dimensional`` records whether the best image piece reaches the
    stratum dimension (the hypothesis of the closure criterion).
    """
    alpha = induced_alpha(f)
    by_type = {}
    for fid in sorted(alpha.lifts):
        lift = alpha.lifts[fid]
        cur = by_type.get(lift.canonical)
        r = lift.rank()
        if cur is None or r > cur[1]:
            by_type[lift.canonical] = (lift.type, r)
    out = []
    for key in sorted(by_type):
        t, r = by_type[key]
        d = dim_stratum(t)
        out.append(ImageStratum(canonical=key, type=t, image_dim=r, stratum_dim=d,
                                full_dimensional=(d is not None and r == d)))
    return out


@dataclass
class PropagationResult:
    closure: tuple  # sorted node ids
    trace: tuple    # (wall id, tuple of added node ids) in application order


def propagate_closure(wg: WallGraph, seeds) -> PropagationResult:
    """Saturate a set of full-dimensional strata through wall incidences.

    Rule: once any node incident to a wall lies in the set, every node
    incident to that wall joins it; iterated to a fixpoint.  Monotone,
    idempotent and independent of the seed iteration order.
    """
    node_ids = set(wg.node_ids())
    current = set()
    for s in seeds:
        if s not in node_ids:
            raise SeedNotInGraph(f"seed {s!r} is not a node of the wall graph")
        current.add(s)
    trace = []
    changed = True
    while changed:
        changed = False
        for wid, _, incident in wg.walls:
            inc = set(incident)
            if inc & current and not inc <= current:
                added = tuple(sorted(inc - current))
                current |= inc
                trace.append((wid, added))
                changed = True
    return PropagationResult(closure=tuple(sorted(current)), trace=tuple(trace))
