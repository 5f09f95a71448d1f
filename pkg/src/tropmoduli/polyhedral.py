"""Polyhedral complexes with integral structures.

A complex is stored abstractly: each face carries its own chart (a
full-dimensional rational polyhedron in R^rank) and gluing is carried
entirely by integral affine inclusion maps between charts.  Skeletons of
strictly semistable pairs have no canonical global embedding, so no global
ambient space is ever assumed.

The module also provides piecewise integral affine maps on complexes, the
star of a face (primitive normal directions into codimension-one cofacets),
the harmonic / quasi-harmonic / not-quasi-harmonic trichotomy at a face,
and the skeleton constructor for combinatorial semistable pair data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import (
    DependentGenerators,
    DimMismatch,
    InconsistentStrata,
    NoCofacets,
    TropModuliError,
    UnknownFace,
)
from .exact_linalg import (
    Subspace,
    affine_apply,
    affine_compose,
    feasible_point,
    frac,
    integer_kernel,
    is_saturated,
    ivec,
    mat_columns,
    mat_rows,
    mat_vec,
    primitive_vector,
    rank,
    smith_normal_form,
    solve_linear,
    span_membership,
    strict_positive_combination,
    unimodular_inverse,
    vec,
    vec_add,
    vec_dot,
    vec_sub,
)


# ---------------------------------------------------------------------------
# polyhedra (H-representation, exact V-representation on demand)
# ---------------------------------------------------------------------------

class Polyhedron:
    """Intersection of half-spaces <n,x> >= o with integral normals.

    Equalities are stored separately.  The V-representation (vertices, rays
    and lineality generators) is computed on demand and cached; all queries
    are exact.
    """

    def __init__(self, ambient_dim: int, ineqs=(), eqs=()):
        self.ambient_dim = ambient_dim
        self.ineqs = tuple((ivec(n), frac(o)) for n, o in ineqs)
        self.eqs = tuple((ivec(n), frac(o)) for n, o in eqs)
        for n, _ in self.ineqs + self.eqs:
            if len(n) != ambient_dim:
                raise DimMismatch("constraint normal has wrong length")
        self._cache = {}

    def __repr__(self):
        return f"Polyhedron(dim={self.ambient_dim}, ineqs={len(self.ineqs)}, eqs={len(self.eqs)})"

    # -- point queries ------------------------------------------------------

    def contains(self, x, strict: bool = False) -> bool:
        x = vec(x)
        if len(x) != self.ambient_dim:
            raise DimMismatch("point has wrong dimension")
        for n, o in self.eqs:
            if vec_dot(vec(n), x) != o:
                return False
        for n, o in self.ineqs:
            val = vec_dot(vec(n), x)
            if val < o or (strict and val == o):
                return False
        return True

    def feasible_point(self):
        if 'feasible' not in self._cache:
            self._cache['feasible'] = feasible_point(self.eqs, self.ineqs, self.ambient_dim)
        return self._cache['feasible']

    def is_empty(self) -> bool:
        return self.feasible_point() is None

    def interior_point(self):
        """A point with all inequalities strict, or None.

        Any nontrivial equality makes the (ambient) interior empty.
        """
        if 'interior' not in self._cache:
            pt = None
            if all(all(c == 0 for c in n) and o == 0 for n, o in self.eqs):
                pt = feasible_point((), self.ineqs, self.ambient_dim,
                                    strict=range(len(self.ineqs)))
            self._cache['interior'] = pt
        return self._cache['interior']

    def has_interior(self) -> bool:
        return self.interior_point() is not None

    # -- V-representation ---------------------------------------------------

    def vrep(self):
        """(vertices, rays, lines): P = conv(vertices) + cone(rays) + span(lines).

        Rays and lines are primitive integer vectors; vertices are rational.
        Empty polyhedron yields ((), (), ()).
        """
        if 'vrep' in self._cache:
            return self._cache['vrep']
        out = self._compute_vrep()
        self._cache['vrep'] = out
        return out

    def _compute_vrep(self):
        D = self.ambient_dim
        if self.is_empty():
            return (), (), ()
        normals = [n for n, _ in self.ineqs] + [n for n, _ in self.eqs]
        nontrivial = [n for n in normals if any(c != 0 for c in n)]
        lines = tuple(primitive_vector(l) for l in integer_kernel(nontrivial, D)) \
            if nontrivial else tuple(tuple(1 if i == j else 0 for j in range(D)) for i in range(D))
        if lines:
            # slice along the lineality space and recurse on a pointed polyhedron
            sliced = Polyhedron(
                D,
                self.ineqs,
                self.eqs + tuple((l, Fraction(0)) for l in lines),
            )
            verts, rays, _ = sliced._compute_vrep()
            return verts, rays, lines
        if D == 0:
            return ((),), (), ()

        eq_rows = [vec(n) for n, _ in self.eqs]
        eq_rhs = [o for _, o in self.eqs]
        req = rank(eq_rows) if eq_rows else 0

        verts = set()
        need = D - req
        if need >= 0:
            for subset in combinations(range(len(self.ineqs)), need):
                rows = list(eq_rows) + [vec(self.ineqs[i][0]) for i in subset]
                rhs = list(eq_rhs) + [self.ineqs[i][1] for i in subset]
                if rank(rows) != D:
                    continue
                x = solve_linear(rows, tuple(rhs))
                if x is not None and self.contains(x):
                    verts.add(x)

        rays = set()
        need_r = D - 1 - req
        if need_r >= 0:
            cone_rows = [vec(n) for n, _ in self.eqs]
            for subset in combinations(range(len(self.ineqs)), need_r):
                rows = cone_rows + [vec(self.ineqs[i][0]) for i in subset]
                ker = [v for v in _rational_kernel_basis(rows, D)]
                if len(ker) != 1:
                    continue
                d = _rational_to_primitive(ker[0])
                for cand in (d, tuple(-c for c in d)):
                    if all(vec_dot(vec(n), vec(cand)) >= 0 for n, _ in self.ineqs) and \
                            all(vec_dot(vec(n), vec(cand)) == 0 for n, _ in self.eqs):
                        rays.add(cand)
                        break
        return tuple(sorted(verts)), tuple(sorted(rays)), ()

    def dim(self) -> int:
        """Dimension of the polyhedron, -1 if empty."""
        verts, rays, lines = self.vrep()
        if not verts:
            return -1
        base = verts[0]
        rows = [vec_sub(v, base) for v in verts[1:]]
        rows += [vec(r) for r in rays] + [vec(l) for l in lines]
        return rank(rows) if rows else 0

    # -- face lattice ---------------------------------------------------------

    def proper_faces(self):
        """All proper nonempty faces, as _PFace records (cached)."""
        if 'faces' in self._cache:
            return self._cache['faces']
        verts, rays, lines = self.vrep()
        found = {}
        whole = (frozenset(range(len(verts))), frozenset(range(len(rays))))
        for size in range(1, len(self.ineqs) + 1):
            for subset in combinations(range(len(self.ineqs)), size):
                tv = frozenset(
                    i for i, v in enumerate(verts)
                    if all(vec_dot(vec(self.ineqs[j][0]), v) == self.ineqs[j][1] for j in subset)
                )
                if not tv:
                    continue
                tr = frozenset(
                    i for i, r in enumerate(rays)
                    if all(vec_dot(vec(self.ineqs[j][0]), vec(r)) == 0 for j in subset)
                )
                key = (tv, tr)
                if key != whole and key not in found:
                    found[key] = _PFace(
                        poly=self,
                        vert_ids=tv,
                        ray_ids=tr,
                        dim=_generator_dim([verts[i] for i in tv],
                                           [rays[i] for i in tr], lines),
                    )
        faces = tuple(sorted(found.values(), key=lambda f: (f.dim, sorted(f.vert_ids), sorted(f.ray_ids))))
        self._cache['faces'] = faces
        return faces

    def generators(self):
        """Vertex/ray/line generator triple as explicit sets."""
        verts, rays, lines = self.vrep()
        return frozenset(verts), frozenset(rays), tuple(lines)


def _rational_kernel_basis(rows, ncols):
    from .exact_linalg import kernel_rational
    nontrivial = [r for r in rows if any(c != 0 for c in r)]
    return kernel_rational(nontrivial, ncols)


def _rational_to_primitive(v):
    denom = 1
    for x in v:
        f = frac(x)
        denom = denom * f.denominator // __import__('math').gcd(denom, f.denominator)
    return primitive_vector(tuple(int(frac(x) * denom) for x in v))


def _generator_dim(verts, rays, lines):
    if not verts:
        return -1
    base = verts[0]
    rows = [vec_sub(vec(v), vec(base)) for v in verts[1:]]
    rows += [vec(r) for r in rays] + [vec(l) for l in lines]
    return rank(rows) if rows else 0


@dataclass(frozen=True)
class _PFace:
    """A face of a polyhedron, identified by its tight vertices and rays."""

    poly: Polyhedron
    vert_ids: frozenset
    ray_ids: frozenset
    dim: int

    def members(self):
        verts, rays, lines = self.poly.vrep()
        return (frozenset(verts[i] for i in self.vert_ids),
                frozenset(rays[i] for i in self.ray_ids),
                tuple(lines))


def _span_equal(lines_a, lines_b) -> bool:
    ra = rank([vec(l) for l in lines_a]) if lines_a else 0
    rb = rank([vec(l) for l in lines_b]) if lines_b else 0
    if ra != rb:
        return False
    rab = rank([vec(l) for l in tuple(lines_a) + tuple(lines_b)]) if (lines_a or lines_b) else 0
    return rab == ra


def _triples_equal(a, b) -> bool:
    return a[0] == b[0] and a[1] == b[1] and _span_equal(a[2], b[2])


# ---------------------------------------------------------------------------
# faces, inclusions, complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """A face of a complex: an abstract cell with a chart in R^rank."""

    id: str
    rank: int
    chart: Polyhedron
    label: str = ""


@dataclass(frozen=True)
class FaceInclusion:
    """Integral affine embedding of a sub-face chart into a super-face chart."""

    sub: str
    super: str
    linear: tuple  # super_rank x sub_rank integer matrix
    offset: tuple  # super_rank rationals

    def apply(self, x):
        return affine_apply(self.linear, self.offset, vec(x))

    def columns(self):
        return mat_columns(self.linear, width=len(self.linear[0]) if self.linear else 0)


class PolyhedralComplex:
    """Finite face set glued along integral affine inclusions.

    Instances are treated as immutable once built; all queries are read-only
    and cache their results on the instance.
    """

    def __init__(self, faces: Sequence[Face], inclusions: Sequence[FaceInclusion],
                 maximal_faces: Optional[Sequence[str]] = None):
        self.faces = {}
        for f in faces:
            if f.id in self.faces:
                raise ValueError(f"duplicate face id {f.id!r}")
            self.faces[f.id] = f
        self.inclusions = {}
        for inc in inclusions:
            if inc.sub not in self.faces or inc.super not in self.faces:
                raise UnknownFace(f"inclusion {inc.sub!r} -> {inc.super!r} references unknown face")
            key = (inc.sub, inc.super)
            if key in self.inclusions:
                raise ValueError(f"duplicate inclusion {key}")
            sub_rank = self.faces[inc.sub].rank
            super_rank = self.faces[inc.super].rank
            if len(inc.linear) != super_rank or any(len(r) != sub_rank for r in inc.linear) \
                    or len(inc.offset) != super_rank:
                raise DimMismatch(f"inclusion {key} has affine data of wrong shape")
            self.inclusions[key] = inc
        if maximal_faces is None:
            subs = {s for s, _ in self.inclusions}
            maximal_faces = [fid for fid in self.faces if fid not in subs]
        self.maximal_faces = tuple(maximal_faces)
        self._cache = {}

    def face(self, fid: str) -> Face:
        try:
            return self.faces[fid]
        except KeyError:
            raise UnknownFace(f"unknown face {fid!r}") from None

    def subface_ids(self, fid: str):
        self.face(fid)
        return sorted(s for s, t in self.inclusions if t == fid)

    def superface_ids(self, fid: str):
        self.face(fid)
        return sorted(t for s, t in self.inclusions if s == fid)

    def cofacet_inclusions(self, fid: str):
        """Inclusions of ``fid`` into faces of rank exactly one higher."""
        r = self.face(fid).rank
        out = [inc for (s, t), inc in self.inclusions.items()
               if s == fid and self.faces[t].rank == r + 1]
        return sorted(out, key=lambda inc: inc.super)


# ---------------------------------------------------------------------------
# validation (Definition-style axioms as report entries)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    axiom: str
    subject: str
    message: str

    def __str__(self):
        return f"AXIOM({self.axiom}) violated at {self.subject}: {self.message}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom, subject, message):
        self.violations.append(Violation(axiom, str(subject), message))

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def _image_triple(complex_, inc: FaceInclusion):
    """Generator triple of the embedded image of the sub chart."""
    sub_chart = complex_.face(inc.sub).chart
    verts, rays, lines = sub_chart.vrep()
    iverts = frozenset(inc.apply(v) for v in verts)
    irays = frozenset(_rational_to_primitive(mat_vec(inc.linear, vec(r))) for r in rays)
    ilines = tuple(_rational_to_primitive(mat_vec(inc.linear, vec(l))) for l in lines)
    return iverts, irays, ilines


def validate_complex(c: PolyhedralComplex) -> ValidationReport:
    """Check the gluing axioms of an abstract polyhedral complex.

    Axioms checked, one report entry per violation:
      (2) each chart is a nonempty full-dimensional polyhedron in R^rank;
      (5) every inclusion is injective onto a saturated sublattice and its
          image is a proper face of the super chart;
      (3) every proper face of every chart is the image of exactly one
          sub-face (combinatorial disjoint-interior cover);
      (4) chart-level intersections of shared sub-faces agree across faces;
      plus partial-order sanity (antisymmetry, composition closure) and
      connectivity.
    """
    report = ValidationReport()

    for f in c.faces.values():
        if f.chart.ambient_dim != f.rank:
            report.add("2", f.id, f"chart lives in R^{f.chart.ambient_dim} but rank is {f.rank}")
            continue
        if f.chart.is_empty():
            report.add("2", f.id, "chart is empty")
        elif f.rank > 0 and not f.chart.has_interior():
            report.add("2", f.id, "chart has empty interior (degenerate)")

    # order sanity
    for (a, b) in c.inclusions:
        if a == b:
            report.add("order", f"{a}->{b}", "reflexive inclusion stored explicitly")
        elif (b, a) in c.inclusions:
            report.add("order", f"{a}->{b}", "inclusion relation is not antisymmetric")
        if c.faces[a].rank >= c.faces[b].rank:
            report.add("order", f"{a}->{b}", "sub-face rank must be smaller than super-face rank")
    for (a, b), inc_ab in c.inclusions.items():
        for (b2, d), inc_bd in c.inclusions.items():
            if b2 != b or a == d:
                continue
            if (a, d) not in c.inclusions:
                report.add("order", f"{a}->{d}", f"missing composite of {a}->{b} and {b}->{d}")
                continue
            lin, off = affine_compose(inc_bd.linear, vec(inc_bd.offset), inc_ab.linear, vec(inc_ab.offset))
            stored = c.inclusions[(a, d)]
            if mat_rows(stored.linear) != mat_rows(lin) or vec(stored.offset) != off:
                report.add("order", f"{a}->{d}", "stored inclusion differs from the composite")

    # axiom 5 + image faces
    image_face = {}  # (sub, super) -> _PFace key or None
    for (a, b), inc in c.inclusions.items():
        cols = [ivec(col) for col in zip(*inc.linear)] if inc.linear and inc.linear[0] else []
        sub_rank = c.faces[a].rank
        if sub_rank > 0:
            try:
                if not is_saturated(cols, c.faces[b].rank):
                    report.add("5", f"{a}->{b}", "lattice image is not saturated")
                    continue
            except DependentGenerators:
                report.add("5", f"{a}->{b}", "inclusion linear part is not injective")
                continue
        img = _image_triple(c, inc)
        super_chart = c.faces[b].chart
        if _triples_equal(img, super_chart.generators()):
            report.add("3", f"{a}->{b}", "image equals the whole super chart")
            continue
        match = None
        for pf in super_chart.proper_faces():
            if _triples_equal(img, pf.members()):
                match = pf
                break
        if match is None:
            report.add("5", f"{a}->{b}", "image of sub chart is not a face of the super chart")
        image_face[(a, b)] = match

    # axiom 3: every proper face of a chart is covered exactly once
    resolver = {}  # (face id, PFace key) -> sub id
    for fid, f in c.faces.items():
        if f.chart.ambient_dim != f.rank or f.chart.is_empty():
            continue
        by_face = {}
        for sub in c.subface_ids(fid):
            pf = image_face.get((sub, fid))
            if pf is not None:
                by_face.setdefault((pf.vert_ids, pf.ray_ids), []).append(sub)
        for pf in f.chart.proper_faces():
            key = (pf.vert_ids, pf.ray_ids)
            owners = by_face.get(key, [])
            if len(owners) == 1:
                resolver[(fid, key)] = owners[0]
            elif not owners:
                report.add("3", fid, f"chart face of dim {pf.dim} is not the image of any sub-face")
            else:
                report.add("3", fid, f"chart face of dim {pf.dim} is covered by {sorted(owners)}")

    # axiom 4: shared sub-face intersections agree across faces
    super_of = {}
    for (a, b) in c.inclusions:
        super_of.setdefault(a, set()).add(b)
    face_ids = sorted(c.faces)
    for i, w1 in enumerate(face_ids):
        for w2 in face_ids[i + 1:]:
            common = sorted({s for s in c.subface_ids(w1)} & {s for s in c.subface_ids(w2)})
            for v1, v2 in combinations(common, 2):
                res = []
                for w in (w1, w2):
                    pf1 = image_face.get((v1, w))
                    pf2 = image_face.get((v2, w))
                    if pf1 is None or pf2 is None:
                        res.append("skip")
                        continue
                    tv = pf1.vert_ids & pf2.vert_ids
                    tr = pf1.ray_ids & pf2.ray_ids
                    if not tv:
                        res.append(None)
                        continue
                    res.append(resolver.get((w, (tv, tr)), "unknown"))
                if "skip" in res:
                    continue
                if res[0] != res[1]:
                    report.add("4", f"{w1} & {w2}",
                               f"intersection of sub-faces {v1},{v2} resolves to "
                               f"{res[0]} in one chart and {res[1]} in the other")

    # connectivity
    if len(c.faces) > 1:
        seen = set()
        stack = [next(iter(c.faces))]
        adj = {}
        for (a, b) in c.inclusions:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj.get(x, ()))
        if len(seen) != len(c.faces):
            missing = sorted(set(c.faces) - seen)
            report.add("connectivity", missing[0], "complex is not connected")
    return report


# ---------------------------------------------------------------------------
# Star(W) and harmonicity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StarData:
    """Primitive directions into the codimension-one cofacets of a face."""

    face: str
    directions: tuple  # ((cofacet id, primitive vector in N_cofacet), ...)


def star(c: PolyhedralComplex, w: str) -> StarData:
    """Star of a face: one primitive generator of N_cofacet / N_face per cofacet.

    The generator is oriented into the cofacet chart, i.e. the cofacet lies
    on the nonnegative side of the facet supporting the embedded face.
    Assumes the complex is valid.
    """
    cache = c._cache.setdefault('star', {})
    if w in cache:
        return cache[w]
    face = c.face(w)
    dirs = []
    for inc in c.cofacet_inclusions(w):
        r = c.faces[inc.super].rank
        if face.rank == 0:
            e = (1,)
        else:
            u, s, v = smith_normal_form(inc.linear)
            uinv = unimodular_inverse(u)
            e = tuple(uinv[i][r - 1] for i in range(r))
        p = face.chart.feasible_point() if face.rank == 0 else face.chart.interior_point()
        if p is None:
            raise TropModuliError(f"face {w!r} has no interior point")
        q = inc.apply(p)
        super_chart = c.faces[inc.super].chart
        cols = inc.columns()
        oriented = None
        for n, o in super_chart.ineqs:
            if vec_dot(vec(n), q) != o:
                continue
            if any(vec_dot(vec(n), vec(col)) != 0 for col in cols):
                continue
            d = vec_dot(vec(n), vec(e))
            if d > 0:
                oriented = e
                break
            if d < 0:
                oriented = tuple(-x for x in e)
                break
        if oriented is None:
            raise TropModuliError(
                f"image of {w!r} is not a facet of {inc.super!r}; validate the complex first")
        dirs.append((inc.super, oriented))
    sd = StarData(face=w, directions=tuple(dirs))
    cache[w] = sd
    return sd


@dataclass(frozen=True)
class PIAMap:
    """Piecewise integral affine map: one affine map per face chart."""

    source: PolyhedralComplex
    target_dim: int
    per_face: dict  # face id -> (linear rows, offset)

    def face_map(self, fid: str):
        if fid not in self.per_face:
            raise UnknownFace(f"no map stored for face {fid!r}")
        return self.per_face[fid]


def validate_piamap(m: PIAMap) -> ValidationReport:
    """Exact compatibility of the per-face maps along every inclusion."""
    report = ValidationReport()
    for fid, (lin, off) in m.per_face.items():
        f = m.source.face(fid)
        if len(lin) != m.target_dim or any(len(r) != f.rank for r in lin) or len(off) != m.target_dim:
            report.add("shape", fid, "affine data of wrong shape")
    for (a, b), inc in m.source.inclusions.items():
        if a not in m.per_face or b not in m.per_face:
            report.add("coverage", f"{a}->{b}", "face without a map")
            continue
        lin_b, off_b = m.per_face[b]
        lin, off = affine_compose(lin_b, vec(off_b), inc.linear, vec(inc.offset))
        lin_a, off_a = m.per_face[a]
        if mat_rows(lin) != mat_rows(lin_a) or vec(off) != vec(off_a):
            report.add("compatibility", f"{a}->{b}",
                       "map on sub-face differs from restriction of super-face map")
    return report


def lin_of_image(m: PIAMap, w: str) -> Subspace:
    """Span of the linear part of the face map (charts are full-dimensional)."""
    m.source.face(w)
    lin, _ = m.face_map(w)
    cols = mat_columns(lin, width=m.source.face(w).rank)
    return Subspace.from_spanning([vec(col) for col in cols], m.target_dim)


class Harmonicity(str, Enum):
    HARMONIC = "harmonic"
    QUASI_HARMONIC_ONLY = "quasi_harmonic_only"
    NOT_QUASI_HARMONIC = "not_quasi_harmonic"


@dataclass(frozen=True)
class HarmonicityResult:
    verdict: Harmonicity
    certificate: Optional[tuple]  # positive integers, one per star direction
    derivatives: tuple            # images of the star directions
    star: StarData


def harmonicity_at(m: PIAMap, w: str) -> HarmonicityResult:
    """Trichotomy at a face: harmonic / quasi-harmonic only / not quasi-harmonic.

    Computes the derivative of the map along each star direction and tests
    whether the plain sum (resp. some positive integer combination) lies in
    the span of the image of the face.
    """
    sd = star(m.source, w)
    if not sd.directions:
        raise NoCofacets(f"face {w!r} has no codimension-one cofacets")
    derivs = []
    for cofacet, e in sd.directions:
        lin, _ = m.face_map(cofacet)
        derivs.append(mat_vec(lin, vec(e)))
    target = lin_of_image(m, w)
    total = vec((0,) * m.target_dim)
    for d in derivs:
        total = vec_add(total, d)
    if span_membership(total, target):
        return HarmonicityResult(Harmonicity.HARMONIC, (1,) * len(derivs), tuple(derivs), sd)
    cert = strict_positive_combination(derivs, target)
    if cert is not None:
        return HarmonicityResult(Harmonicity.QUASI_HARMONIC_ONLY, tuple(cert), tuple(derivs), sd)
    return HarmonicityResult(Harmonicity.NOT_QUASI_HARMONIC, None, tuple(derivs), sd)


# ---------------------------------------------------------------------------
# strictly semistable pairs and their skeletons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    id: str
    verticals: tuple  # component ids, |verticals| = a + 1 >= 1
    horizontals: tuple
    length: Fraction


@dataclass(frozen=True)
class SemistablePairData:
    """Combinatorial shadow of a strictly semistable pair.

    ``order`` lists pairs (S, T) meaning S <= T in the closure order on
    strata (S is the deeper stratum, so its polyhedron is the bigger one).
    """

    vertical_components: tuple
    horizontal_components: tuple
    strata: tuple
    order: tuple

    def stratum(self, sid: str) -> Stratum:
        for s in self.strata:
            if s.id == sid:
                return s
        raise InconsistentStrata(f"unknown stratum {sid!r}")


def _closure_order(d: SemistablePairData):
    """Reflexive-transitive closure of the given order pairs."""
    below = {s.id: {s.id} for s in d.strata}  # sid -> set of T with sid <= T
    for a, b in d.order:
        if a not in below or b not in below:
            raise InconsistentStrata(f"order pair ({a!r}, {b!r}) references unknown stratum")
        below[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in below:
            extra = set()
            for b in below[a]:
                extra |= below[b]
            if not extra <= below[a]:
                below[a] |= extra
                changed = True
    return below


def _check_pair_data(d: SemistablePairData):
    seen = set()
    comp = set(d.vertical_components) | set(d.horizontal_components)
    if len(comp) != len(d.vertical_components) + len(d.horizontal_components):
        raise InconsistentStrata("component ids are not distinct")
    for s in d.strata:
        if s.id in seen:
            raise InconsistentStrata(f"duplicate stratum id {s.id!r}")
        seen.add(s.id)
        if not s.verticals:
            raise InconsistentStrata(f"stratum {s.id!r} has empty vertical support")
        if not set(s.verticals) <= set(d.vertical_components):
            raise InconsistentStrata(f"stratum {s.id!r} references unknown vertical component")
        if not set(s.horizontals) <= set(d.horizontal_components):
            raise InconsistentStrata(f"stratum {s.id!r} references unknown horizontal component")
        if len(set(s.verticals)) != len(s.verticals) or len(set(s.horizontals)) != len(s.horizontals):
            raise InconsistentStrata(f"stratum {s.id!r} repeats a component")
        if s.length <= 0:
            raise InconsistentStrata(f"stratum {s.id!r} has nonpositive length")
    below = _closure_order(d)
    strata = {s.id: s for s in d.strata}
    for a, ups in below.items():
        sa = strata[a]
        supports = {}
        for b in ups:
            sb = strata[b]
            if a != b and b in below and a in below[b]:
                raise InconsistentStrata(f"order cycle through {a!r} and {b!r}")
            if not set(sb.verticals) <= set(sa.verticals) or \
                    not set(sb.horizontals) <= set(sa.horizontals):
                raise InconsistentStrata(
                    f"{a!r} <= {b!r} but supports do not shrink")
            if a != b and set(sb.verticals) == set(sa.verticals) and \
                    set(sb.horizontals) == set(sa.horizontals):
                raise InconsistentStrata(
                    f"comparable strata {a!r}, {b!r} share the same support")
            key = (frozenset(sb.verticals), frozenset(sb.horizontals))
            if key in supports and supports[key] != b:
                raise InconsistentStrata(
                    f"strata {supports[key]!r} and {b!r} above {a!r} share a support")
            supports[key] = b
            if a != b and len(sb.verticals) >= 2 and sb.length != sa.length:
                raise InconsistentStrata(
                    f"comparable strata {a!r}, {b!r} share a vertical pair "
                    f"but have lengths {sa.length} != {sb.length}")
    return below


def _stratum_chart(s: Stratum) -> Polyhedron:
    """Chart of Delta(a, length) x R^b_{>=0} in the dropped-first-vertical coordinates."""
    verts = sorted(s.verticals)
    horiz = sorted(s.horizontals)
    a = len(verts) - 1
    b = len(horiz)
    dim = a + b
    ineqs = []
    for i in range(a):
        ineqs.append((tuple(1 if j == i else 0 for j in range(dim)), Fraction(0)))
    if a > 0:
        ineqs.append((tuple(-1 if j < a else 0 for j in range(dim)), -s.length))
    for k in range(b):
        ineqs.append((tuple(1 if j == a + k else 0 for j in range(dim)), Fraction(0)))
    return Polyhedron(dim, ineqs)


def _skeleton_inclusion(sub: Stratum, sup: Stratum) -> tuple:
    """Affine embed of the chart of ``sub`` into the chart of ``sup``.

    ``sub`` is the shallower stratum (smaller polyhedron): sup <= sub.
    """
    sup_verts = sorted(sup.verticals)
    sup_horiz = sorted(sup.horizontals)
    sub_verts = sorted(sub.verticals)
    sub_horiz = sorted(sub.horizontals)
    sub_dim = (len(sub_verts) - 1) + len(sub_horiz)
    sub_cols = {v: i for i, v in enumerate(sub_verts[1:])}
    for k, h in enumerate(sub_horiz):
        sub_cols[h] = (len(sub_verts) - 1) + k

    def full_coord(v):
        """(linear row over sub chart coords, offset) of the y_v coordinate."""
        row = [0] * sub_dim
        if v not in sub.verticals:
            return row, Fraction(0)
        if v == sub_verts[0]:
            for w in sub_verts[1:]:
                row[sub_cols[w]] = -1
            return row, sup.length
        row[sub_cols[v]] = 1
        return row, Fraction(0)

    rows, offs = [], []
    for v in sup_verts[1:]:
        row, off = full_coord(v)
        rows.append(tuple(row))
        offs.append(off)
    for h in sup_horiz:
        row = [0] * sub_dim
        if h in sub.horizontals:
            row[sub_cols[h]] = 1
        rows.append(tuple(row))
        offs.append(Fraction(0))
    return tuple(rows), tuple(offs)


def build_skeleton(d: SemistablePairData) -> PolyhedralComplex:
    """Skeleton complex of semistable pair data: one face per stratum.

    The chart of a stratum with a+1 verticals, b horizontals and length nu
    is the simplex-times-orthant {z >= 0, sum z <= nu} x R^b_{>=0} in the
    coordinates obtained by dropping the first (sorted) vertical; for
    comparable strata the shallower chart embeds as the face where the
    missing coordinates vanish.
    """
    below = _check_pair_data(d)
    strata = {s.id: s for s in d.strata}
    faces = []
    for sid in sorted(strata):
        s = strata[sid]
        chart = _stratum_chart(s)
        faces.append(Face(id=sid, rank=chart.ambient_dim, chart=chart,
                          label=f"V={','.join(sorted(s.verticals))}"))
    inclusions = []
    for a in sorted(below):
        for b in sorted(below[a]):
            if a == b:
                continue
            lin, off = _skeleton_inclusion(strata[b], strata[a])
            inclusions.append(FaceInclusion(sub=b, super=a, linear=lin, offset=off))
    minimal = [sid for sid in sorted(strata)
               if all(sid not in below[o] or o == sid for o in below)]
    return PolyhedralComplex(faces, inclusions, maximal_faces=minimal)
