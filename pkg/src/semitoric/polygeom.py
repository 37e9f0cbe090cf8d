"""Exact rational convex polygons and primitive semitoric polygons.

Polygons are stored counterclockwise with the lexicographically smallest
vertex first and no three consecutive vertices collinear.  Edge k runs from
vertex k to vertex k+1; its primitive inward normal is fan vector k, and fan
corner k (normals k and k+1) sits at vertex k+1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .groupcore import Vec, det2
from .moves import ActT, Chop, CommuteFakeDelzant, FanMove, RemoveHidden, Rotate, Unchop
from .semitoricfan import D, F, H, CornerLabel, SemitoricFan, apply_move, on_top, t_apply
from .toricfan import InvalidFan, geometric_winding

Point = tuple[Fraction, Fraction]


class GeometryError(ValueError):
    pass


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(value)


def as_point(p) -> Point:
    return (as_fraction(p[0]), as_fraction(p[1]))


def _sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def _add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def _scale(s, v) -> Point:
    return (s * v[0], s * v[1])


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _signed_area2(points: Sequence[Point]) -> Fraction:
    n = len(points)
    return sum((points[i][0] * points[(i + 1) % n][1] - points[(i + 1) % n][0] * points[i][1]
                for i in range(n)), Fraction(0))


def _simplify(points: Sequence[Point]) -> list[Point]:
    """Drop repeated points and interior points of straight runs."""
    pts: list[Point] = []
    for p in points:
        if not pts or pts[-1] != p:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for i in range(len(pts)):
            if _cross(pts[i - 1], pts[i], pts[(i + 1) % len(pts)]) == 0:
                del pts[i]
                changed = True
                break
    return pts


def primitive_direction(v) -> Vec:
    """Primitive integer vector pointing along a nonzero rational vector."""
    x, y = as_fraction(v[0]), as_fraction(v[1])
    if x == 0 and y == 0:
        raise GeometryError("zero vector has no direction")
    den = math.lcm(x.denominator, y.denominator)
    ix, iy = int(x * den), int(y * den)
    g = math.gcd(ix, iy)
    return (ix // g, iy // g)


def edge_direction(normal: Vec) -> Vec:
    """Counterclockwise edge direction whose inward normal is `normal`."""
    return (normal[1], -normal[0])


def lattice_length(p: Point, q: Point) -> Fraction:
    e = primitive_direction(_sub(q, p))
    return (q[0] - p[0]) / e[0] if e[0] else (q[1] - p[1]) / e[1]


@dataclass(frozen=True)
class RationalPolygon:
    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        pts = _simplify([as_point(p) for p in self.vertices])
        if len(pts) < 3:
            raise GeometryError("polygon needs at least three non-collinear vertices")
        if _signed_area2(pts) < 0:
            pts.reverse()
        n = len(pts)
        for i in range(n):
            if _cross(pts[i - 1], pts[i], pts[(i + 1) % n]) <= 0:
                raise GeometryError(f"polygon is not strictly convex at vertex {pts[i]}")
        dirs = [_sub(pts[(i + 1) % n], pts[i]) for i in range(n)]
        if geometric_winding(dirs) != 1:
            raise GeometryError("polygon boundary is not simple")
        start = pts.index(min(pts))
        object.__setattr__(self, "vertices", tuple(pts[start:] + pts[:start]))

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def normals(self) -> list[Vec]:
        return [primitive_direction((p[1] - q[1], q[0] - p[0])) for p, q in self.edges()]

    def edge_lengths(self) -> list[Fraction]:
        return [lattice_length(p, q) for p, q in self.edges()]

    def x_range(self) -> tuple[Fraction, Fraction]:
        xs = [p[0] for p in self.vertices]
        return min(xs), max(xs)

    def vertical_extent(self, x) -> tuple[Fraction, Fraction] | None:
        return vertical_extent(self.vertices, as_fraction(x))

    def translate(self, v) -> "RationalPolygon":
        v = as_point(v)
        return RationalPolygon(tuple(_add(p, v) for p in self.vertices))

    def to_json(self) -> list[list[str]]:
        return [[str(p[0]), str(p[1])] for p in self.vertices]


def vertical_extent(points: Sequence[Point], x: Fraction) -> tuple[Fraction, Fraction] | None:
    ys: list[Fraction] = []
    n = len(points)
    for i in range(n):
        p, q = points[i], points[(i + 1) % n]
        if p[0] == x:
            ys.append(p[1])
        if (p[0] - x) * (q[0] - x) < 0:
            ys.append(p[1] + (q[1] - p[1]) * (x - p[0]) / (q[0] - p[0]))
    if not ys:
        return None
    return min(ys), max(ys)


class Marker(NamedTuple):
    lam: Fraction
    eps: int = 1
    k: int = 0

    def to_json(self) -> dict:
        return {"lambda": str(self.lam), "eps": self.eps, "k": self.k}

    @classmethod
    def from_json(cls, data: dict) -> "Marker":
        return cls(as_fraction(data["lambda"]), int(data.get("eps", 1)), int(data.get("k", 0)))


def _polygon_fan(poly: RationalPolygon, markers: Sequence[Marker]) -> SemitoricFan:
    normals = poly.normals()
    d = len(normals)
    lams = {m.lam for m in markers}
    labels = []
    for k in range(d):
        u, v = normals[k], normals[(k + 1) % d]
        vertex = poly.vertices[(k + 1) % d]
        if vertex[0] in lams and on_top(u, v):
            tw = det2(u, t_apply(v))
            if tw == 0:
                labels.append(F)
            elif tw == 1:
                labels.append(H)
            else:
                raise GeometryError(f"marked vertex {vertex} is neither fake nor hidden")
        else:
            if det2(u, v) != 1:
                raise GeometryError(f"unmarked vertex {vertex} is not a Delzant corner")
            labels.append(D)
    return SemitoricFan(tuple(normals), tuple(labels))


@dataclass(frozen=True)
class PrimitiveSemitoricPolygon:
    polygon: RationalPolygon
    markers: tuple[Marker, ...] = ()
    fan: SemitoricFan = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        markers = tuple(Marker(as_fraction(m[0]), int(m[1]), int(m[2])) for m in self.markers)
        object.__setattr__(self, "markers", markers)
        lo, hi = self.polygon.x_range()
        for a, b in zip(markers, markers[1:]):
            if not a.lam < b.lam:
                raise GeometryError("marker abscissae must be strictly increasing")
        for m in markers:
            if m.eps != 1:
                raise GeometryError("primitive polygons carry eps = +1 on every marker")
            if not lo < m.lam < hi:
                raise GeometryError(f"marker {m.lam} is not interior to [{lo}, {hi}]")
            top = self.polygon.vertical_extent(m.lam)[1]
            if (m.lam, top) not in self.polygon.vertices:
                raise GeometryError(f"the line x={m.lam} does not meet the top boundary at a vertex")
        try:
            fan = _polygon_fan(self.polygon, markers)
        except InvalidFan as exc:
            raise GeometryError(str(exc)) from exc
        if fan.complexity != len(markers):
            raise GeometryError("every marker must sit on a fake or hidden top vertex")
        object.__setattr__(self, "fan", fan)

    @property
    def m_f(self) -> int:
        return len(self.markers)

    @property
    def lambdas(self) -> tuple[Fraction, ...]:
        return tuple(m.lam for m in self.markers)

    @property
    def twisting(self) -> tuple[int, ...]:
        return tuple(m.k for m in self.markers)

    def length_at(self, j: int) -> Fraction:
        lo, hi = self.polygon.vertical_extent(self.markers[j].lam)
        return hi - lo

    def act(self, k: int) -> "PrimitiveSemitoricPolygon":
        """Global shear (x, y) -> (x, y + kx); twisting labels shift by k."""
        return PrimitiveSemitoricPolygon(_shear(self.polygon, k), tuple(m._replace(k=m.k + k) for m in self.markers))

    def to_json(self) -> dict:
        return {"vertices": self.polygon.to_json(), "markers": [m.to_json() for m in self.markers]}

    @classmethod
    def from_json(cls, data: dict) -> "PrimitiveSemitoricPolygon":
        poly = RationalPolygon(tuple(as_point(p) for p in data["vertices"]))
        return cls(poly, tuple(Marker.from_json(m) for m in data.get("markers", [])))


def fan_of_polygon(p: PrimitiveSemitoricPolygon | RationalPolygon) -> SemitoricFan:
    if isinstance(p, RationalPolygon):
        return _polygon_fan(p, ())
    return p.fan


# --- realization ---------------------------------------------------------

def polygon_from_lengths(f: SemitoricFan, lengths: Sequence) -> PrimitiveSemitoricPolygon:
    """Walk the edges with the given lattice lengths; bounding box corner at the origin."""
    d = len(f)
    lengths = [as_fraction(x) for x in lengths]
    if len(lengths) != d or any(x <= 0 for x in lengths):
        raise GeometryError("need one positive length per fan vector")
    # corner d-1 sits at the start of edge 0
    corner = {d - 1: (Fraction(0), Fraction(0))}
    p = corner[d - 1]
    for i in range(d):
        p = _add(p, _scale(lengths[i], edge_direction(f.vectors[i])))
        corner[i] = p
    if p != corner[d - 1]:
        raise GeometryError("edge lengths do not close the polygon")
    x0 = min(q[0] for q in corner.values())
    y0 = min(q[1] for q in corner.values())
    shift = (-x0, -y0)
    pts = [_add(corner[(i - 1) % d], shift) for i in range(d)]
    poly = RationalPolygon(tuple(pts))
    markers = tuple(sorted(Marker(corner[i][0] - x0) for i in range(d) if f.labels[i] is not D))
    return PrimitiveSemitoricPolygon(poly, markers)


def _milp(cost, a_eq, extra_rows, extra_vals, d):
    rows = [a_eq[0], a_eq[1]] + list(extra_rows)
    vals = [0, 0] + list(extra_vals)
    cons = LinearConstraint(np.array(rows, dtype=float), np.array(vals, float), np.array(vals, float))
    res = milp(c=np.array(cost, float), constraints=[cons], integrality=np.ones(d),
               bounds=Bounds(np.ones(d), np.full(d, 1e6)))
    if not res.success:
        raise GeometryError(f"no positive integral edge lengths: {res.message}")
    return [int(round(x)) for x in res.x]


def realizing_lengths(f: SemitoricFan) -> list[int]:
    """Smallest-sum positive integral lengths closing the fan's polygon, ties lexicographic."""
    d = len(f)
    dirs = [edge_direction(v) for v in f.vectors]
    a_eq = [[e[0] for e in dirs], [e[1] for e in dirs]]
    best = _milp([1] * d, a_eq, [], [], d)
    rows, vals = [[1] * d], [sum(best)]
    for j in range(d):
        cost = [0] * d
        cost[j] = 1
        sol = _milp(cost, a_eq, rows, vals, d)
        row = [0] * d
        row[j] = 1
        rows.append(row)
        vals.append(sol[j])
    lengths = vals[1:]
    if (sum(x * e[0] for x, e in zip(lengths, dirs)) != 0
            or sum(x * e[1] for x, e in zip(lengths, dirs)) != 0):
        raise GeometryError("solver returned lengths that do not close exactly")
    return lengths


def polygon_realizing_fan(f: SemitoricFan) -> PrimitiveSemitoricPolygon:
    return polygon_from_lengths(f, realizing_lengths(f))


# --- shears ----------------------------------------------------------------

def shear_points(points: Sequence[Point], shears: Sequence[tuple[Fraction, int]]) -> list[Point]:
    """Apply y -> y + sum_j k_j * max(0, x - lam_j), breaking edges at each lam_j."""
    cuts = sorted({as_fraction(lam) for lam, k in shears if k})
    n = len(points)
    split: list[Point] = []
    for i in range(n):
        p, q = points[i], points[(i + 1) % n]
        split.append(p)
        lo, hi = sorted((p[0], q[0]))
        inner = [c for c in cuts if lo < c < hi]
        if p[0] > q[0]:
            inner.reverse()
        for c in inner:
            split.append((c, p[1] + (q[1] - p[1]) * (c - p[0]) / (q[0] - p[0])))

    def lift(pt: Point) -> Point:
        dy = sum((k * (pt[0] - as_fraction(lam)) for lam, k in shears if pt[0] > as_fraction(lam)), Fraction(0))
        return (pt[0], pt[1] + dy)

    return [lift(pt) for pt in split]


def vertical_shear(p: RationalPolygon, lam, k: int) -> RationalPolygon:
    return shear_polygon(p, [(as_fraction(lam), k)])


def shear_polygon(p: RationalPolygon, shears: Sequence[tuple[Fraction, int]]) -> RationalPolygon:
    if not any(k for _, k in shears):
        return p
    try:
        return RationalPolygon(tuple(shear_points(p.vertices, shears)))
    except GeometryError as exc:
        raise GeometryError(f"sheared polygon is not convex: {exc}") from exc


# --- measures --------------------------------------------------------------

class Density(str, Enum):
    LEBESGUE = "lebesgue"
    EXPABSX = "expabsx"


def _exp_slab(alpha: Fraction, beta: Fraction, a: Fraction, b: Fraction) -> float:
    """Integral of (alpha x + beta) e^{-|x|} over [a, b] with a, b on one side of 0."""
    al, be = float(alpha), float(beta)
    if b <= 0:
        prim = lambda x: (al * x + be - al) * math.exp(x)  # noqa: E731
    else:
        prim = lambda x: -(al * x + be + al) * math.exp(-x)  # noqa: E731
    return prim(float(b)) - prim(float(a))


def _measure_points(points: Sequence[Point], density: Density):
    pts = _simplify(list(points))
    if len(pts) < 3:
        return Fraction(0) if density is Density.LEBESGUE else 0.0
    if density is Density.LEBESGUE:
        return abs(_signed_area2(pts)) / 2
    xs = sorted({p[0] for p in pts})
    if xs[0] < 0 < xs[-1]:
        xs = sorted(set(xs) | {Fraction(0)})
    heights = []
    for x in xs:
        lo, hi = vertical_extent(pts, x)
        heights.append(hi - lo)
    parts = []
    for (a, ha), (b, hb) in zip(zip(xs, heights), zip(xs[1:], heights[1:])):
        alpha = (hb - ha) / (b - a)
        parts.append(_exp_slab(alpha, ha - alpha * a, a, b))
    return math.fsum(parts)


def measure(p: RationalPolygon, density: Density = Density.LEBESGUE):
    return _measure_points(p.vertices, Density(density))


def clip_halfplane(points: Sequence[Point], normal, offset) -> list[Point]:
    """Keep the part of a convex point list where normal . x >= offset."""
    out: list[Point] = []
    n = len(points)
    if n == 0:
        return out
    val = [normal[0] * p[0] + normal[1] * p[1] - offset for p in points]
    for i in range(n):
        p, q = points[i], points[(i + 1) % n]
        vp, vq = val[i], val[(i + 1) % n]
        if vp >= 0:
            out.append(p)
        if (vp > 0 > vq) or (vp < 0 < vq):
            s = vp / (vp - vq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    return out


def intersection_points(p: RationalPolygon, q: RationalPolygon) -> list[Point]:
    pts = list(p.vertices)
    for (a, b), nrm in zip(q.edges(), q.normals()):
        pts = clip_halfplane(pts, nrm, nrm[0] * a[0] + nrm[1] * a[1])
        if not pts:
            break
    return _simplify(pts)


def symmetric_difference_measure(p: RationalPolygon, q: RationalPolygon, density: Density = Density.LEBESGUE):
    density = Density(density)
    return measure(p, density) + measure(q, density) - 2 * _measure_points(intersection_points(p, q), density)


def twisting_shift(a: PrimitiveSemitoricPolygon, b: PrimitiveSemitoricPolygon) -> int:
    """Common shift c with b.k = a.k + c; raises when the components differ."""
    if a.m_f != b.m_f:
        raise GeometryError(f"m_f mismatch: {a.m_f} vs {b.m_f}")
    diffs = {kb - ka for ka, kb in zip(a.twisting, b.twisting)}
    if len(diffs) > 1:
        raise GeometryError("twisting indices lie in different classes")
    return diffs.pop() if diffs else 0


def family_distance(a: PrimitiveSemitoricPolygon, b: PrimitiveSemitoricPolygon,
                    density: Density = Density.EXPABSX):
    density = Density(density)
    if a.m_f == 0:
        return _unlabelled_distance(a.polygon, b.polygon, density)
    c = twisting_shift(a, b)
    if c:
        b = b.act(-c)
    total = Fraction(0) if density is Density.LEBESGUE else 0.0
    for u in itertools.product((0, 1), repeat=a.m_f):
        pa = shear_polygon(a.polygon, list(zip(a.lambdas, u)))
        pb = shear_polygon(b.polygon, list(zip(b.lambdas, u)))
        total += symmetric_difference_measure(pa, pb, density)
    return total


def _slab_measure(p: RationalPolygon, lo: Fraction, hi: Fraction, density: Density):
    pts = clip_halfplane(p.vertices, (1, 0), lo)
    pts = clip_halfplane(pts, (-1, 0), -hi)
    return _measure_points(pts, density)


def _height_differences(a: RationalPolygon, b: RationalPolygon) -> list[Point]:
    """Convex region {(x, ya - yb)} over the common x-range, as a CCW point list."""
    lo = max(a.x_range()[0], b.x_range()[0])
    hi = min(a.x_range()[1], b.x_range()[1])
    if lo >= hi:
        return []
    xs = sorted({v[0] for v in a.vertices + b.vertices if lo <= v[0] <= hi} | {lo, hi})
    lower, upper = [], []
    for x in xs:
        la, ua = a.vertical_extent(x)
        lb, ub = b.vertical_extent(x)
        lower.append((x, la - ub))
        upper.append((x, ua - lb))
    return lower + upper[::-1]


def _overlap_bound(a, b, diffs, k: int, up: bool, density: Density):
    """Bound on the overlap of a with b sheared by any k' beyond k in the given direction.

    Overlap points have (x, kx) in diffs. For x >= 0 they lie in {y >= kx} when
    searching upward, for x <= 0 in {y <= kx}; both sets shrink as k grows.
    """
    sign = 1 if up else -1
    total = []
    for side in (1, -1):
        pts = clip_halfplane(diffs, (side, 0), 0)
        pts = clip_halfplane(pts, (-k * side * sign, side * sign), 0)
        if pts:
            xs = [q[0] for q in pts]
            total.append(min(_slab_measure(a, min(xs), max(xs), density),
                             _slab_measure(b, min(xs), max(xs), density)))
    return sum(total) if total else 0


def _unlabelled_distance(a: RationalPolygon, b: RationalPolygon, density: Density):
    """Minimum over global shears of b when no marker fixes the representative."""
    base = measure(a, density) + measure(b, density)
    diffs = _height_differences(a, b)
    best = symmetric_difference_measure(a, b, density)
    if not diffs:
        return best
    for step in (1, -1):
        k = step
        while base - 2 * _overlap_bound(a, b, diffs, k, step > 0, density) < best:
            best = min(best, symmetric_difference_measure(a, _shear(b, k), density))
            k += step
    return best


def _shear(p: RationalPolygon, k: int) -> RationalPolygon:
    return RationalPolygon(tuple((x, y + k * x) for x, y in p.vertices))


# --- move families ---------------------------------------------------------

def _halfplane(p: Point, w1, w2, eps) -> tuple[Point, Fraction]:
    """{p + s1 w1 + s2 w2 : s1 + s2 >= eps} as (normal, offset)."""
    det = Fraction(w1[0] * w2[1] - w2[0] * w1[1])
    if det <= 0:
        raise GeometryError("cut basis must be positively oriented")
    g = ((w2[1] - w1[1]) / det, (w1[0] - w2[0]) / det)
    return g, eps + g[0] * p[0] + g[1] * p[1]


def _cut(points: Sequence[Point], p: Point, w1, w2, eps) -> RationalPolygon:
    g, off = _halfplane(p, w1, w2, eps)
    return RationalPolygon(tuple(clip_halfplane(points, g, off)))


def _line_meet(p1: Point, d1, p2: Point, d2) -> Point:
    den = det2(d1, d2)
    s = ((p2[0] - p1[0]) * d2[1] - (p2[1] - p1[1]) * d2[0]) / Fraction(den)
    return (p1[0] + s * d1[0], p1[1] + s * d1[1])


def _drop_edge(poly: RationalPolygon, k: int) -> tuple[list[Point], Point]:
    """Remove edge k by extending its neighbours; returns new vertices and their meeting point."""
    vs, normals = poly.vertices, poly.normals()
    d = len(vs)
    before, after = (k - 1) % d, (k + 1) % d
    q = _line_meet(vs[k], edge_direction(normals[before]), vs[after], edge_direction(normals[after]))
    for j, (a, _) in enumerate(poly.edges()):
        if j in (before, k, after):
            continue
        nrm = normals[j]
        if nrm[0] * (q[0] - a[0]) + nrm[1] * (q[1] - a[1]) <= 0:
            raise GeometryError(f"removing edge {k} would also remove edge {j}")
    pts = [q if i == k else vs[i] for i in range(d) if i != after]
    return pts, q


def _with_markers(poly: RationalPolygon, markers: Sequence[Marker], old_lam=None, new_lam=None):
    ms = list(markers)
    if old_lam is not None:
        idx = [m.lam for m in ms].index(old_lam)
        ms[idx] = ms[idx]._replace(lam=new_lam)
    return PrimitiveSemitoricPolygon(poly, tuple(ms))


def default_eps0(p: PrimitiveSemitoricPolygon, m: FanMove) -> Fraction:
    lengths = p.polygon.edge_lengths()
    d = len(lengths)
    if isinstance(m, Chop):
        return min(lengths[m.index], lengths[(m.index + 1) % d]) / 2
    if isinstance(m, RemoveHidden):
        alpha = p.fan.vectors[(m.index + 1) % d][1]
        return min(lengths[(m.index + 1) % d], lengths[m.index] / alpha**2) / 2
    if isinstance(m, CommuteFakeDelzant):
        k = m.index
        _, q = _drop_edge(p.polygon, (k + 1) % d)
        alpha = p.fan.vectors[(k + 2) % d][1]
        outward = lattice_length(q, p.polygon.vertices[(k + 3) % d])
        back = lattice_length(p.polygon.vertices[k], q)
        return min(outward, back / alpha**2) / 2
    return Fraction(0)


def move_polygon_family(p: PrimitiveSemitoricPolygon, m: FanMove, t, eps0=None) -> PrimitiveSemitoricPolygon:
    """Member t of the continuous family carrying p to a polygon with fan apply_move(fan, m).

    Move indices refer to fan_of_polygon(p).
    """
    t = as_fraction(t)
    if not 0 <= t <= 1:
        raise GeometryError("family parameter must lie in [0, 1]")
    fan = p.fan
    apply_move(fan, m)  # raises for inapplicable moves
    if t == 0 or isinstance(m, Rotate):
        return p
    if isinstance(m, ActT):
        return p.act(-m.k)
    poly, vs = p.polygon, p.polygon.vertices
    d = len(vs)
    dirs = [edge_direction(v) for v in fan.vectors]
    lengths = poly.edge_lengths()
    k = m.index
    eps0 = default_eps0(p, m) if eps0 is None else as_fraction(eps0)

    if isinstance(m, Chop):
        if not 0 < eps0 < min(lengths[k], lengths[(k + 1) % d]):
            raise GeometryError("eps0 must be below both adjacent edge lengths")
        corner = vs[(k + 1) % d]
        u1, u2 = dirs[(k + 1) % d], _scale(-1, dirs[k])
        return _with_markers(_cut(vs, corner, u1, u2, t * eps0), p.markers)

    if isinstance(m, Unchop):
        pts, q = _drop_edge(poly, k)
        u1, u2 = dirs[(k + 1) % d], _scale(-1, dirs[(k - 1) % d])
        eps_star = lattice_length(q, vs[(k + 1) % d])
        if t == 1:
            return _with_markers(RationalPolygon(tuple(pts)), p.markers)
        return _with_markers(_cut(pts, q, u1, u2, (1 - t) * eps_star), p.markers)

    if isinstance(m, RemoveHidden):
        corner = vs[(k + 1) % d]
        alpha = fan.vectors[(k + 1) % d][1]
        if not 0 < eps0 < min(lengths[(k + 1) % d], lengths[k] / alpha**2):
            raise GeometryError("eps0 too large for the hidden corner")
        u1, u2 = dirs[(k + 1) % d], _scale(-alpha**2, dirs[k])
        s = t * eps0
        fake_vertex = _add(corner, _scale(s, u1))
        return _with_markers(_cut(vs, corner, u1, u2, s), p.markers, corner[0], fake_vertex[0])

    if isinstance(m, CommuteFakeDelzant):
        mid = (k + 1) % d
        pts, q = _drop_edge(poly, mid)
        fake = vs[mid]
        beta = fan.vectors[k][1]
        alpha = fan.vectors[(k + 2) % d][1]
        v_out, v_back = dirs[(k + 2) % d], _scale(-1, dirs[k])
        eps_star = lattice_length(q, fake)
        assert _add(q, _scale(eps_star * beta**2, v_out)) == vs[(k + 2) % d]
        if t < Fraction(1, 2):
            s = (1 - 2 * t) * eps_star
            new_fake = _add(q, _scale(s, v_back))
            poly_t = _cut(pts, q, _scale(beta**2, v_out), v_back, s)
        elif t == Fraction(1, 2):
            return _with_markers(RationalPolygon(tuple(pts)), p.markers, fake[0], q[0])
        else:
            outward = lattice_length(q, vs[(k + 3) % d])
            back = lattice_length(vs[k], q)
            if not 0 < eps0 < min(outward, back / alpha**2):
                raise GeometryError("eps0 too large for the re-resolved hidden corner")
            s = (2 * t - 1) * eps0
            new_fake = _add(q, _scale(s, v_out))
            poly_t = _cut(pts, q, v_out, _scale(alpha**2, v_back), s)
        return _with_markers(poly_t, p.markers, fake[0], new_fake[0])

    raise GeometryError(f"unsupported move {m}")


# --- same-fan interpolation --------------------------------------------------

def _aligned_vertices(p: RationalPolygon, q: RationalPolygon) -> list[Point]:
    """Vertices of q listed in the corner order of p."""
    np_, nq = p.normals(), q.normals()
    if len(np_) != len(nq):
        raise GeometryError("polygons have different fans")
    d = len(np_)
    for r in range(d):
        if nq[r:] + nq[:r] == np_:
            return [q.vertices[(i + r) % d] for i in range(d)]
    raise GeometryError("polygons have different fans")


def same_fan_interpolate(p: RationalPolygon, q: RationalPolygon, t) -> RationalPolygon:
    """Minkowski combination (1-t)p + tq, i.e. support offsets interpolated linearly."""
    t = as_fraction(t)
    qv = _aligned_vertices(p, q)
    if t == 0:
        return p
    if t == 1:
        return q
    pts = [_add(_scale(1 - t, a), _scale(t, b)) for a, b in zip(p.vertices, qv)]
    out = RationalPolygon(tuple(pts))
    if out.normals() != p.normals() and _rotation(out.normals(), p.normals()) is None:
        raise GeometryError("interpolation changed the fan")
    return out


def _rotation(a: list, b: list) -> int | None:
    for r in range(len(a)):
        if a[r:] + a[:r] == b:
            return r
    return None


def interpolate_semitoric(p: PrimitiveSemitoricPolygon, q: PrimitiveSemitoricPolygon, t) -> PrimitiveSemitoricPolygon:
    """Same-fan interpolation carrying each marker along with its corner."""
    t = as_fraction(t)
    if p.twisting != q.twisting:
        raise GeometryError("same-fan interpolation needs equal twisting labels")
    if t == 0:
        return p
    if t == 1:
        return q
    qv = _aligned_vertices(p.polygon, q.polygon)
    pv = p.polygon.vertices
    pts = [_add(_scale(1 - t, a), _scale(t, b)) for a, b in zip(pv, qv)]
    poly = RationalPolygon(tuple(pts))
    markers = []
    for m in p.markers:
        i = next(i for i, v in enumerate(pv) if v[0] == m.lam and v[1] == p.polygon.vertical_extent(m.lam)[1])
        markers.append(m._replace(lam=pts[i][0]))
    if any(a.lam >= b.lam for a, b in zip(markers, markers[1:])):
        raise GeometryError("markers crossed during interpolation")
    return PrimitiveSemitoricPolygon(poly, tuple(markers))


def polygon_from_json(data: dict) -> PrimitiveSemitoricPolygon:
    return PrimitiveSemitoricPolygon.from_json(data)


def as_semitoric(p: RationalPolygon | PrimitiveSemitoricPolygon) -> PrimitiveSemitoricPolygon:
    return p if isinstance(p, PrimitiveSemitoricPolygon) else PrimitiveSemitoricPolygon(p, ())


def iter_vertices(polys: Iterable[RationalPolygon]) -> Iterable[Point]:
    for p in polys:
        yield from p.vertices
