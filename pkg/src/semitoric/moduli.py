"""Ingredient lists, their metric, and explicit connecting paths."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .moves import ActT, Chop, CommuteFakeDelzant, FanMove, RemoveHidden, Rotate, Unchop
from .polygeom import (
    Density,
    GeometryError,
    _add,
    _cut,
    _scale,
    _with_markers,
    edge_direction,
    PrimitiveSemitoricPolygon,
    as_fraction,
    family_distance,
    interpolate_semitoric,
    move_polygon_family,
    polygon_realizing_fan,
    twisting_shift,
)
from .semitoricfan import H, SemitoricFan, apply_move, normalize, standard_fan

TWO_PI = 2 * math.pi


class ComponentMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients sigma_{i,j} for i + j <= degree, keyed in (i, j) order."""

    degree: int
    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) != len(self.index_pairs(self.degree)):
            raise ValueError(f"degree {self.degree} needs {len(self.index_pairs(self.degree))} coefficients")
        if coeffs[0] != 0:
            raise ValueError("sigma_00 must be 0")
        if not 0 <= coeffs[1] < TWO_PI:
            raise ValueError("sigma_01 must lie in [0, 2pi)")
        object.__setattr__(self, "coefficients", coeffs)

    @staticmethod
    def index_pairs(degree: int) -> list[tuple[int, int]]:
        return [(i, n - i) for n in range(degree + 1) for i in range(n + 1)]

    @classmethod
    def zero(cls, degree: int = 6) -> "TruncatedSeries":
        return cls(degree, (0.0,) * len(cls.index_pairs(degree)))

    @classmethod
    def from_dict(cls, degree: int, values: dict[tuple[int, int], float]) -> "TruncatedSeries":
        return cls(degree, tuple(float(values.get(ij, 0.0)) for ij in cls.index_pairs(degree)))

    def items(self):
        return zip(self.index_pairs(self.degree), self.coefficients)

    def __getitem__(self, ij: tuple[int, int]) -> float:
        return self.coefficients[self.index_pairs(self.degree).index(ij)]

    def to_json(self) -> dict:
        matrix = [[0.0] * (self.degree + 1) for _ in range(self.degree + 1)]
        for (i, j), c in self.items():
            matrix[i][j] = c
        return {"degree": self.degree, "coefficients": matrix}

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedSeries":
        n = int(data["degree"])
        matrix = data["coefficients"]
        return cls(n, tuple(float(matrix[i][j]) for i, j in cls.index_pairs(n)))


@dataclass(frozen=True)
class CapSequence:
    values: tuple[float, ...]
    ratio: float | None = None

    def __post_init__(self) -> None:
        if any(b <= 0 for b in self.values):
            raise ValueError("caps must be positive")

    @classmethod
    def geometric(cls, degree: int = 6, ratio: float = 0.5) -> "CapSequence":
        return cls(tuple(ratio**n for n in range(degree + 1)), ratio)

    def __getitem__(self, n: int) -> float:
        return self.values[n]

    def tail_bound(self, degree: int) -> float | None:
        """sum_{n > degree} (n+1) b_n, known in closed form for geometric caps."""
        if self.ratio is None:
            return None
        r, m = self.ratio, degree + 1
        # sum_{n>=m} (n+1) r^n = r^m ((m+1) - m r) / (1-r)^2
        return r**m * ((m + 1) - m * r) / (1 - r) ** 2


def series_distance(s: TruncatedSeries, t: TruncatedSeries, caps: CapSequence) -> float:
    if s.degree != t.degree:
        raise ValueError(f"degree mismatch: {s.degree} vs {t.degree}")
    parts = []
    for ((i, j), a), (_, b) in zip(s.items(), t.items()):
        diff = abs(a - b)
        if (i, j) == (0, 1):
            parts.append(min(diff, TWO_PI - diff, caps[1]))
        else:
            parts.append(min(diff, caps[i + j]))
    return math.fsum(parts)


@dataclass(frozen=True)
class IngredientList:
    polygon: PrimitiveSemitoricPolygon
    h: tuple[Fraction, ...]
    series: tuple[TruncatedSeries, ...]

    def __post_init__(self) -> None:
        h = tuple(as_fraction(x) for x in self.h)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "series", tuple(self.series))
        m = self.polygon.m_f
        if len(h) != m or len(self.series) != m:
            raise ValueError(f"m_f={m} needs {m} heights and {m} series")
        for j, hj in enumerate(h):
            if not 0 < hj < self.polygon.length_at(j):
                raise ValueError(f"h_{j}={hj} is outside (0, {self.polygon.length_at(j)})")

    @property
    def m_f(self) -> int:
        return self.polygon.m_f

    def to_json(self) -> dict:
        return {
            "m_f": self.m_f,
            "polygon": self.polygon.to_json(),
            "h": [str(x) for x in self.h],
            "series": [s.to_json() for s in self.series],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IngredientList":
        poly = PrimitiveSemitoricPolygon.from_json(data["polygon"])
        out = cls(poly, tuple(as_fraction(x) for x in data.get("h", [])),
                  tuple(TruncatedSeries.from_json(s) for s in data.get("series", [])))
        if "m_f" in data and int(data["m_f"]) != out.m_f:
            raise ValueError("m_f disagrees with the number of markers")
        return out


def check_component(m: IngredientList, n: IngredientList) -> int:
    if m.m_f != n.m_f:
        raise ComponentMismatch(f"m_f mismatch: {m.m_f} vs {n.m_f}")
    try:
        return twisting_shift(m.polygon, n.polygon)
    except GeometryError as exc:
        raise ComponentMismatch(str(exc)) from exc


def ingredient_distance(m: IngredientList, n: IngredientList,
                        density: Density = Density.EXPABSX, caps: CapSequence | None = None) -> float:
    check_component(m, n)
    caps = caps or CapSequence.geometric(m.series[0].degree if m.series else 6)
    parts = [float(family_distance(m.polygon, n.polygon, density))]
    for s, t, a, b in zip(m.series, n.series, m.h, n.h):
        parts.append(series_distance(s, t, caps))
        parts.append(float(abs(a - b)))
    return math.fsum(parts)


def h_interpolate(h, length, h2, length2, length_t, t):
    h, length, h2, length2, length_t, t = (as_fraction(x) for x in (h, length, h2, length2, length_t, t))
    if not (0 < h < length and 0 < h2 < length2 and length_t > 0 and 0 <= t <= 1):
        raise ValueError("h_interpolate arguments out of domain")
    return ((1 - t) * h / length + t * h2 / length2) * length_t


def interpolate_series(s: TruncatedSeries, t2: TruncatedSeries, t) -> TruncatedSeries:
    if t == 0:
        return s
    if t == 1:
        return t2
    tf = float(t)
    coeffs = []
    for ((i, j), a), (_, b) in zip(s.items(), t2.items()):
        if (i, j) == (0, 1):
            delta = (b - a + math.pi) % TWO_PI - math.pi
            coeffs.append((a + tf * delta) % TWO_PI)
        else:
            coeffs.append((1 - tf) * a + tf * b)
    return TruncatedSeries(s.degree, tuple(coeffs))


# --- connectivity paths --------------------------------------------------

Segment = Callable[[Fraction], PrimitiveSemitoricPolygon]


def _polygon_index_move(m: FanMove, trace_fan: SemitoricFan, poly_fan: SemitoricFan) -> FanMove:
    """Re-express a move on trace_fan in the vertex numbering of poly_fan."""
    if isinstance(m, (ActT, Rotate)):
        return m
    r = poly_fan.rotation_to(trace_fan)
    assert r is not None, "polygon fan and trace fan disagree"
    d = len(poly_fan)
    return type(m)((m.index + r) % d)


def _staged_realization(poly: PrimitiveSemitoricPolygon, m: FanMove) -> PrimitiveSemitoricPolygon:
    """A polygon with the same fan as poly from which the family for m is feasible.

    Unchop: realize the smaller fan and chop it back. Commute: realize the fan
    with the fake and Delzant corners merged into a hidden one, then split it
    with the fake corner on the left.
    """
    fan = poly.fan
    d = len(fan)
    k = m.index
    if isinstance(m, Unchop):
        small_fan = apply_move(fan, m)
        small = polygon_realizing_fan(small_fan)
        chop = _polygon_index_move(Chop((k - 1) % (d - 1)), small_fan, small.fan)
        staged = move_polygon_family(small, chop, 1)
    elif isinstance(m, CommuteFakeDelzant):
        mid = (k + 1) % d
        vectors = fan.vectors[:mid] + fan.vectors[mid + 1:]
        labels = list(fan.labels)
        labels[k] = H
        del labels[mid]
        merged_fan = SemitoricFan(vectors, tuple(labels))
        merged = polygon_realizing_fan(merged_fan)
        hk = _polygon_index_move(RemoveHidden(k if mid else k - 1), merged_fan, merged.fan).index
        staged = _split_hidden_left(merged, hk)
    else:
        staged = polygon_realizing_fan(fan)
    return PrimitiveSemitoricPolygon(
        staged.polygon, tuple(mk._replace(k=k_) for mk, k_ in zip(staged.markers, poly.twisting)))


def _split_hidden_left(p: PrimitiveSemitoricPolygon, k: int) -> PrimitiveSemitoricPolygon:
    """Resolve hidden corner k into a fake corner followed by a Delzant one."""
    vs = p.polygon.vertices
    d = len(vs)
    q = vs[(k + 1) % d]
    v_out = edge_direction(p.fan.vectors[(k + 1) % d])
    v_back = _scale(-1, edge_direction(p.fan.vectors[k]))
    beta = p.fan.vectors[k][1]
    lengths = p.polygon.edge_lengths()
    s = min(lengths[k], lengths[(k + 1) % d] / beta**2) / 2
    new_fake = _add(q, _scale(s, v_back))
    cut = _cut(vs, q, _scale(beta**2, v_out), v_back, s)
    return _with_markers(cut, p.markers, q[0], new_fake[0])


class _PathBuilder:
    def __init__(self, start: PrimitiveSemitoricPolygon):
        self.segments: list[Segment] = []
        self.current = start

    def interpolate_to(self, target: PrimitiveSemitoricPolygon) -> None:
        src = self.current
        if src == target:
            return
        self.segments.append(lambda s, a=src, b=target: interpolate_semitoric(a, b, s))
        self.current = target

    def move(self, m: FanMove, trace_fan: SemitoricFan) -> None:
        if isinstance(m, Rotate):
            return
        pm = _polygon_index_move(m, trace_fan, self.current.fan)
        try:
            move_polygon_family(self.current, pm, Fraction(1, 2))
            end = move_polygon_family(self.current, pm, 1)
        except GeometryError:
            self.interpolate_to(_staged_realization(self.current, pm))
            pm = _polygon_index_move(m, trace_fan, self.current.fan)
            end = move_polygon_family(self.current, pm, 1)
        src = self.current
        self.segments.append(lambda s, a=src, mv=pm: move_polygon_family(a, mv, s))
        self.current = end

    def follow(self, fan: SemitoricFan, trace: Sequence[FanMove]) -> SemitoricFan:
        for m in trace:
            self.move(m, fan)
            fan = apply_move(fan, m)
        return fan


def _reversed_segments(segments: list[Segment]) -> list[Segment]:
    return [lambda s, g=g: g(1 - s) for g in reversed(segments)]


def twist_loop(c: int) -> list[FanMove]:
    """Moves from standard_fan(c) back to itself with total T-power 1."""
    chopped = apply_move(standard_fan(c), Chop(0))
    _, trace, k = normalize(chopped, shortcut=False)
    assert k == 1
    return [Chop(0)] + trace


def polygon_path(a: PrimitiveSemitoricPolygon, b: PrimitiveSemitoricPolygon) -> list[Segment]:
    """Segments of a continuous path of primitive polygons from a to b (same component)."""
    shift = twisting_shift(a, b)
    c = a.fan.complexity
    _, trace_a, k_a = normalize(a.fan)
    # b is compared through the representative carrying a's labels
    b_aligned = b.act(-shift) if shift else b
    _, trace_b, k_b = normalize(b_aligned.fan)

    fwd = _PathBuilder(a)
    fwd.follow(a.fan, trace_a)
    back = _PathBuilder(b_aligned)
    back.follow(b_aligned.fan, trace_b)

    # each twist loop lowers the labels by one; match a's end labels to b's
    loops = k_b - k_a if c else 0
    loop = twist_loop(c) if loops else []
    for _ in range(abs(loops)):
        builder = fwd if loops > 0 else back
        builder.follow(standard_fan(c), loop)

    fwd.interpolate_to(back.current)
    # b_aligned and b are two representatives of one orbit, so the final
    # switch between them has distance zero
    return fwd.segments + _reversed_segments(back.segments)


SUBSTEPS = 16


def _arc_lengths(g: Segment) -> list[Fraction]:
    """Cumulative family distance at s = i / SUBSTEPS along one segment."""
    points = [g(Fraction(i, SUBSTEPS)) for i in range(SUBSTEPS + 1)]
    out = [Fraction(0)]
    for a, b in zip(points, points[1:]):
        d = Fraction(float(family_distance(a, b))).limit_denominator(10**9)
        out.append(out[-1] + d + Fraction(1, 10**4 * SUBSTEPS))
    return out


def _locate(tables: list[list[Fraction]], pos: Fraction) -> tuple[int, Fraction]:
    """Segment index and local parameter at arc length pos, linear between table entries."""
    for i, table in enumerate(tables):
        if pos <= table[-1] or i == len(tables) - 1:
            pos = min(pos, table[-1])
            j = next(j for j in range(1, SUBSTEPS + 1) if pos <= table[j])
            frac = (pos - table[j - 1]) / (table[j] - table[j - 1])
            return i, (j - 1 + frac) / SUBSTEPS
        pos -= table[-1]
    raise AssertionError("unreachable")


def connectivity_path(m: IngredientList, n: IngredientList, steps: int = 100) -> list[IngredientList]:
    """steps + 1 samples of a continuous path from m to n inside one component."""
    if steps < 1:
        raise ValueError("steps must be positive")
    check_component(m, n)
    if m == n:
        return [m] * (steps + 1)
    segments = polygon_path(m.polygon, n.polygon)
    tables = [_arc_lengths(g) for g in segments]
    total = sum(t[-1] for t in tables)
    out = [m]
    for step in range(1, steps):
        t = Fraction(step, steps)
        if segments:
            idx, local = _locate(tables, t * total)
            poly = segments[idx](local)
        else:
            poly = m.polygon
        h = tuple(
            h_interpolate(m.h[j], m.polygon.length_at(j), n.h[j], n.polygon.length_at(j), poly.length_at(j), t)
            for j in range(m.m_f)
        )
        series = tuple(interpolate_series(s, s2, t) for s, s2 in zip(m.series, n.series))
        out.append(IngredientList(poly, h, series))
    out.append(n)
    return out
