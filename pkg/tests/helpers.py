"""Shared generators for randomized tests."""

from __future__ import annotations

import random
from fractions import Fraction

from semitoric.moves import ActT, Chop, CommuteFakeDelzant, RemoveHidden, Unchop
from semitoric.moduli import IngredientList, TruncatedSeries
from semitoric.polygeom import Marker, PrimitiveSemitoricPolygon, polygon_realizing_fan
from semitoric.semitoricfan import D, F, H, SemitoricFan, apply_move, on_top, standard_fan
from semitoric.toricfan import (
    Hirzebruch,
    Rectangle,
    ToricFan,
    Triangle,
    corner_chop,
    is_reducible,
    minimal_model_fan,
)


def applicable_moves(f: SemitoricFan, rng: random.Random) -> list:
    d, vs, ls = len(f), f.vectors, f.labels
    opts: list = [ActT(rng.randint(-3, 3))]
    opts += [Chop(i) for i in range(d) if ls[i] is D]
    opts += [Unchop(i) for i in range(d)
             if d > 3 and is_reducible(vs, i) and ls[i - 1] is D and ls[i] is D]
    opts += [RemoveHidden(i) for i in range(d) if ls[i] is H]
    opts += [CommuteFakeDelzant(i) for i in range(d)
             if ls[i] is F and ls[(i + 1) % d] is D and on_top(vs[(i + 1) % d], vs[(i + 2) % d])]
    return opts


def merge_into_hidden(f: SemitoricFan, rng: random.Random) -> SemitoricFan:
    """Collapse a top Delzant corner followed by a fake one into a hidden corner."""
    d, vs, ls = len(f), list(f.vectors), list(f.labels)
    spots = [i for i in range(d)
             if d > 3 and ls[i] is D and ls[(i + 1) % d] is F and on_top(vs[i], vs[(i + 1) % d])]
    if not spots:
        return f
    i = rng.choice(spots)
    j = (i + 1) % d
    del vs[j]
    if j == 0:
        ls = ls[1:d - 1] + [H]
    else:
        ls[i:i + 2] = [H]
    return SemitoricFan(tuple(vs), tuple(ls))


def random_semitoric_fan(rng: random.Random, c: int, moves: int, hidden_rate: float = 0.2) -> SemitoricFan:
    f = standard_fan(c)
    for _ in range(rng.randint(0, moves)):
        if rng.random() < hidden_rate:
            f = merge_into_hidden(f, rng)
        else:
            f = apply_move(f, rng.choice(applicable_moves(f, rng)))
    return f


def random_minimal_model(rng: random.Random, max_k: int = 5):
    kind = rng.randrange(3)
    if kind == 0:
        return Triangle()
    k = rng.randint(-max_k, max_k)
    return Rectangle() if k == 0 else Hirzebruch(abs(k))


def random_toric_fan(rng: random.Random, chops: int = 10, max_k: int = 5) -> ToricFan:
    f = minimal_model_fan(random_minimal_model(rng, max_k))
    for _ in range(rng.randint(0, chops)):
        f = corner_chop(f, rng.randrange(len(f)))
    return f


def realize(fan: SemitoricFan, twisting: int = 0, scale: int = 1) -> PrimitiveSemitoricPolygon:
    p = polygon_realizing_fan(fan)
    if scale != 1:
        p = PrimitiveSemitoricPolygon(
            p.polygon.__class__(tuple((scale * x, scale * y) for x, y in p.polygon.vertices)),
            tuple(Marker(scale * m.lam, m.eps, m.k) for m in p.markers))
    return PrimitiveSemitoricPolygon(p.polygon, tuple(m._replace(k=m.k + twisting) for m in p.markers))


def ingredients(poly: PrimitiveSemitoricPolygon, frac: Fraction = Fraction(1, 2),
                series: TruncatedSeries | None = None) -> IngredientList:
    s = series or TruncatedSeries.zero(3)
    return IngredientList(poly, tuple(poly.length_at(j) * frac for j in range(poly.m_f)),
                          tuple(s for _ in range(poly.m_f)))
