"""Smooth complete toric fans in the plane and their integer words."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .groupcore import IDENTITY, Vec, det2, is_primitive, lift_fan_word
from .moves import Chop, FanMove, Unchop


class InvalidFan(ValueError):
    pass


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    reason: str | None = None
    winding: int | None = None

    def __bool__(self) -> bool:
        return self.valid

    def to_json(self) -> dict:
        out: dict = {"valid": self.valid}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.winding is not None:
            out["winding"] = self.winding
        return out


def _as_vectors(vectors: Sequence[Sequence[int]]) -> tuple[Vec, ...]:
    return tuple((int(v[0]), int(v[1])) for v in vectors)


def word_of_vectors(vectors: Sequence[Vec]) -> tuple[int, ...]:
    d = len(vectors)
    return tuple(det2(vectors[i], vectors[(i + 2) % d]) for i in range(d))


def geometric_winding(vectors: Sequence[Vec]) -> int:
    """Winding number of the closed path v0 -> v1 -> ... -> v0 about the origin.

    Counts signed crossings of the positive x-ray, so it is exact.
    """
    d = len(vectors)
    for i in range(d):
        if det2(vectors[i], vectors[(i + 1) % d]) <= 0:
            raise ValueError(f"det(v{i}, v{(i + 1) % d}) <= 0")
    wn = 0
    for i in range(d):
        p, q = vectors[i], vectors[(i + 1) % d]
        cross = det2(p, q)
        if p[1] <= 0 < q[1] and cross > 0:
            wn += 1
        elif q[1] <= 0 < p[1] and cross < 0:
            wn -= 1
    return wn


def validate_toric(vectors: Sequence[Sequence[int]]) -> ValidityReport:
    vs = _as_vectors(vectors)
    d = len(vs)
    if d < 3:
        return ValidityReport(False, f"d={d} < 3")
    for i, v in enumerate(vs):
        if not is_primitive(v):
            return ValidityReport(False, f"v{i}={list(v)} is not primitive")
    for i in range(d):
        j = (i + 1) % d
        det = det2(vs[i], vs[j])
        if det != 1:
            return ValidityReport(False, f"det(v{i},v{j})={det}")
    lifted = lift_fan_word(word_of_vectors(vs))
    if lifted.matrix != IDENTITY:  # cannot happen once all determinants are 1
        return ValidityReport(False, "word does not project to I")
    winding = lifted.weight // 12
    if lifted.weight != 12:
        return ValidityReport(False, f"winding={winding}", winding)
    return ValidityReport(True, None, 1)


def is_geometric_fan(vectors: Sequence[Vec]) -> bool:
    """Independent check: unit determinants and exact ray-crossing winding 1."""
    d = len(vectors)
    if d < 3:
        return False
    if any(det2(vectors[i], vectors[(i + 1) % d]) != 1 for i in range(d)):
        return False
    return geometric_winding(vectors) == 1


@dataclass(frozen=True)
class ToricFan:
    vectors: tuple[Vec, ...]

    def __post_init__(self) -> None:
        vs = _as_vectors(self.vectors)
        object.__setattr__(self, "vectors", vs)
        report = validate_toric(vs)
        if not report:
            raise InvalidFan(report.reason)

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def word(self) -> tuple[int, ...]:
        return word_of_vectors(self.vectors)

    def transform(self, m) -> "ToricFan":
        return ToricFan(tuple(m @ v for v in self.vectors))

    def rotated(self, r: int) -> "ToricFan":
        r %= len(self.vectors)
        return ToricFan(self.vectors[r:] + self.vectors[:r])

    def to_json(self) -> dict:
        return {"vectors": [list(v) for v in self.vectors]}

    @classmethod
    def from_json(cls, data: dict) -> "ToricFan":
        return cls(_as_vectors(data["vectors"]))


def fan_to_word(f: ToricFan) -> tuple[int, ...]:
    return f.word


def word_to_fan(a: Sequence[int], v0: Vec, v1: Vec) -> tuple[tuple[Vec, ...], bool]:
    """Run v_{i+2} = -v_i + a_i v_{i+1}; return the d vectors and whether the path closes."""
    if det2(v0, v1) != 1:
        raise ValueError("seed determinant must be 1")
    out = [tuple(v0), tuple(v1)]
    for ai in a:
        p, q = out[-2], out[-1]
        out.append((-p[0] + ai * q[0], -p[1] + ai * q[1]))
    d = len(a)
    closes = out[d] == out[0] and out[d + 1] == out[1]
    return tuple(out[:d]), closes


def cyclic_rotations(seq: Sequence) -> list[tuple]:
    t = tuple(seq)
    return [t[r:] + t[:r] for r in range(len(t))]


def canonical_form(f: ToricFan) -> tuple[Vec, ...]:
    """SL2(Z) normal form minimised over the start index.

    Each rotation is mapped so its first two vectors become (1,0), (0,1); the
    lexicographically smallest result represents the class.
    """
    best = None
    for rot in cyclic_rotations(f.vectors):
        (a, c), (b, d) = rot[0], rot[1]
        inv = lambda v: (d * v[0] - b * v[1], -c * v[0] + a * v[1])  # noqa: E731
        image = tuple(inv(v) for v in rot)
        if best is None or image < best:
            best = image
    return best


def fans_equivalent(f: ToricFan, g: ToricFan) -> bool:
    return len(f) == len(g) and canonical_form(f) == canonical_form(g)


def corner_chop(f: ToricFan, i: int) -> ToricFan:
    d = len(f)
    if not 0 <= i < d:
        raise IndexError(f"corner index {i} out of range for d={d}")
    v, w = f.vectors[i], f.vectors[(i + 1) % d]
    new = list(f.vectors)
    new.insert(i + 1, (v[0] + w[0], v[1] + w[1]))
    return ToricFan(tuple(new))


def is_reducible(vectors: Sequence[Vec], i: int) -> bool:
    d = len(vectors)
    p, v, q = vectors[i - 1], vectors[i], vectors[(i + 1) % d]
    return v == (p[0] + q[0], p[1] + q[1])


def reverse_corner_chop(f: ToricFan, i: int) -> ToricFan:
    d = len(f)
    if not 0 <= i < d:
        raise IndexError(f"vector index {i} out of range for d={d}")
    if not is_reducible(f.vectors, i):
        raise ValueError(f"v{i} is not the sum of its neighbours")
    if d <= 3:
        raise ValueError("cannot reduce below three vectors")
    return ToricFan(f.vectors[:i] + f.vectors[i + 1:])


def find_reducible(f: ToricFan) -> int | None:
    """The longest vector that is the sum of its neighbours, earliest on ties.

    A chop inserts the sum of two neighbours, usually the longest vector
    around, so preferring length tends to undo the most recent chops first.
    """
    best = None
    for i, (x, y) in enumerate(f.vectors):
        if is_reducible(f.vectors, i) and (best is None or x * x + y * y > best[0]):
            best = (x * x + y * y, i)
    return None if best is None else best[1]


@dataclass(frozen=True)
class Triangle:
    word = (-1, -1, -1)

    def __str__(self) -> str:
        return "Triangle"


@dataclass(frozen=True)
class Rectangle:
    word = (0, 0, 0, 0)

    def __str__(self) -> str:
        return "Rectangle"


@dataclass(frozen=True)
class Hirzebruch:
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("Hirzebruch parameter must be positive; use Rectangle for k=0")

    @property
    def word(self) -> tuple[int, ...]:
        return (0, self.k, 0, -self.k)

    def __str__(self) -> str:
        return f"Hirzebruch({self.k})"


MinimalModel = Triangle | Rectangle | Hirzebruch


def minimal_model_fan(model: MinimalModel) -> ToricFan:
    if isinstance(model, Triangle):
        return ToricFan(((1, 0), (0, 1), (-1, -1)))
    k = model.k if isinstance(model, Hirzebruch) else 0
    return ToricFan(((0, 1), (-1, -k), (0, -1), (1, 0)))


def hirzebruch(k: int) -> MinimalModel:
    return Rectangle() if k == 0 else Hirzebruch(abs(k))


def classify_minimal(f: ToricFan) -> MinimalModel | None:
    d = len(f)
    if d == 3:
        return Triangle()
    if d != 4:
        return None
    for rot in cyclic_rotations(f.word):
        if rot[0] == 0 and rot[2] == 0 and rot[1] == -rot[3]:
            return hirzebruch(rot[1])
    raise AssertionError(f"four-vector fan with unexpected word {f.word}")


def fulton_reduce(f: ToricFan) -> tuple[MinimalModel, list[FanMove]]:
    trace: list[FanMove] = []
    while len(f) > 4:
        i = find_reducible(f)
        if i is None:
            raise AssertionError(f"no reducible vector in fan with d={len(f)}")
        before = len(f)
        f = reverse_corner_chop(f, i)
        assert len(f) == before - 1
        trace.append(Unchop(i))
    model = classify_minimal(f)
    assert model is not None
    return model, trace


def apply_toric_move(f: ToricFan, m: FanMove) -> ToricFan:
    if isinstance(m, Chop):
        return corner_chop(f, m.index)
    if isinstance(m, Unchop):
        return reverse_corner_chop(f, m.index)
    raise ValueError(f"{m} is not a toric fan move")


def replay_toric(f: ToricFan, trace: Sequence[FanMove]) -> ToricFan:
    for m in trace:
        f = apply_toric_move(f, m)
    return f


def invert_trace(trace: Sequence[FanMove], start_size: int) -> list[FanMove]:
    """Moves that undo `trace` when applied to its end result.

    Undoing the removal of v_i from a fan of size n is a chop at corner
    i-1 (mod n-1) of the smaller fan; when i = 0 the vector reappears at the
    end, so the result agrees with the original up to rotation.
    """
    sizes = [start_size]
    for m in trace:
        sizes.append(sizes[-1] + (1 if isinstance(m, Chop) else -1))
    out: list[FanMove] = []
    for m, n in zip(reversed(trace), reversed(sizes[:-1])):
        if isinstance(m, Unchop):
            out.append(Chop((m.index - 1) % (n - 1)))
        else:
            out.append(Unchop(m.index + 1))
    return out
