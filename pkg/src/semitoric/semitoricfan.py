"""Labelled semitoric fans, the four fan transformations, and normalization."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .groupcore import Vec, det2, is_primitive
from .moves import ActT, Chop, CommuteFakeDelzant, FanMove, RemoveHidden, Rotate, Unchop
from .toricfan import InvalidFan, ValidityReport, geometric_winding, is_reducible


class CornerLabel(str, Enum):
    DELZANT = "delzant"
    FAKE = "fake"
    HIDDEN = "hidden"

    @classmethod
    def _missing_(cls, value):
        # accept "D"/"F"/"H" and any capitalisation
        if isinstance(value, str):
            for label in cls:
                if value.lower() in (label.value, label.value[0]):
                    return label
        return None

    @property
    def short(self) -> str:
        return self.value[0].upper()


D, F, H = CornerLabel.DELZANT, CornerLabel.FAKE, CornerLabel.HIDDEN


def t_apply(v: Vec, k: int = 1) -> Vec:
    return (v[0] + k * v[1], v[1])


def on_top(v: Vec, w: Vec) -> bool:
    return v[1] < 0 and w[1] < 0


def satisfied_labels(v: Vec, w: Vec) -> set[CornerLabel]:
    out = set()
    if det2(v, w) == 1:
        out.add(D)
    if on_top(v, w):
        tw = det2(v, t_apply(w))
        if tw == 0:
            out.add(F)
        elif tw == 1:
            out.add(H)
    return out


def validate_semitoric(vectors: Sequence[Vec], labels: Sequence[CornerLabel]) -> ValidityReport:
    d = len(vectors)
    if d < 3:
        return ValidityReport(False, f"d={d} < 3")
    if len(labels) != d:
        return ValidityReport(False, f"{len(labels)} labels for {d} vectors")
    for i, v in enumerate(vectors):
        if not is_primitive(v):
            return ValidityReport(False, f"v{i}={list(v)} is not primitive")
    for i in range(d):
        j = (i + 1) % d
        v, w = vectors[i], vectors[j]
        if det2(v, w) <= 0:
            return ValidityReport(False, f"det(v{i},v{j})={det2(v, w)} is not positive")
        label = CornerLabel(labels[i])
        if label is not D and not on_top(v, w):
            return ValidityReport(False, f"corner {i} is {label.value} but not on the top boundary")
        if label not in satisfied_labels(v, w):
            return ValidityReport(False, f"corner {i} does not satisfy the {label.value} condition")
    winding = geometric_winding(vectors)
    if winding != 1:
        return ValidityReport(False, f"winding={winding}", winding)
    return ValidityReport(True, None, 1)


@dataclass(frozen=True)
class SemitoricFan:
    vectors: tuple[Vec, ...]
    labels: tuple[CornerLabel, ...]

    def __post_init__(self) -> None:
        vs = tuple((int(v[0]), int(v[1])) for v in self.vectors)
        ls = tuple(CornerLabel(lab) for lab in self.labels)
        object.__setattr__(self, "vectors", vs)
        object.__setattr__(self, "labels", ls)
        report = validate_semitoric(vs, ls)
        if not report:
            raise InvalidFan(report.reason)

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def complexity(self) -> int:
        return sum(1 for lab in self.labels if lab is not D)

    @classmethod
    def all_delzant(cls, vectors: Sequence[Vec]) -> "SemitoricFan":
        return cls(tuple(vectors), (D,) * len(vectors))

    def rotated(self, r: int) -> "SemitoricFan":
        r %= len(self)
        return SemitoricFan(self.vectors[r:] + self.vectors[:r], self.labels[r:] + self.labels[:r])

    def rotation_to(self, other: "SemitoricFan") -> int | None:
        """Shift r with self.rotated(r) == other, if any."""
        if len(self) != len(other):
            return None
        d = len(self)
        for r in range(d):
            if (self.vectors[r:] + self.vectors[:r] == other.vectors
                    and self.labels[r:] + self.labels[:r] == other.labels):
                return r
        return None

    def same_up_to_rotation(self, other: "SemitoricFan") -> bool:
        return self.rotation_to(other) is not None

    def to_json(self) -> dict:
        return {"vectors": [list(v) for v in self.vectors], "labels": [lab.value for lab in self.labels]}

    @classmethod
    def from_json(cls, data: dict) -> "SemitoricFan":
        vectors = tuple((int(v[0]), int(v[1])) for v in data["vectors"])
        labels = data.get("labels")
        if labels is None:
            labels = ["delzant"] * len(vectors)
        return cls(vectors, tuple(CornerLabel(lab) for lab in labels))

    def __str__(self) -> str:
        body = ", ".join(f"{list(v)}{lab.short}" for v, lab in zip(self.vectors, self.labels))
        return f"SemitoricFan({body})"


def standard_fan(c: int) -> SemitoricFan:
    if c < 0:
        raise ValueError("complexity must be nonnegative")
    vectors = [(0, -1), (1, 0), (c, 1), (-1, 0)] + [(-c + n, -1) for n in range(c)]
    return SemitoricFan(tuple(vectors), (D,) * 4 + (F,) * c)


class MoveError(ValueError):
    def __init__(self, move: FanMove, reason: str):
        super().__init__(f"{move}: {reason}")
        self.move = move
        self.reason = reason


def apply_move(f: SemitoricFan, m: FanMove) -> SemitoricFan:
    vs, ls = list(f.vectors), list(f.labels)
    d = len(vs)
    if isinstance(m, ActT):
        return SemitoricFan(tuple(t_apply(v, m.k) for v in vs), f.labels)
    if isinstance(m, Rotate):
        return f.rotated(m.shift)
    i = m.index
    if not 0 <= i < d:
        raise MoveError(m, f"index out of range for d={d}")
    j = (i + 1) % d
    if isinstance(m, Chop):
        if ls[i] is not D:
            raise MoveError(m, f"corner {i} is {ls[i].value}, not delzant")
        v, w = vs[i], vs[j]
        vs.insert(i + 1, (v[0] + w[0], v[1] + w[1]))
        ls[i:i + 1] = [D, D]
    elif isinstance(m, Unchop):
        if not is_reducible(vs, i):
            raise MoveError(m, f"v{i} is not the sum of its neighbours")
        if ls[i - 1] is not D or ls[i] is not D:
            raise MoveError(m, f"corners flanking v{i} are not both delzant")
        if d <= 3:
            raise MoveError(m, "would leave fewer than three vectors")
        del vs[i]
        if i == 0:
            ls = ls[1:d - 1] + [D]
        else:
            ls[i - 1:i + 1] = [D]
    elif isinstance(m, RemoveHidden):
        if ls[i] is not H:
            raise MoveError(m, f"corner {i} is {ls[i].value}, not hidden")
        vs.insert(i + 1, t_apply(vs[j]))
        ls[i:i + 1] = [D, F]
    elif isinstance(m, CommuteFakeDelzant):
        k = (i + 2) % d
        if ls[i] is not F:
            raise MoveError(m, f"corner {i} is {ls[i].value}, not fake")
        if ls[j] is not D or not on_top(vs[j], vs[k]):
            raise MoveError(m, f"corner {j} is not a delzant corner on the top boundary")
        vs[j] = t_apply(vs[k])
        ls[i], ls[j] = D, F
    else:
        raise MoveError(m, "unknown move")
    try:
        return SemitoricFan(tuple(vs), tuple(ls))
    except InvalidFan as exc:  # pragma: no cover - guarded by the preconditions
        raise MoveError(m, f"result is invalid: {exc}") from exc


class ReplayError(ValueError):
    def __init__(self, step: int, reason: str):
        super().__init__(f"step {step}: {reason}")
        self.step = step


def replay_trace(f: SemitoricFan, trace: Sequence[FanMove]) -> SemitoricFan:
    for step, m in enumerate(trace):
        try:
            f = apply_move(f, m)
        except MoveError as exc:
            raise ReplayError(step, exc.reason) from exc
    return f


class _Run:
    """A fan together with the moves applied to it so far."""

    def __init__(self, fan: SemitoricFan):
        self.fan = fan
        self.trace: list[FanMove] = []
        self.k = 0
        self.complexity = fan.complexity

    def do(self, m: FanMove) -> None:
        self.fan = apply_move(self.fan, m)
        assert self.fan.complexity == self.complexity
        self.trace.append(m)
        if isinstance(m, ActT):
            self.k += m.k


def _unchop_fourth_quadrant(run: _Run) -> bool:
    """Remove vectors squeezed between (0,-1) and (1,0) when they are all Delzant.

    Between those two vectors the one maximising x - y is always the sum of
    its neighbours, so repeated reverse chops clear the gap.
    """
    vs, ls = run.fan.vectors, run.fan.labels
    if (0, -1) not in vs:
        return False
    d = len(vs)
    a, b = vs.index((0, -1)), vs.index((1, 0))
    gap = [(a + n) % d for n in range(1, (b - a) % d)]
    if not gap or any(not (vs[p][0] > 0 and vs[p][1] < 0) for p in gap):
        return False
    if any(ls[(a + n) % d] is not D for n in range((b - a) % d)):
        return False
    while gap:
        vs = run.fan.vectors
        p = max(gap, key=lambda q: (vs[q][0] - vs[q][1], -gap.index(q)))
        assert is_reducible(vs, p)
        run.do(Unchop(p))
        d = len(run.fan.vectors)
        a, b = run.fan.vectors.index((0, -1)), run.fan.vectors.index((1, 0))
        gap = [(a + n) % d for n in range(1, (b - a) % d)]
    return True


def _right_angle(run: _Run, shortcut: bool) -> None:
    while True:
        vs = run.fan.vectors
        d = len(vs)
        if (1, 0) in vs:
            i = vs.index((1, 0))
            prev = vs[i - 1]
            if prev == (0, -1):
                return
            if shortcut and _unchop_fourth_quadrant(run):
                continue
            assert prev[1] == -1, f"predecessor of (1,0) is {prev}"
            run.do(ActT(prev[0]))
            return
        i = next(j for j in range(d) if vs[j][1] < 0 and vs[(j + 1) % d][1] > 0)
        before = max(-vs[i][1], vs[(i + 1) % d][1])
        run.do(Chop(i))
        assert abs(run.fan.vectors[i + 1][1]) < before


def ensure_right_angle(f: SemitoricFan, shortcut: bool = True) -> tuple[SemitoricFan, list[FanMove]]:
    """Reach a fan with (0,-1) immediately followed by (1,0)."""
    run = _Run(f)
    _right_angle(run, shortcut)
    return run.fan, run.trace


def _first_commutable(fan: SemitoricFan) -> int | None:
    vs, ls = fan.vectors, fan.labels
    d = len(vs)
    for i in range(d):
        j, k = (i + 1) % d, (i + 2) % d
        if ls[i] is F and ls[j] is D and on_top(vs[j], vs[k]):
            return i
    return None


def _reduce_toric_part(run: _Run, c: int) -> None:
    """Bring positions 1..ell (ell = d - c) to (1,0), (c,1), (-1,0), (-c,-1).

    Position ell holds T^c (0,-1) and stays fixed, as does (1,0) at position 1;
    only Delzant corners strictly inside that range are chopped or unchopped.
    """

    def state():
        vs = run.fan.vectors
        return vs, len(vs) - c

    # (a) make sure (-1,0) is present, cutting down |y| across the negative x-axis
    vs, ell = state()
    while (-1, 0) not in vs[2:ell]:
        d = len(vs)
        j = next(p for p in range(1, ell) if vs[p][1] > 0 and vs[(p + 1) % d][1] < 0)
        before = max(vs[j][1], -vs[(j + 1) % d][1])
        run.do(Chop(j))
        vs, ell = state()
        assert abs(vs[j + 1][1]) < before

    # (b) shrink the upper chain to a single vector
    while True:
        vs, ell = state()
        m = vs.index((-1, 0))
        upper = list(range(2, m))
        if len(upper) <= 1:
            break
        ys = [vs[p][1] for p in upper]
        if max(ys) >= 2:
            p = upper[ys.index(max(ys))]
        else:
            p = upper[-1] if vs[2] == (c, 1) else upper[0]
        assert is_reducible(vs, p)
        run.do(Unchop(p))

    # (c) empty the lower chain between (-1,0) and T^c (0,-1)
    while True:
        vs, ell = state()
        m = vs.index((-1, 0))
        lower = list(range(m + 1, ell))
        if not lower:
            break
        depth = [-vs[p][1] for p in lower]
        p = lower[depth.index(max(depth))] if max(depth) >= 2 else lower[0]
        assert is_reducible(vs, p)
        run.do(Unchop(p))

    # (d) slide (x,1) to (c,1) by chop/unchop pairs
    vs, ell = state()
    assert ell == 4 and vs[1] == (1, 0) and vs[3] == (-1, 0)
    x = vs[2][0]
    while x != c:
        if x < c:
            run.do(Chop(1))
            run.do(Unchop(3))
        else:
            run.do(Chop(2))
            run.do(Unchop(2))
        new_x = run.fan.vectors[2][0]
        assert abs(new_x - c) < abs(x - c)
        x = new_x


def normalize(f: SemitoricFan, shortcut: bool = True) -> tuple[SemitoricFan, list[FanMove], int]:
    """Transform f into standard_fan(c) with the four moves, ActT and renumbering.

    Returns the standard fan, the trace, and the total T-power applied.
    """
    c = f.complexity
    run = _Run(f)
    _right_angle(run, shortcut)

    vs = run.fan.vectors
    r = vs.index((1, 0)) - 1
    assert vs[r] == (0, -1)
    if r % len(vs):
        run.do(Rotate(r % len(vs)))

    while H in run.fan.labels:
        run.do(RemoveHidden(run.fan.labels.index(H)))

    score = -1
    while (i := _first_commutable(run.fan)) is not None:
        run.do(CommuteFakeDelzant(i))
        new_score = sum(p for p, lab in enumerate(run.fan.labels) if lab is F)
        assert new_score > score
        score = new_score

    vs, ls = run.fan.vectors, run.fan.labels
    ell = len(vs) - c
    assert all(lab is D for lab in ls[:ell]) and all(lab is F for lab in ls[ell:])
    assert vs[0] == (0, -1) and vs[1] == (1, 0) and vs[ell % len(vs)] == (-c, -1)

    _reduce_toric_part(run, c)
    assert run.fan == standard_fan(c), run.fan
    return run.fan, run.trace, run.k
