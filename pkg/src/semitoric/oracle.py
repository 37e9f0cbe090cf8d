"""Brute-force enumeration of fan words and independent cross-checks."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .groupcore import IDENTITY, UniModMatrix, Vec, det2, lift_fan_word
from .toricfan import ToricFan, fulton_reduce, geometric_winding, is_geometric_fan, word_to_fan

MAX_SEARCH = 10**8
SEED = ((1, 0), (0, 1))


class SearchSpaceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class EnumerationSpec:
    d: int
    bound: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("word length must be at least 1")
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")

    @property
    def size(self) -> int:
        return (2 * self.bound + 1) ** self.d

    def check_size(self) -> None:
        if self.size > MAX_SEARCH:
            raise SearchSpaceTooLarge(f"{self.size} words exceeds the limit of {MAX_SEARCH}")


def _step(m: UniModMatrix, ai: int) -> UniModMatrix:
    # m @ S @ T^ai
    a0, b0, c0, d0 = m
    return UniModMatrix(b0, b0 * ai - a0, d0, d0 * ai - c0)


def _kernel_words(d: int, bound: int, prefix: tuple[int, ...], target_sum: int | None) -> Iterator[tuple[int, ...]]:
    """Words in [-bound, bound]^d starting with prefix whose matrix product is I.

    With target_sum set, only words with that coordinate sum are produced.
    """
    values = range(-bound, bound + 1)
    m = IDENTITY
    for ai in prefix:
        m = _step(m, ai)
    word = list(prefix)

    def walk(m: UniModMatrix, total: int) -> Iterator[tuple[int, ...]]:
        left = d - len(word)
        if left == 0:
            if m == IDENTITY and (target_sum is None or total == target_sum):
                yield tuple(word)
            return
        for ai in values:
            if target_sum is not None:
                rest = target_sum - total - ai
                if abs(rest) > (left - 1) * bound:
                    continue
            word.append(ai)
            yield from walk(_step(m, ai), total + ai)
            word.pop()

    yield from walk(m, sum(prefix))


def _solutions_with_first(args: tuple[int, int, int]) -> list[tuple[int, ...]]:
    d, bound, first = args
    return list(_kernel_words(d, bound, (first,), 3 * d - 12))


def enumerate_solutions(spec: EnumerationSpec, workers: int = 1) -> list[tuple[int, ...]]:
    """All words in the box whose lift is (I, 12), in lexicographic order."""
    spec.check_size()
    if workers <= 1 or spec.d == 1:
        return list(_kernel_words(spec.d, spec.bound, (), 3 * spec.d - 12))
    jobs = [(spec.d, spec.bound, a0) for a0 in range(-spec.bound, spec.bound + 1)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_solutions_with_first, jobs))
    return [w for part in parts for w in part]


def float_winding(vectors: Sequence[Vec]) -> float:
    """Total turning angle of v0 -> v1 -> ... -> v0 divided by 2 pi, in floating point."""
    d = len(vectors)
    angle = math.fsum(
        math.atan2(det2(vectors[i], vectors[(i + 1) % d]),
                   vectors[i][0] * vectors[(i + 1) % d][0] + vectors[i][1] * vectors[(i + 1) % d][1])
        for i in range(d)
    )
    return angle / (2 * math.pi)


@dataclass(frozen=True)
class WindingCrosscheck:
    exact: int
    approximate: float

    @property
    def rounded(self) -> int:
        return round(self.approximate)

    @property
    def agree(self) -> bool:
        return self.rounded == self.exact

    def to_json(self) -> dict:
        return {"exact": self.exact, "float": self.approximate, "rounded": self.rounded, "agree": self.agree}


def float_winding_crosscheck(vectors: Sequence[Vec]) -> WindingCrosscheck:
    return WindingCrosscheck(geometric_winding(vectors), float_winding(vectors))


@dataclass
class EquivalenceReport:
    words_checked: int = 0
    kernel_words: int = 0
    lift_solutions: int = 0
    geometric_fans: int = 0
    windings: Counter = field(default_factory=Counter)
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {
            "words_checked": self.words_checked,
            "kernel_words": self.kernel_words,
            "lift_solutions": self.lift_solutions,
            "geometric_fans": self.geometric_fans,
            "windings": {str(k): v for k, v in sorted(self.windings.items())},
            "counterexamples": [list(w) for w in self.counterexamples],
        }


def check_kernel_word(word: Sequence[int]) -> tuple[bool, bool, int, list[str]]:
    """(lift is (I,12), word builds a geometric fan, winding, problems found)."""
    problems = []
    lifted = lift_fan_word(word)
    vectors, closes = word_to_fan(word, *SEED)
    if not closes:
        problems.append("kernel word does not close")
    winding = lifted.weight // 12 if lifted.weight % 12 == 0 else None
    if winding is None:
        problems.append(f"weight {lifted.weight} not divisible by 12")
    exact = geometric_winding(vectors) if len(vectors) >= 1 else 0
    if winding is not None and exact != winding:
        problems.append(f"weight gives winding {winding}, ray crossing gives {exact}")
    if round(float_winding(vectors)) != exact:
        problems.append("float winding disagrees")
    is_solution = lifted.matrix == IDENTITY and lifted.weight == 12
    geometric = is_geometric_fan(vectors)
    if is_solution != geometric:
        problems.append("lift and geometry disagree")
    return is_solution, geometric, exact, problems


def geometric_equiv_check(spec: EnumerationSpec, max_d: int | None = None) -> EquivalenceReport:
    """Compare the lift criterion with direct geometry on every kernel word.

    Lengths spec.d alone, or 1..max_d when max_d is given.
    """
    lengths = range(1, max_d + 1) if max_d is not None else [spec.d]
    report = EquivalenceReport()
    for d in lengths:
        sub = EnumerationSpec(d, spec.bound)
        sub.check_size()
        report.words_checked += sub.size
        for word in _kernel_words(d, spec.bound, (), None):
            report.kernel_words += 1
            is_solution, geometric, winding, problems = check_kernel_word(word)
            report.lift_solutions += is_solution
            report.geometric_fans += geometric
            report.windings[winding] += 1
            if problems:
                report.counterexamples.append(word)
    return report


def minimal_model_tag(word: Sequence[int]) -> str:
    vectors, _ = word_to_fan(word, *SEED)
    model, _ = fulton_reduce(ToricFan(vectors))
    return str(model)


def census_rows(words: Sequence[Sequence[int]]) -> list[dict]:
    rows = []
    for w in words:
        lifted = lift_fan_word(w)
        rows.append({
            "word": list(w),
            "weight": lifted.weight,
            "winding": lifted.weight // 12,
            "model": minimal_model_tag(w),
        })
    return rows


def census_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["word", "weight", "winding", "model"])
    for r in rows:
        writer.writerow([" ".join(str(a) for a in r["word"]), r["weight"], r["winding"], r["model"]])
    return buf.getvalue()
