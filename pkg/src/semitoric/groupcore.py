"""Integer 2x2 arithmetic, words in S and T, and the lifted group G.

An element of G is stored as a pair (matrix, weight): the matrix lives in
SL2(Z) and the weight is an integer congruent mod 12 to the weight of any
S/T decomposition of the matrix.  Multiplication is componentwise, so two
words are equal in G exactly when their (matrix, weight) pairs agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Union

Vec = tuple[int, int]


class LatticeVector(NamedTuple):
    x: int
    y: int

    @property
    def primitive(self) -> bool:
        return (self.x, self.y) != (0, 0) and gcd(self.x, self.y) == 1


def det2(v: Vec, w: Vec) -> int:
    return v[0] * w[1] - v[1] * w[0]


def is_primitive(v: Vec) -> bool:
    return (v[0], v[1]) != (0, 0) and gcd(v[0], v[1]) == 1


class UniModMatrix(NamedTuple):
    """Row-major [[a, b], [c, d]] with determinant 1."""

    a: int
    b: int
    c: int
    d: int

    def __matmul__(self, other):  # type: ignore[override]
        if isinstance(other, UniModMatrix):
            return UniModMatrix(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        x, y = other
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "UniModMatrix":
        return UniModMatrix(self.d, -self.b, -self.c, self.a)

    def power(self, n: int) -> "UniModMatrix":
        base = self if n >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(n)):
            out = out @ base
        return out


IDENTITY = UniModMatrix(1, 0, 0, 1)
S = UniModMatrix(0, -1, 1, 0)
T = UniModMatrix(1, 1, 0, 1)

GENERATOR_WEIGHT = {"S": 3, "T": -1}


def t_power(k: int) -> UniModMatrix:
    return UniModMatrix(1, k, 0, 1)


def s_power(k: int) -> UniModMatrix:
    return [IDENTITY, S, UniModMatrix(-1, 0, 0, -1), UniModMatrix(0, 1, -1, 0)][k % 4]


def generator_power(gen: str, k: int) -> UniModMatrix:
    if gen == "S":
        return s_power(k)
    if gen == "T":
        return t_power(k)
    raise ValueError(f"unknown generator {gen!r}")


@dataclass(frozen=True)
class GeneratorWord:
    """A word in the free group on S and T.

    Adjacent powers of the same generator are merged and zero powers dropped,
    so equal tuples mean equal free-group words.
    """

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        merged: list[tuple[str, int]] = []
        for gen, k in self.letters:
            if gen not in GENERATOR_WEIGHT:
                raise ValueError(f"unknown generator {gen!r}")
            if merged and merged[-1][0] == gen:
                k += merged.pop()[1]
            if k:
                merged.append((gen, int(k)))
        object.__setattr__(self, "letters", tuple(merged))

    @classmethod
    def of(cls, *letters: tuple[str, int]) -> "GeneratorWord":
        return cls(tuple(letters))

    @classmethod
    def from_fan_word(cls, a: Iterable[int]) -> "GeneratorWord":
        """The word S T^{a0} S T^{a1} ... S T^{a_{d-1}}."""
        letters: list[tuple[str, int]] = []
        for ai in a:
            letters.append(("S", 1))
            letters.append(("T", ai))
        return cls(tuple(letters))

    def __mul__(self, other: "GeneratorWord") -> "GeneratorWord":
        return GeneratorWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "GeneratorWord":
        return GeneratorWord(tuple((g, -k) for g, k in reversed(self.letters)))

    def evaluate(self) -> UniModMatrix:
        out = IDENTITY
        for gen, k in self.letters:
            out = out @ generator_power(gen, k)
        return out

    def to_json(self) -> list[dict]:
        return [{"gen": g, "pow": k} for g, k in self.letters]

    @classmethod
    def from_json(cls, data: list[dict]) -> "GeneratorWord":
        return cls(tuple((str(item["gen"]), int(item["pow"])) for item in data))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join(g if k == 1 else f"{g}^{k}" for g, k in self.letters)


def word_weight(word: GeneratorWord) -> int:
    return sum(GENERATOR_WEIGHT[g] * k for g, k in word.letters)


@dataclass(frozen=True)
class LiftedElement:
    matrix: UniModMatrix
    weight: int

    def __mul__(self, other: "LiftedElement") -> "LiftedElement":
        return LiftedElement(self.matrix @ other.matrix, self.weight + other.weight)

    def inverse(self) -> "LiftedElement":
        return LiftedElement(self.matrix.inverse(), -self.weight)

    @classmethod
    def checked(cls, matrix: UniModMatrix, weight: int) -> "LiftedElement":
        if matrix.det() != 1:
            raise ValueError("matrix is not unimodular")
        if (weight - word_weight(sl2_decompose(matrix))) % 12:
            raise ValueError("weight is not congruent to the matrix weight mod 12")
        return cls(matrix, weight)


def lift_word(word: GeneratorWord) -> LiftedElement:
    return LiftedElement(word.evaluate(), word_weight(word))


def lift_fan_word(a: Iterable[int]) -> LiftedElement:
    """Lift of S T^{a0} ... S T^{a_{d-1}} computed without building the word."""
    m = IDENTITY
    total = 0
    count = 0
    for ai in a:
        # m @ S @ T^ai, expanded
        a0, b0, c0, d0 = m
        a1, c1 = b0, d0
        b1, d1 = -a0, -c0
        m = UniModMatrix(a1, a1 * ai + b1, c1, c1 * ai + d1)
        total += ai
        count += 1
    return LiftedElement(m, 3 * count - total)


def sl2_decompose(m: UniModMatrix) -> GeneratorWord:
    """Write m as a word in S and T by Euclidean elimination on column one."""
    if m.det() != 1:
        raise ValueError("matrix is not unimodular")
    left: list[tuple[str, int]] = []
    cur = m
    s_inv = S.inverse()
    while cur.c != 0:
        q = cur.a // cur.c
        if q:
            cur = t_power(-q) @ cur
            left.append(("T", q))
        cur = s_inv @ cur
        left.append(("S", 1))
    # cur is upper triangular: T^b or -T^{-b}
    if cur.a == 1:
        tail = [("T", cur.b)]
    else:
        tail = [("S", 2), ("T", -cur.b)]
    return GeneratorWord(tuple(left) + tuple(tail))


def winding_number(g: LiftedElement) -> int:
    if g.matrix != IDENTITY:
        raise ValueError("winding number is only defined on the kernel (matrix must be I)")
    if g.weight % 12:
        raise ValueError(f"weight {g.weight} of a kernel element is not divisible by 12")
    return g.weight // 12


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
ProjectivePoint = Union[Fraction, _Infinity]


def projective_point(value) -> ProjectivePoint:
    if value is INF or value == "inf":
        return INF
    return Fraction(value)


def psl2_act(m: UniModMatrix, p: ProjectivePoint) -> ProjectivePoint:
    if p is INF:
        return INF if m.c == 0 else Fraction(m.a, m.c)
    p = Fraction(p)
    den = m.c * p + m.d
    if den == 0:
        return INF
    return (m.a * p + m.b) / den


def psltz_witness(a: list[int]) -> tuple[int, int] | None:
    """Indices i < j, non-adjacent mod d, with a_i and a_j in {-1, 0, 1}."""
    d = len(a)
    image = lift_fan_word(a).matrix
    if image not in (IDENTITY, UniModMatrix(-1, 0, 0, -1)):
        raise ValueError("word does not project to +-I")
    if d < 3:
        return None
    if d == 3:
        return (0, 1)
    small = [i for i, ai in enumerate(a) if ai in (-1, 0, 1)]
    for pos, i in enumerate(small):
        for j in small[pos + 1:]:
            if j != i + 1 and (i, j) != (0, d - 1):
                return (i, j)
    return None
