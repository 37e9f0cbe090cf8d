"""Fan transformations as plain values, with their JSON form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Chop:
    index: int

    def to_json(self) -> dict:
        return {"move": "chop", "index": self.index}


@dataclass(frozen=True)
class Unchop:
    index: int

    def to_json(self) -> dict:
        return {"move": "unchop", "index": self.index}


@dataclass(frozen=True)
class RemoveHidden:
    index: int

    def to_json(self) -> dict:
        return {"move": "remove_hidden", "index": self.index}


@dataclass(frozen=True)
class CommuteFakeDelzant:
    index: int

    def to_json(self) -> dict:
        return {"move": "commute_fake_delzant", "index": self.index}


@dataclass(frozen=True)
class ActT:
    k: int

    def to_json(self) -> dict:
        return {"move": "act_t", "k": self.k}


@dataclass(frozen=True)
class Rotate:
    """Renumber the fan so that the vector at `shift` becomes v0."""

    shift: int

    def to_json(self) -> dict:
        return {"move": "rotate", "shift": self.shift}


FanMove = Union[Chop, Unchop, RemoveHidden, CommuteFakeDelzant, ActT, Rotate]

_INDEXED = {
    "chop": Chop,
    "unchop": Unchop,
    "remove_hidden": RemoveHidden,
    "commute_fake_delzant": CommuteFakeDelzant,
}


def move_from_json(data: dict) -> FanMove:
    kind = data["move"]
    if kind in _INDEXED:
        return _INDEXED[kind](int(data["index"]))
    if kind == "act_t":
        return ActT(int(data["k"]))
    if kind == "rotate":
        return Rotate(int(data["shift"]))
    raise ValueError(f"unknown move {kind!r}")


def trace_to_json(trace) -> list[dict]:
    return [m.to_json() for m in trace]


def trace_from_json(data) -> list[FanMove]:
    if not isinstance(data, list):
        raise ValueError("trace must be a JSON list")
    return [move_from_json(item) for item in data]
