"""Exact scalars, UAV state, ensembles and their segment geometry.

Every position, time and length is a :data:`Scalar`, an exact rational
backed by GMP.  Equality tests between locations decide whether events
happen, so no floating point value is ever allowed in here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, NamedTuple, Sequence

from gmpy2 import mpq

from dpss.errors import UavIndexError

Scalar = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)

_RATIONAL_RE = re.compile(r"-?[0-9]+(?:/[0-9]+)?")


def scalar(value) -> Scalar:
    """Coerce an int, Fraction, mpq or rational text to a :data:`Scalar`.

    Floats are refused: they would smuggle rounding into the model.
    """
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; use an exact rational")
    if isinstance(value, str):
        return parse_rational(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def parse_rational(text: str) -> Scalar:
    """Parse ``"p/q"`` or ``"p"``; anything else (decimals, exponents, spaces) is a ValueError."""
    if not isinstance(text, str) or not _RATIONAL_RE.fullmatch(text):
        raise ValueError(f"not a rational of the form p/q or p: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return mpq(int(num), int(den or 1))


def format_rational(value) -> str:
    """Canonical text: lowest terms, positive denominator, bare integer when q = 1."""
    q = scalar(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def average(a, b) -> Scalar:
    return (a + b) / 2


class Direction(IntEnum):
    LEFT = -1
    RIGHT = 1

    def __neg__(self):
        return Direction(-int(self))

    @classmethod
    def of(cls, value) -> "Direction":
        if isinstance(value, Direction):
            return value
        if isinstance(value, str):
            return cls[value.upper()]
        return cls(int(value))


LEFT = Direction.LEFT
RIGHT = Direction.RIGHT


class UavState(NamedTuple):
    id: int
    location: Scalar
    direction: Direction


@dataclass(frozen=True)
class Ensemble:
    """Perimeter length, UAV count and the UAVs ordered by id.

    Construction does not validate: :func:`wf_ensemble` is the total
    recognizer, so malformed candidates must be representable.
    """

    perimeter: Scalar
    n: int
    uavs: tuple[UavState, ...]
    seg: Scalar = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "perimeter", scalar(self.perimeter))
        object.__setattr__(self, "uavs", tuple(self.uavs))
        seg = self.perimeter / self.n if self.n > 0 else ZERO
        object.__setattr__(self, "seg", seg)

    @classmethod
    def build(cls, perimeter, states: Iterable[tuple]) -> "Ensemble":
        """Make an ensemble from ``(location, direction)`` pairs in id order."""
        uavs = tuple(
            UavState(i, scalar(loc), Direction.of(d)) for i, (loc, d) in enumerate(states)
        )
        return cls(scalar(perimeter), len(uavs), uavs)

    def __len__(self):
        return len(self.uavs)

    def __getitem__(self, i) -> UavState:
        return self.uavs[i]

    @property
    def locations(self) -> tuple[Scalar, ...]:
        return tuple(u.location for u in self.uavs)

    @property
    def directions(self) -> tuple[Direction, ...]:
        return tuple(u.direction for u in self.uavs)

    @property
    def tee(self) -> Scalar:
        """Time for one UAV to cover the whole perimeter, in segment-time units."""
        return mpq(self.n)

    def replace_states(self, locations: Sequence, directions: Sequence) -> "Ensemble":
        uavs = tuple(
            UavState(i, loc, d) for i, (loc, d) in enumerate(zip(locations, directions))
        )
        return Ensemble(self.perimeter, self.n, uavs)

    def pairs(self) -> list[tuple[Scalar, Direction]]:
        return [(u.location, u.direction) for u in self.uavs]


def check_index(i: int, ens: Ensemble) -> None:
    if not isinstance(i, int) or not 0 <= i < ens.n:
        raise UavIndexError(f"UAV index {i!r} outside 0..{ens.n - 1}")


def seg_length(ens: Ensemble) -> Scalar:
    return ens.seg


def uav_left_boundary(i: int, ens: Ensemble) -> Scalar:
    check_index(i, ens)
    return i * ens.seg


def uav_right_boundary(i: int, ens: Ensemble) -> Scalar:
    check_index(i, ens)
    return (i + 1) * ens.seg


def wf_ensemble(ens) -> bool:
    """True iff ``ens`` is a well-formed ensemble; never raises on garbage."""
    try:
        if not isinstance(ens, Ensemble):
            return False
        p, n, uavs = ens.perimeter, ens.n, ens.uavs
        if not isinstance(n, int) or n < 1 or not p > 0 or len(uavs) != n:
            return False
        prev = ZERO
        for i, u in enumerate(uavs):
            if u.id != i or not isinstance(u.direction, Direction):
                return False
            loc = u.location
            if not isinstance(loc, Scalar) or loc < prev or loc > p:
                return False
            prev = loc
        return True
    except (TypeError, AttributeError, ValueError):
        return False


def reflect(ens: Ensemble) -> Ensemble:
    """Mirror the perimeter: UAV ``N-1-i`` becomes UAV ``i`` at ``P - x`` with reversed heading."""
    p = ens.perimeter
    uavs = tuple(
        UavState(k, p - u.location, -u.direction) for k, u in enumerate(reversed(ens.uavs))
    )
    return Ensemble(p, ens.n, uavs)
