"""The extended value lattice [0, top] with an extra bottom element.

Elements are bottom, an exact nonnegative rational, or top, totally
ordered as bottom < 0 <= q < top.  All arithmetic is exact.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Union

from .errors import ParseError

RationalLike = Union[int, str, Fraction]

_BOT_RANK = 0
_FIN_RANK = 1
_TOP_RANK = 2


@functools.total_ordering
class ExtValue:
    """Immutable element of the lattice [0, top] with bottom adjoined."""

    __slots__ = ("_rank", "_value")

    def __init__(self, rank: int, value: Fraction | None):
        self._rank = rank
        self._value = value

    @property
    def is_bottom(self) -> bool:
        return self._rank == _BOT_RANK

    @property
    def is_top(self) -> bool:
        return self._rank == _TOP_RANK

    @property
    def is_finite(self) -> bool:
        return self._rank == _FIN_RANK

    @property
    def value(self) -> Fraction:
        if self._value is None:
            raise ValueError("no finite value on bottom/top")
        return self._value

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtValue):
            return NotImplemented
        return self._rank == other._rank and self._value == other._value

    def __lt__(self, other: "ExtValue") -> bool:
        if self._rank != other._rank:
            return self._rank < other._rank
        if self._rank == _FIN_RANK:
            return self._value < other._value
        return False

    def __hash__(self) -> int:
        return hash((self._rank, self._value))

    def __repr__(self) -> str:
        return f"ExtValue({format_ext(self)!r})"


BOTTOM = ExtValue(_BOT_RANK, None)
TOP = ExtValue(_TOP_RANK, None)


def as_fraction(q: RationalLike) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to an exact Fraction."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, str):
        try:
            return Fraction(q)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {q!r}") from exc
    raise ParseError(f"cannot interpret {q!r} as a rational")


def finite(q: RationalLike) -> ExtValue:
    frac = as_fraction(q)
    if frac < 0:
        raise ValueError(f"finite lattice values must be >= 0, got {frac}")
    return ExtValue(_FIN_RANK, frac)


def ext_shift(x: ExtValue, d: RationalLike) -> ExtValue:
    """Shift a value by a signed rational; saturates at bottom and top.

    A finite value pushed below 0 collapses to bottom.  This is the
    helper convention used inside energy-function evaluation, not a
    lattice axiom.
    """
    if x.is_bottom or x.is_top:
        return x
    shifted = x.value + as_fraction(d)
    if shifted < 0:
        return BOTTOM
    return ExtValue(_FIN_RANK, shifted)


def ext_join(x: ExtValue, y: ExtValue) -> ExtValue:
    return y if x < y else x


def ext_cmp(x: ExtValue, y: ExtValue) -> int:
    """-1, 0 or 1 per the total order."""
    if x < y:
        return -1
    if y < x:
        return 1
    return 0


def format_ext(x: ExtValue) -> str:
    if x.is_bottom:
        return "bot"
    if x.is_top:
        return "top"
    return str(x.value)


def parse_ext(text: str) -> ExtValue:
    text = text.strip()
    if text == "bot":
        return BOTTOM
    if text == "top":
        return TOP
    return finite(text)
