"""Template geometry and keyboard layouts.

The template is the canonical front-on screen image every capture is
aligned to.  All key slot rectangles live in template pixel coordinates.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

from .errors import InvalidParameter
from .rng import Rng

TEMPLATE_W = 160
TEMPLATE_H = 320

# x0, y0, x1, y1 (half-open) of the keyboard panel within the template.
KEYBOARD_RECT = (0, 192, 160, 320)

LETTERS = string.ascii_lowercase
_QWERTY_ROWS = ("qwertyuiop", "asdfghjkl", "zxcvbnm")

_CELL_W = 16
_CELL_H = 36
_ROW_GAP = 4
_ROW_Y0 = KEYBOARD_RECT[1] + 4


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle, half-open in pixel coordinates."""

    x0: float
    y0: float
    x1: float
    y1: float

    def center(self) -> tuple[float, float]:
        return ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x < self.x1 and self.y0 <= y < self.y1

    def expand(self, margin: float) -> "Rect":
        return Rect(self.x0 - margin, self.y0 - margin, self.x1 + margin, self.y1 + margin)

    def width(self) -> float:
        return self.x1 - self.x0

    def height(self) -> float:
        return self.y1 - self.y0


@dataclass(frozen=True)
class KeyLabel:
    """One of the 26 letter classes; index is the alphabetical rank."""

    letter: str

    def __post_init__(self):
        if self.letter not in LETTERS:
            raise InvalidParameter(f"label must be a lowercase letter, got {self.letter!r}")

    @property
    def index(self) -> int:
        return ord(self.letter) - 97

    @classmethod
    def from_index(cls, index: int) -> "KeyLabel":
        if not 0 <= index < 26:
            raise InvalidParameter(f"label index out of range: {index}")
        return cls(LETTERS[index])


def _slot_rects() -> tuple[Rect, ...]:
    """26 slot rectangles in QWERTY slot order (row by row, left to right)."""
    rects = []
    for r, row in enumerate(_QWERTY_ROWS):
        y = _ROW_Y0 + r * (_CELL_H + _ROW_GAP)
        x_off = (TEMPLATE_W - len(row) * _CELL_W) // 2
        for i in range(len(row)):
            x = x_off + i * _CELL_W
            rects.append(Rect(x + 1, y + 1, x + _CELL_W - 1, y + _CELL_H - 1))
    return tuple(rects)


SLOT_RECTS = _slot_rects()
QWERTY_SLOT_LETTERS = "".join(_QWERTY_ROWS)  # letter shown at slot i under QWERTY


class KeyboardLayout:
    """Fixed slot geometry plus a bijective letter -> slot assignment.

    `slot_letters[i]` is the letter displayed (and typed) at slot i; the
    QWERTY layout uses the canonical row order qwertyuiop/asdfghjkl/zxcvbnm.
    """

    def __init__(self, slot_letters: str):
        if sorted(slot_letters) != list(LETTERS):
            raise InvalidParameter("slot letters must be a permutation of a..z")
        self.slot_letters = slot_letters
        self.slots = SLOT_RECTS
        self._slot_of = {c: i for i, c in enumerate(slot_letters)}

    def slot_index(self, letter: str) -> int:
        return self._slot_of[letter]

    def slot_rect(self, letter: str) -> Rect:
        return self.slots[self._slot_of[letter]]

    def key_center(self, letter: str) -> tuple[float, float]:
        return self.slot_rect(letter).center()

    def letter_at(self, slot: int) -> str:
        return self.slot_letters[slot]

    def is_qwerty(self) -> bool:
        return self.slot_letters == QWERTY_SLOT_LETTERS

    def agreement_count(self, other: "KeyboardLayout") -> int:
        """Number of slots showing the same letter in both layouts."""
        return sum(a == b for a, b in zip(self.slot_letters, other.slot_letters))

    def __eq__(self, other):
        return isinstance(other, KeyboardLayout) and self.slot_letters == other.slot_letters

    def __hash__(self):
        return hash(self.slot_letters)

    def __repr__(self):  # pragma: no cover
        return f"KeyboardLayout({self.slot_letters!r})"


def qwerty_layout() -> KeyboardLayout:
    """Standard QWERTY assignment over the 10/9/7 slot grid."""
    return KeyboardLayout(QWERTY_SLOT_LETTERS)


def fisher_yates(items: list, rng: Rng) -> list:
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        out[i], out[j] = out[j], out[i]
    return out


def randomized_layout(rng: Rng) -> KeyboardLayout:
    """Uniformly random letter -> slot bijection (Fisher-Yates over a..z)."""
    return KeyboardLayout("".join(fisher_yates(list(LETTERS), rng)))
