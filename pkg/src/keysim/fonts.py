"""Built-in 5x7 bitmap glyphs for the 26 key caps."""

from __future__ import annotations

import numpy as np

_GLYPHS_5X7 = {
    "a": ["01110", "10001", "10001", "11111", "10001", "10001", "10001"],
    "b": ["11110", "10001", "10001", "11110", "10001", "10001", "11110"],
    "c": ["01111", "10000", "10000", "10000", "10000", "10000", "01111"],
    "d": ["11110", "10001", "10001", "10001", "10001", "10001", "11110"],
    "e": ["11111", "10000", "10000", "11110", "10000", "10000", "11111"],
    "f": ["11111", "10000", "10000", "11110", "10000", "10000", "10000"],
    "g": ["01111", "10000", "10000", "10011", "10001", "10001", "01111"],
    "h": ["10001", "10001", "10001", "11111", "10001", "10001", "10001"],
    "i": ["11111", "00100", "00100", "00100", "00100", "00100", "11111"],
    "j": ["00111", "00010", "00010", "00010", "00010", "10010", "01100"],
    "k": ["10001", "10010", "10100", "11000", "10100", "10010", "10001"],
    "l": ["10000", "10000", "10000", "10000", "10000", "10000", "11111"],
    "m": ["10001", "11011", "10101", "10101", "10001", "10001", "10001"],
    "n": ["10001", "11001", "10101", "10011", "10001", "10001", "10001"],
    "o": ["01110", "10001", "10001", "10001", "10001", "10001", "01110"],
    "p": ["11110", "10001", "10001", "11110", "10000", "10000", "10000"],
    "q": ["01110", "10001", "10001", "10001", "10101", "10010", "01101"],
    "r": ["11110", "10001", "10001", "11110", "10100", "10010", "10001"],
    "s": ["01111", "10000", "10000", "01110", "00001", "00001", "11110"],
    "t": ["11111", "00100", "00100", "00100", "00100", "00100", "00100"],
    "u": ["10001", "10001", "10001", "10001", "10001", "10001", "01110"],
    "v": ["10001", "10001", "10001", "10001", "10001", "01010", "00100"],
    "w": ["10001", "10001", "10001", "10101", "10101", "11011", "10001"],
    "x": ["10001", "10001", "01010", "00100", "01010", "10001", "10001"],
    "y": ["10001", "10001", "01010", "00100", "00100", "00100", "00100"],
    "z": ["11111", "00001", "00010", "00100", "01000", "10000", "11111"],
}

GLYPH_W, GLYPH_H = 5, 7


def glyph_mask(letter: str) -> np.ndarray:
    """Boolean (7, 5) mask for a lowercase letter (uppercase cap shapes)."""
    rows = _GLYPHS_5X7[letter]
    return np.array([[c == "1" for c in row] for row in rows], dtype=bool)


def draw_glyph(img: np.ndarray, letter: str, x: int, y: int, scale: int, color) -> None:
    """Stamp a glyph in place at integer position (x, y), nearest-upscaled."""
    mask = np.kron(glyph_mask(letter), np.ones((scale, scale), dtype=bool))
    h, w = mask.shape
    region = img[y : y + h, x : x + w]
    region[mask] = color
