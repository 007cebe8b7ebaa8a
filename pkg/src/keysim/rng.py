"""Deterministic random streams built on the Philox counter-based generator.

Every random draw in the package flows through an :class:`Rng`, so a
dataset, a training run, or a report is a pure function of the seeds in
its config.  Child streams are derived with SplitMix64 over a label hash,
which lets per-sample work run in any order (or on any worker) without
changing results.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One SplitMix64 scramble step; uniform 64-bit mixing for seed derivation."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _label_hash(label: object) -> int:
    # FNV-1a over the label's UTF-8 form; labels are short strings like "sample/17".
    h = 0xCBF29CE484222325
    for b in str(label).encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & _MASK64
    return h


class Rng:
    """Seeded Philox4x64 stream with named child derivation.

    Philox is counter-based with an explicit key, so the stream for a given
    seed is identical on every platform.  Instances are single-owner: hand
    each worker its own child rather than sharing one stream.
    """

    algorithm = "philox4x64"

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._gen = np.random.Generator(np.random.Philox(key=self.seed))

    def child(self, label: object) -> "Rng":
        """Derive an independent stream named by `label` (order-insensitive)."""
        return Rng(splitmix64(self.seed ^ _label_hash(label)))

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self._gen.normal(loc, scale, size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def shuffle(self, seq) -> None:
        self._gen.shuffle(seq)

    def choice(self, seq, p=None):
        idx = self._gen.choice(len(seq), p=p)
        return seq[int(idx)]

    def __repr__(self) -> str:  # pragma: no cover
        return f"Rng(seed={self.seed}, algorithm={self.algorithm})"
