"""Counter-based random streams so results never depend on execution order."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LABELS = {"channel": 0, "noise": 1, "bits": 2}


@dataclass(frozen=True)
class RngStream:
    """Independent stream keyed by ``(seed, trial index, label)``.

    Extra integers passed to :meth:`generator` select further sub-streams
    (e.g. user index, Eb/N0 index).
    """

    seed: int
    index: int
    label: str

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown stream label {self.label!r}")

    def generator(self, *sub: int) -> np.random.Generator:
        key = (int(self.index), LABELS[self.label], *map(int, sub))
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=key)))
