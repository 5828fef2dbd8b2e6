"""
Seed Schedules

Every random stream derives from one integer seed and a key path through
numpy SeedSequence spawn keys, so a sample's randomness depends only on its
(level, index) address and never on execution order.
"""

from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple, Tuple

import numpy as np


class StreamTag(IntEnum):
    """Top-level key separating independent estimator families."""
    REFERENCE = 1
    STUDY = 2
    CV_MEAN = 3
    PILOT = 4


class SampleStreams(NamedTuple):
    """Independent generators for the four random inputs of one sample."""
    w1: np.random.Generator
    w2: np.random.Generator
    path_x: np.random.Generator
    path_y: np.random.Generator


@dataclass(frozen=True)
class SeedSchedule:
    seed: int
    key: Tuple[int, ...] = ()

    def child(self, *key: int) -> "SeedSchedule":
        return SeedSchedule(self.seed, self.key + tuple(int(k) for k in key))

    @property
    def schedule_id(self) -> str:
        return f"{self.seed}/" + ".".join(str(k) for k in self.key)

    def sample_id(self, level: int, index: int) -> str:
        return f"{self.schedule_id}:{level}.{index}"

    def sample_streams(self, level: int, index: int) -> SampleStreams:
        root = np.random.SeedSequence(self.seed, spawn_key=self.key + (level, index))
        return SampleStreams(*(np.random.default_rng(child) for child in root.spawn(4)))
