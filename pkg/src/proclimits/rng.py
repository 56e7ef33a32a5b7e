"""Splittable random streams for reproducible parallel Monte Carlo."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError


@dataclass(frozen=True)
class RngStream:
    """A named, independent random stream.

    Streams with the same ``(master_seed, stream_index)`` produce the same
    draws, independent of which thread or in which order they are consumed.
    Distinct stream indices map to distinct ``SeedSequence`` spawn keys and
    are statistically independent.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if int(self.master_seed) < 0 or int(self.master_seed) >= 2**64:
            raise ValidationError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if int(self.stream_index) < 0:
            raise ValidationError(f"stream_index must be nonnegative, got {self.stream_index}")

    def generator(self) -> np.random.Generator:
        """Return a fresh generator positioned at the start of the stream."""
        seq = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(self.stream_index),))
        return np.random.Generator(np.random.PCG64(seq))


def as_generator(rng) -> np.random.Generator:
    """Accept an :class:`RngStream`, a numpy ``Generator`` or an int seed."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator()
    raise TypeError(f"cannot build a random generator from {type(rng).__name__}")
