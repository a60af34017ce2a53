"""Seeded randomness with a fixed, documented stream.

Raw 64-bit words come from PCG64 (PCG XSL RR 128/64) seeded through numpy's
``SeedSequence``; both are specified algorithms, so a seed produces the same
words on every platform. Bounded integers and shuffles are derived here
rather than through ``numpy.random.Generator`` methods, whose streams may
change between numpy releases.

* ``below(m)``: rejection sampling on raw words; a word ``r`` is accepted when
  ``r >= 2**64 mod m`` and yields ``r mod m``.
* ``sample(pop, k)``: the first ``k`` positions of a forward Fisher-Yates
  shuffle of ``range(pop)``, where position ``i`` swaps with
  ``i + below(pop - i)``.
"""

from __future__ import annotations

from numpy.random import PCG64, SeedSequence

_MASK64 = (1 << 64) - 1


class PortableRng:
    def __init__(self, seed: int, stream: tuple[int, ...] = ()):
        if not 0 <= seed <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self.stream = tuple(stream)
        self._bits = PCG64(SeedSequence(seed, spawn_key=self.stream))

    def spawn(self, *key: int) -> PortableRng:
        """Independent child stream for ``key``, e.g. a trial index."""
        return PortableRng(self.seed, self.stream + tuple(key))

    def next_u64(self) -> int:
        return int(self._bits.random_raw())

    def below(self, m: int) -> int:
        if m <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) % m
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % m

    def sample(self, population: int, k: int) -> list[int]:
        if not 0 <= k <= population:
            raise ValueError(f"cannot draw {k} distinct values from {population}")
        pool = list(range(population))
        for i in range(k):
            j = i + self.below(population - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def permutation(self, m: int) -> list[int]:
        return self.sample(m, m)
