"""Deterministic 64-bit sequence generator (SplitMix64).

Used wherever reproducibility across runs and languages matters: synthetic
feedback generation and metric sampling. The recurrence is fixed by the
snapshot/CLI contract, so do not swap in another generator.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """state += 0x9E3779B97F4A7C15; output = mix(state), all mod 2**64."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def sample_without_replacement(self, items: list, count: int) -> list:
        """Draw ``count`` items by repeated (u mod remaining) index picks.

        Consumes exactly ``count`` generator outputs; mutates a copy, not
        the caller's list.
        """
        pool = list(items)
        picked = []
        for _ in range(count):
            index = self.next_u64() % len(pool)
            picked.append(pool.pop(index))
        return picked
