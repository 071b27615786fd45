"""Fixed-width signed register arrays packed into 32-bit words."""

from __future__ import annotations

import numpy as np

MIN_BITS = 4
MAX_BITS = 8


def register_bounds(bits: int) -> tuple[int, int]:
    """(lowest, highest) storable value for a signed b-bit register."""
    if not MIN_BITS <= bits <= MAX_BITS:
        raise ValueError(f"register width must be in [{MIN_BITS}, {MAX_BITS}] bits, got {bits}")
    hi = (1 << (bits - 1)) - 1
    return -hi, hi


class PackedRegisters:
    """m signed b-bit registers stored ⌊32/b⌋ to a 32-bit word.

    Values live in [r_min, r_max] = [-(2**(b-1)-1), 2**(b-1)-1] and are kept
    as unsigned offsets from r_min.  Registers never straddle a word
    boundary, so get/set touch exactly one word.  A fresh array holds r_min
    everywhere (all words zero).
    """

    __slots__ = ("m", "bits", "r_min", "r_max", "_per_word", "_mask", "words")

    def __init__(self, m: int, bits: int):
        if m < 1:
            raise ValueError(f"register count must be >= 1, got {m}")
        self.r_min, self.r_max = register_bounds(bits)
        self.m = m
        self.bits = bits
        self._per_word = 32 // bits
        self._mask = (1 << bits) - 1
        n_words = -(-m // self._per_word)
        self.words = np.zeros(n_words, dtype=np.uint32)

    def get(self, i: int) -> int:
        """Value of register i (0-based)."""
        if not 0 <= i < self.m:
            raise IndexError(f"register index {i} out of range [0, {self.m})")
        wi, slot = divmod(i, self._per_word)
        raw = (int(self.words[wi]) >> (slot * self.bits)) & self._mask
        return raw + self.r_min

    def set(self, i: int, value: int) -> None:
        """Store ``value`` into register i; value must lie in [r_min, r_max]."""
        if not 0 <= i < self.m:
            raise IndexError(f"register index {i} out of range [0, {self.m})")
        if not self.r_min <= value <= self.r_max:
            raise ValueError(f"value {value} outside [{self.r_min}, {self.r_max}]")
        wi, slot = divmod(i, self._per_word)
        shift = slot * self.bits
        word = int(self.words[wi])
        word = (word & ~(self._mask << shift)) | ((value - self.r_min) << shift)
        self.words[wi] = word

    def to_array(self) -> np.ndarray:
        """All register values as an int64 array (vectorized unpack)."""
        idx = np.arange(self.m)
        wi, slot = np.divmod(idx, self._per_word)
        raw = (self.words[wi] >> (slot * self.bits).astype(np.uint32)) & np.uint32(self._mask)
        return raw.astype(np.int64) + self.r_min

    def copy(self) -> "PackedRegisters":
        dup = PackedRegisters.__new__(PackedRegisters)
        dup.m = self.m
        dup.bits = self.bits
        dup.r_min = self.r_min
        dup.r_max = self.r_max
        dup._per_word = self._per_word
        dup._mask = self._mask
        dup.words = self.words.copy()
        return dup

    def __len__(self) -> int:
        return self.m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PackedRegisters):
            return NotImplemented
        return (
            self.m == other.m
            and self.bits == other.bits
            and bool(np.array_equal(self.words, other.words))
        )
