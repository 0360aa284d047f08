"""Counter-based seed splitting: every stage gets its own stream derived from one 64-bit seed."""

from __future__ import annotations

import hashlib
import random

MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *labels) -> int:
    """64-bit child seed for ``(seed, *labels)``; labels may be strings or ints."""
    h = hashlib.blake2b(digest_size=8)
    h.update((seed & MASK64).to_bytes(8, "little"))
    for lab in labels:
        h.update(b"\x00")
        h.update(repr(lab).encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


def stream(seed: int, *labels) -> random.Random:
    return random.Random(derive_seed(seed, *labels))
