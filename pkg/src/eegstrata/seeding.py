"""Stable seed derivation.

Per-channel / per-repeat seeds are derived from a base seed plus string
context, so results do not depend on scheduling or on Python's randomized
``hash()``. The same (base_seed, parts) always yields the same stream.
"""

from __future__ import annotations

import hashlib


def derive_seed(*parts) -> int:
    """Collapse heterogeneous parts into a stable 64-bit seed."""
    text = "|".join(str(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")
