"""Seed derivation for reproducible randomness.

Every random draw in the package goes through a generator obtained from
:func:`derive`.  The master seed and a tuple of string/int labels are hashed
into a Philox key, so each stage of the pipeline owns an independent,
replayable stream and results do not depend on call order across stages.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive(master_seed: int, *labels: object) -> np.random.Generator:
    """Return a counter-based generator for ``(master_seed, *labels)``.

    Labels are usually short strings such as ``"ldd"`` or ``("tree", 3)``
    entries; anything with a stable ``str`` works.
    """
    h = hashlib.sha256()
    h.update(str(int(master_seed)).encode())
    for label in labels:
        h.update(b"\x1f")
        h.update(str(label).encode())
    key = int.from_bytes(h.digest()[:16], "big")
    return np.random.Generator(np.random.Philox(key=key))


def spawn_label(*parts: object) -> str:
    """Join label parts into a single readable stage label."""
    return "/".join(str(p) for p in parts)
