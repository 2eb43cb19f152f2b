"""Counter-based RNG substreams.

Every sampler and Monte Carlo estimator in the package draws from a
``numpy.random.Philox`` stream whose 128-bit key is a deterministic hash of
``(seed, *indices)``.  Distinct keys give statistically independent streams,
so replicate i of a campaign can be regenerated on its own, in any order,
on any worker, and still produce bit-identical entries.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    # Finalizer of the splitmix64 generator; a good 64-bit mixer.
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def mix64(*parts: int) -> int:
    """Fold integers into one well-mixed 64-bit word (order sensitive)."""
    acc = 0x243F6A8885A308D3  # arbitrary nonzero salt
    for p in parts:
        acc = _splitmix64(acc ^ _splitmix64(int(p) & _MASK64))
    return acc


def substream(seed: int, *indices: int) -> np.random.Generator:
    """Independent generator keyed by ``(seed, *indices)``.

    The key is two mixed 64-bit words, fed to the counter-based Philox
    bit generator.  Same arguments -> bit-identical stream, always.
    """
    w0 = mix64(seed, *indices, 0)
    w1 = mix64(seed, *indices, 1)
    key = np.array([w0, w1], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def point_hash(point: dict) -> int:
    """Stable 64-bit hash of a grid-point parameter map.

    Uses a canonical JSON rendering plus blake2b, so the value is identical
    across processes and platforms (unlike builtin ``hash``).
    """
    blob = json.dumps(point, sort_keys=True, default=str).encode()
    digest = hashlib.blake2b(blob, digest_size=8).digest()
    return int.from_bytes(digest, "big")
