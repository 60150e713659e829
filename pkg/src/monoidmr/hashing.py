"""Seedable 64-bit hash shared by the sketches and the shuffle partitioner."""

import hashlib

MASK64 = (1 << 64) - 1


def as_bytes(item) -> bytes:
    if isinstance(item, bytes):
        return item
    if isinstance(item, str):
        return item.encode("utf-8")
    raise TypeError(f"cannot hash {type(item).__name__}; expected bytes or str")


def hash64(data: bytes, seed: int = 0, index: int = 0) -> int:
    """Return a 64-bit hash of ``data``.

    ``seed`` selects the hash family member (it keys BLAKE2b) and ``index``
    derives independent per-row / per-probe functions from the same seed.
    """
    if not 0 <= seed <= MASK64:
        raise ValueError(f"hash seed must fit in 64 unsigned bits, got {seed}")
    if not 0 <= index < (1 << 128):
        raise ValueError(f"hash index out of range: {index}")
    digest = hashlib.blake2b(
        data,
        digest_size=8,
        key=seed.to_bytes(8, "little"),
        salt=index.to_bytes(16, "little"),
    ).digest()
    return int.from_bytes(digest, "little")
