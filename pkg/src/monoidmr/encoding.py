"""Canonical little-endian byte encodings used for shuffle accounting."""

from __future__ import annotations

import struct

from .catalog import Stripe, SumCount
from .errors import EncodingError, RecordError
from .sketches import BloomFilter, CountMinSketch, HyperLogLog

_I64 = struct.Struct("<q")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


def _i64(n: int) -> bytes:
    try:
        return _I64.pack(n)
    except struct.error:
        raise EncodingError(f"integer {n} does not fit in 64 signed bits") from None


def _u64(n: int) -> bytes:
    try:
        return _U64.pack(n)
    except struct.error:
        raise EncodingError(f"{n} does not fit in 64 unsigned bits") from None


def _u32(n: int) -> bytes:
    try:
        return _U32.pack(n)
    except struct.error:
        raise EncodingError(f"length {n} does not fit in 32 bits") from None


def key_bytes(key) -> bytes:
    if isinstance(key, bytes):
        return key
    if isinstance(key, str):
        return key.encode("utf-8")
    raise RecordError(f"record keys must be str or bytes, got {type(key).__name__}")


def encode_value(v) -> bytes:
    if isinstance(v, bool):
        raise EncodingError("booleans have no canonical encoding")
    if isinstance(v, int):
        return _i64(v)
    if isinstance(v, SumCount):
        return _i64(v.sum) + _i64(v.cnt)
    if isinstance(v, Stripe):
        parts = [_u64(len(v))]
        for term, count in v.sorted_items():
            t = term.encode("utf-8")
            parts += [_u32(len(t)), t, _i64(count)]
        return b"".join(parts)
    if isinstance(v, BloomFilter):
        return _u64(v.m_bits) + _u64(v.k) + _u64(v.hash_seed) + v.bits
    if isinstance(v, CountMinSketch):
        header = _u64(v.d) + _u64(v.w) + _u64(v.hash_seed)
        return header + struct.pack(f"<{len(v.counters)}q", *v.counters)
    if isinstance(v, HyperLogLog):
        return _u64(v.p) + _u64(v.hash_seed) + v.registers
    if isinstance(v, str):
        return v.encode("utf-8")
    if isinstance(v, bytes):
        return v
    raise EncodingError(f"no canonical encoding for {type(v).__name__}")


def encode_record(key, value) -> bytes:
    """4-byte key length, key, 4-byte value length, value bytes."""
    k = key_bytes(key)
    if not k:
        raise RecordError("intermediate records must have a non-empty key")
    v = encode_value(value)
    return _u32(len(k)) + k + _u32(len(v)) + v


def encoded_size(key, value) -> int:
    return len(encode_record(key, value))
