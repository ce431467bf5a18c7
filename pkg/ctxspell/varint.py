"""
Base-128 variable length integers (little-endian groups of 7 bits, high bit
set on every byte but the last), as used by protocol buffers.
"""

from typing import Tuple


class VarintTruncatedError(ValueError):
    """The buffer ended in the middle of a varint."""


def encode_varint(value: int, out: bytearray) -> None:
    if value < 0:
        raise ValueError(f"varint must be non-negative, got {value}")
    while value > 0x7F:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    out.append(value)


def decode_varint(data: bytes, pos: int) -> Tuple[int, int]:
    """Return (value, position after the varint)."""
    result = 0
    shift = 0
    end = len(data)
    while True:
        if pos >= end:
            raise VarintTruncatedError(f"varint runs past end of buffer at {pos}")
        byte = data[pos]
        pos += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, pos
        shift += 7
