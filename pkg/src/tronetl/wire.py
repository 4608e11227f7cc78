"""Minimal protobuf-style wire codec.

Messages are sequences of tagged fields: tag = (field_number << 3) | wire_type.
Only the wire types actually used by the chain messages are supported:
varint (0) and length-delimited (2); fixed64 (1) and fixed32 (5) are
decoded so unknown fields can be skipped and re-serialized losslessly.
"""

from __future__ import annotations

VARINT = 0
FIXED64 = 1
LENGTH = 2
FIXED32 = 5

_U64_MASK = 0xFFFFFFFFFFFFFFFF


class WireError(ValueError):
    """Raised when bytes cannot be parsed as a wire message."""


def encode_varint(value: int) -> bytes:
    if value < 0:
        raise WireError("varint must be non-negative; mask signed values first")
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def decode_varint(data: bytes, pos: int) -> tuple[int, int]:
    """Return (value, new_pos). Varints longer than 10 bytes are rejected."""
    result = 0
    shift = 0
    start = pos
    while True:
        if pos >= len(data):
            raise WireError("truncated varint")
        if pos - start >= 10:
            raise WireError("varint too long")
        byte = data[pos]
        result |= (byte & 0x7F) << shift
        pos += 1
        if not byte & 0x80:
            return result, pos
        shift += 7


def zigzag_mask(value: int) -> int:
    """Two's-complement mask for signed 64-bit values (protobuf int64 style)."""
    return value & _U64_MASK


def to_signed64(value: int) -> int:
    if value >= 1 << 63:
        value -= 1 << 64
    return value


class Writer:
    """Appends tagged fields to a buffer."""

    def __init__(self):
        self._buf = bytearray()

    def uint(self, field: int, value: int) -> "Writer":
        self._buf += encode_varint(field << 3 | VARINT)
        self._buf += encode_varint(value)
        return self

    def int64(self, field: int, value: int) -> "Writer":
        return self.uint(field, zigzag_mask(value))

    def bool_(self, field: int, value: bool) -> "Writer":
        return self.uint(field, 1 if value else 0)

    def bytes_(self, field: int, value: bytes) -> "Writer":
        self._buf += encode_varint(field << 3 | LENGTH)
        self._buf += encode_varint(len(value))
        self._buf += value
        return self

    def string(self, field: int, value: str) -> "Writer":
        return self.bytes_(field, value.encode("utf-8"))

    def message(self, field: int, inner: "Writer | bytes") -> "Writer":
        payload = inner if isinstance(inner, bytes) else inner.finish()
        return self.bytes_(field, payload)

    def finish(self) -> bytes:
        return bytes(self._buf)


def parse_fields(data: bytes) -> list[tuple[int, int, "int | bytes"]]:
    """Parse a message into (field_number, wire_type, value) triples.

    Values are ints for varint/fixed types and bytes for length-delimited
    fields. Field order and repetitions are preserved.
    """
    fields = []
    pos = 0
    while pos < len(data):
        tag, pos = decode_varint(data, pos)
        field, wtype = tag >> 3, tag & 0x7
        if field == 0:
            raise WireError("field number 0 is invalid")
        if wtype == VARINT:
            value, pos = decode_varint(data, pos)
        elif wtype == LENGTH:
            length, pos = decode_varint(data, pos)
            if pos + length > len(data):
                raise WireError("truncated length-delimited field")
            value = data[pos : pos + length]
            pos += length
        elif wtype == FIXED64:
            if pos + 8 > len(data):
                raise WireError("truncated fixed64")
            value = int.from_bytes(data[pos : pos + 8], "little")
            pos += 8
        elif wtype == FIXED32:
            if pos + 4 > len(data):
                raise WireError("truncated fixed32")
            value = int.from_bytes(data[pos : pos + 4], "little")
            pos += 4
        else:
            raise WireError(f"unsupported wire type {wtype}")
        fields.append((field, wtype, value))
    return fields


class FieldView:
    """Convenience accessor over parsed fields."""

    def __init__(self, data: bytes):
        self.fields = parse_fields(data)

    def first(self, field: int, default=None):
        for f, _, v in self.fields:
            if f == field:
                return v
        return default

    def all(self, field: int) -> list:
        return [v for f, _, v in self.fields if f == field]

    def uint(self, field: int, default: int = 0) -> int:
        v = self.first(field)
        if v is None:
            return default
        if not isinstance(v, int):
            raise WireError(f"field {field}: expected varint, got bytes")
        return v

    def int64(self, field: int, default: int = 0) -> int:
        return to_signed64(self.uint(field, zigzag_mask(default)))

    def bytes_(self, field: int, default: bytes = b"") -> bytes:
        v = self.first(field)
        if v is None:
            return default
        if not isinstance(v, bytes):
            raise WireError(f"field {field}: expected bytes, got varint")
        return v

    def string(self, field: int, default: str = "") -> str:
        raw = self.bytes_(field)
        if not raw:
            return default
        return raw.decode("utf-8")

    def known_fields(self) -> set[int]:
        return {f for f, _, _ in self.fields}


def reencode_fields(fields: list[tuple[int, int, "int | bytes"]]) -> bytes:
    """Re-serialize parsed fields, preserving order. Used for unknown-field
    capture so no input byte is silently dropped."""
    w = Writer()
    for field, wtype, value in fields:
        if wtype == VARINT:
            w.uint(field, value)
        elif wtype == LENGTH:
            w.bytes_(field, value)
        elif wtype == FIXED64:
            w._buf += encode_varint(field << 3 | FIXED64)
            w._buf += value.to_bytes(8, "little")
        elif wtype == FIXED32:
            w._buf += encode_varint(field << 3 | FIXED32)
            w._buf += value.to_bytes(4, "little")
    return w.finish()
