import pytest
from hypothesis import given, strategies as st

from tronetl import wire
from tronetl.wire import FieldView, WireError, Writer


@given(st.integers(min_value=0, max_value=2**64 - 1))
def test_varint_roundtrip(value):
    encoded = wire.encode_varint(value)
    decoded, pos = wire.decode_varint(encoded, 0)
    assert decoded == value
    assert pos == len(encoded)


@given(st.integers(min_value=-(2**63), max_value=2**63 - 1))
def test_signed64_roundtrip(value):
    assert wire.to_signed64(wire.zigzag_mask(value)) == value


def test_writer_and_fieldview():
    data = (
        Writer()
        .uint(1, 42)
        .bytes_(2, b"hello")
        .string(3, "text")
        .int64(4, -7)
        .finish()
    )
    view = FieldView(data)
    assert view.uint(1) == 42
    assert view.bytes_(2) == b"hello"
    assert view.string(3) == "text"
    assert view.int64(4) == -7
    assert view.uint(9, default=5) == 5


def test_repeated_fields_preserve_order():
    data = Writer().bytes_(1, b"a").bytes_(1, b"b").bytes_(1, b"c").finish()
    assert FieldView(data).all(1) == [b"a", b"b", b"c"]


def test_truncated_message_rejected():
    data = Writer().bytes_(1, b"abcdef").finish()
    with pytest.raises(WireError):
        wire.parse_fields(data[:-2])


def test_truncated_varint_rejected():
    with pytest.raises(WireError):
        wire.parse_fields(b"\x08\x80")  # continuation bit set, no next byte


@given(st.lists(st.tuples(st.integers(1, 100), st.binary(max_size=20)), max_size=8))
def test_reencode_is_identity(pairs):
    w = Writer()
    for field, blob in pairs:
        w.bytes_(field, blob)
    data = w.finish()
    assert wire.reencode_fields(wire.parse_fields(data)) == data
