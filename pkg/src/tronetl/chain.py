"""Canonical chain domain types and codecs.

Addresses are 21 raw bytes (version byte 0x41 + 20-byte account hash) and
are stored everywhere as 42-char lowercase hex; base58check is a display
encoding. topic0 values come from keccak-256 (the pre-standard variant the
TVM inherited from the EVM, not NIST SHA-3).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

ADDRESS_PREFIX = 0x41
ADDRESS_LEN = 21

BASE58_ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"
_BASE58_INDEX = {c: i for i, c in enumerate(BASE58_ALPHABET)}


class CodecError(ValueError):
    pass


class WrongLength(CodecError):
    pass


class WrongVersionByte(CodecError):
    pass


class BadChecksum(CodecError):
    pass


class BadAlphabet(CodecError):
    pass


class WrongDecodedLength(CodecError):
    pass


# ---------------------------------------------------------------------------
# keccak-256 (original Keccak padding 0x01, 1088-bit rate)

_KECCAK_RC = [
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
]

# rho rotation offsets, indexed [x][y]
_KECCAK_ROT = [
    [0, 36, 3, 41, 18],
    [1, 44, 10, 45, 2],
    [62, 6, 43, 15, 61],
    [28, 55, 25, 21, 56],
    [27, 20, 39, 8, 14],
]

_MASK64 = (1 << 64) - 1


def _rotl(v: int, n: int) -> int:
    return ((v << n) | (v >> (64 - n))) & _MASK64


def _keccak_f(a: list[list[int]]) -> None:
    for rc in _KECCAK_RC:
        c = [a[x][0] ^ a[x][1] ^ a[x][2] ^ a[x][3] ^ a[x][4] for x in range(5)]
        d = [c[(x - 1) % 5] ^ _rotl(c[(x + 1) % 5], 1) for x in range(5)]
        b = [[0] * 5 for _ in range(5)]
        for x in range(5):
            for y in range(5):
                b[y][(2 * x + 3 * y) % 5] = _rotl(a[x][y] ^ d[x], _KECCAK_ROT[x][y])
        for x in range(5):
            for y in range(5):
                a[x][y] = b[x][y] ^ ((~b[(x + 1) % 5][y]) & b[(x + 2) % 5][y])
        a[0][0] ^= rc


def keccak256(data: bytes) -> bytes:
    rate = 136
    padded = bytearray(data)
    pad_len = rate - (len(padded) % rate)
    padded += b"\x00" * pad_len
    padded[len(data)] ^= 0x01
    padded[-1] ^= 0x80

    state = [[0] * 5 for _ in range(5)]
    for block_start in range(0, len(padded), rate):
        for i in range(rate // 8):
            lane = int.from_bytes(padded[block_start + 8 * i : block_start + 8 * i + 8], "little")
            state[i % 5][i // 5] ^= lane
        _keccak_f(state)

    out = bytearray()
    for i in range(4):  # 32 bytes = 4 lanes
        out += state[i % 5][i // 5].to_bytes(8, "little")
    return bytes(out)


# ---------------------------------------------------------------------------
# base58check

def base58_encode(data: bytes) -> str:
    num = int.from_bytes(data, "big")
    out = ""
    while num > 0:
        num, rem = divmod(num, 58)
        out = BASE58_ALPHABET[rem] + out
    pad = 0
    for byte in data:
        if byte == 0:
            pad += 1
        else:
            break
    return "1" * pad + out


def base58_decode(text: str) -> bytes:
    num = 0
    for ch in text:
        if ch not in _BASE58_INDEX:
            raise BadAlphabet(f"invalid base58 character {ch!r}")
        num = num * 58 + _BASE58_INDEX[ch]
    raw = num.to_bytes((num.bit_length() + 7) // 8, "big")
    pad = 0
    for ch in text:
        if ch == "1":
            pad += 1
        else:
            break
    return b"\x00" * pad + raw


def _checksum(payload: bytes) -> bytes:
    return hashlib.sha256(hashlib.sha256(payload).digest()).digest()[:4]


def encode_address(raw: bytes) -> str:
    """21-byte raw address -> base58check text."""
    if len(raw) != ADDRESS_LEN:
        raise WrongLength(f"address must be {ADDRESS_LEN} bytes, got {len(raw)}")
    if raw[0] != ADDRESS_PREFIX:
        raise WrongVersionByte(f"address version byte must be 0x41, got {raw[0]:#04x}")
    return base58_encode(raw + _checksum(raw))


def decode_address(text: str) -> bytes:
    """base58check text -> 21-byte raw address. Verifies the checksum."""
    full = base58_decode(text)
    if len(full) != ADDRESS_LEN + 4:
        raise WrongDecodedLength(f"decoded length {len(full)}, expected {ADDRESS_LEN + 4}")
    payload, check = full[:-4], full[-4:]
    if _checksum(payload) != check:
        raise BadChecksum(f"checksum mismatch for {text!r}")
    if payload[0] != ADDRESS_PREFIX:
        raise WrongVersionByte(f"address version byte must be 0x41, got {payload[0]:#04x}")
    return payload


@dataclass(frozen=True)
class Address:
    raw: bytes

    def __post_init__(self):
        if len(self.raw) != ADDRESS_LEN:
            raise WrongLength(f"address must be {ADDRESS_LEN} bytes")
        if self.raw[0] != ADDRESS_PREFIX:
            raise WrongVersionByte("address version byte must be 0x41")

    @property
    def hex(self) -> str:
        return self.raw.hex()

    @property
    def text(self) -> str:
        return encode_address(self.raw)

    @classmethod
    def from_text(cls, text: str) -> "Address":
        return cls(decode_address(text))

    @classmethod
    def from_hex(cls, hexstr: str) -> "Address":
        return cls(bytes.fromhex(hexstr))


@dataclass(frozen=True)
class Hash32:
    data: bytes

    def __post_init__(self):
        if len(self.data) != 32:
            raise WrongLength(f"hash must be 32 bytes, got {len(self.data)}")

    @property
    def hex(self) -> str:
        return self.data.hex()

    @classmethod
    def from_hex(cls, hexstr: str) -> "Hash32":
        return cls(bytes.fromhex(hexstr))


# ---------------------------------------------------------------------------
# event signatures

@dataclass(frozen=True)
class EventSignature:
    canonical_text: str

    @property
    def name(self) -> str:
        return self.canonical_text.split("(", 1)[0]

    @property
    def topic0(self) -> str:
        return keccak256(self.canonical_text.encode("ascii")).hex()


# The USDT contract's event set plus the ERC-20 generics.
BUILTIN_SIGNATURES = [
    EventSignature("Transfer(address,address,uint256)"),
    EventSignature("Approval(address,address,uint256)"),
    EventSignature("AddedBlackList(address)"),
    EventSignature("RemovedBlackList(address)"),
    EventSignature("DestroyedBlackFunds(address,uint256)"),
    EventSignature("Issue(uint256)"),
    EventSignature("Redeem(uint256)"),
]


class SignatureTable:
    """topic0 -> EventSignature lookup, extensible from a config file of
    newline-delimited canonical signature texts."""

    def __init__(self, signatures=BUILTIN_SIGNATURES):
        self._by_topic0 = {sig.topic0: sig for sig in signatures}

    def lookup(self, topic0_hex: str) -> EventSignature | None:
        return self._by_topic0.get(topic0_hex.lower())

    def add(self, canonical_text: str) -> EventSignature:
        sig = EventSignature(canonical_text)
        self._by_topic0[sig.topic0] = sig
        return sig

    def load_config(self, path) -> None:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    self.add(line)

    def __iter__(self):
        return iter(self._by_topic0.values())


DEFAULT_SIGNATURES = SignatureTable()


def lookup_signature(topic0_hex: str) -> EventSignature | None:
    return DEFAULT_SIGNATURES.lookup(topic0_hex)


def selector(canonical_text: str) -> str:
    """First 4 bytes of keccak-256 over a function signature, as hex."""
    return keccak256(canonical_text.encode("ascii")).hex()[:8]
