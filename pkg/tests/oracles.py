"""Independent oracles used to freeze expected values.

The base58check oracle below is written against the algorithm definition
(big-endian base conversion + double-SHA256 checksum) and deliberately
shares no code with the production codec. The keccak-256 constants are
published, externally known values.
"""

import hashlib

_ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"


def base58check_oracle(payload: bytes) -> str:
    """Reference base58check: payload || first 4 bytes of sha256(sha256())."""
    body = payload + hashlib.sha256(hashlib.sha256(payload).digest()).digest()[:4]
    digits = []
    num = 0
    for byte in body:
        num = num * 256 + byte
    while num:
        digits.append(_ALPHABET[num % 58])
        num //= 58
    for byte in body:
        if byte:
            break
        digits.append(_ALPHABET[0])
    return "".join(reversed(digits))


# Externally published keccak-256 vectors.
KECCAK_EMPTY = "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470"
TOPIC_TRANSFER = "ddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef"
TOPIC_APPROVAL = "8c5be1e5ebec7d5bd14f71427d1e84f3dd0314c0f7b2291e5b200ac8c7c3b925"
SELECTOR_TRANSFER = "a9059cbb"  # transfer(address,uint256)

# Frozen outputs of base58check_oracle, computed once and pinned.
ZERO_ADDRESS_TEXT = "T9yD14Nj9j7xAB4dbGeiX9h8unkKHxuWwb"
USDT_ADDRESS_HEX = "41a614f803b6fd780986a42c78ec9c7f77e6ded13c"
USDT_ADDRESS_TEXT = "TR7NHqjeKQxGTCi8q8ZY4pL8otSzgjLj6t"
