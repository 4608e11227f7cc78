import pytest
from hypothesis import given, strategies as st

from tronetl import chain
from tronetl.chain import (
    Address, BadAlphabet, BadChecksum, EventSignature, SignatureTable,
    WrongDecodedLength, WrongLength, WrongVersionByte,
    decode_address, encode_address, keccak256, lookup_signature,
)

import oracles


def test_keccak_empty_vector():
    assert keccak256(b"").hex() == oracles.KECCAK_EMPTY


def test_keccak_event_topics():
    assert keccak256(b"Transfer(address,address,uint256)").hex() == oracles.TOPIC_TRANSFER
    assert keccak256(b"Approval(address,address,uint256)").hex() == oracles.TOPIC_APPROVAL


def test_keccak_selector():
    assert chain.selector("transfer(address,uint256)") == oracles.SELECTOR_TRANSFER


def test_encode_zero_address_matches_oracle():
    raw = bytes([0x41]) + bytes(20)
    assert encode_address(raw) == oracles.base58check_oracle(raw)
    assert encode_address(raw) == oracles.ZERO_ADDRESS_TEXT


def test_encode_usdt_address_matches_oracle():
    raw = bytes.fromhex(oracles.USDT_ADDRESS_HEX)
    assert encode_address(raw) == oracles.base58check_oracle(raw)
    assert encode_address(raw) == oracles.USDT_ADDRESS_TEXT


def test_decode_usdt_address():
    assert decode_address(oracles.USDT_ADDRESS_TEXT).hex() == oracles.USDT_ADDRESS_HEX


def test_encode_rejects_wrong_length():
    with pytest.raises(WrongLength):
        encode_address(bytes(20))


def test_encode_rejects_wrong_version():
    with pytest.raises(WrongVersionByte):
        encode_address(bytes([0x42]) + bytes(20))


def test_decode_rejects_flipped_character():
    text = oracles.USDT_ADDRESS_TEXT
    flipped = text[:-1] + ("2" if text[-1] != "2" else "3")
    with pytest.raises(BadChecksum):
        decode_address(flipped)


def test_decode_rejects_bad_alphabet():
    with pytest.raises(BadAlphabet):
        decode_address("T0IlO" + "x" * 29)  # 0, I, l, O are not base58


def test_decode_rejects_wrong_decoded_length():
    with pytest.raises(WrongDecodedLength):
        decode_address("TR7N")


@given(st.binary(min_size=20, max_size=20))
def test_address_roundtrip(account_hash):
    raw = bytes([0x41]) + account_hash
    assert decode_address(encode_address(raw)) == raw


def test_address_value_object():
    addr = Address.from_text(oracles.USDT_ADDRESS_TEXT)
    assert addr.hex == oracles.USDT_ADDRESS_HEX
    assert Address.from_hex(addr.hex).text == oracles.USDT_ADDRESS_TEXT


def test_builtin_table_topic0_consistency():
    # every shipped signature recomputes to its stored topic0
    for sig in chain.DEFAULT_SIGNATURES:
        assert keccak256(sig.canonical_text.encode()).hex() == sig.topic0


def test_lookup_known_signatures():
    assert lookup_signature(oracles.TOPIC_TRANSFER).canonical_text == \
        "Transfer(address,address,uint256)"
    assert lookup_signature(oracles.TOPIC_APPROVAL).canonical_text == \
        "Approval(address,address,uint256)"


def test_lookup_unknown_is_none():
    assert lookup_signature("00" * 32) is None


def test_builtin_table_names():
    names = {sig.name for sig in chain.BUILTIN_SIGNATURES}
    assert names == {"Transfer", "Approval", "AddedBlackList", "RemovedBlackList",
                     "DestroyedBlackFunds", "Issue", "Redeem"}


def test_signature_config_loading(tmp_path):
    config = tmp_path / "signatures.txt"
    config.write_text("# custom events\nDeposit(address,uint256)\n\n")
    table = SignatureTable()
    table.load_config(config)
    topic0 = keccak256(b"Deposit(address,uint256)").hex()
    assert table.lookup(topic0).name == "Deposit"


def test_event_signature_name():
    assert EventSignature("Issue(uint256)").name == "Issue"
