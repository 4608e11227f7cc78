import hashlib

import pytest

from tronetl import messages, transform
from tronetl.messages import RawBlockMessage, RawInfoMessage
from tronetl.transform import (
    ConversionError, InfoMismatch, MalformedBlock, convert,
    flatten_block, flatten_internals, flatten_logs, flatten_transactions,
)
from tronetl.wire import Writer

WITNESS = bytes([0x41]) + bytes(range(100, 120))
OWNER = bytes([0x41]) + bytes(range(20))
PARENT = bytes(range(32))


def _make_tx(amount=5, timestamp=1_700_000_000_000):
    param = Writer().bytes_(1, OWNER).bytes_(2, WITNESS).int64(3, amount).finish()
    contract = messages.encode_contract("TransferContract", param)
    return messages.encode_transaction(
        contract, timestamp=timestamp, expiration=timestamp + 60_000,
        fee_limit=1000, signatures=[b"\x01" * 65])


def _make_block(height, txs, timestamp=1_700_000_000_000):
    header, block_hash = messages.encode_block_header(
        timestamp=timestamp, tx_trie_root=bytes(32), parent_hash=PARENT,
        number=height, witness_id=2, witness_address=WITNESS, version=28,
        account_state_root=bytes(32), witness_signature=b"\x02" * 65)
    return RawBlockMessage(height, messages.encode_block(header, txs)), block_hash


def _make_info(height, entries):
    return RawInfoMessage(height, messages.encode_info_list(entries))


def test_flatten_block_fields():
    tx_bytes, tx_hash = _make_tx()
    raw, block_hash = _make_block(7, [tx_bytes])
    row = flatten_block(raw)
    assert row["blockNum"] == 7
    assert row["hash"] == block_hash.hex()
    assert row["parentHash"] == PARENT.hex()
    assert row["witnessAddress"] == WITNESS.hex()
    assert row["witnessId"] == 2
    assert row["version"] == 28
    assert row["transactionCount"] == 1
    assert row["timestamp"] == 1_700_000_000_000


def test_block_hash_is_digest_of_raw_header():
    raw, block_hash = _make_block(3, [])
    assert hashlib.sha256 is not None
    row = flatten_block(raw)
    assert row["hash"] == block_hash.hex()
    assert len(row["hash"]) == 64


def test_height_mismatch_rejected():
    raw, _ = _make_block(9, [])
    with pytest.raises(MalformedBlock):
        flatten_block(RawBlockMessage(10, raw.data))


def test_garbage_block_rejected():
    with pytest.raises(MalformedBlock):
        flatten_block(RawBlockMessage(0, b"\xff\xff\xff"))


def test_flatten_transactions_merges_info():
    tx_bytes, tx_hash = _make_tx()
    raw, _ = _make_block(5, [tx_bytes])
    info = messages.encode_info(
        tx_hash=tx_hash, fee=42,
        receipt=messages.encode_receipt(energy_usage=100, net_usage=50, net_fee=9))
    rows = flatten_transactions(raw, _make_info(5, [info]))
    assert len(rows) == 1
    row = rows[0]
    assert row["hash"] == tx_hash.hex()
    assert row["blockNum"] == 5
    assert row["transactionIndex"] == 0
    assert row["contractType"] == "TransferContract"
    assert row["fee"] == 42
    assert row["energyUsage"] == 100
    assert row["netUsage"] == 50
    assert row["netFee"] == 9
    assert row["feeLimit"] == 1000
    # absent numerics are 0, absent strings are ""
    assert row["withdrawAmount"] == 0
    assert row["exchangeId"] == 0
    assert row["resMessage"] == ""
    assert row["assetIssueId"] == ""


def test_transaction_row_matches_schema_columns():
    from tronetl import schemas
    tx_bytes, tx_hash = _make_tx()
    raw, _ = _make_block(5, [tx_bytes])
    info = messages.encode_info(tx_hash=tx_hash)
    rows = flatten_transactions(raw, _make_info(5, [info]))
    assert set(rows[0]) == set(schemas.TRANSACTIONS.column_names())


def test_info_count_mismatch_quarantines_block():
    tx_bytes, tx_hash = _make_tx()
    raw, _ = _make_block(5, [tx_bytes])
    with pytest.raises(InfoMismatch):
        flatten_transactions(raw, _make_info(5, []))


def test_info_id_mismatch_quarantines_block():
    tx_bytes, _ = _make_tx()
    raw, _ = _make_block(5, [tx_bytes])
    wrong = messages.encode_info(tx_hash=b"\x99" * 32)
    with pytest.raises(InfoMismatch):
        flatten_transactions(raw, _make_info(5, [wrong]))


def _log(addr, topics, data=b"\x00"):
    return messages.encode_log(addr, topics, data)


def test_flatten_logs_topic_padding():
    tx_hash = b"\x01" * 32
    topics = [bytes([i]) * 32 for i in range(3)]
    info = messages.encode_info(tx_hash=tx_hash, logs=[_log(OWNER, topics)])
    rows, truncated = flatten_logs(_make_info(4, [info]))
    assert truncated == 0
    row = rows[0]
    assert row["topic0"] == topics[0].hex()
    assert row["topic2"] == topics[2].hex()
    assert row["topic3"] is None


def test_flatten_logs_zero_topics():
    info = messages.encode_info(tx_hash=b"\x01" * 32, logs=[_log(OWNER, [])])
    rows, truncated = flatten_logs(_make_info(4, [info]))
    assert [rows[0][f"topic{i}"] for i in range(4)] == [None] * 4
    assert truncated == 0


def test_flatten_logs_truncates_excess_topics():
    topics = [bytes([i]) * 32 for i in range(6)]
    info = messages.encode_info(tx_hash=b"\x01" * 32, logs=[_log(OWNER, topics)])
    rows, truncated = flatten_logs(_make_info(4, [info]))
    assert truncated == 1
    assert rows[0]["topic3"] == topics[3].hex()
    assert "topic4" not in rows[0]


def test_log_index_dense_per_transaction():
    logs = [_log(OWNER, [b"\xaa" * 32]) for _ in range(3)]
    info_a = messages.encode_info(tx_hash=b"\x01" * 32, logs=logs)
    info_b = messages.encode_info(tx_hash=b"\x02" * 32, logs=logs[:2])
    rows, _ = flatten_logs(_make_info(4, [info_a, info_b]))
    by_tx = {}
    for row in rows:
        by_tx.setdefault(row["transactionHash"], []).append(row["logIndex"])
    assert by_tx[("01" * 32)] == [0, 1, 2]
    assert by_tx[("02" * 32)] == [0, 1]


def test_flatten_internals_parallel_arrays():
    cvis = [messages.encode_call_value_info(10, "tok-a"),
            messages.encode_call_value_info(20, "")]
    internal = messages.encode_internal(
        tx_hash=b"\x07" * 32, caller=OWNER, transfer_to=WITNESS,
        call_value_infos=cvis, note=b"call", rejected=True)
    info = messages.encode_info(tx_hash=b"\x01" * 32, internals=[internal])
    rows = flatten_internals(_make_info(4, [info]))
    row = rows[0]
    assert row["tokenIds"] == ["tok-a", ""]
    assert row["callValues"] == [10, 20]
    assert row["rejected"] is True
    assert row["note"] == "call"
    assert row["internalIndex"] == 0
    assert row["callerAddress"] == OWNER.hex()


def test_convert_address_rules():
    assert convert(OWNER, "address-hex") == OWNER.hex()
    assert convert(b"", "address-hex") == ""
    with pytest.raises(ConversionError):
        convert(b"\x42" + bytes(20), "address-hex")
    with pytest.raises(ConversionError):
        convert(bytes(20), "address-hex")


def test_convert_hash_rules():
    assert convert(b"\x01" * 32, "hash-hex") == "01" * 32
    assert convert(b"", "hash-hex") == ""
    with pytest.raises(ConversionError):
        convert(b"\x01" * 31, "hash-hex")


def test_convert_text_fallback_flags():
    assert convert(b"abc", "text") == ("abc", True)
    assert convert(b"\xff\xfe", "text") == ("fffe", False)


def test_convert_amount_range():
    assert convert(2**63 - 1, "amount") == 2**63 - 1
    with pytest.raises(ConversionError):
        convert(2**63, "amount")


def test_convert_array_target():
    assert convert([b"\x01", b"\x02"], "array-of-hex") == ["01", "02"]


def test_convert_unknown_target_rejected():
    with pytest.raises(ConversionError):
        convert(1, "no-such-target")
