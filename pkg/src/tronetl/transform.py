"""Flattening of raw block / transaction-info messages into table rows.

Rows are plain dicts keyed by column name (see ``schemas``). Numeric fields
absent on the wire become 0 and text fields become "", never None; the only
nullable columns are the four log topics.
"""

from __future__ import annotations

from . import messages as msg
from .wire import FieldView, WireError
from .messages import RawBlockMessage, RawInfoMessage, message_hash

MAX_TOPICS = 4


class MalformedBlock(ValueError):
    pass


class InfoMismatch(ValueError):
    """Receipt list disagrees with the block's transaction list; the whole
    block is quarantined rather than partially loaded."""


class ConversionError(ValueError):
    def __init__(self, path: str, detail: str):
        super().__init__(f"{path}: {detail}")
        self.path = path


def convert(raw_value, target: str, path: str = "value"):
    """Single conversion authority for row fields.

    Targets: hex, address-hex, hash-hex, amount, ms-timestamp, text, bool,
    and array-of-<target>. ``text`` over non-UTF-8 bytes falls back to hex
    and signals it by returning (value, False); all other targets return
    the converted value directly.
    """
    if target.startswith("array-of-"):
        inner = target[len("array-of-"):]
        return [convert(v, inner, f"{path}[{i}]") for i, v in enumerate(raw_value)]
    if target == "hex":
        if not isinstance(raw_value, bytes):
            raise ConversionError(path, "hex conversion needs bytes")
        return raw_value.hex()
    if target == "address-hex":
        if not isinstance(raw_value, bytes):
            raise ConversionError(path, "address conversion needs bytes")
        if raw_value == b"":
            return ""
        if len(raw_value) != 21 or raw_value[0] != 0x41:
            raise ConversionError(path, f"not a 21-byte 0x41 address: {raw_value.hex()}")
        return raw_value.hex()
    if target == "hash-hex":
        if not isinstance(raw_value, bytes):
            raise ConversionError(path, "hash conversion needs bytes")
        if raw_value == b"":
            return ""
        if len(raw_value) != 32:
            raise ConversionError(path, f"expected 32 bytes, got {len(raw_value)}")
        return raw_value.hex()
    if target == "amount":
        if not isinstance(raw_value, int):
            raise ConversionError(path, "amount conversion needs int")
        if not -(1 << 63) <= raw_value < 1 << 63:
            raise ConversionError(path, "amount outside signed 64-bit range")
        return raw_value
    if target == "ms-timestamp":
        if not isinstance(raw_value, int) or raw_value < 0:
            raise ConversionError(path, "timestamp must be a non-negative int")
        return raw_value
    if target == "bool":
        return bool(raw_value)
    if target == "text":
        if isinstance(raw_value, str):
            return raw_value, True
        try:
            return raw_value.decode("utf-8"), True
        except UnicodeDecodeError:
            return raw_value.hex(), False
    raise ConversionError(path, f"unknown conversion target {target!r}")


def _parse_block(raw: RawBlockMessage):
    try:
        block = FieldView(raw.data)
        header = FieldView(block.bytes_(msg.Block.HEADER))
        header_raw_bytes = header.bytes_(msg.BlockHeader.RAW)
        header_raw = FieldView(header_raw_bytes)
    except WireError as exc:
        raise MalformedBlock(f"height {raw.height}: {exc}") from exc
    number = header_raw.uint(msg.BlockHeaderRaw.NUMBER)
    if number != raw.height:
        raise MalformedBlock(
            f"height mismatch: envelope says {raw.height}, header says {number}")
    return block, header, header_raw, header_raw_bytes


def flatten_block(raw: RawBlockMessage) -> dict:
    block, header, header_raw, header_raw_bytes = _parse_block(raw)
    tx_count = len(block.all(msg.Block.TRANSACTION))
    return {
        "hash": message_hash(header_raw_bytes).hex(),
        "timestamp": header_raw.uint(msg.BlockHeaderRaw.TIMESTAMP),
        "txTrieRoot": convert(header_raw.bytes_(msg.BlockHeaderRaw.TX_TRIE_ROOT),
                              "hash-hex", "txTrieRoot"),
        "parentHash": convert(header_raw.bytes_(msg.BlockHeaderRaw.PARENT_HASH),
                              "hash-hex", "parentHash"),
        "blockNum": raw.height,
        "witnessId": header_raw.uint(msg.BlockHeaderRaw.WITNESS_ID),
        "witnessAddress": convert(header_raw.bytes_(msg.BlockHeaderRaw.WITNESS_ADDRESS),
                                  "address-hex", "witnessAddress"),
        "version": header_raw.int64(msg.BlockHeaderRaw.VERSION),
        "accountStateRoot": convert(
            header_raw.bytes_(msg.BlockHeaderRaw.ACCOUNT_STATE_ROOT),
            "hash-hex", "accountStateRoot"),
        "witnessSignature": header.bytes_(msg.BlockHeader.WITNESS_SIGNATURE).hex(),
        "transactionCount": tx_count,
    }


def parse_info_entries(raw_info: RawInfoMessage) -> list[FieldView]:
    listing = FieldView(raw_info.data) if raw_info.data else None
    if listing is None:
        return []
    return [FieldView(chunk) for chunk in listing.all(msg.InfoList.INFO)]


def unwrap_contract(tx_view: FieldView) -> tuple[str, bytes, bytes]:
    """Returns (typeName, any bytes, raw tx bytes) for one parsed transaction."""
    raw_bytes = tx_view.bytes_(msg.Transaction.RAW)
    raw = FieldView(raw_bytes)
    contract = FieldView(raw.bytes_(msg.TransactionRaw.CONTRACT))
    type_name = contract.string(msg.Contract.TYPE_NAME)
    any_bytes = contract.bytes_(msg.Contract.PARAMETER)
    return type_name, any_bytes, raw_bytes


def flatten_transactions(raw_block: RawBlockMessage, raw_info: RawInfoMessage) -> list[dict]:
    block, _, _, _ = _parse_block(raw_block)
    tx_chunks = block.all(msg.Block.TRANSACTION)
    infos = parse_info_entries(raw_info)
    if len(infos) != len(tx_chunks):
        raise InfoMismatch(
            f"block {raw_block.height}: {len(tx_chunks)} transactions but "
            f"{len(infos)} info entries")

    rows = []
    for index, (chunk, info) in enumerate(zip(tx_chunks, infos)):
        tx = FieldView(chunk)
        raw_bytes = tx.bytes_(msg.Transaction.RAW)
        raw = FieldView(raw_bytes)
        tx_hash = message_hash(raw_bytes)
        info_id = info.bytes_(msg.Info.ID)
        if info_id and info_id != tx_hash:
            raise InfoMismatch(
                f"block {raw_block.height} tx {index}: info id "
                f"{info_id.hex()} != transaction hash {tx_hash.hex()}")
        contract = FieldView(raw.bytes_(msg.TransactionRaw.CONTRACT))
        any_view = FieldView(contract.bytes_(msg.Contract.PARAMETER))
        receipt_bytes = info.bytes_(msg.Info.RECEIPT)
        receipt = FieldView(receipt_bytes) if receipt_bytes else None

        names = [convert(b, "text", "authorityAccountNames")[0]
                 for b in raw.all(msg.TransactionRaw.AUTHORITY_NAME)]
        addresses = [convert(b, "address-hex", "authorityAccountAddresses")
                     for b in raw.all(msg.TransactionRaw.AUTHORITY_ADDRESS)]
        res_message, _ = convert(info.bytes_(msg.Info.RES_MESSAGE), "text", "resMessage")

        rows.append({
            "hash": tx_hash.hex(),
            "blockNum": raw_block.height,
            "transactionIndex": index,
            "authorityAccountNames": names,
            "authorityAccountAddresses": addresses,
            "contractType": contract.string(msg.Contract.TYPE_NAME),
            "contractParameterHex": any_view.bytes_(msg.Any.VALUE).hex(),
            "signatures": [s.hex() for s in tx.all(msg.Transaction.SIGNATURE)],
            "expiration": raw.uint(msg.TransactionRaw.EXPIRATION),
            "timestampField": raw.uint(msg.TransactionRaw.TIMESTAMP),
            "feeLimit": raw.int64(msg.TransactionRaw.FEE_LIMIT),
            "energyUsage": receipt.uint(msg.Receipt.ENERGY_USAGE) if receipt else 0,
            "energyFee": receipt.uint(msg.Receipt.ENERGY_FEE) if receipt else 0,
            "originEnergyUsage": receipt.uint(msg.Receipt.ORIGIN_ENERGY_USAGE) if receipt else 0,
            "energyUsageTotal": receipt.uint(msg.Receipt.ENERGY_USAGE_TOTAL) if receipt else 0,
            "netUsage": receipt.uint(msg.Receipt.NET_USAGE) if receipt else 0,
            "netFee": receipt.uint(msg.Receipt.NET_FEE) if receipt else 0,
            "fee": info.uint(msg.Info.FEE),
            "receiptResult": receipt.string(msg.Receipt.RESULT) if receipt else "",
            "result": info.string(msg.Info.RESULT),
            "resMessage": res_message,
            "assetIssueId": info.string(msg.Info.ASSET_ISSUE_ID),
            "withdrawAmount": info.int64(msg.Info.WITHDRAW_AMOUNT),
            "unfreezeAmount": info.int64(msg.Info.UNFREEZE_AMOUNT),
            "exchangeId": info.uint(msg.Info.EXCHANGE_ID),
            "exchangeReceivedAmount": info.int64(msg.Info.EXCHANGE_RECEIVED_AMOUNT),
            "orderId": info.bytes_(msg.Info.ORDER_ID).hex(),
            "orderDetails": [convert(d, "text", "orderDetails")[0] if isinstance(d, bytes) else d
                             for d in info.all(msg.Info.ORDER_DETAIL)],
        })
    return rows


def flatten_logs(raw_info: RawInfoMessage) -> tuple[list[dict], int]:
    """Returns (rows ordered by (transactionIndex, logIndex), truncated-topic
    count). Logs carrying more than four topics keep the first four."""
    rows = []
    truncated = 0
    for info in parse_info_entries(raw_info):
        tx_hash = info.bytes_(msg.Info.ID).hex()
        for log_index, chunk in enumerate(info.all(msg.Info.LOG)):
            log = FieldView(chunk)
            topics = log.all(msg.Log.TOPIC)
            if len(topics) > MAX_TOPICS:
                topics = topics[:MAX_TOPICS]
                truncated += 1
            padded = [convert(t, "hash-hex", f"topic{i}") for i, t in enumerate(topics)]
            padded += [None] * (MAX_TOPICS - len(padded))
            rows.append({
                "blockNum": raw_info.height,
                "transactionHash": tx_hash,
                "logIndex": log_index,
                "address": convert(log.bytes_(msg.Log.ADDRESS), "address-hex", "address"),
                "topic0": padded[0],
                "topic1": padded[1],
                "topic2": padded[2],
                "topic3": padded[3],
                "data": log.bytes_(msg.Log.DATA).hex(),
            })
    return rows, truncated


def flatten_internals(raw_info: RawInfoMessage) -> list[dict]:
    rows = []
    for info in parse_info_entries(raw_info):
        tx_hash = info.bytes_(msg.Info.ID).hex()
        for internal_index, chunk in enumerate(info.all(msg.Info.INTERNAL)):
            internal = FieldView(chunk)
            token_ids, call_values = [], []
            for cvi_chunk in internal.all(msg.Internal.CALL_VALUE_INFO):
                cvi = FieldView(cvi_chunk)
                token_ids.append(cvi.string(msg.CallValueInfo.TOKEN_ID))
                call_values.append(cvi.int64(msg.CallValueInfo.CALL_VALUE))
            note, _ = convert(internal.bytes_(msg.Internal.NOTE), "text", "note")
            rows.append({
                "blockNum": raw_info.height,
                "transactionHash": tx_hash,
                "internalIndex": internal_index,
                "internalHash": convert(internal.bytes_(msg.Internal.HASH),
                                        "hash-hex", "internalHash"),
                "callerAddress": convert(internal.bytes_(msg.Internal.CALLER_ADDRESS),
                                         "address-hex", "callerAddress"),
                "transferToAddress": convert(
                    internal.bytes_(msg.Internal.TRANSFER_TO_ADDRESS),
                    "address-hex", "transferToAddress"),
                "tokenIds": token_ids,
                "callValues": call_values,
                "note": note,
                "rejected": bool(internal.uint(msg.Internal.REJECTED)),
                "extra": internal.string(msg.Internal.EXTRA),
            })
    return rows
