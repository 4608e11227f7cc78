"""Wire layout of the chain messages exchanged with a node.

Field numbers here are the single source of truth shared by the fixture
generator (encode side) and the row transformers (decode side). A block
or transaction hash is the SHA-256 of its serialized ``raw`` submessage,
so hashes are recomputable from bytes alone.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .wire import Writer

TYPE_URL_PREFIX = "type.tronetl/"


@dataclass(frozen=True)
class RawBlockMessage:
    height: int
    data: bytes


@dataclass(frozen=True)
class RawInfoMessage:
    height: int
    data: bytes


class Block:
    HEADER = 1
    TRANSACTION = 2  # repeated


class BlockHeader:
    RAW = 1
    WITNESS_SIGNATURE = 2


class BlockHeaderRaw:
    TIMESTAMP = 1
    TX_TRIE_ROOT = 2
    PARENT_HASH = 3
    NUMBER = 4
    WITNESS_ID = 5
    WITNESS_ADDRESS = 6
    VERSION = 7
    ACCOUNT_STATE_ROOT = 8


class Transaction:
    RAW = 1
    SIGNATURE = 2  # repeated


class TransactionRaw:
    CONTRACT = 1
    TIMESTAMP = 2
    EXPIRATION = 3
    FEE_LIMIT = 4
    AUTHORITY_NAME = 5  # repeated
    AUTHORITY_ADDRESS = 6  # repeated


class Contract:
    TYPE_NAME = 1
    PARAMETER = 2  # Any
    PERMISSION_ID = 3


class Any:
    TYPE_URL = 1
    VALUE = 2


class InfoList:
    INFO = 1  # repeated


class Info:
    ID = 1
    FEE = 2
    RECEIPT = 3
    LOG = 4  # repeated
    INTERNAL = 5  # repeated
    RESULT = 6
    RES_MESSAGE = 7
    ASSET_ISSUE_ID = 8
    WITHDRAW_AMOUNT = 9
    UNFREEZE_AMOUNT = 10
    EXCHANGE_ID = 11
    EXCHANGE_RECEIVED_AMOUNT = 12
    ORDER_ID = 13
    ORDER_DETAIL = 14  # repeated


class Receipt:
    ENERGY_USAGE = 1
    ENERGY_FEE = 2
    ORIGIN_ENERGY_USAGE = 3
    ENERGY_USAGE_TOTAL = 4
    NET_USAGE = 5
    NET_FEE = 6
    RESULT = 7


class Log:
    ADDRESS = 1
    TOPIC = 2  # repeated
    DATA = 3


class Internal:
    HASH = 1
    CALLER_ADDRESS = 2
    TRANSFER_TO_ADDRESS = 3
    CALL_VALUE_INFO = 4  # repeated
    NOTE = 5
    REJECTED = 6
    EXTRA = 7


class CallValueInfo:
    CALL_VALUE = 1
    TOKEN_ID = 2


def message_hash(raw_bytes: bytes) -> bytes:
    return hashlib.sha256(raw_bytes).digest()


# --------------------------------------------------------------------------
# encode helpers (fixture generation and record tooling)

def encode_any(type_name: str, value: bytes) -> bytes:
    return (
        Writer()
        .string(Any.TYPE_URL, TYPE_URL_PREFIX + type_name)
        .bytes_(Any.VALUE, value)
        .finish()
    )


def encode_contract(type_name: str, parameter: bytes, permission_id: int = 0) -> bytes:
    w = Writer().string(Contract.TYPE_NAME, type_name)
    w.bytes_(Contract.PARAMETER, encode_any(type_name, parameter))
    if permission_id:
        w.uint(Contract.PERMISSION_ID, permission_id)
    return w.finish()


def encode_transaction(contract: bytes, timestamp: int, expiration: int,
                       fee_limit: int, signatures: list[bytes],
                       authority_names: list[str] = (),
                       authority_addresses: list[bytes] = ()) -> tuple[bytes, bytes]:
    """Returns (wire bytes, transaction hash)."""
    raw = Writer().bytes_(TransactionRaw.CONTRACT, contract)
    raw.uint(TransactionRaw.TIMESTAMP, timestamp)
    raw.uint(TransactionRaw.EXPIRATION, expiration)
    raw.int64(TransactionRaw.FEE_LIMIT, fee_limit)
    for name in authority_names:
        raw.string(TransactionRaw.AUTHORITY_NAME, name)
    for addr in authority_addresses:
        raw.bytes_(TransactionRaw.AUTHORITY_ADDRESS, addr)
    raw_bytes = raw.finish()
    w = Writer().bytes_(Transaction.RAW, raw_bytes)
    for sig in signatures:
        w.bytes_(Transaction.SIGNATURE, sig)
    return w.finish(), message_hash(raw_bytes)


def encode_block_header(*, timestamp: int, tx_trie_root: bytes, parent_hash: bytes,
                        number: int, witness_id: int, witness_address: bytes,
                        version: int, account_state_root: bytes,
                        witness_signature: bytes) -> tuple[bytes, bytes]:
    """Returns (wire bytes, block hash)."""
    raw = Writer()
    raw.uint(BlockHeaderRaw.TIMESTAMP, timestamp)
    raw.bytes_(BlockHeaderRaw.TX_TRIE_ROOT, tx_trie_root)
    raw.bytes_(BlockHeaderRaw.PARENT_HASH, parent_hash)
    raw.uint(BlockHeaderRaw.NUMBER, number)
    raw.uint(BlockHeaderRaw.WITNESS_ID, witness_id)
    raw.bytes_(BlockHeaderRaw.WITNESS_ADDRESS, witness_address)
    raw.int64(BlockHeaderRaw.VERSION, version)
    if account_state_root:
        raw.bytes_(BlockHeaderRaw.ACCOUNT_STATE_ROOT, account_state_root)
    raw_bytes = raw.finish()
    header = (
        Writer()
        .bytes_(BlockHeader.RAW, raw_bytes)
        .bytes_(BlockHeader.WITNESS_SIGNATURE, witness_signature)
        .finish()
    )
    return header, message_hash(raw_bytes)


def encode_block(header: bytes, transactions: list[bytes]) -> bytes:
    w = Writer().bytes_(Block.HEADER, header)
    for tx in transactions:
        w.bytes_(Block.TRANSACTION, tx)
    return w.finish()


def encode_receipt(*, energy_usage=0, energy_fee=0, origin_energy_usage=0,
                   energy_usage_total=0, net_usage=0, net_fee=0,
                   result="SUCCESS") -> bytes:
    w = Writer()
    if energy_usage:
        w.uint(Receipt.ENERGY_USAGE, energy_usage)
    if energy_fee:
        w.uint(Receipt.ENERGY_FEE, energy_fee)
    if origin_energy_usage:
        w.uint(Receipt.ORIGIN_ENERGY_USAGE, origin_energy_usage)
    if energy_usage_total:
        w.uint(Receipt.ENERGY_USAGE_TOTAL, energy_usage_total)
    if net_usage:
        w.uint(Receipt.NET_USAGE, net_usage)
    if net_fee:
        w.uint(Receipt.NET_FEE, net_fee)
    if result:
        w.string(Receipt.RESULT, result)
    return w.finish()


def encode_log(address: bytes, topics: list[bytes], data: bytes) -> bytes:
    w = Writer().bytes_(Log.ADDRESS, address)
    for topic in topics:
        w.bytes_(Log.TOPIC, topic)
    w.bytes_(Log.DATA, data)
    return w.finish()


def encode_call_value_info(call_value: int, token_id: str) -> bytes:
    w = Writer().int64(CallValueInfo.CALL_VALUE, call_value)
    if token_id:
        w.string(CallValueInfo.TOKEN_ID, token_id)
    return w.finish()


def encode_internal(*, tx_hash: bytes, caller: bytes, transfer_to: bytes,
                    call_value_infos: list[bytes], note: bytes = b"",
                    rejected: bool = False, extra: str = "") -> bytes:
    w = Writer().bytes_(Internal.HASH, tx_hash)
    w.bytes_(Internal.CALLER_ADDRESS, caller)
    w.bytes_(Internal.TRANSFER_TO_ADDRESS, transfer_to)
    for cvi in call_value_infos:
        w.bytes_(Internal.CALL_VALUE_INFO, cvi)
    if note:
        w.bytes_(Internal.NOTE, note)
    if rejected:
        w.bool_(Internal.REJECTED, rejected)
    if extra:
        w.string(Internal.EXTRA, extra)
    return w.finish()


def encode_info(*, tx_hash: bytes, fee: int = 0, receipt: bytes = b"",
                logs: list[bytes] = (), internals: list[bytes] = (),
                result: str = "SUCCESS", res_message: bytes = b"",
                asset_issue_id: str = "", withdraw_amount: int = 0,
                unfreeze_amount: int = 0, exchange_id: int = 0,
                exchange_received_amount: int = 0, order_id: bytes = b"",
                order_details: list[str] = ()) -> bytes:
    w = Writer().bytes_(Info.ID, tx_hash)
    if fee:
        w.uint(Info.FEE, fee)
    if receipt:
        w.bytes_(Info.RECEIPT, receipt)
    for log in logs:
        w.bytes_(Info.LOG, log)
    for internal in internals:
        w.bytes_(Info.INTERNAL, internal)
    if result:
        w.string(Info.RESULT, result)
    if res_message:
        w.bytes_(Info.RES_MESSAGE, res_message)
    if asset_issue_id:
        w.string(Info.ASSET_ISSUE_ID, asset_issue_id)
    if withdraw_amount:
        w.int64(Info.WITHDRAW_AMOUNT, withdraw_amount)
    if unfreeze_amount:
        w.int64(Info.UNFREEZE_AMOUNT, unfreeze_amount)
    if exchange_id:
        w.uint(Info.EXCHANGE_ID, exchange_id)
    if exchange_received_amount:
        w.int64(Info.EXCHANGE_RECEIVED_AMOUNT, exchange_received_amount)
    if order_id:
        w.bytes_(Info.ORDER_ID, order_id)
    for detail in order_details:
        w.string(Info.ORDER_DETAIL, detail)
    return w.finish()


def encode_info_list(infos: list[bytes]) -> bytes:
    w = Writer()
    for info in infos:
        w.bytes_(InfoList.INFO, info)
    return w.finish()
