"""Protocol-contract classification and parameter decoding.

Every external transaction carries one contract payload. The classifier
maps the 39 known contract type names to their (main category, subcategory,
table) and the decoder flattens each payload into a typed row for that
table. Undecodable payloads never abort the pipeline: they land in the
``unknownContracts`` fallback table with the raw bytes preserved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import wire
from .wire import FieldView, WireError


class MalformedParameter(ValueError):
    pass


class TypeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ContractClass:
    type_name: str
    main_category: str
    sub_category: str
    table_name: str


# (typeName, mainCategory, subCategory); table name is lowerFirst(typeName)+"s"
_CLASSIFICATION = [
    # Assets / TRC10
    ("AssetIssueContract", "Assets", "TRC10"),
    ("ParticipateAssetIssueContract", "Assets", "TRC10"),
    ("UpdateAssetContract", "Assets", "TRC10"),
    # Assets / Transfer
    ("TransferContract", "Assets", "Transfer"),
    ("TransferAssetContract", "Assets", "Transfer"),
    ("ShieldedTransferContract", "Assets", "Transfer"),
    # Assets / Staking
    ("CancelAllUnfreezeV2Contract", "Assets", "Staking"),
    ("FreezeBalanceContract", "Assets", "Staking"),
    ("FreezeBalanceV2Contract", "Assets", "Staking"),
    ("UnfreezeAssetContract", "Assets", "Staking"),
    ("UnfreezeBalanceContract", "Assets", "Staking"),
    ("UnfreezeBalanceV2Contract", "Assets", "Staking"),
    ("WithdrawBalanceContract", "Assets", "Staking"),
    # Account / EOAs
    ("AccountCreateContract", "Account", "EOAs"),
    ("AccountPermissionUpdateContract", "Account", "EOAs"),
    ("AccountUpdateContract", "Account", "EOAs"),
    ("SetAccountIdContract", "Account", "EOAs"),
    ("UpdateSettingContract", "Account", "EOAs"),
    # Account / SmartContracts
    ("ClearAbiContract", "Account", "SmartContracts"),
    ("CreateSmartContract", "Account", "SmartContracts"),
    ("TriggerSmartContract", "Account", "SmartContracts"),
    # Account / Resource
    ("DelegateResourceContract", "Account", "Resource"),
    ("UndelegateResourceContract", "Account", "Resource"),
    ("UpdateBrokerageContract", "Account", "Resource"),
    ("UpdateEnergyLimitContract", "Account", "Resource"),
    ("WithdrawExpireUnfreezeContract", "Account", "Resource"),
    # DEX / Exchange
    ("ExchangeCreateContract", "DEX", "Exchange"),
    ("ExchangeInjectContract", "DEX", "Exchange"),
    ("ExchangeTransactionContract", "DEX", "Exchange"),
    ("ExchangeWithdrawContract", "DEX", "Exchange"),
    # DEX / Market
    ("MarketCancelOrderContract", "DEX", "Market"),
    ("MarketSellAssetContract", "DEX", "Market"),
    # Government / Proposal
    ("ProposalApproveContract", "Government", "Proposal"),
    ("ProposalCreateContract", "Government", "Proposal"),
    ("ProposalDeleteContract", "Government", "Proposal"),
    # Government / SR Voting
    ("VoteWitnessContract", "Government", "SR Voting"),
    ("VoteAssetContract", "Government", "SR Voting"),
    ("WitnessCreateContract", "Government", "SR Voting"),
    ("WitnessUpdateContract", "Government", "SR Voting"),
]


def table_name_for(type_name: str) -> str:
    return type_name[0].lower() + type_name[1:] + "s"


CONTRACT_CLASSES = {
    name: ContractClass(name, main, sub, table_name_for(name))
    for name, main, sub in _CLASSIFICATION
}

FALLBACK_CLASS = ContractClass("Unknown", "Unknown", "Unknown", "unknownContracts")

FALLBACK_TABLE = "unknownContracts"


def classify(type_name: str) -> ContractClass:
    """Total: unknown names get the fallback class, never an error."""
    return CONTRACT_CLASSES.get(type_name, FALLBACK_CLASS)


RESOURCE_NAMES = {0: "BANDWIDTH", 1: "ENERGY"}
ACCOUNT_TYPE_NAMES = {0: "Normal", 1: "AssetIssue", 2: "Contract"}

# Per-type wire layout: (field number, column name, kind).
# Kinds: address, amount (int64), xfer_amount (int64, >= 0), u64, i32, bool,
# text, name (utf8-or-hex with <col>Valid flag), hex, hex32, resource,
# accounttype, calldata (hex + selector column), address[], u64[], amount[],
# text[], votes (parallel voteAddresses/voteCounts arrays).
PARAM_FIELDS: dict[str, list[tuple[int, str, str]]] = {
    "AssetIssueContract": [
        (1, "ownerAddress", "address"), (2, "name", "name"), (3, "abbr", "name"),
        (4, "totalSupply", "u64"), (5, "precision", "i32"),
        (6, "description", "text"), (7, "url", "text"),
    ],
    "ParticipateAssetIssueContract": [
        (1, "ownerAddress", "address"), (2, "toAddress", "address"),
        (3, "assetName", "name"), (4, "amount", "xfer_amount"),
    ],
    "UpdateAssetContract": [
        (1, "ownerAddress", "address"), (2, "description", "text"),
        (3, "url", "text"), (4, "newLimit", "u64"), (5, "newPublicLimit", "u64"),
    ],
    "TransferContract": [
        (1, "ownerAddress", "address"), (2, "toAddress", "address"),
        (3, "amount", "xfer_amount"),
    ],
    "TransferAssetContract": [
        (1, "assetName", "name"), (2, "ownerAddress", "address"),
        (3, "toAddress", "address"), (4, "amount", "xfer_amount"),
    ],
    "ShieldedTransferContract": [
        (1, "transparentFromAddress", "address"), (2, "fromAmount", "amount"),
        (3, "transparentToAddress", "address"), (4, "toAmount", "amount"),
        (5, "bindingSignature", "hex"),
    ],
    "CancelAllUnfreezeV2Contract": [(1, "ownerAddress", "address")],
    "FreezeBalanceContract": [
        (1, "ownerAddress", "address"), (2, "balance", "amount"),
        (3, "frozenDuration", "u64"), (4, "resource", "resource"),
        (5, "receiverAddress", "address"),
    ],
    "FreezeBalanceV2Contract": [
        (1, "ownerAddress", "address"), (2, "balance", "amount"),
        (3, "resource", "resource"),
    ],
    "UnfreezeAssetContract": [(1, "ownerAddress", "address")],
    "UnfreezeBalanceContract": [
        (1, "ownerAddress", "address"), (2, "resource", "resource"),
        (3, "receiverAddress", "address"),
    ],
    "UnfreezeBalanceV2Contract": [
        (1, "ownerAddress", "address"), (2, "balance", "amount"),
        (3, "resource", "resource"),
    ],
    "WithdrawBalanceContract": [(1, "ownerAddress", "address")],
    "AccountCreateContract": [
        (1, "ownerAddress", "address"), (2, "accountAddress", "address"),
        (3, "type", "accounttype"),
    ],
    "AccountPermissionUpdateContract": [
        (1, "ownerAddress", "address"), (2, "ownerPermissionName", "text"),
        (3, "ownerThreshold", "u64"), (4, "keyAddresses", "address[]"),
        (5, "keyWeights", "u64[]"),
    ],
    "AccountUpdateContract": [
        (1, "accountName", "name"), (2, "ownerAddress", "address"),
    ],
    "SetAccountIdContract": [
        (1, "accountId", "text"), (2, "ownerAddress", "address"),
    ],
    "UpdateSettingContract": [
        (1, "ownerAddress", "address"), (2, "contractAddress", "address"),
        (3, "consumeUserResourcePercent", "u64"),
    ],
    "ClearAbiContract": [
        (1, "ownerAddress", "address"), (2, "contractAddress", "address"),
    ],
    "CreateSmartContract": [
        (1, "ownerAddress", "address"), (2, "newContractAddress", "address"),
        (3, "bytecodeHex", "hex"),
    ],
    "TriggerSmartContract": [
        (1, "ownerAddress", "address"), (2, "contractAddress", "address"),
        (3, "callValue", "amount"), (4, "data", "calldata"),
        (5, "callTokenValue", "amount"), (6, "tokenId", "u64"),
    ],
    "DelegateResourceContract": [
        (1, "ownerAddress", "address"), (2, "resource", "resource"),
        (3, "balance", "amount"), (4, "receiverAddress", "address"),
        (5, "lock", "bool"), (6, "lockPeriod", "u64"),
    ],
    "UndelegateResourceContract": [
        (1, "ownerAddress", "address"), (2, "resource", "resource"),
        (3, "balance", "amount"), (4, "receiverAddress", "address"),
    ],
    "UpdateBrokerageContract": [
        (1, "ownerAddress", "address"), (2, "brokerage", "i32"),
    ],
    "UpdateEnergyLimitContract": [
        (1, "ownerAddress", "address"), (2, "contractAddress", "address"),
        (3, "originEnergyLimit", "u64"),
    ],
    "WithdrawExpireUnfreezeContract": [(1, "ownerAddress", "address")],
    "ExchangeCreateContract": [
        (1, "ownerAddress", "address"), (2, "firstTokenId", "text"),
        (3, "firstTokenBalance", "amount"), (4, "secondTokenId", "text"),
        (5, "secondTokenBalance", "amount"),
    ],
    "ExchangeInjectContract": [
        (1, "ownerAddress", "address"), (2, "exchangeId", "u64"),
        (3, "tokenId", "text"), (4, "quant", "amount"),
    ],
    "ExchangeTransactionContract": [
        (1, "ownerAddress", "address"), (2, "exchangeId", "u64"),
        (3, "tokenId", "text"), (4, "quant", "amount"), (5, "expected", "amount"),
    ],
    "ExchangeWithdrawContract": [
        (1, "ownerAddress", "address"), (2, "exchangeId", "u64"),
        (3, "tokenId", "text"), (4, "quant", "amount"),
    ],
    "MarketCancelOrderContract": [
        (1, "ownerAddress", "address"), (2, "orderId", "hex32"),
    ],
    "MarketSellAssetContract": [
        (1, "ownerAddress", "address"), (2, "sellTokenId", "text"),
        (3, "sellTokenQuantity", "amount"), (4, "buyTokenId", "text"),
        (5, "buyTokenQuantity", "amount"),
    ],
    "ProposalApproveContract": [
        (1, "ownerAddress", "address"), (2, "proposalId", "u64"),
        (3, "isAddApproval", "bool"),
    ],
    "ProposalCreateContract": [
        (1, "ownerAddress", "address"), (2, "paramKeys", "u64[]"),
        (3, "paramValues", "u64[]"),
    ],
    "ProposalDeleteContract": [
        (1, "ownerAddress", "address"), (2, "proposalId", "u64"),
    ],
    "VoteWitnessContract": [
        (1, "ownerAddress", "address"), (2, "votes", "votes"),
    ],
    "VoteAssetContract": [
        (1, "ownerAddress", "address"), (2, "voteAddresses", "address[]"),
        (3, "support", "bool"), (4, "count", "u64"),
    ],
    "WitnessCreateContract": [
        (1, "ownerAddress", "address"), (2, "url", "text"),
    ],
    "WitnessUpdateContract": [
        (1, "ownerAddress", "address"), (2, "updateUrl", "text"),
    ],
}

assert set(PARAM_FIELDS) == set(CONTRACT_CLASSES)


@dataclass
class ParamRow:
    table: str
    row: dict
    fallback: bool = False
    diagnostic: str = ""


def _decode_address_field(raw: bytes) -> str:
    if len(raw) != 21 or raw[0] != 0x41:
        raise MalformedParameter(f"bad address field: {raw.hex()}")
    return raw.hex()


def _decode_name(raw: bytes) -> tuple[str, bool]:
    try:
        return raw.decode("utf-8"), True
    except UnicodeDecodeError:
        return raw.hex(), False


def _decode_amount(value: int, non_negative: bool) -> int:
    signed = wire.to_signed64(value)
    if non_negative and signed < 0:
        raise MalformedParameter(f"negative transfer amount {signed}")
    return signed


def _decode_votes(chunks: list[bytes]) -> tuple[list[str], list[int]]:
    addresses, counts = [], []
    for chunk in chunks:
        view = FieldView(chunk)
        addresses.append(_decode_address_field(view.bytes_(1)))
        counts.append(view.uint(2))
    return addresses, counts


def _expect_bytes(value) -> bytes:
    if not isinstance(value, bytes):
        raise MalformedParameter("expected length-delimited field")
    return value


def _expect_int(value) -> int:
    if not isinstance(value, int):
        raise MalformedParameter("expected varint field")
    return value


def decode_params(type_name: str, parameter_bytes: bytes, tx_context: tuple[str, int]) -> ParamRow:
    """Decode one contract payload into its table row.

    tx_context is (transactionHash hex, blockNum); both always appear in the
    emitted row. Any wire field not covered by the type's layout is captured
    hex-encoded in ``unparsedHex`` so the decode is loss-aware.
    """
    tx_hash, block_num = tx_context
    cls = classify(type_name)
    if cls is FALLBACK_CLASS:
        return _fallback_row(type_name, parameter_bytes, tx_context,
                             f"unknown contract type {type_name!r}")
    try:
        row = _decode_known(type_name, parameter_bytes)
    except (MalformedParameter, WireError, UnicodeDecodeError) as exc:
        return _fallback_row(type_name, parameter_bytes, tx_context, str(exc))
    row["transactionHash"] = tx_hash
    row["blockNum"] = block_num
    return ParamRow(cls.table_name, row)


def _decode_known(type_name: str, parameter_bytes: bytes) -> dict:
    layout = PARAM_FIELDS[type_name]
    fields = wire.parse_fields(parameter_bytes)
    by_num: dict[int, list] = {}
    for num, wtype, value in fields:
        by_num.setdefault(num, []).append((wtype, value))
    known_nums = {num for num, _, _ in layout}

    row: dict = {}
    for num, col, kind in layout:
        values = [v for _, v in by_num.get(num, [])]
        if kind == "address":
            row[col] = _decode_address_field(_expect_bytes(values[0])) if values else ""
        elif kind == "xfer_amount":
            row[col] = _decode_amount(_expect_int(values[0]), True) if values else 0
        elif kind == "amount":
            row[col] = _decode_amount(_expect_int(values[0]), False) if values else 0
        elif kind == "u64":
            row[col] = _expect_int(values[0]) if values else 0
        elif kind == "i32":
            v = wire.to_signed64(_expect_int(values[0])) if values else 0
            if not -(1 << 31) <= v < 1 << 31:
                raise MalformedParameter(f"{col}: value {v} out of int32 range")
            row[col] = v
        elif kind == "bool":
            row[col] = bool(_expect_int(values[0])) if values else False
        elif kind == "text":
            row[col] = _expect_bytes(values[0]).decode("utf-8") if values else ""
        elif kind == "name":
            text, valid = _decode_name(_expect_bytes(values[0])) if values else ("", True)
            row[col] = text
            row[col + "Valid"] = valid
        elif kind == "hex":
            row[col] = _expect_bytes(values[0]).hex() if values else ""
        elif kind == "hex32":
            raw = _expect_bytes(values[0]) if values else b""
            if raw and len(raw) != 32:
                raise MalformedParameter(f"{col}: expected 32 bytes, got {len(raw)}")
            row[col] = raw.hex()
        elif kind == "resource":
            code = _expect_int(values[0]) if values else 0
            if code not in RESOURCE_NAMES:
                raise MalformedParameter(f"{col}: unknown resource code {code}")
            row[col] = RESOURCE_NAMES[code]
        elif kind == "accounttype":
            code = _expect_int(values[0]) if values else 0
            if code not in ACCOUNT_TYPE_NAMES:
                raise MalformedParameter(f"{col}: unknown account type {code}")
            row[col] = ACCOUNT_TYPE_NAMES[code]
        elif kind == "calldata":
            raw = _expect_bytes(values[0]) if values else b""
            row[col] = raw.hex()
            row["selector"] = raw[:4].hex() if len(raw) >= 4 else ""
        elif kind == "address[]":
            row[col] = [_decode_address_field(_expect_bytes(v)) for v in values]
        elif kind == "u64[]":
            row[col] = [_expect_int(v) for v in values]
        elif kind == "text[]":
            row[col] = [_expect_bytes(v).decode("utf-8") for v in values]
        elif kind == "votes":
            addrs, counts = _decode_votes([_expect_bytes(v) for v in values])
            row["voteAddresses"] = addrs
            row["voteCounts"] = counts
        else:  # pragma: no cover - layout table is static
            raise AssertionError(f"unhandled kind {kind}")

    unknown = [(n, w, v) for n, w, v in fields if n not in known_nums]
    row["unparsedHex"] = wire.reencode_fields(unknown).hex() if unknown else ""
    return row


def _fallback_row(type_name, parameter_bytes, tx_context, diagnostic) -> ParamRow:
    tx_hash, block_num = tx_context
    return ParamRow(
        FALLBACK_TABLE,
        {
            "transactionHash": tx_hash,
            "blockNum": block_num,
            "contractType": type_name,
            "rawParameterHex": parameter_bytes.hex(),
            "diagnostic": diagnostic,
        },
        fallback=True,
        diagnostic=diagnostic,
    )


def decode_contract(type_name: str, any_bytes: bytes, tx_context: tuple[str, int]) -> ParamRow:
    """Unwrap a contract's Any envelope and decode the payload.

    A type-url that disagrees with the declared type name is a TypeMismatch;
    like any malformed payload it lands in the fallback table rather than
    aborting the pipeline.
    """
    from . import messages as msg  # local import; messages does not depend on us

    try:
        view = FieldView(any_bytes)
        type_url = view.string(msg.Any.TYPE_URL)
        value = view.bytes_(msg.Any.VALUE)
    except (WireError, UnicodeDecodeError) as exc:
        return _fallback_row(type_name, any_bytes, tx_context,
                             f"bad parameter envelope: {exc}")
    if type_url and type_url != msg.TYPE_URL_PREFIX + type_name:
        return _fallback_row(
            type_name, value, tx_context,
            f"type mismatch: envelope carries {type_url!r}, contract says {type_name!r}")
    return decode_params(type_name, value, tx_context)


@dataclass
class CoverageCounter:
    """Per-type decoded/fallback accounting over a decoded corpus."""

    decoded: dict = field(default_factory=dict)
    fallback: dict = field(default_factory=dict)

    def observe(self, type_name: str, result: ParamRow) -> None:
        bucket = self.fallback if result.fallback else self.decoded
        bucket[type_name] = bucket.get(type_name, 0) + 1

    def report(self) -> list[tuple[str, int, int]]:
        names = sorted(set(self.decoded) | set(self.fallback))
        return [(n, self.decoded.get(n, 0), self.fallback.get(n, 0)) for n in names]
