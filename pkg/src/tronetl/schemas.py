"""Table schema registry.

One schema per sink table: the four core tables, the 39 per-contract-type
parameter tables, and the fallback table. Semantic column types (not SQL
types) are recorded here; dialects map them to DDL in ``sink``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import decoder


@dataclass(frozen=True)
class Column:
    name: str
    type: str  # u32 | u64 | i32 | amount | hash | address | hex | text | bool | array(...)
    nullable: bool = False


@dataclass(frozen=True)
class TableSchema:
    name: str
    columns: tuple[Column, ...]
    primary_key: tuple[str, ...]

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def key_of(self, row: dict) -> tuple:
        return tuple(row[k] for k in self.primary_key)


_KIND_COLUMNS = {
    "address": lambda col: [Column(col, "address")],
    "amount": lambda col: [Column(col, "amount")],
    "xfer_amount": lambda col: [Column(col, "amount")],
    "u64": lambda col: [Column(col, "u64")],
    "i32": lambda col: [Column(col, "i32")],
    "bool": lambda col: [Column(col, "bool")],
    "text": lambda col: [Column(col, "text")],
    "name": lambda col: [Column(col, "text"), Column(col + "Valid", "bool")],
    "hex": lambda col: [Column(col, "hex")],
    "hex32": lambda col: [Column(col, "hex")],
    "resource": lambda col: [Column(col, "text")],
    "accounttype": lambda col: [Column(col, "text")],
    "calldata": lambda col: [Column(col, "hex"), Column("selector", "hex")],
    "address[]": lambda col: [Column(col, "array(address)")],
    "u64[]": lambda col: [Column(col, "array(u64)")],
    "text[]": lambda col: [Column(col, "array(text)")],
    "votes": lambda col: [Column("voteAddresses", "array(address)"),
                          Column("voteCounts", "array(u64)")],
}


def _param_schema(type_name: str) -> TableSchema:
    columns = [Column("transactionHash", "hash"), Column("blockNum", "u64")]
    for _, col, kind in decoder.PARAM_FIELDS[type_name]:
        columns.extend(_KIND_COLUMNS[kind](col))
    columns.append(Column("unparsedHex", "hex"))
    return TableSchema(
        decoder.table_name_for(type_name),
        tuple(columns),
        ("blockNum", "transactionHash"),
    )


BLOCKS = TableSchema(
    "blocks",
    (
        Column("hash", "hash"),
        Column("timestamp", "u64"),
        Column("txTrieRoot", "hash"),
        Column("parentHash", "hash"),
        Column("blockNum", "u64"),
        Column("witnessId", "u64"),
        Column("witnessAddress", "address"),
        Column("version", "i32"),
        Column("accountStateRoot", "hash"),
        Column("witnessSignature", "hex"),
        Column("transactionCount", "u32"),
    ),
    ("blockNum",),
)

TRANSACTIONS = TableSchema(
    "transactions",
    (
        Column("hash", "hash"),
        Column("blockNum", "u64"),
        Column("transactionIndex", "u32"),
        Column("authorityAccountNames", "array(text)"),
        Column("authorityAccountAddresses", "array(address)"),
        Column("contractType", "text"),
        Column("contractParameterHex", "hex"),
        Column("signatures", "array(hex)"),
        Column("expiration", "u64"),
        Column("timestampField", "u64"),
        Column("feeLimit", "amount"),
        Column("energyUsage", "u64"),
        Column("energyFee", "u64"),
        Column("originEnergyUsage", "u64"),
        Column("energyUsageTotal", "u64"),
        Column("netUsage", "u64"),
        Column("netFee", "u64"),
        Column("fee", "u64"),
        Column("receiptResult", "text"),
        Column("result", "text"),
        Column("resMessage", "text"),
        Column("assetIssueId", "text"),
        Column("withdrawAmount", "amount"),
        Column("unfreezeAmount", "amount"),
        Column("exchangeId", "u64"),
        Column("exchangeReceivedAmount", "amount"),
        Column("orderId", "hex"),
        Column("orderDetails", "array(text)"),
    ),
    ("blockNum", "transactionIndex"),
)

EVENTS = TableSchema(
    "events",
    (
        Column("blockNum", "u64"),
        Column("transactionHash", "hash"),
        Column("logIndex", "u32"),
        Column("address", "address"),
        Column("topic0", "hash", nullable=True),
        Column("topic1", "hash", nullable=True),
        Column("topic2", "hash", nullable=True),
        Column("topic3", "hash", nullable=True),
        Column("data", "hex"),
    ),
    ("blockNum", "transactionHash", "logIndex"),
)

INTERNALS = TableSchema(
    "internals",
    (
        Column("blockNum", "u64"),
        Column("transactionHash", "hash"),
        Column("internalIndex", "u32"),
        Column("internalHash", "hash"),
        Column("callerAddress", "address"),
        Column("transferToAddress", "address"),
        Column("tokenIds", "array(text)"),
        Column("callValues", "array(amount)"),
        Column("note", "text"),
        Column("rejected", "bool"),
        Column("extra", "text"),
    ),
    ("blockNum", "transactionHash", "internalIndex"),
)

UNKNOWN_CONTRACTS = TableSchema(
    "unknownContracts",
    (
        Column("transactionHash", "hash"),
        Column("blockNum", "u64"),
        Column("contractType", "text"),
        Column("rawParameterHex", "hex"),
        Column("diagnostic", "text"),
    ),
    ("blockNum", "transactionHash"),
)

PARAM_TABLES = {
    decoder.table_name_for(name): _param_schema(name)
    for name in decoder.PARAM_FIELDS
}

REGISTRY: dict[str, TableSchema] = {
    "blocks": BLOCKS,
    "transactions": TRANSACTIONS,
    "events": EVENTS,
    "internals": INTERNALS,
    **PARAM_TABLES,
    "unknownContracts": UNKNOWN_CONTRACTS,
}

CORE_TABLES = ("blocks", "transactions", "events", "internals")


def get(table_name: str) -> TableSchema:
    return REGISTRY[table_name]


def manifest() -> dict:
    """JSON-serializable schema manifest consumed by external toolkits."""
    return {
        "version": 1,
        "tables": [
            {
                "name": schema.name,
                "columns": [
                    {"name": c.name, "type": c.type, "nullable": c.nullable}
                    for c in schema.columns
                ],
                "primaryKey": list(schema.primary_key),
            }
            for schema in REGISTRY.values()
        ],
    }
