"""Aggregate statistics over loaded tables.

Each stat is a pure function of sink state returning (columns, rows) with
a deterministic order: ranking key descending, then group key ascending,
limited to top-N (default 50). Addresses in parameters may be given as
42-char hex or base58check text.
"""

from __future__ import annotations

import datetime

from .chain import decode_address, lookup_signature

DEFAULT_TOP = 50


class UnknownStat(KeyError):
    pass


class EmptyRange(ValueError):
    pass


def _grouped(rows, key_fn, value_fn=lambda row: 1):
    counts: dict = {}
    for row in rows:
        key = key_fn(row)
        counts[key] = counts.get(key, 0) + value_fn(row)
    return counts


def _ranked(counts: dict, top: int, key_name: str, value_name: str):
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top]
    return [key_name, value_name], [
        {key_name: k, value_name: v} for k, v in ordered
    ]


def _require(rows, table):
    if not rows:
        raise EmptyRange(f"table {table} holds no rows")
    return rows


def _normalize_address(value: str) -> str:
    if value.startswith("T") and len(value) == 34:
        return decode_address(value).hex()
    return value.lower()


def witness_distribution(sink, top=DEFAULT_TOP, **_):
    rows = _require(sink.scan("blocks"), "blocks")
    return _ranked(_grouped(rows, lambda r: r["witnessAddress"]),
                   top, "witnessAddress", "blockCount")


def tx_count_by_type(sink, top=DEFAULT_TOP, **_):
    rows = _require(sink.scan("transactions"), "transactions")
    return _ranked(_grouped(rows, lambda r: r["contractType"]),
                   top, "contractType", "txCount")


def daily_tx_volume(sink, **_):
    blocks = _require(sink.scan("blocks"), "blocks")
    txs = _require(sink.scan("transactions"), "transactions")
    day_of_block = {
        b["blockNum"]: datetime.datetime.fromtimestamp(
            b["timestamp"] / 1000, tz=datetime.timezone.utc).strftime("%Y-%m-%d")
        for b in blocks
    }
    counts = _grouped(txs, lambda r: day_of_block[r["blockNum"]])
    return ["day", "txCount"], [
        {"day": day, "txCount": counts[day]} for day in sorted(counts)
    ]


def top_internal_senders(sink, top=DEFAULT_TOP, **_):
    rows = _require(sink.scan("internals"), "internals")
    return _ranked(_grouped(rows, lambda r: r["callerAddress"]),
                   top, "callerAddress", "internalCount")


def top_internal_receivers(sink, top=DEFAULT_TOP, **_):
    rows = _require(sink.scan("internals"), "internals")
    return _ranked(_grouped(rows, lambda r: r["transferToAddress"]),
                   top, "transferToAddress", "internalCount")


def trc10_by_tx_count(sink, top=DEFAULT_TOP, **_):
    rows = _require(sink.scan("transferAssetContracts"), "transferAssetContracts")
    return _ranked(_grouped(rows, lambda r: r["assetName"]),
                   top, "assetName", "txCount")


def trc10_by_volume(sink, top=DEFAULT_TOP, **_):
    rows = _require(sink.scan("transferAssetContracts"), "transferAssetContracts")
    return _ranked(_grouped(rows, lambda r: r["assetName"], lambda r: r["amount"]),
                   top, "assetName", "volume")


def _delegate_top(sink, resource, by, top):
    rows = _require(sink.scan("delegateResourceContracts"),
                    "delegateResourceContracts")
    rows = [r for r in rows if r["resource"] == resource]
    value_fn = (lambda r: r["balance"]) if by == "amount" else (lambda r: 1)
    value_name = "totalAmount" if by == "amount" else "delegationCount"
    return _ranked(_grouped(rows, lambda r: r["ownerAddress"], value_fn),
                   top, "ownerAddress", value_name)


def delegate_bandwidth_top(sink, top=DEFAULT_TOP, by="count", **_):
    return _delegate_top(sink, "BANDWIDTH", by, top)


def delegate_energy_top(sink, top=DEFAULT_TOP, by="count", **_):
    return _delegate_top(sink, "ENERGY", by, top)


def trigger_address_distribution(sink, top=DEFAULT_TOP, **_):
    rows = _require(sink.scan("triggerSmartContracts"), "triggerSmartContracts")
    return _ranked(_grouped(rows, lambda r: r["ownerAddress"]),
                   top, "ownerAddress", "txCount")


def event_address_distribution(sink, top=DEFAULT_TOP, **_):
    rows = _require(sink.scan("events"), "events")
    return _ranked(_grouped(rows, lambda r: r["address"]),
                   top, "address", "eventCount")


def event_signature_counts(sink, top=DEFAULT_TOP, address=None, **_):
    rows = _require(sink.scan("events"), "events")
    if address:
        wanted = _normalize_address(address)
        rows = [r for r in rows if r["address"] == wanted]
    counts = _grouped((r for r in rows if r["topic0"]), lambda r: r["topic0"])
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top]
    out = []
    for topic0, count in ordered:
        sig = lookup_signature(topic0)
        out.append({
            "topic0": topic0,
            "signature": sig.canonical_text if sig else "",
            "eventCount": count,
        })
    return ["topic0", "signature", "eventCount"], out


STATS = {
    "witness_distribution": witness_distribution,
    "tx_count_by_type": tx_count_by_type,
    "daily_tx_volume": daily_tx_volume,
    "top_internal_senders": top_internal_senders,
    "top_internal_receivers": top_internal_receivers,
    "trc10_by_tx_count": trc10_by_tx_count,
    "trc10_by_volume": trc10_by_volume,
    "delegate_bandwidth_top": delegate_bandwidth_top,
    "delegate_energy_top": delegate_energy_top,
    "trigger_address_distribution": trigger_address_distribution,
    "event_address_distribution": event_address_distribution,
    "event_signature_counts": event_signature_counts,
}


def compute(name: str, sink, **params):
    if name not in STATS:
        raise UnknownStat(name)
    return STATS[name](sink, **params)
