import pytest

from tronetl import stats
from tronetl.chain import encode_address
from tronetl.stats import EmptyRange, UnknownStat, compute

import oracles


def _expected_ranked(counts, top, key_name, value_name):
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top]
    return [{key_name: k, value_name: v} for k, v in ordered]


def test_witness_distribution_round_robin(loaded_small_chain):
    sink, truth, _ = loaded_small_chain
    columns, rows = compute("witness_distribution", sink)
    assert columns == ["witnessAddress", "blockCount"]
    assert {r["witnessAddress"]: r["blockCount"] for r in rows} == truth.witness_blocks
    # 100 blocks over 4 round-robin witnesses
    assert sorted(r["blockCount"] for r in rows) == [25, 25, 25, 25]


def test_tx_count_by_type_matches_truth(loaded_small_chain):
    sink, truth, _ = loaded_small_chain
    _, rows = compute("tx_count_by_type", sink)
    assert {r["contractType"]: r["txCount"] for r in rows} == truth.tx_count_by_type


def test_daily_tx_volume(loaded_small_chain):
    sink, truth, _ = loaded_small_chain
    columns, rows = compute("daily_tx_volume", sink)
    assert columns == ["day", "txCount"]
    assert {r["day"]: r["txCount"] for r in rows} == truth.daily_tx
    assert [r["day"] for r in rows] == sorted(truth.daily_tx)


def test_trc10_by_count_and_volume(loaded_small_chain):
    sink, truth, _ = loaded_small_chain
    _, by_count = compute("trc10_by_tx_count", sink)
    _, by_volume = compute("trc10_by_volume", sink)
    assert {r["assetName"]: r["txCount"] for r in by_count} == \
        {token: entry[0] for token, entry in truth.trc10_counts.items()}
    assert {r["assetName"]: r["volume"] for r in by_volume} == \
        {token: entry[1] for token, entry in truth.trc10_counts.items()}


@pytest.mark.parametrize("resource,name", [("BANDWIDTH", "delegate_bandwidth_top"),
                                           ("ENERGY", "delegate_energy_top")])
def test_delegate_tops(loaded_small_chain, resource, name):
    sink, truth, _ = loaded_small_chain
    owners = truth.delegate.get(resource, {})
    _, by_count = compute(name, sink, by="count")
    assert by_count == _expected_ranked(
        {o: e[0] for o, e in owners.items()}, 50, "ownerAddress", "delegationCount")
    _, by_amount = compute(name, sink, by="amount")
    assert by_amount == _expected_ranked(
        {o: e[1] for o, e in owners.items()}, 50, "ownerAddress", "totalAmount")


def test_event_signature_counts_for_contract(loaded_small_chain):
    sink, truth, _ = loaded_small_chain
    usdt_hex = oracles.USDT_ADDRESS_HEX
    _, rows = compute("event_signature_counts", sink, address=usdt_hex)
    expected = truth.event_signature_counts[usdt_hex]
    assert {r["topic0"]: r["eventCount"] for r in rows} == expected
    transfer = next(r for r in rows if r["topic0"] == oracles.TOPIC_TRANSFER)
    assert transfer["signature"] == "Transfer(address,address,uint256)"


def test_event_signature_counts_accepts_base58_address(loaded_small_chain):
    sink, _, _ = loaded_small_chain
    base58 = encode_address(bytes.fromhex(oracles.USDT_ADDRESS_HEX))
    _, hex_rows = compute("event_signature_counts", sink,
                          address=oracles.USDT_ADDRESS_HEX)
    _, b58_rows = compute("event_signature_counts", sink, address=base58)
    assert hex_rows == b58_rows


def test_top_n_limit_and_ordering(loaded_small_chain):
    sink, _, _ = loaded_small_chain
    _, rows = compute("top_internal_senders", sink, top=3)
    assert len(rows) <= 3
    counts = [r["internalCount"] for r in rows]
    assert counts == sorted(counts, reverse=True)


def test_trigger_address_distribution_total(loaded_small_chain):
    sink, truth, _ = loaded_small_chain
    _, rows = compute("trigger_address_distribution", sink, top=10**6)
    assert sum(r["txCount"] for r in rows) == \
        truth.tx_count_by_type["TriggerSmartContract"]


def test_event_address_distribution_total(loaded_small_chain):
    sink, truth, _ = loaded_small_chain
    _, rows = compute("event_address_distribution", sink, top=10**6)
    assert sum(r["eventCount"] for r in rows) == truth.events


def test_unknown_stat_rejected(loaded_small_chain):
    sink, _, _ = loaded_small_chain
    with pytest.raises(UnknownStat):
        compute("no_such_stat", sink)


def test_empty_sink_raises(tmp_path):
    from tronetl.sink import LocalSink
    with pytest.raises(EmptyRange):
        compute("witness_distribution", LocalSink(tmp_path))


def test_ties_break_by_key_ascending():
    class FakeSink:
        def scan(self, table):
            return [{"witnessAddress": a} for a in ["41bb", "41aa", "41cc"]]

    _, rows = stats.witness_distribution(FakeSink())
    assert [r["witnessAddress"] for r in rows] == ["41aa", "41bb", "41cc"]
