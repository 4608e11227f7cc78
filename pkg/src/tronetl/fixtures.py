"""Synthetic chain generator.

Emits a fixture archive (per-height wire files + manifest) together with a
ground-truth manifest of row counts and aggregates, computed from the
generation plan itself so it is independent of every decode path. The
generator is deterministic for a given seed.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import decoder, messages
from .chain import keccak256, EventSignature, BUILTIN_SIGNATURES
from .decoder import PARAM_FIELDS, table_name_for
from .wire import Writer

GROUNDTRUTH_FILE = "groundtruth.json"
MANIFEST_FILE = "manifest.json"

# The stablecoin contract every generated Transfer/Approval event targets.
USDT_ADDRESS = bytes.fromhex("41a614f803b6fd780986a42c78ec9c7f77e6ded13c")

_SIG_BY_NAME = {sig.name: sig for sig in BUILTIN_SIGNATURES}

# Weighted mix loosely shaped like mainnet traffic: contract triggers and
# transfers dominate, governance types are rare.
MIXED_WEIGHTS = [
    ("TriggerSmartContract", 30),
    ("TransferContract", 25),
    ("TransferAssetContract", 15),
    ("DelegateResourceContract", 10),
    ("UndelegateResourceContract", 6),
    ("FreezeBalanceV2Contract", 4),
    ("UnfreezeBalanceV2Contract", 3),
    ("VoteWitnessContract", 3),
    ("WithdrawBalanceContract", 2),
    ("AssetIssueContract", 1),
    ("AccountPermissionUpdateContract", 1),
]


@dataclass
class GeneratorConfig:
    blocks: int = 100
    seed: int = 1
    witnesses: int = 4
    txs_per_block: tuple[int, int] = (5, 15)
    mode: str = "mixed"  # "mixed" | "all-types"
    start_timestamp: int = 1_700_000_000_000
    accounts: int = 50
    trc10_tokens: int = 8


@dataclass
class GroundTruth:
    """Counts and aggregates recorded while generating."""

    blocks: int = 0
    transactions: int = 0
    events: int = 0
    internals: int = 0
    per_table: dict = field(default_factory=dict)
    tx_count_by_type: dict = field(default_factory=dict)
    witness_blocks: dict = field(default_factory=dict)
    event_signature_counts: dict = field(default_factory=dict)  # addr -> topic0 -> n
    trc10_counts: dict = field(default_factory=dict)  # assetName -> [count, volume]
    delegate: dict = field(default_factory=dict)  # resource -> owner -> [count, amount]
    daily_tx: dict = field(default_factory=dict)  # yyyy-mm-dd -> n

    def to_json(self) -> dict:
        return {
            "blocks": self.blocks,
            "transactions": self.transactions,
            "events": self.events,
            "internals": self.internals,
            "perTable": self.per_table,
            "txCountByType": self.tx_count_by_type,
            "witnessBlocks": self.witness_blocks,
            "eventSignatureCounts": self.event_signature_counts,
            "trc10Counts": self.trc10_counts,
            "delegate": self.delegate,
            "dailyTx": self.daily_tx,
        }


def _derive_address(label: str) -> bytes:
    return b"\x41" + hashlib.sha256(label.encode()).digest()[:20]


def _topic_for_address(addr: bytes) -> bytes:
    return bytes(12) + addr[1:]  # 20-byte account hash, left-padded to 32


def _uint256(value: int) -> bytes:
    return value.to_bytes(32, "big")


class ChainGenerator:
    def __init__(self, config: GeneratorConfig):
        self.config = config
        self.rng = random.Random(config.seed)
        self.truth = GroundTruth()
        self.witnesses = [_derive_address(f"witness-{i}") for i in range(config.witnesses)]
        self.accounts = [_derive_address(f"account-{i}") for i in range(config.accounts)]
        self.tokens = [f"token-{i}" for i in range(config.trc10_tokens)]
        for name in PARAM_FIELDS:
            self.truth.per_table[table_name_for(name)] = 0
        self.truth.per_table[decoder.FALLBACK_TABLE] = 0
        self._all_types_cycle = sorted(PARAM_FIELDS)
        self._cycle_pos = 0

    # -- per-type parameter builders ------------------------------------

    def _rand_account(self) -> bytes:
        return self.rng.choice(self.accounts)

    def _generic_value(self, kind: str):
        rng = self.rng
        if kind == "address":
            return self._rand_account()
        if kind in ("amount", "xfer_amount"):
            return rng.randrange(1, 10**12)
        if kind == "u64":
            return rng.randrange(0, 10**9)
        if kind == "i32":
            return rng.randrange(0, 1000)
        if kind == "bool":
            return rng.random() < 0.5
        if kind == "text":
            return f"text-{rng.randrange(10**6)}"
        if kind == "name":
            return f"name-{rng.randrange(10**6)}".encode()
        if kind == "hex":
            return rng.randbytes(rng.randrange(4, 40))
        if kind == "hex32":
            return rng.randbytes(32)
        if kind == "resource":
            return rng.randrange(2)
        if kind == "accounttype":
            return rng.randrange(3)
        if kind == "calldata":
            return bytes.fromhex("a9059cbb") + rng.randbytes(64)
        raise AssertionError(kind)

    def _encode_param(self, type_name: str, overrides: dict | None = None) -> bytes:
        """Encode a well-formed parameter for any type, layout-driven."""
        overrides = overrides or {}
        w = Writer()
        for num, col, kind in PARAM_FIELDS[type_name]:
            value = overrides.get(col, None)
            if kind == "votes":
                votes = overrides.get("votes") or [
                    (self._rand_account(), self.rng.randrange(1, 10**6))
                    for _ in range(self.rng.randrange(1, 4))
                ]
                for addr, count in votes:
                    w.message(num, Writer().bytes_(1, addr).uint(2, count))
                continue
            if kind in ("address[]",):
                for addr in (value if value is not None
                             else [self._rand_account() for _ in range(2)]):
                    w.bytes_(num, addr)
                continue
            if kind == "u64[]":
                for v in (value if value is not None
                          else [self.rng.randrange(10**6) for _ in range(2)]):
                    w.uint(num, v)
                continue
            if kind == "text[]":
                for v in (value if value is not None else ["a", "b"]):
                    w.string(num, v)
                continue
            if value is None:
                value = self._generic_value(kind)
            if kind == "address":
                w.bytes_(num, value)
            elif kind in ("amount", "xfer_amount"):
                w.int64(num, value)
            elif kind in ("u64", "resource", "accounttype"):
                w.uint(num, value)
            elif kind == "i32":
                w.int64(num, value)
            elif kind == "bool":
                w.bool_(num, value)
            elif kind == "text":
                w.string(num, value)
            elif kind == "name":
                w.bytes_(num, value if isinstance(value, bytes) else value.encode())
            elif kind in ("hex", "hex32", "calldata"):
                w.bytes_(num, value)
            else:  # pragma: no cover
                raise AssertionError(kind)
        return w.finish()

    # -- transaction planning -------------------------------------------

    def _pick_type(self) -> str:
        if self.config.mode == "all-types":
            name = self._all_types_cycle[self._cycle_pos % len(self._all_types_cycle)]
            self._cycle_pos += 1
            return name
        total = sum(weight for _, weight in MIXED_WEIGHTS)
        roll = self.rng.randrange(total)
        for name, weight in MIXED_WEIGHTS:
            roll -= weight
            if roll < 0:
                return name
        raise AssertionError

    def _build_param(self, type_name: str) -> tuple[bytes, dict]:
        """Returns (parameter bytes, plan facts used for ground truth)."""
        rng = self.rng
        facts: dict = {}
        if type_name == "TransferAssetContract":
            token = rng.choice(self.tokens)
            amount = rng.randrange(1, 10**9)
            param = self._encode_param(type_name, {
                "assetName": token.encode(), "amount": amount,
            })
            facts["trc10"] = (token, amount)
        elif type_name in ("DelegateResourceContract", "UndelegateResourceContract"):
            owner = self._rand_account()
            resource = rng.randrange(2)
            balance = rng.randrange(10**6, 10**10)
            param = self._encode_param(type_name, {
                "ownerAddress": owner, "resource": resource, "balance": balance,
            })
            if type_name == "DelegateResourceContract":
                facts["delegate"] = (decoder.RESOURCE_NAMES[resource], owner.hex(), balance)
        elif type_name == "TriggerSmartContract":
            owner = self._rand_account()
            param = self._encode_param(type_name, {
                "ownerAddress": owner, "contractAddress": USDT_ADDRESS,
            })
            facts["trigger_owner"] = owner
        else:
            param = self._encode_param(type_name)
        return param, facts

    def _plan_logs(self, type_name: str, facts: dict) -> list[bytes]:
        if type_name != "TriggerSmartContract":
            return []
        rng = self.rng
        logs = []
        for _ in range(rng.randrange(3, 11)):
            choice = rng.random()
            if choice < 0.55:
                sig = _SIG_BY_NAME["Transfer"]
                topics = [bytes.fromhex(sig.topic0),
                          _topic_for_address(self._rand_account()),
                          _topic_for_address(self._rand_account())]
                data = _uint256(rng.randrange(1, 10**12))
                addr = USDT_ADDRESS
            elif choice < 0.75:
                sig = _SIG_BY_NAME["Approval"]
                topics = [bytes.fromhex(sig.topic0),
                          _topic_for_address(self._rand_account()),
                          _topic_for_address(self._rand_account())]
                data = _uint256(rng.randrange(1, 10**12))
                addr = USDT_ADDRESS
            elif choice < 0.85:
                sig = rng.choice([_SIG_BY_NAME["AddedBlackList"],
                                  _SIG_BY_NAME["RemovedBlackList"],
                                  _SIG_BY_NAME["Issue"],
                                  _SIG_BY_NAME["Redeem"]])
                topics = [bytes.fromhex(sig.topic0)]
                data = _uint256(rng.randrange(1, 10**9))
                addr = USDT_ADDRESS
            else:
                # anonymous-style event from some other contract, 0..4 topics
                addr = self._rand_account()
                topics = [keccak256(rng.randbytes(8)) for _ in range(rng.randrange(0, 5))]
                data = rng.randbytes(rng.randrange(0, 64))
            addr_hex = addr.hex()
            if topics:
                sig_counts = self.truth.event_signature_counts.setdefault(addr_hex, {})
                topic0 = topics[0].hex()
                sig_counts[topic0] = sig_counts.get(topic0, 0) + 1
            logs.append(messages.encode_log(addr, topics, data))
            self.truth.events += 1
        return logs

    def _plan_internals(self, type_name: str, tx_hash: bytes) -> list[bytes]:
        if type_name != "TriggerSmartContract" or self.rng.random() > 0.8:
            return []
        internals = []
        for i in range(self.rng.randrange(1, 4)):
            cvis = [
                messages.encode_call_value_info(
                    self.rng.randrange(1, 10**9),
                    "" if self.rng.random() < 0.6 else self.rng.choice(self.tokens))
                for _ in range(self.rng.randrange(1, 3))
            ]
            internals.append(messages.encode_internal(
                tx_hash=hashlib.sha256(tx_hash + bytes([i])).digest(),
                caller=USDT_ADDRESS,
                transfer_to=self._rand_account(),
                call_value_infos=cvis,
                note=b"call",
                rejected=self.rng.random() < 0.05,
            ))
            self.truth.internals += 1
        return internals

    # -- block assembly --------------------------------------------------

    def _build_transaction(self, height: int, timestamp: int) -> tuple[bytes, bytes, bytes]:
        """Returns (tx wire bytes, info wire bytes, tx hash)."""
        type_name = self._pick_type()
        param, facts = self._build_param(type_name)
        contract = messages.encode_contract(type_name, param)
        owner = self._rand_account()
        tx_bytes, tx_hash = messages.encode_transaction(
            contract,
            timestamp=timestamp,
            expiration=timestamp + 60_000,
            fee_limit=self.rng.randrange(0, 10**9),
            signatures=[self.rng.randbytes(65)],
            authority_names=["main"] if self.rng.random() < 0.2 else [],
            authority_addresses=[owner] if self.rng.random() < 0.2 else [],
        )

        logs = self._plan_logs(type_name, facts)
        internals = self._plan_internals(type_name, tx_hash)
        info = messages.encode_info(
            tx_hash=tx_hash,
            fee=self.rng.randrange(0, 10**6),
            receipt=messages.encode_receipt(
                energy_usage=self.rng.randrange(0, 50_000),
                net_usage=self.rng.randrange(0, 5_000),
                net_fee=self.rng.randrange(0, 10**6),
            ),
            logs=logs,
            internals=internals,
        )

        # ground truth from the plan
        self.truth.transactions += 1
        self.truth.tx_count_by_type[type_name] = \
            self.truth.tx_count_by_type.get(type_name, 0) + 1
        self.truth.per_table[table_name_for(type_name)] += 1
        day = time.strftime("%Y-%m-%d", time.gmtime(timestamp // 1000))
        self.truth.daily_tx[day] = self.truth.daily_tx.get(day, 0) + 1
        if "trc10" in facts:
            token, amount = facts["trc10"]
            entry = self.truth.trc10_counts.setdefault(token, [0, 0])
            entry[0] += 1
            entry[1] += amount
        if "delegate" in facts:
            resource, owner_hex, balance = facts["delegate"]
            owners = self.truth.delegate.setdefault(resource, {})
            entry = owners.setdefault(owner_hex, [0, 0])
            entry[0] += 1
            entry[1] += balance
        return tx_bytes, info, tx_hash

    def generate(self, directory) -> Path:
        directory = Path(directory)
        if directory.exists() and any(directory.iterdir()):
            raise FileExistsError(f"{directory} is not empty")
        directory.mkdir(parents=True, exist_ok=True)

        parent_hash = bytes(32)
        for height in range(self.config.blocks):
            timestamp = self.config.start_timestamp + 3000 * height
            witness = self.witnesses[height % len(self.witnesses)]
            lo, hi = self.config.txs_per_block
            tx_count = 0 if height == 0 else self.rng.randrange(lo, hi + 1)

            txs, infos, hashes = [], [], []
            for _ in range(tx_count):
                tx_bytes, info_bytes, tx_hash = self._build_transaction(height, timestamp)
                txs.append(tx_bytes)
                infos.append(info_bytes)
                hashes.append(tx_hash)

            trie_root = hashlib.sha256(b"".join(hashes)).digest() if hashes else bytes(32)
            header, block_hash = messages.encode_block_header(
                timestamp=timestamp,
                tx_trie_root=trie_root,
                parent_hash=parent_hash,
                number=height,
                witness_id=height % len(self.witnesses),
                witness_address=witness,
                version=28,
                account_state_root=b"" if self.rng.random() < 0.2 else
                    hashlib.sha256(b"state" + height.to_bytes(8, "big")).digest(),
                witness_signature=self.rng.randbytes(65),
            )
            parent_hash = block_hash

            (directory / f"block-{height}.bin").write_bytes(
                messages.encode_block(header, txs))
            (directory / f"info-{height}.bin").write_bytes(
                messages.encode_info_list(infos))

            self.truth.blocks += 1
            self.truth.witness_blocks[witness.hex()] = \
                self.truth.witness_blocks.get(witness.hex(), 0) + 1

        (directory / GROUNDTRUTH_FILE).write_text(
            json.dumps(self.truth.to_json(), indent=1))
        # manifest written last: its presence marks the archive complete
        (directory / MANIFEST_FILE).write_text(json.dumps({
            "start": 0,
            "end": self.config.blocks - 1,
            "endpoint": f"synthetic://seed-{self.config.seed}",
            "recordedAt": int(time.time() * 1000),
        }))
        return directory


def generate(directory, **kwargs) -> GroundTruth:
    gen = ChainGenerator(GeneratorConfig(**kwargs))
    gen.generate(directory)
    return gen.truth


def load_groundtruth(directory) -> dict:
    return json.loads((Path(directory) / GROUNDTRUTH_FILE).read_text())
