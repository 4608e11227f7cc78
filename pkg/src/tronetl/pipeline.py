"""Run-loop tying extract -> transform -> load together.

A run processes [from, to] in batches of ``batch_blocks`` blocks; each
batch commit is followed by a checkpoint advance, so an interrupted run
resumes from the last committed batch and the idempotent sink absorbs the
replayed overlap.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import client, decoder, transform
from .fixtures import MANIFEST_FILE

CHECKPOINT_GROUP = "main"


class ConfigError(ValueError):
    pass


class PipelineError(RuntimeError):
    def __init__(self, height, cause):
        super().__init__(f"height {height}: {cause}")
        self.height = height
        self.cause = cause


@dataclass
class RunConfig:
    source: object  # a source object or a path/URL string
    sink: object    # a sink object or a path/URL string
    from_block: int = 0
    to_block: int = 0
    batch_blocks: int = 1000
    window: int = 8
    retry_budget: int = 5
    record_to: str | None = None

    def validate(self):
        if self.from_block > self.to_block:
            raise ConfigError(f"from {self.from_block} > to {self.to_block}")
        if self.batch_blocks < 1:
            raise ConfigError("batch_blocks must be >= 1")
        if self.window < 1:
            raise ConfigError("window must be >= 1")


@dataclass
class RunReport:
    blocks_processed: int = 0
    rows_per_table: dict = field(default_factory=dict)
    fallback_decode_count: int = 0
    truncated_topic_count: int = 0
    duration_ms: int = 0
    resumed_from: int | None = None

    def to_json(self) -> dict:
        return {
            "blocksProcessed": self.blocks_processed,
            "rowsPerTable": self.rows_per_table,
            "fallbackDecodeCount": self.fallback_decode_count,
            "truncatedTopicCount": self.truncated_topic_count,
            "durationMs": self.duration_ms,
            "resumedFrom": self.resumed_from,
        }


def _open(config: RunConfig):
    from . import sink as sinkmod
    source = config.source
    if isinstance(source, str):
        source = client.open_source(source)
    sink = config.sink
    if isinstance(sink, str):
        sink = sinkmod.open_sink(sink)
    return source, sink


def transform_block(raw_block, raw_info) -> tuple[dict, int, int]:
    """Flatten one block into {table: rows}. Returns (rows, fallback count,
    truncated-topic count)."""
    tables: dict[str, list] = {}
    tables["blocks"] = [transform.flatten_block(raw_block)]
    tx_rows = transform.flatten_transactions(raw_block, raw_info)
    tables["transactions"] = tx_rows
    log_rows, truncated = transform.flatten_logs(raw_info)
    tables["events"] = log_rows
    tables["internals"] = transform.flatten_internals(raw_info)

    fallback = 0
    for tx in tx_rows:
        result = decoder.decode_params(
            tx["contractType"],
            bytes.fromhex(tx["contractParameterHex"]),
            (tx["hash"], tx["blockNum"]),
        )
        tables.setdefault(result.table, []).append(result.row)
        if result.fallback:
            fallback += 1
    return tables, fallback, truncated


def run(config: RunConfig, on_batch_committed=None) -> RunReport:
    """Load the configured range. ``on_batch_committed(index, last_block)``
    runs after each durable commit; raising from it aborts the run with the
    checkpoint already advanced (the crash-resume path)."""
    config.validate()
    started = time.monotonic()
    source, sink = _open(config)
    report = RunReport()

    start = config.from_block
    ckpt = sink.checkpoint_read(CHECKPOINT_GROUP)
    if ckpt is not None and ckpt.last_loaded_block >= start:
        report.resumed_from = ckpt.last_loaded_block
        start = ckpt.last_loaded_block + 1

    recorder = _Recorder(config.record_to, config.from_block, config.to_block,
                         source) if config.record_to else None

    batch_index = 0
    batch_start = start
    while batch_start <= config.to_block:
        batch_end = min(batch_start + config.batch_blocks - 1, config.to_block)
        batch_tables: dict[str, list] = {}
        try:
            for raw_block, raw_info in client.stream_range(
                    source, batch_start, batch_end, config.window):
                if recorder:
                    recorder.observe(raw_block, raw_info)
                tables, fallback, truncated = transform_block(raw_block, raw_info)
                for name, rows in tables.items():
                    batch_tables.setdefault(name, []).extend(rows)
                report.fallback_decode_count += fallback
                report.truncated_topic_count += truncated
                report.blocks_processed += 1
        except client.StreamError:
            raise
        except (transform.MalformedBlock, transform.InfoMismatch) as exc:
            raise PipelineError(batch_start, exc) from exc

        for name, rows in batch_tables.items():
            inserted = sink.insert_batch(name, rows, (batch_start, batch_end))
            report.rows_per_table[name] = report.rows_per_table.get(name, 0) + inserted
        sink.checkpoint_advance(CHECKPOINT_GROUP, batch_end)
        batch_index += 1
        if on_batch_committed is not None:
            on_batch_committed(batch_index, batch_end)
        batch_start = batch_end + 1

    if recorder:
        recorder.finalize()
    report.duration_ms = int((time.monotonic() - started) * 1000)
    return report


class _Recorder:
    """Tees raw messages into a fixture archive during a run."""

    def __init__(self, directory, start, end, source):
        self.directory = Path(directory)
        if self.directory.exists() and any(self.directory.iterdir()):
            raise ConfigError(f"record directory {directory} is not empty")
        self.directory.mkdir(parents=True, exist_ok=True)
        self.start, self.end = start, end
        self.endpoint = getattr(source, "endpoint", source.__class__.__name__)

    def observe(self, raw_block, raw_info):
        (self.directory / f"block-{raw_block.height}.bin").write_bytes(raw_block.data)
        (self.directory / f"info-{raw_info.height}.bin").write_bytes(raw_info.data)

    def finalize(self):
        (self.directory / MANIFEST_FILE).write_text(json.dumps({
            "start": self.start,
            "end": self.end,
            "endpoint": self.endpoint,
            "recordedAt": int(time.time() * 1000),
        }))


@dataclass
class Discrepancy:
    table: str
    expected: int
    actual: int


def verify(config: RunConfig) -> list[Discrepancy]:
    """Re-extract the range, recompute expected per-table counts, and diff
    against what the sink holds for those blocks. Empty list == pass."""
    config.validate()
    source, sink = _open(config)

    expected: dict[str, int] = {}
    for raw_block, raw_info in client.stream_range(
            source, config.from_block, config.to_block, config.window):
        tables, _, _ = transform_block(raw_block, raw_info)
        for name, rows in tables.items():
            expected[name] = expected.get(name, 0) + len(rows)

    diffs = []
    for name in sorted(expected):
        actual = sum(
            1 for row in sink.scan(name)
            if config.from_block <= row["blockNum"] <= config.to_block)
        if actual != expected[name]:
            diffs.append(Discrepancy(name, expected[name], actual))
    return diffs


def follow(config: RunConfig, lag: int = 20, poll_seconds: float = 3.0,
           max_cycles: int | None = None, sleep=time.sleep) -> None:
    """Trail the head by ``lag`` blocks, loading as new blocks finalize."""
    source, sink = _open(config)
    cycles = 0
    while max_cycles is None or cycles < max_cycles:
        head = source.get_head()
        target = head - lag
        ckpt = sink.checkpoint_read(CHECKPOINT_GROUP)
        loaded = ckpt.last_loaded_block if ckpt else -1
        if target > loaded:
            run(RunConfig(
                source=source, sink=sink,
                from_block=loaded + 1, to_block=target,
                batch_blocks=config.batch_blocks, window=config.window))
        cycles += 1
        if max_cycles is None or cycles < max_cycles:
            sleep(poll_seconds)
