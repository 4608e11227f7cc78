"""Columnar sinks: DDL emission, batch insert, optimize, checkpoints.

Two sinks share the same interface: ``LocalSink`` stores each table as a
directory of append-only segment files and is what the test suite and
offline runs use; ``ClickHouseSink`` talks to a ClickHouse server over its
HTTP interface. Both implement replace-by-key deduplication: inserts are
append-only and duplicate primary keys collapse on read / optimize, with
the latest write winning.

Local segment format (``<table>/<firstBlock>-<lastBlock>.rows``): the magic
``ROWSEG01``, a length-prefixed JSON header {table, columns, firstBlock,
lastBlock, seq}, then length-prefixed JSON-encoded rows. All length
prefixes are unsigned 32-bit big-endian. ``seq`` orders writes; the
highest seq wins per primary key.
"""

from __future__ import annotations

import json
import os
import struct
import time
import urllib.request
import urllib.error
from dataclasses import dataclass
from pathlib import Path

from . import schemas
from .schemas import TableSchema

SEGMENT_MAGIC = b"ROWSEG01"


class UnknownTable(KeyError):
    pass


class UnknownDialect(KeyError):
    pass


class SchemaMismatch(ValueError):
    pass


class StoreUnavailable(RuntimeError):
    pass


@dataclass
class Checkpoint:
    table_group: str
    last_loaded_block: int
    updated_at: int


# ---------------------------------------------------------------------------
# DDL

_GENERIC_TYPES = {
    "u64": "BIGINT",
    "u32": "INTEGER",
    "i32": "INTEGER",
    "amount": "BIGINT",
    "hash": "CHAR(64)",
    "address": "CHAR(42)",
    "hex": "TEXT",
    "text": "TEXT",
    "bool": "BOOLEAN",
}

_CLICKHOUSE_TYPES = {
    "u64": "UInt64",
    "u32": "UInt32",
    "i32": "Int32",
    "amount": "Int64",
    "hash": "String",
    "address": "String",
    "hex": "String",
    "text": "String",
    "bool": "Bool",
}

_CLICKHOUSE_ARRAY_INNER = {
    "u64": "UInt64",
    "amount": "Int64",
    "address": "String",
    "text": "String",
    "hex": "String",
}


def _generic_column_sql(col: schemas.Column) -> str:
    if col.type.startswith("array("):
        sql_type = "TEXT"  # arrays stored JSON-encoded
    else:
        sql_type = _GENERIC_TYPES[col.type]
    null = "" if col.nullable else " NOT NULL"
    return f'    "{col.name}" {sql_type}{null}'


def _clickhouse_column_sql(col: schemas.Column) -> str:
    if col.type.startswith("array("):
        inner = col.type[len("array("):-1]
        sql_type = f"Array({_CLICKHOUSE_ARRAY_INNER[inner]})"
    else:
        sql_type = _CLICKHOUSE_TYPES[col.type]
        if col.nullable:
            sql_type = f"Nullable({sql_type})"
    return f"    `{col.name}` {sql_type}"


def ddl_for(table_name: str, dialect: str = "generic") -> str:
    if table_name not in schemas.REGISTRY:
        raise UnknownTable(table_name)
    schema = schemas.get(table_name)
    if dialect == "generic":
        cols = ",\n".join(_generic_column_sql(c) for c in schema.columns)
        pk = ", ".join(f'"{k}"' for k in schema.primary_key)
        return (f'CREATE TABLE IF NOT EXISTS "{schema.name}" (\n{cols},\n'
                f"    PRIMARY KEY ({pk})\n);")
    if dialect == "clickhouse":
        cols = ",\n".join(_clickhouse_column_sql(c) for c in schema.columns)
        pk = ", ".join(f"`{k}`" for k in schema.primary_key)
        return (f"CREATE TABLE IF NOT EXISTS `{schema.name}` (\n{cols}\n)\n"
                f"ENGINE = ReplacingMergeTree\nORDER BY ({pk});")
    raise UnknownDialect(dialect)


def _validate_rows(schema: TableSchema, rows: list[dict]) -> None:
    expected = set(schema.column_names())
    for row in rows:
        got = set(row)
        if got != expected:
            missing = expected - got
            extra = got - expected
            raise SchemaMismatch(
                f"table {schema.name}: row columns differ from schema "
                f"(missing={sorted(missing)}, extra={sorted(extra)})")


# ---------------------------------------------------------------------------
# local file sink

class LocalSink:
    """Directory-backed columnar sink; append segments, dedup on read."""

    CHECKPOINT_DIR = "_checkpoints"

    def __init__(self, directory):
        self.root = Path(directory)
        self.root.mkdir(parents=True, exist_ok=True)

    # -- write path

    def insert_batch(self, table_name: str, rows: list[dict],
                     block_range: tuple[int, int] | None = None) -> int:
        if table_name not in schemas.REGISTRY:
            raise UnknownTable(table_name)
        schema = schemas.get(table_name)
        _validate_rows(schema, rows)
        if not rows:
            return 0
        if block_range is None:
            nums = [r["blockNum"] for r in rows]
            block_range = (min(nums), max(nums))
        first, last = block_range

        table_dir = self.root / table_name
        table_dir.mkdir(exist_ok=True)
        seq = self._next_seq(table_dir)
        payload = self._encode_segment(schema, rows, first, last, seq)
        final = table_dir / f"{first}-{last}.rows"
        tmp = table_dir / f".tmp-{seq}-{os.getpid()}"
        tmp.write_bytes(payload)
        os.replace(tmp, final)  # atomic: a segment is never partially visible
        return len(rows)

    def _next_seq(self, table_dir: Path) -> int:
        highest = 0
        for path in table_dir.glob("*.rows"):
            try:
                header, _ = self._read_segment_header(path)
                highest = max(highest, header["seq"])
            except (OSError, ValueError):
                continue
        return highest + 1

    @staticmethod
    def _encode_segment(schema, rows, first, last, seq) -> bytes:
        out = bytearray(SEGMENT_MAGIC)
        header = json.dumps({
            "table": schema.name,
            "columns": schema.column_names(),
            "firstBlock": first,
            "lastBlock": last,
            "seq": seq,
        }).encode("utf-8")
        out += struct.pack(">I", len(header)) + header
        for row in rows:
            blob = json.dumps(row, separators=(",", ":"), sort_keys=True).encode("utf-8")
            out += struct.pack(">I", len(blob)) + blob
        return bytes(out)

    @staticmethod
    def _read_segment_header(path: Path) -> tuple[dict, bytes]:
        data = path.read_bytes()
        if data[: len(SEGMENT_MAGIC)] != SEGMENT_MAGIC:
            raise ValueError(f"{path}: bad segment magic")
        pos = len(SEGMENT_MAGIC)
        (hlen,) = struct.unpack_from(">I", data, pos)
        pos += 4
        header = json.loads(data[pos : pos + hlen])
        return header, data[pos + hlen :]

    @classmethod
    def _read_segment(cls, path: Path) -> tuple[dict, list[dict]]:
        header, body = cls._read_segment_header(path)
        rows = []
        pos = 0
        while pos < len(body):
            (rlen,) = struct.unpack_from(">I", body, pos)
            pos += 4
            rows.append(json.loads(body[pos : pos + rlen]))
            pos += rlen
        return header, rows

    # -- read path

    def _segments(self, table_name: str) -> list[Path]:
        table_dir = self.root / table_name
        if not table_dir.is_dir():
            return []
        return sorted(table_dir.glob("*.rows"))

    def scan(self, table_name: str) -> list[dict]:
        """All logical rows: duplicates collapsed, latest seq wins, ordered
        by primary key."""
        if table_name not in schemas.REGISTRY:
            raise UnknownTable(table_name)
        schema = schemas.get(table_name)
        loaded = []
        for path in self._segments(table_name):
            header, rows = self._read_segment(path)
            loaded.append((header["seq"], rows))
        loaded.sort(key=lambda item: item[0])
        merged: dict[tuple, dict] = {}
        for _, rows in loaded:
            for row in rows:
                merged[schema.key_of(row)] = row
        return [merged[k] for k in sorted(merged)]

    def count(self, table_name: str) -> int:
        return len(self.scan(table_name))

    def physical_count(self, table_name: str) -> int:
        total = 0
        for path in self._segments(table_name):
            _, rows = self._read_segment(path)
            total += len(rows)
        return total

    def table_names(self) -> list[str]:
        return sorted(
            p.name for p in self.root.iterdir()
            if p.is_dir() and p.name in schemas.REGISTRY
        )

    # -- optimize

    def optimize(self, table_name: str) -> None:
        """Collapse duplicate-key versions into a single consolidated
        segment; idempotent, no-op on an empty table."""
        rows = self.scan(table_name)
        paths = self._segments(table_name)
        if not rows or len(paths) <= 1 and len(rows) == self.physical_count(table_name):
            return
        nums = [r["blockNum"] for r in rows]
        schema = schemas.get(table_name)
        table_dir = self.root / table_name
        seq = self._next_seq(table_dir)
        payload = self._encode_segment(schema, rows, min(nums), max(nums), seq)
        tmp = table_dir / f".tmp-opt-{os.getpid()}"
        tmp.write_bytes(payload)
        for path in paths:
            path.unlink()
        os.replace(tmp, table_dir / f"{min(nums)}-{max(nums)}.rows")

    def optimize_all(self) -> None:
        for table in self.table_names():
            self.optimize(table)

    # -- checkpoints

    def _checkpoint_path(self, table_group: str) -> Path:
        return self.root / self.CHECKPOINT_DIR / f"{table_group}.json"

    def checkpoint_read(self, table_group: str) -> Checkpoint | None:
        path = self._checkpoint_path(table_group)
        if not path.exists():
            return None
        doc = json.loads(path.read_text())
        return Checkpoint(doc["tableGroup"], doc["lastLoadedBlock"], doc["updatedAt"])

    def checkpoint_advance(self, table_group: str, block: int) -> Checkpoint:
        """Monotonic: advancing to a lower block is a no-op."""
        current = self.checkpoint_read(table_group)
        if current is not None and block <= current.last_loaded_block:
            return current
        ckpt = Checkpoint(table_group, block, int(time.time() * 1000))
        path = self._checkpoint_path(table_group)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({
            "tableGroup": ckpt.table_group,
            "lastLoadedBlock": ckpt.last_loaded_block,
            "updatedAt": ckpt.updated_at,
        }))
        os.replace(tmp, path)
        return ckpt


# ---------------------------------------------------------------------------
# ClickHouse over HTTP (the pluggable dialect adapter)

class ClickHouseSink:
    """Thin adapter speaking ClickHouse's HTTP interface.

    Inserts use JSONEachRow; optimize maps to OPTIMIZE TABLE ... FINAL on
    the ReplacingMergeTree tables emitted by ``ddl_for(..., "clickhouse")``.
    """

    def __init__(self, url: str, timeout: float = 30.0):
        self.url = url.rstrip("/")
        self.timeout = timeout

    def _post(self, query: str, body: bytes = b"") -> bytes:
        data = body if body else query.encode("utf-8")
        target = self.url
        if body:
            from urllib.parse import quote
            target = f"{self.url}/?query={quote(query)}"
        req = urllib.request.Request(target, data=data, method="POST")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return resp.read()
        except (urllib.error.URLError, OSError) as exc:
            raise StoreUnavailable(f"clickhouse at {self.url}: {exc}") from exc

    def create_tables(self) -> None:
        for name in schemas.REGISTRY:
            self._post(ddl_for(name, "clickhouse"))

    def insert_batch(self, table_name: str, rows: list[dict],
                     block_range=None) -> int:
        if table_name not in schemas.REGISTRY:
            raise UnknownTable(table_name)
        _validate_rows(schemas.get(table_name), rows)
        if not rows:
            return 0
        body = "\n".join(json.dumps(r, separators=(",", ":")) for r in rows)
        self._post(f"INSERT INTO `{table_name}` FORMAT JSONEachRow",
                   body.encode("utf-8"))
        return len(rows)

    def optimize(self, table_name: str) -> None:
        self._post(f"OPTIMIZE TABLE `{table_name}` FINAL")

    def count(self, table_name: str) -> int:
        out = self._post(f"SELECT count() FROM `{table_name}` FINAL")
        return int(out.strip() or 0)

    def checkpoint_read(self, table_group: str):
        raise NotImplementedError(
            "checkpoints for a ClickHouse sink live next to the run config; "
            "use LocalSink for checkpointed offline runs")

    checkpoint_advance = checkpoint_read


def open_sink(target: str):
    """dir path -> LocalSink; http(s) URL -> ClickHouseSink."""
    if target.startswith("http://") or target.startswith("https://"):
        return ClickHouseSink(target)
    return LocalSink(target)
