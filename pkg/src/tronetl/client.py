"""Node client: fetch raw block / transaction-info messages.

Sources implement ``get_head`` / ``fetch_block`` / ``fetch_info``. The
fixture source replays recorded archives byte-exactly; the gRPC source
(optional, needs grpcio) talks to a wallet node. ``RetryingSource`` adds
exponential backoff for transport errors, and ``stream_range`` delivers a
windowed, strictly ordered height range.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .messages import RawBlockMessage, RawInfoMessage
from .fixtures import MANIFEST_FILE
from .wire import Writer


class NotFound(LookupError):
    pass


class Transport(IOError):
    pass


class SourceClosed(RuntimeError):
    pass


class PartialArchive(RuntimeError):
    pass


class StreamError(RuntimeError):
    """Fetch failure tagged with the height it happened at; everything below
    this height was already delivered, so consumers can resume."""

    def __init__(self, height: int, cause: Exception):
        super().__init__(f"height {height}: {cause}")
        self.height = height
        self.cause = cause


class FixtureArchive:
    """On-disk recording of node responses, one file pair per height.

    A missing manifest means the recording was interrupted and the archive
    must not be trusted."""

    def __init__(self, directory):
        self.directory = Path(directory)
        manifest_path = self.directory / MANIFEST_FILE
        if not manifest_path.exists():
            raise PartialArchive(
                f"{self.directory}: no manifest; archive incomplete or not an archive")
        self.manifest = json.loads(manifest_path.read_text())

    @property
    def start(self) -> int:
        return self.manifest["start"]

    @property
    def end(self) -> int:
        return self.manifest["end"]

    def _read(self, prefix: str, height: int) -> bytes:
        if not self.start <= height <= self.end:
            raise NotFound(f"height {height} outside archive range "
                           f"[{self.start}, {self.end}]")
        return (self.directory / f"{prefix}-{height}.bin").read_bytes()

    def read_block(self, height: int) -> bytes:
        return self._read("block", height)

    def read_info(self, height: int) -> bytes:
        return self._read("info", height)


class FixtureSource:
    """Replays a fixture archive as if it were a live node."""

    def __init__(self, directory):
        self.archive = FixtureArchive(directory)
        self._closed = False

    def get_head(self) -> int:
        return self.archive.end

    def fetch_block(self, height: int) -> RawBlockMessage:
        self._check_open()
        return RawBlockMessage(height, self.archive.read_block(height))

    def fetch_info(self, height: int) -> RawInfoMessage:
        self._check_open()
        return RawInfoMessage(height, self.archive.read_info(height))

    def _check_open(self):
        if self._closed:
            raise SourceClosed("fixture source is closed")

    def close(self):
        self._closed = True


class GrpcEndpointSource:
    """Wallet-node gRPC source (block-by-number + info-by-number calls).

    Requires grpcio, which is an optional dependency; construction fails
    with a clear message when it is missing. Messages pass through as raw
    bytes, so no generated stubs are needed."""

    BLOCK_METHOD = "/protocol.Wallet/GetBlockByNum2"
    INFO_METHOD = "/protocol.Wallet/GetTransactionInfoByBlockNum"

    def __init__(self, endpoint: str):
        try:
            import grpc
        except ImportError as exc:
            raise RuntimeError(
                "grpcio is not installed; install tronetl with gRPC support "
                "or use a fixture directory source") from exc
        self._grpc = grpc
        self.channel = grpc.insecure_channel(endpoint.removeprefix("grpc://"))
        identity = lambda b: b
        self._get_block = self.channel.unary_unary(
            self.BLOCK_METHOD, request_serializer=identity,
            response_deserializer=identity)
        self._get_info = self.channel.unary_unary(
            self.INFO_METHOD, request_serializer=identity,
            response_deserializer=identity)

    @staticmethod
    def _number_message(height: int) -> bytes:
        return Writer().uint(1, height).finish()

    def _call(self, method, height: int) -> bytes:
        grpc = self._grpc
        try:
            return method(self._number_message(height))
        except grpc.RpcError as exc:
            if exc.code() == grpc.StatusCode.NOT_FOUND:
                raise NotFound(f"height {height}") from exc
            raise Transport(str(exc)) from exc

    def get_head(self) -> int:
        # probe upward is wasteful; callers normally know their range.
        raise NotImplementedError("head discovery requires a range-aware caller")

    def fetch_block(self, height: int) -> RawBlockMessage:
        return RawBlockMessage(height, self._call(self._get_block, height))

    def fetch_info(self, height: int) -> RawInfoMessage:
        return RawInfoMessage(height, self._call(self._get_info, height))

    def close(self):
        self.channel.close()


class RetryingSource:
    """Exponential backoff on transport errors: 200 ms base, doubling, at
    most ``attempts`` tries. NotFound is terminal and never retried. The
    head height is cached for 3 s to bound probe traffic."""

    HEAD_TTL = 3.0

    def __init__(self, source, attempts: int = 5, base_delay: float = 0.2,
                 sleep=time.sleep, clock=time.monotonic):
        self.source = source
        self.attempts = attempts
        self.base_delay = base_delay
        self._sleep = sleep
        self._clock = clock
        self.last_retries = 0
        self._head_cache: tuple[float, int] | None = None

    def _with_retry(self, fn, *args):
        delay = self.base_delay
        self.last_retries = 0
        for attempt in range(self.attempts):
            try:
                return fn(*args)
            except Transport:
                if attempt == self.attempts - 1:
                    raise
                self._sleep(delay)
                delay *= 2
                self.last_retries += 1

    def get_head(self) -> int:
        now = self._clock()
        if self._head_cache and now - self._head_cache[0] < self.HEAD_TTL:
            return self._head_cache[1]
        head = self._with_retry(self.source.get_head)
        self._head_cache = (now, head)
        return head

    def fetch_block(self, height: int) -> RawBlockMessage:
        return self._with_retry(self.source.fetch_block, height)

    def fetch_info(self, height: int) -> RawInfoMessage:
        return self._with_retry(self.source.fetch_info, height)

    def close(self):
        self.source.close()


def stream_range(source, start: int, end: int, window: int = 8):
    """Yield (RawBlockMessage, RawInfoMessage) for every height in
    [start, end], ascending, with at most ``window`` fetches in flight.

    A failed fetch surfaces as StreamError tagged with its height, after
    all lower heights have been delivered."""
    if start > end:
        raise ValueError(f"start {start} > end {end}")
    if window < 1:
        raise ValueError("window must be >= 1")

    def fetch(height: int):
        return source.fetch_block(height), source.fetch_info(height)

    heights = range(start, end + 1)
    with ThreadPoolExecutor(max_workers=window) as pool:
        pending = {}
        it = iter(heights)
        for height in it:
            pending[height] = pool.submit(fetch, height)
            if len(pending) >= window:
                break
        next_height = start
        while pending:
            future = pending.pop(next_height)
            try:
                pair = future.result()
            except Exception as exc:  # tagged and re-raised; pool drains
                for f in pending.values():
                    f.cancel()
                raise StreamError(next_height, exc) from exc
            for height in it:
                pending[height] = pool.submit(fetch, height)
                break
            yield pair
            next_height += 1


def record(source, start: int, end: int, directory) -> FixtureArchive:
    """Record a range into a fresh fixture archive. The manifest is written
    last, so an interrupted recording is detectable (PartialArchive)."""
    directory = Path(directory)
    if directory.exists() and any(directory.iterdir()):
        raise FileExistsError(f"{directory} is not empty")
    directory.mkdir(parents=True, exist_ok=True)
    for block, info in stream_range(source, start, end):
        (directory / f"block-{block.height}.bin").write_bytes(block.data)
        (directory / f"info-{info.height}.bin").write_bytes(info.data)
    endpoint = getattr(source, "endpoint", source.__class__.__name__)
    (directory / MANIFEST_FILE).write_text(json.dumps({
        "start": start,
        "end": end,
        "endpoint": endpoint,
        "recordedAt": int(time.time() * 1000),
    }))
    return FixtureArchive(directory)


def open_source(target: str):
    """grpc:// URL -> gRPC source with retry; anything else -> fixture dir."""
    if target.startswith("grpc://"):
        return RetryingSource(GrpcEndpointSource(target))
    return FixtureSource(target)
