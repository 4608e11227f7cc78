"""Command-line interface.

Exit codes: 0 success, 1 config error, 2 source error, 3 sink error,
4 verification diff non-empty.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click

from . import client, fixtures, pipeline, schemas, sink as sinkmod, stats as statsmod
from .pipeline import ConfigError, RunConfig

EXIT_CONFIG = 1
EXIT_SOURCE = 2
EXIT_SINK = 3
EXIT_VERIFY_DIFF = 4

_SOURCE_ERRORS = (client.NotFound, client.Transport, client.StreamError,
                  client.SourceClosed, client.PartialArchive, FileNotFoundError)
_SINK_ERRORS = (sinkmod.StoreUnavailable, sinkmod.SchemaMismatch,
                sinkmod.UnknownTable, sinkmod.UnknownDialect)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ConfigError, ValueError, FileExistsError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except _SOURCE_ERRORS as exc:
        click.echo(f"source error: {exc}", err=True)
        sys.exit(EXIT_SOURCE)
    except _SINK_ERRORS as exc:
        click.echo(f"sink error: {exc}", err=True)
        sys.exit(EXIT_SINK)


@click.group()
def main():
    """TRON blockchain ETL and on-chain statistics."""


# ---------------------------------------------------------------------- etl

@main.group()
def etl():
    """Extract-transform-load runs."""


@etl.command("run")
@click.option("--source", required=True, help="node URL (grpc://...) or fixture directory")
@click.option("--sink", "sink_target", required=True, help="store URL or local directory")
@click.option("--from", "from_block", type=int, required=True)
@click.option("--to", "to_block", type=int, required=True)
@click.option("--batch", type=int, default=1000, show_default=True)
@click.option("--window", type=int, default=8, show_default=True)
@click.option("--record", "record_to", default=None, help="tee raw messages into this directory")
def etl_run(source, sink_target, from_block, to_block, batch, window, record_to):
    """Load a block range."""
    config = RunConfig(source=source, sink=sink_target,
                       from_block=from_block, to_block=to_block,
                       batch_blocks=batch, window=window, record_to=record_to)
    report = _guard(pipeline.run, config)
    click.echo(json.dumps(report.to_json(), indent=1))


@etl.command("follow")
@click.option("--source", required=True)
@click.option("--sink", "sink_target", required=True)
@click.option("--lag", type=int, default=20, show_default=True)
@click.option("--batch", type=int, default=1000, show_default=True)
@click.option("--cycles", type=int, default=None, help="stop after N polls (default: forever)")
def etl_follow(source, sink_target, lag, batch, cycles):
    """Trail the chain head, loading blocks as they finalize."""
    config = RunConfig(source=source, sink=sink_target, batch_blocks=batch)
    _guard(pipeline.follow, config, lag=lag, max_cycles=cycles)


@etl.command("verify")
@click.option("--source", required=True)
@click.option("--sink", "sink_target", required=True)
@click.option("--from", "from_block", type=int, required=True)
@click.option("--to", "to_block", type=int, required=True)
def etl_verify(source, sink_target, from_block, to_block):
    """Re-extract a range and diff expected row counts against the sink."""
    config = RunConfig(source=source, sink=sink_target,
                       from_block=from_block, to_block=to_block)
    diffs = _guard(pipeline.verify, config)
    if not diffs:
        click.echo("verify: ok")
        return
    for d in diffs:
        click.echo(f"DIFF {d.table}: expected {d.expected}, sink has {d.actual}")
    sys.exit(EXIT_VERIFY_DIFF)


# ------------------------------------------------------------------- schema

@main.group()
def schema():
    """Table schema tooling."""


@schema.command("emit")
@click.option("--table", "table_name", default="all", show_default=True)
@click.option("--dialect", type=click.Choice(["generic", "clickhouse"]),
              default="generic", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["ddl", "manifest"]),
              default="ddl", show_default=True,
              help="DDL text or the JSON schema manifest used by toolkits")
@click.option("--output", type=click.Path(), default=None)
def schema_emit(table_name, dialect, fmt, output):
    if fmt == "manifest":
        text = json.dumps(schemas.manifest(), indent=1)
    else:
        names = sorted(schemas.REGISTRY) if table_name == "all" else [table_name]
        text = _guard(lambda: "\n\n".join(sinkmod.ddl_for(n, dialect) for n in names))
    if output:
        Path(output).write_text(text + "\n")
    else:
        click.echo(text)


# ----------------------------------------------------------------- fixtures

@main.group("fixtures")
def fixtures_group():
    """Fixture archives: generate, record, replay."""


@fixtures_group.command("generate")
@click.option("--dir", "directory", required=True, type=click.Path())
@click.option("--blocks", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--witnesses", type=int, default=4, show_default=True)
@click.option("--mode", type=click.Choice(["mixed", "all-types"]),
              default="mixed", show_default=True)
def fixtures_generate(directory, blocks, seed, witnesses, mode):
    """Generate a synthetic chain with a ground-truth manifest."""
    truth = _guard(fixtures.generate, directory, blocks=blocks, seed=seed,
                   witnesses=witnesses, mode=mode)
    click.echo(json.dumps({
        "blocks": truth.blocks,
        "transactions": truth.transactions,
        "events": truth.events,
        "internals": truth.internals,
    }, indent=1))


@fixtures_group.command("record")
@click.option("--source", required=True)
@click.option("--from", "from_block", type=int, required=True)
@click.option("--to", "to_block", type=int, required=True)
@click.option("--dir", "directory", required=True, type=click.Path())
def fixtures_record(source, from_block, to_block, directory):
    """Record node responses for a range into an archive."""
    src = _guard(client.open_source, source)
    _guard(client.record, src, from_block, to_block, directory)
    click.echo(f"recorded [{from_block}, {to_block}] into {directory}")


@fixtures_group.command("replay")
@click.option("--dir", "directory", required=True, type=click.Path(exists=True))
def fixtures_replay(directory):
    """Replay an archive and print per-height byte digests."""
    import hashlib

    archive = _guard(client.FixtureArchive, directory)
    for height in range(archive.start, archive.end + 1):
        block = archive.read_block(height)
        info = archive.read_info(height)
        digest = hashlib.sha256(block + info).hexdigest()[:16]
        click.echo(f"{height}\t{len(block)}\t{len(info)}\t{digest}")


# -------------------------------------------------------------------- stats

@main.command("stats")
@click.argument("name")
@click.option("--sink", "sink_target", required=True)
@click.option("--top", type=int, default=statsmod.DEFAULT_TOP, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--address", default=None, help="contract address (hex or base58)")
@click.option("--by", type=click.Choice(["count", "amount"]), default="count",
              show_default=True)
@click.option("--output", type=click.Path(), default=None)
@click.option("--figures", "figures_dir", type=click.Path(), default=None,
              help="also render a bar chart PNG into this directory")
def stats_cmd(name, sink_target, top, fmt, address, by, output, figures_dir):
    """Compute a named aggregate over the loaded tables."""
    store = _guard(sinkmod.open_sink, sink_target)
    try:
        columns, rows = statsmod.compute(name, store, top=top,
                                         address=address, by=by)
    except statsmod.UnknownStat:
        click.echo(f"config error: unknown stat {name!r}; "
                   f"known: {', '.join(sorted(statsmod.STATS))}", err=True)
        sys.exit(EXIT_CONFIG)
    except statsmod.EmptyRange as exc:
        click.echo(f"sink error: {exc}", err=True)
        sys.exit(EXIT_SINK)

    if fmt == "json":
        text = json.dumps(rows, indent=1)
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text, nl=not text.endswith("\n"))

    if figures_dir:
        from . import figures

        path = figures.render_bar_chart(name, columns, rows,
                                        Path(figures_dir) / f"{name}.png")
        click.echo(f"figure written to {path}", err=True)


if __name__ == "__main__":
    main()
