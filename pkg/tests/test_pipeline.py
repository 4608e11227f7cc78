import os

import pytest

from tronetl import fixtures, pipeline
from tronetl.pipeline import CHECKPOINT_GROUP, ConfigError, RunConfig
from tronetl.sink import LocalSink


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig("s", "k", from_block=5, to_block=1).validate()
    with pytest.raises(ConfigError):
        RunConfig("s", "k", to_block=1, batch_blocks=0).validate()
    with pytest.raises(ConfigError):
        RunConfig("s", "k", to_block=1, window=0).validate()


def test_run_counts_match_ground_truth(loaded_small_chain):
    sink, truth, report = loaded_small_chain
    assert report.blocks_processed == 100
    assert report.fallback_decode_count == 0
    assert sink.count("blocks") == truth.blocks
    assert sink.count("transactions") == truth.transactions
    assert sink.count("events") == truth.events
    assert sink.count("internals") == truth.internals
    for table, expected in truth.per_table.items():
        if expected:
            assert sink.count(table) == expected, table


def test_run_batches_commit_incrementally(small_chain, tmp_path):
    directory, _ = small_chain
    commits = []
    pipeline.run(
        RunConfig(source=str(directory), sink=str(tmp_path),
                  from_block=0, to_block=99, batch_blocks=25),
        on_batch_committed=lambda i, last: commits.append((i, last)))
    assert commits == [(1, 24), (2, 49), (3, 74), (4, 99)]


def test_rerun_is_idempotent(small_chain, tmp_path):
    directory, truth = small_chain
    config = RunConfig(source=str(directory), sink=str(tmp_path),
                       from_block=0, to_block=99, batch_blocks=25)
    pipeline.run(config)
    sink = LocalSink(tmp_path)
    # a lost checkpoint models a crash between commit and advance: the rerun
    # replays everything, and the replace-by-key sink absorbs the duplicates
    os.unlink(tmp_path / "_checkpoints" / f"{CHECKPOINT_GROUP}.json")
    pipeline.run(RunConfig(source=str(directory), sink=str(tmp_path),
                           from_block=0, to_block=99, batch_blocks=20))
    assert sink.count("blocks") == truth.blocks
    assert sink.count("transactions") == truth.transactions
    assert sink.count("events") == truth.events
    assert sink.physical_count("transactions") == 2 * truth.transactions


@pytest.mark.parametrize("kill_after", [1, 2, 3])
def test_kill_and_resume(small_chain, tmp_path, kill_after):
    directory, truth = small_chain
    sink_dir = tmp_path / f"kill{kill_after}"
    config = RunConfig(source=str(directory), sink=str(sink_dir),
                       from_block=0, to_block=99, batch_blocks=25)

    class Killed(RuntimeError):
        pass

    def kill(index, last_block):
        if index == kill_after:
            raise Killed(f"after batch {index}")

    with pytest.raises(Killed):
        pipeline.run(config, on_batch_committed=kill)
    sink = LocalSink(sink_dir)
    ckpt = sink.checkpoint_read(CHECKPOINT_GROUP)
    assert ckpt.last_loaded_block == kill_after * 25 - 1

    report = pipeline.run(config)
    assert report.resumed_from == kill_after * 25 - 1
    assert report.blocks_processed == 100 - kill_after * 25
    assert sink.count("blocks") == truth.blocks
    assert sink.count("transactions") == truth.transactions
    assert sink.count("events") == truth.events
    assert sink.count("internals") == truth.internals


def test_resume_with_nothing_left_to_do(small_chain, tmp_path):
    directory, _ = small_chain
    config = RunConfig(source=str(directory), sink=str(tmp_path),
                       from_block=0, to_block=99, batch_blocks=50)
    pipeline.run(config)
    report = pipeline.run(config)
    assert report.blocks_processed == 0
    assert report.resumed_from == 99


def test_verify_clean_sink_passes(loaded_small_chain, small_chain):
    sink, _, _ = loaded_small_chain
    directory, _ = small_chain
    diffs = pipeline.verify(RunConfig(
        source=str(directory), sink=sink, from_block=0, to_block=99))
    assert diffs == []


def test_verify_detects_missing_rows(small_chain, tmp_path):
    directory, _ = small_chain
    config = RunConfig(source=str(directory), sink=str(tmp_path),
                       from_block=0, to_block=99, batch_blocks=25)
    pipeline.run(config)
    # corrupt the store: drop one events segment
    victim = next((tmp_path / "events").glob("*.rows"))
    victim.unlink()
    diffs = pipeline.verify(config)
    assert len(diffs) == 1
    assert diffs[0].table == "events"
    assert diffs[0].actual < diffs[0].expected


def test_verify_unloaded_sink_reports_every_table(small_chain, tmp_path):
    directory, truth = small_chain
    diffs = pipeline.verify(RunConfig(
        source=str(directory), sink=str(tmp_path), from_block=0, to_block=99))
    tables = {d.table for d in diffs}
    assert {"blocks", "transactions", "events", "internals"} <= tables
    by_table = {d.table: d for d in diffs}
    assert by_table["blocks"].expected == truth.blocks
    assert all(d.actual == 0 for d in diffs)


def test_record_during_run_produces_replayable_archive(small_chain, tmp_path):
    directory, _ = small_chain
    copy_dir = tmp_path / "recording"
    pipeline.run(RunConfig(
        source=str(directory), sink=str(tmp_path / "sink"),
        from_block=0, to_block=20, batch_blocks=10, record_to=str(copy_dir)))
    from tronetl.client import FixtureArchive
    archive = FixtureArchive(copy_dir)
    for height in range(21):
        assert archive.read_block(height) == \
            (directory / f"block-{height}.bin").read_bytes()


def test_follow_trails_head_by_lag(small_chain, tmp_path):
    directory, _ = small_chain
    config = RunConfig(source=str(directory), sink=str(tmp_path), batch_blocks=50)
    pipeline.follow(config, lag=20, max_cycles=2, sleep=lambda _: None)
    sink = LocalSink(tmp_path)
    # head is 99, so follow loads through 79
    assert sink.checkpoint_read(CHECKPOINT_GROUP).last_loaded_block == 79
    assert sink.count("blocks") == 80
