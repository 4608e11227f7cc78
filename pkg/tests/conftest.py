import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tronetl import fixtures, pipeline
from tronetl.sink import LocalSink


@pytest.fixture(scope="session")
def small_chain(tmp_path_factory):
    """100-block round-robin chain (4 witnesses) with ground truth."""
    directory = tmp_path_factory.mktemp("chain100")
    truth = fixtures.generate(directory, blocks=100, seed=11, witnesses=4)
    return directory, truth


@pytest.fixture(scope="session")
def loaded_small_chain(small_chain, tmp_path_factory):
    directory, truth = small_chain
    sink_dir = tmp_path_factory.mktemp("sink100")
    report = pipeline.run(pipeline.RunConfig(
        source=str(directory), sink=str(sink_dir),
        from_block=0, to_block=99, batch_blocks=25))
    return LocalSink(sink_dir), truth, report
