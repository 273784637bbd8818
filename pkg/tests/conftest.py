import time

import pytest

from earconkit import GridDefinition, build_corpus
from earconkit.corpus import read_metadata


class GeneratedCorpus:
    def __init__(self, root, manifest, elapsed_s):
        self.root = root
        self.audio_dir = root / "audio"
        self.meta_path = root / "metadata" / "metadata.csv"
        self.manifest_path = root / "metadata" / "manifest.json"
        self.manifest = manifest
        self.elapsed_s = elapsed_s

    @property
    def rows(self):
        return read_metadata(self.meta_path)


def _generate(root, target_n=400, seed=13):
    t0 = time.monotonic()
    manifest = build_corpus(
        GridDefinition(), target_n, seed, root / "audio", root / "metadata" / "metadata.csv"
    )
    return GeneratedCorpus(root, manifest, time.monotonic() - t0)


@pytest.fixture(scope="session")
def corpus400(tmp_path_factory):
    """The release-shaped corpus: 400 clips, seed 13. Built once per session."""
    return _generate(tmp_path_factory.mktemp("corpus400"))


@pytest.fixture(scope="session")
def corpus_small(tmp_path_factory):
    """A 40-clip corpus for cheap schema/IO assertions."""
    return _generate(tmp_path_factory.mktemp("corpus_small"), target_n=40)


@pytest.fixture(scope="session")
def generate_corpus():
    """Factory for tests that need a corpus in a directory they control."""
    return _generate
