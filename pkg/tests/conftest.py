import os

import hypothesis
import numpy as np
import pytest

from src.partitions import IntPartition

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=25, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=500, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))


def P(*parts: int) -> IntPartition:
    return IntPartition(parts)


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    """An empty cache directory, also exported through the environment."""
    path = tmp_path / "cache"
    monkeypatch.setenv("PMSCHEME_CACHE", str(path))
    return path


@pytest.fixture(scope="session")
def table4():
    from src.chartable import assemble_full_table

    return assemble_full_table(4)
