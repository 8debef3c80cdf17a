from pathlib import Path

import pytest

from synth import make_corpus


@pytest.fixture
def corpus(tmp_path) -> Path:
    return make_corpus(tmp_path / "data")
