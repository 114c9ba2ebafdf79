import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from scan_nacs import corpus, semantics


@pytest.fixture(scope="session")
def universe():
    return corpus.build_universe()


@pytest.fixture(scope="session")
def inverse_index():
    return semantics.build_inverse_index()
