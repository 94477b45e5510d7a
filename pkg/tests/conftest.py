import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from manifoldkit.dataset import EmbeddingMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def matrix_from(values) -> EmbeddingMatrix:
    values = np.asarray(values, dtype=float)
    return EmbeddingMatrix(values=values,
                           sample_ids=tuple(str(i) for i in range(values.shape[0])))
