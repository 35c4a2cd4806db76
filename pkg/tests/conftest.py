import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from scattermesh.metrics import ContingencyTable


def make_table(counts) -> ContingencyTable:
    counts = np.asarray(counts, dtype=np.int64)
    return ContingencyTable(
        counts=counts,
        class_labels=tuple(f"class{i}" for i in range(counts.shape[0])),
        cluster_labels=tuple(str(j) for j in range(counts.shape[1])),
    )


# Reference matching matrix with known scores: four classes by four clusters.
REFERENCE_MATRIX = np.array(
    [
        [1597, 0, 822, 12],
        [36, 17, 6242, 2220],
        [0, 3, 478, 843],
        [0, 878, 704, 44],
    ],
    dtype=np.int64,
)


@pytest.fixture
def reference_table() -> ContingencyTable:
    return make_table(REFERENCE_MATRIX)


@pytest.fixture(scope="session")
def planted():
    from scattermesh.datasets import make_planted_corpus

    return make_planted_corpus(n_docs=400, n_topics=4, seed=7, layered=False)


@pytest.fixture(scope="session")
def planted_layered():
    from scattermesh.datasets import make_planted_corpus

    return make_planted_corpus(n_docs=400, n_topics=4, seed=7, layered=True)
