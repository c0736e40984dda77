from __future__ import annotations

import numpy as np
import pytest

from hmcbench import make_two_level_gaussians


@pytest.fixture(scope="session")
def two_level_dataset():
    """The planted two-level synthetic: 4 super-clusters x 4 classes."""
    return make_two_level_gaussians(rows_per_class=70, seed=11)


@pytest.fixture(scope="session")
def blob_dataset():
    """4 well separated Gaussian blobs, 2-D."""
    rng = np.random.default_rng(7)
    centers = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0], [10.0, 10.0]])
    X = np.concatenate([c + rng.normal(size=(60, 2)) for c in centers])
    y = np.repeat(np.arange(4), 60)
    from hmcbench import from_arrays
    return from_arrays(X, y, ["a", "b", "c", "d"], name="blobs")
