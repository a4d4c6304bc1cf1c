"""Suite-wide setup: single-threaded torch and a calm hypothesis profile."""

import numpy as np
import pytest
import torch
from hypothesis import settings

torch.set_num_threads(1)

settings.register_profile("suite", deadline=None, max_examples=40)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)
