import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ethica.corpus import a12_counter_model, a15_counter_model


@pytest.fixture(scope="session")
def a12():
    return a12_counter_model()


@pytest.fixture(scope="session")
def a15():
    return a15_counter_model()
