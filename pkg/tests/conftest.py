import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for the oracles module

from importlib import resources


@pytest.fixture(scope="session")
def reference_dir():
    return resources.files("qmeta").joinpath("data/reference")


@pytest.fixture(scope="session")
def spin_half_setup_text(reference_dir):
    return reference_dir.joinpath("spin_half_6.setup").read_text()


@pytest.fixture(scope="session")
def reference_code_text(reference_dir):
    def load(name):
        return reference_dir.joinpath(name).read_text()
    return load
