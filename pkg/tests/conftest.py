import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from asailab.acceptance import _bc_form, _field  # shared caches with the suite


@pytest.fixture(scope="session")
def field5():
    return _field(5)


@pytest.fixture(scope="session")
def bc_form_500():
    """Base change of the discriminant form over Q(sqrt 5), data to norm 500."""
    return _bc_form(500)


@pytest.fixture(scope="session")
def bc_form_4000():
    return _bc_form(4000)
