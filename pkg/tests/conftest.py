import pytest
from hypothesis import settings

from relpres.words import Alphabet

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def two_vars():
    return Alphabet(("g", "h"), ("x", "y"))


@pytest.fixture
def one_var():
    return Alphabet(("g", "h", "k"), ("t",))
