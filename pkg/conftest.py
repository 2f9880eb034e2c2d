import pytest

from ucycles.core.module import make_class


@pytest.fixture
def de_bruijn_class():
    """All binary words of length 3, shown as 0/1."""
    return make_class("all_words", 3, 2, symbols="01")


@pytest.fixture
def noninjective_class():
    return make_class("noninjective", 3, 3)
