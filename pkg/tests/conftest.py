import pytest

from sample_space import demo_space


@pytest.fixture
def space():
    return demo_space()
