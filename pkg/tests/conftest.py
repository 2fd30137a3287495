import numpy as np
import pytest

from yamabe.complex import FacetList
from yamabe.complex import build_complex
from yamabe.complex import load_builtin


@pytest.fixture
def five_cell():
    return build_complex(load_builtin("5cell"))


@pytest.fixture
def cyclic9():
    return build_complex(load_builtin("cyclic9"))


@pytest.fixture
def single_tet():
    return build_complex(FacetList(4, ((1, 2, 3, 4),)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def s2xs1():
    return build_complex(load_builtin("s2xs1"))
