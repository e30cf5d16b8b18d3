import numpy as np
import pytest

from dressedsps.phonons import PhononParams


def rel_err(value, reference):
    return abs(value - reference) / abs(reference)


@pytest.fixture(scope="session")
def bath_set1():
    return PhononParams.from_preset("I")


@pytest.fixture(scope="session")
def bath_set2():
    return PhononParams.from_preset("II")


@pytest.fixture(scope="session")
def bath_set3():
    return PhononParams.from_preset("III")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
