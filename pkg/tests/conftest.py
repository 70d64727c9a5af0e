import pytest

from dual_cube_toolkit import DualCube, DualCubeClient, Hypercube

# Centralized test values for all dual cube toolkit tests

test_vars = {
    "small_n": 3,
    "tree_n": 4,
    "cross_class0_fixed": "10",
    "cross_class1_fixed": "01",
    "cross_edge": ("01100", "01101"),
    "d3_census_r2": (1, 1, 26),
    "cut_sizes": {(3, 1): 3, (3, 2): 4, (4, 2): 6, (4, 3): 7},
    "four_terminals": ("0000000", "0000001", "0000010", "1111111"),
    "three_terminals": ("0000000", "0010100", "1111111"),
    "seed": 7,
}


@pytest.fixture
def small_n():
    return test_vars["small_n"]


@pytest.fixture
def tree_n():
    return test_vars["tree_n"]


@pytest.fixture
def seed():
    return test_vars["seed"]


@pytest.fixture
def d2():
    return DualCube(2)


@pytest.fixture
def d3():
    return DualCube(test_vars["small_n"])


@pytest.fixture
def d4():
    return DualCube(test_vars["tree_n"])


@pytest.fixture
def d5():
    return DualCube(5)


@pytest.fixture
def q3():
    return Hypercube(3)


@pytest.fixture
def client():
    return DualCubeClient(test_vars["tree_n"])


@pytest.fixture
def four_terminals():
    return test_vars["four_terminals"]


@pytest.fixture
def three_terminals():
    return test_vars["three_terminals"]
