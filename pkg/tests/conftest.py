import numpy as np
import pytest

from graphoid import CiOracle, JointTable, Universe, xor_table


@pytest.fixture(scope="session")
def xor():
    return xor_table()


@pytest.fixture(scope="session")
def xor_oracle(xor):
    return CiOracle(xor)


def two_block_table():
    """Product of a dependent (x, w) pair and a dependent (y, v) pair."""
    block_a = JointTable(
        Universe.binary("x", "w"), np.array([[0.4, 0.1], [0.1, 0.4]])
    )
    block_b = JointTable(
        Universe.binary("y", "v"), np.array([[0.35, 0.15], [0.05, 0.45]])
    )
    from graphoid import product_table

    return product_table(block_a, block_b)


@pytest.fixture(scope="session")
def blocks_table():
    return two_block_table()
