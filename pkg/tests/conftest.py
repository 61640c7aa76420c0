import itertools

import numpy as np
import pytest

from nhsdp import Nhsdp, Pda, STAR

# The worked 4x4 example array: 2-regular (4,4,2,4).
EX4_GRID = [
    [STAR, 1, STAR, 4],
    [1, STAR, 2, STAR],
    [STAR, 2, STAR, 3],
    [4, STAR, 3, STAR],
]

# The worked (15,4,2) packing: blocks {+-1,+-2} and {+-4,+-5} mod 15.
EX15_BLOCKS = [{-1, 1, -2, 2}, {-4, 4, -5, 5}]


@pytest.fixture
def ex4_pda() -> Pda:
    return Pda(np.array(EX4_GRID, dtype=np.int64), Z=2, S=4)


@pytest.fixture
def ex15_packing() -> Nhsdp:
    return Nhsdp.from_blocks(15, EX15_BLOCKS)


def naive_verify_pda(pda: Pda) -> bool:
    """Reference checker: literal quadratic sweep of the four conditions.

    Deliberately independent of nhsdp.verify_pda so the two can be compared
    on small arrays.
    """
    grid = pda.grid
    F, K = grid.shape
    for k in range(K):
        if sum(1 for j in range(F) if grid[j, k] == STAR) != pda.Z:
            return False
    seen = set(int(s) for s in grid.ravel() if s != STAR)
    if seen != set(range(1, pda.S + 1)):
        return False
    cells = [(j, k) for j in range(F) for k in range(K) if grid[j, k] != STAR]
    for (j1, k1), (j2, k2) in itertools.combinations(cells, 2):
        if grid[j1, k1] != grid[j2, k2]:
            continue
        if j1 == j2 or k1 == k2:
            return False
        if grid[j1, k2] != STAR or grid[j2, k1] != STAR:
            return False
    return True
