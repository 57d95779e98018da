import pytest

from compressdep.compressor import calibrate_overhead

CAL_LENGTHS = [100, 1_000, 3_000, 10_000, 30_000, 100_000, 300_000, 1_000_000]


@pytest.fixture(scope="session")
def table():
    return calibrate_overhead(CAL_LENGTHS, reps=20, seed=20130228)


@pytest.fixture(scope="session")
def small_table():
    return calibrate_overhead([100, 1_000, 10_000], reps=5, seed=7)

