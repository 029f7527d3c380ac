from pathlib import Path

import pytest
from hypothesis import strategies as st

from gridrepair.harness import GenParams, generate_random, load_instance

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def two_island():
    return load_instance(FIXTURES / "two_island.json")


@pytest.fixture(scope="session")
def fork():
    return load_instance(FIXTURES / "fork.json")


@pytest.fixture(scope="session")
def graham():
    return load_instance(FIXTURES / "graham_m3.json")


@pytest.fixture(scope="session")
def feeder123():
    return load_instance(FIXTURES / "feeder123.json")


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@st.composite
def instances(draw, min_nodes=2, max_nodes=9, zero_times=True):
    """Random generated instances; the seed is the shrink target."""
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    nodes = draw(st.integers(min_value=min_nodes, max_value=max_nodes))
    switch_probability = draw(st.sampled_from([0.0, 0.2, 0.5, 0.8, 1.0]))
    params = GenParams(
        seed=seed,
        nodes=(nodes, nodes),
        switch_probability=switch_probability,
        repair_time=(0 if zero_times else 1, 10),
    )
    return generate_random(params)
