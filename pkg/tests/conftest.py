import math

import pytest
from hypothesis import settings

from lambda_memory.kernel import build_table
from lambda_memory.params import DimensionlessConfig
from lambda_memory.writing import solve_write

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

OP_L = 10.3
OP_TW = 4.2


@pytest.fixture(scope="session")
def op_config():
    """Operating point with a read window of ten writing windows."""
    return DimensionlessConfig(L_tilde=OP_L, Tw_tilde=OP_TW, Tr_tilde=10 * OP_TW)


@pytest.fixture(scope="session")
def op_table(op_config):
    return build_table(op_config)


@pytest.fixture(scope="session")
def op_write(op_table, op_config):
    return solve_write(op_table, op_config.with_(Tr_tilde=OP_TW))


@pytest.fixture(scope="session")
def deep_write():
    cfg = DimensionlessConfig(L_tilde=20.0, Tw_tilde=4 * math.pi)
    return solve_write(build_table(cfg), cfg)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
