import pytest

from equikit import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the selected kernels once so timed tests measure the
    # algorithm, not the JIT
    kernels.warmup()
