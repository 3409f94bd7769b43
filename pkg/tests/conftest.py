import pytest

from qmean import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT compilation (when active) happens here, outside timed sections
    _kernels.warmup()
