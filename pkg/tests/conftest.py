import pytest

from gaussver import kernels


@pytest.fixture(scope="session", autouse=True)
def _compiled():
    # pay the JIT cost once, outside any timed test
    kernels.warmup("numba")


@pytest.fixture(params=kernels.BACKENDS)
def backend(request):
    return request.param
