import math

import pytest

from isocauchy.specfun import available_backends

XI = math.sqrt(2.0)


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    """Each available special-function backend module in turn."""
    return available_backends()[request.param]


@pytest.fixture(autouse=True)
def mp_precision():
    """mpmath oracles run at 30 digits; the global context is restored afterwards."""
    import mpmath

    with mpmath.workdps(30):
        yield
