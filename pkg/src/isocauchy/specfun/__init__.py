"""Special functions used throughout the package.

Lambert W on its two real branches, log-gamma, regularized incomplete gamma
and beta, and the Gaussian tail Q with its inverse. The scalar kernels come
from the compiled ``_kernels`` extension when it was built, otherwise from
the pure-Python ``_pure`` module; both expose the same functions and are
checked against each other in the test suite. ``BACKEND`` names the one in use.
"""

from ._common import Branch, SpecfunDomainError, q_function, q_inverse

try:
    from . import _kernels as _backend
except ImportError:  # extension not built
    from . import _pure as _backend

BACKEND = _backend.BACKEND

lambert_w = _backend.lambert_w
lambert_w_offset = _backend.lambert_w_offset
lambert_wm1_log = _backend.lambert_wm1_log
log_gamma = _backend.log_gamma
reg_gamma_pair = _backend.reg_gamma_pair
reg_gamma_lower = _backend.reg_gamma_lower
reg_gamma_upper = _backend.reg_gamma_upper
reg_beta_pair = _backend.reg_beta_pair
reg_beta = _backend.reg_beta


def available_backends() -> dict:
    """Map backend name to module for every backend importable here."""
    from . import _pure

    found = {"pure": _pure}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["compiled"] = _kernels
    return found


__all__ = [
    "BACKEND",
    "Branch",
    "SpecfunDomainError",
    "available_backends",
    "lambert_w",
    "lambert_w_offset",
    "lambert_wm1_log",
    "log_gamma",
    "q_function",
    "q_inverse",
    "reg_beta",
    "reg_beta_pair",
    "reg_gamma_lower",
    "reg_gamma_pair",
    "reg_gamma_upper",
]
