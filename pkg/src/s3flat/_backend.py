"""Selection between the numba-compiled kernels and the pure numpy path.

Set ``S3FLAT_BACKEND=numpy`` in the environment before import to disable
numba. Any other value (or no value) uses numba when it can be imported.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

REQUESTED = os.environ.get("S3FLAT_BACKEND", "numba").strip().lower()
HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and REQUESTED != "numpy"
BACKEND = "numba" if USE_NUMBA else "numpy"


def compile_kernel(func):
    """Return the njit-compiled version of ``func`` (or ``func`` itself without numba)."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)
