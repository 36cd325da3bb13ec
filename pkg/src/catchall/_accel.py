"""Backend selection for the numeric kernels.

Kernels are compiled with numba when it is importable, unless the
environment variable ``CATCHALL_DISABLE_NUMBA`` is set to a truthy value
(``1``, ``true``, ``yes``, ``on``) before the package is imported. In that
case the numpy implementations are used everywhere.
"""
import os

ENV_FLAG = "CATCHALL_DISABLE_NUMBA"

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def _disabled_by_env() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


USE_NUMBA = HAVE_NUMBA and not _disabled_by_env()
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(fn):
    """Compile ``fn`` in nopython mode if numba is available, else return it unchanged.

    The compiled twin is always built when numba is installed so that the
    benchmark and the agreement tests can reach both paths in one process.
    """
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
