"""Flat surfaces in the 3-sphere, their constructions and the numerical
checks that certify them."""
__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402
from .errors import *  # noqa: E402,F401,F403
from .forms import Grid, SurfacePatch  # noqa: E402

__all__ = ["BACKEND", "Grid", "SurfacePatch", "__version__"]
