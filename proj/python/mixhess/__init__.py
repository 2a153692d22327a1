"""Python bindings for the mixed complex Hessian solver."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
