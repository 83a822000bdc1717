"""Symbolic time-series approximation with a quantized codebook."""

try:
    from ._qabba import *  # noqa: F401,F403  (installed wheel layout)
    from ._qabba import __version__  # noqa: F401
except ImportError:  # build-tree layout: the module sits on sys.path
    from _qabba import *  # noqa: F401,F403
    from _qabba import __version__  # noqa: F401
