"""Multifractal random walk toolkit: thin wrapper over the C++ core."""

try:
    from ._mrw import *  # noqa: F401,F403  (installed layout)
    from ._mrw import __doc__ as _core_doc
except ImportError:  # build-tree layout: extension on PYTHONPATH
    from _mrw import *  # noqa: F401,F403
    from _mrw import __doc__ as _core_doc

__doc__ = _core_doc
