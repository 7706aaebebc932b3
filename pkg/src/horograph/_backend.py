"""Kernel selection: compiled extension if importable, else numpy.

Set ``HOROGRAPH_PURE=1`` to force the numpy path.
"""

import os

from . import _pure

kernels = _pure
NAME = "pure"

if os.environ.get("HOROGRAPH_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels  # noqa: F811
        NAME = "compiled"
    except ImportError:
        pass


def get(name):
    """Kernel module by name (``"compiled"`` or ``"pure"``)."""
    if name == "pure":
        return _pure
    from . import _kernels
    return _kernels
