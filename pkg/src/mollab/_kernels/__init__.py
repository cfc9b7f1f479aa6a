"""Kernel backend selection.

Imports the compiled extension when available, otherwise the numpy
fallback. MOLLAB_PURE_PYTHON=1 forces the fallback, which is also how the
benchmark compares the two.
"""

import os

from . import fallback

if os.environ.get("MOLLAB_PURE_PYTHON"):
    impl = fallback
    BACKEND = "python"
else:
    try:
        from . import _core as impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        impl = fallback
        BACKEND = "python"

conv1 = impl.conv1
conv2 = impl.conv2
conv_st1 = impl.conv_st1
cet_g1 = impl.cet_g1
cet_g2 = impl.cet_g2
cet_g_st1 = impl.cet_g_st1
euler_rhs = impl.euler_rhs


def backend() -> str:
    """Name of the active kernel backend ('compiled' or 'python')."""
    return BACKEND
