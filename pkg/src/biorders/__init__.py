"""Bi-invariant orders on free products, computationally.

See the README for an overview; the public API is re-exported from the
submodules below.
"""

from .words import (  # noqa: F401
    FreeFactor,
    FreeProduct,
    Letter,
    NIELSEN_MOVES,
    Word,
    WordSyntaxError,
    ZFactor,
    ZLexFactor,
    apply_aut,
    enumerate_autwords,
    free_group,
)
