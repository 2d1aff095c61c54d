"""Select the subset-sweep implementation at import time.

The compiled extension is used when it imports; set ``FUSIONKIT_BACKEND=python``
to force the pure-Python fallback.
"""

import os

from . import _subsets_py

BACKEND = "python"
subset_eigmax = _subsets_py.subset_eigmax

if os.environ.get("FUSIONKIT_BACKEND", "").lower() != "python":
    try:
        from ._subsets import subset_eigmax  # noqa: F811
    except ImportError:
        pass
    else:
        BACKEND = "cython"


def implementations():
    """Mapping of every importable backend name to its ``subset_eigmax``."""
    impls = {"python": _subsets_py.subset_eigmax}
    try:
        from ._subsets import subset_eigmax as compiled
    except ImportError:
        pass
    else:
        impls["cython"] = compiled
    return impls
