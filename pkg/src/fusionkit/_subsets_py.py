"""Pure-Python subset sweep, used when the compiled extension is unavailable.

Same contract as the compiled ``_subsets.subset_eigmax``.
"""

import numpy as np
from scipy.linalg import LinAlgError, eigh


def subset_eigmax(a, b, offsets, sizes, itype):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    offsets = np.asarray(offsets, dtype=np.intp)
    sizes = np.asarray(sizes, dtype=np.intp)
    m = offsets.shape[0]
    total = a.shape[0]
    if m < 1 or m > 30:
        raise ValueError("block count must be in [1, 30]")
    if a.shape != (total, total) or b.shape != (total, total):
        raise ValueError("a and b must be square and of equal size")
    if sizes.shape[0] != m:
        raise ValueError("offsets and sizes differ in length")
    if itype not in (1, 2):
        raise ValueError("itype must be 1 or 2")
    if np.any(sizes < 1) or np.any(offsets < 0) or np.any(offsets + sizes > total):
        raise ValueError("block out of range")

    blocks = [np.arange(o, o + s) for o, s in zip(offsets, sizes)]
    out = np.empty((1 << m) - 1)
    for mask in range(1, 1 << m):
        idx = np.concatenate([blocks[j] for j in range(m) if (mask >> j) & 1])
        sub = np.ix_(idx, idx)
        try:
            w = eigh(a[sub], b[sub], type=itype, eigvals_only=True)
        except LinAlgError:
            out[mask - 1] = np.nan
            continue
        out[mask - 1] = w[-1]
    return out
