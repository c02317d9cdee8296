"""Compiled stencil kernels on raw amplitude arrays (Dirichlet ghosts are zero)."""

from typing import Any, Dict

import numba
import numpy as np

NUMBA_OPTS: Dict[str, Any] = {
    "cache": True,
    "nogil": True,
}


def njit(func: callable):
    return numba.njit(func, **NUMBA_OPTS)


@njit
def second_difference(a):
    size = a.shape[0]
    out = np.empty_like(a)
    for j in range(size):
        out[j] = -2.0 * a[j]
        if j > 0:
            out[j] += a[j - 1]
        if j < size - 1:
            out[j] += a[j + 1]
    return out


@njit
def first_difference(a):
    size = a.shape[0]
    out = np.empty_like(a)
    for j in range(size - 1):
        out[j] = a[j + 1] - a[j]
    if size > 0:
        out[size - 1] = -a[size - 1]
    return out
