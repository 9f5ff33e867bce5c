"""Compensated accumulation helpers.

``math.fsum`` is used for 1-D inputs (exactly rounded). For stacked inputs the
sum runs along axis 0 with Neumaier's correction, vectorised over the trailing
axes, in fixed index order.
"""

import math

import numpy as np


def neumaier_sum(terms, axis=0):
    """Neumaier-compensated sum of ``terms`` along ``axis``."""
    terms = np.moveaxis(np.asarray(terms, dtype=float), axis, 0)
    if terms.shape[0] == 0:
        return np.zeros(terms.shape[1:])
    s = terms[0].copy()
    c = np.zeros_like(s)
    for t in terms[1:]:
        u = s + t
        big = np.abs(s) >= np.abs(t)
        c += np.where(big, (s - u) + t, (t - u) + s)
        s = u
    return s + c


def csum(terms, axis=0):
    """Compensated sum; exactly rounded for 1-D input."""
    terms = np.asarray(terms, dtype=float)
    if terms.ndim == 1:
        return math.fsum(terms.tolist())
    return neumaier_sum(terms, axis=axis)
