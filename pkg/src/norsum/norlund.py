"""Norlund sums of truncated Taylor series.

The classical Norlund mean of the partial sums s_0..s_n collapses, after
reordering, to a coefficient multiplier: coefficient k is scaled by
P_{n-k}/P_n.  The generalized operator raises that ratio to a power
alpha > 0.  Both the literal averaging definition (kept as an oracle) and
the multiplier form are provided; the multiplier form *is* the Hadamard
product with `multiplier_polynomial`, so that identity is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .power_series import CoefficientSeries, hadamard_product, taylor_partial_sum
from .sequences import DeterminingSequence


@dataclass(frozen=True)
class NorlundOperator:
    """Generalized Norlund sum of order n with exponent alpha > 0."""

    seq: DeterminingSequence
    alpha: float
    n: int

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if self.n < 0:
            raise ValueError("n must be >= 0")


def _multiplier_values(op: NorlundOperator) -> np.ndarray:
    """m_k = (P_{n-k}/P_n)**alpha for k = 0..n.

    Powers are taken on the ratio (exp(alpha*log r), r in (0,1]) so that
    geometric sequences cannot overflow and m_0 is exactly 1.
    """
    P = op.seq.partial_sums(op.n)
    ratios = P[::-1] / P[op.n]
    return np.exp(op.alpha * np.log(ratios))


def multiplier_polynomial(op: NorlundOperator) -> CoefficientSeries:
    """The degree-n polynomial whose Hadamard product realizes the operator."""
    return CoefficientSeries._wrap(_multiplier_values(op).astype(complex))


def norlund_sum(op: NorlundOperator, f: CoefficientSeries) -> CoefficientSeries:
    """Apply the operator: coefficient k becomes (P_{n-k}/P_n)**alpha * a_k.

    The input is truncated/padded to length n+1 first, so the result has
    length exactly n+1 and equals the Hadamard product with
    `multiplier_polynomial` by construction.
    """
    return hadamard_product(multiplier_polynomial(op), taylor_partial_sum(f, op.n))


def norlund_sum_definition(op: NorlundOperator, f: CoefficientSeries) -> CoefficientSeries:
    """Literal weighted average (1/P_n) * sum_k p_{n-k} s_k[f].

    Only defined for alpha = 1; this path exists as an independent oracle
    for the multiplier form.
    """
    if op.alpha != 1.0:
        raise ValueError("the averaging definition applies to alpha = 1 only")
    n = op.n
    acc = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        sk = taylor_partial_sum(f, k).coeffs
        acc[: k + 1] += op.seq.term(n - k) * sk
    acc /= op.seq.partial_sum(n)
    return CoefficientSeries._wrap(acc)
