"""Determining sequences (p_n), cached partial sums P_n, and growth diagnostics.

A determining sequence is a non-negative sequence with strictly positive
partial sums P_n = p_0 + ... + p_n.  The growth rate rho_n = n*p_n/P_n and
the ratio P_{n-1}/P_{2n} drive every convergence statement in the rest of
the package, so this module also provides windowed estimates of their
limiting behaviour.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import InvalidSequence, RangeExceeded


class Monotonicity(Enum):
    NON_DECREASING = "non_decreasing"
    NON_INCREASING = "non_increasing"
    NEITHER = "neither"
    EVENTUALLY_MONOTONE = "eventually_monotone"


class DeterminingSequence:
    """Non-negative weight sequence with cached partial sums.

    The cache is grown under a lock, so an instance can be shared across
    threads once constructed.  All arithmetic is binary64; sequences that
    overflow (e.g. geometric ones) raise :class:`RangeExceeded` at the first
    index whose term or partial sum is no longer finite.

    By convention ``partial_sum(-1) == 0``.
    """

    def __init__(self, kind: str, term: Callable[[int], float], spec: str,
                 limit: Optional[int] = None):
        self._kind = kind
        self._term = term
        self._spec = spec
        self._limit = limit  # last defined index, None if unbounded
        self._psums: list[float] = []
        self._lock = threading.Lock()

    # -- constructors -------------------------------------------------

    @classmethod
    def ones(cls) -> "DeterminingSequence":
        return cls("ones", lambda n: 1.0, "ones")

    @classmethod
    def linear(cls) -> "DeterminingSequence":
        """p_n = n + 1.  Starting at 1 keeps P_0 > 0."""
        return cls("linear", lambda n: float(n + 1), "linear")

    @classmethod
    def monomial(cls, k: int) -> "DeterminingSequence":
        """p_n = (n + 1)**k.  The shift by one keeps P_0 > 0, as for linear."""
        if int(k) != k or k < 1:
            raise ValueError("monomial exponent must be a positive integer")
        k = int(k)
        return cls("monomial", lambda n: float(n + 1) ** k, f"monomial:{k}")

    @classmethod
    def geometric(cls, r: float) -> "DeterminingSequence":
        r = float(r)
        if not r > 1.0:
            raise ValueError("geometric ratio must be > 1")
        return cls("geometric", lambda n: r ** n, f"geom:{r:g}")

    @classmethod
    def logarithmic(cls) -> "DeterminingSequence":
        """p_n = ln(n + 2).  ln(n + 1) would give P_0 = 0."""
        return cls("logarithmic", lambda n: math.log(n + 2), "log")

    @classmethod
    def custom(cls, values: Iterable[float]) -> "DeterminingSequence":
        vals = [float(v) for v in values]
        if not vals:
            raise InvalidSequence("custom sequence needs at least one value")
        for i, v in enumerate(vals):
            if math.isnan(v) or v < 0.0:
                raise InvalidSequence(f"p_{i} = {v!r} is not a non-negative number")
            if math.isinf(v):
                raise RangeExceeded(f"p_{i} is not finite")
        return cls("custom", vals.__getitem__, "custom", limit=len(vals) - 1)

    # -- basic access -------------------------------------------------

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def spec(self) -> str:
        return self._spec

    @property
    def evaluable_limit(self) -> Optional[int]:
        """Last index a custom sequence defines; None for unbounded kinds."""
        return self._limit

    def term(self, n: int) -> float:
        """p_n, validated to be finite and non-negative."""
        if n < 0:
            raise ValueError("sequence terms are indexed from 0")
        if self._limit is not None and n > self._limit:
            raise RangeExceeded(
                f"sequence '{self._spec}' is defined up to n={self._limit}, got n={n}")
        try:
            p = float(self._term(n))
        except OverflowError:
            raise RangeExceeded(
                f"p_{n} of '{self._spec}' overflows binary64; evaluable up to n={n - 1}"
            ) from None
        if math.isnan(p) or p < 0.0:
            raise InvalidSequence(f"p_{n} = {p!r} is not a non-negative number")
        if math.isinf(p):
            raise RangeExceeded(
                f"p_{n} of '{self._spec}' overflows binary64; evaluable up to n={n - 1}")
        return p

    def _ensure(self, n: int) -> None:
        if n < len(self._psums):
            return
        with self._lock:
            while len(self._psums) <= n:
                k = len(self._psums)
                p = self.term(k)
                s = (self._psums[-1] if k else 0.0) + p
                if math.isinf(s):
                    raise RangeExceeded(
                        f"P_{k} of '{self._spec}' overflows binary64; evaluable up to n={k - 1}")
                if k == 0 and s <= 0.0:
                    raise InvalidSequence("P_0 = p_0 must be strictly positive")
                self._psums.append(s)

    def partial_sum(self, n: int) -> float:
        """P_n = p_0 + ... + p_n; P_{-1} = 0 by the empty-sum convention."""
        if n < -1:
            raise ValueError("partial sums are defined for n >= -1")
        if n == -1:
            return 0.0
        self._ensure(n)
        return self._psums[n]

    def partial_sums(self, n: int) -> np.ndarray:
        """Array of P_0 .. P_n."""
        self._ensure(n)
        return np.asarray(self._psums[: n + 1], dtype=float)

    def __repr__(self) -> str:  # pragma: no cover
        return f"DeterminingSequence({self._spec!r})"


@dataclass(frozen=True)
class GrowthReport:
    """Windowed growth diagnostics of a determining sequence.

    ``rho_values[i]`` is rho_{n_lo + i}.  The sup/inf estimates and the
    beta estimate (min of P_{n-1}/P_{2n}) are taken over the tail half of
    the window: limsup/liminf are not computable from a finite window, and
    the tail half is a deterministic, documented stand-in.
    """

    window: tuple[int, int]
    rho_values: tuple[float, ...]
    rho_sup_estimate: float
    rho_inf_estimate: float
    beta_estimate: float
    monotonicity: Monotonicity
    eventually_monotone_from: Optional[int] = None


def partial_sum(seq: DeterminingSequence, n: int) -> float:
    """P_n of the sequence; n = -1 returns 0."""
    return seq.partial_sum(n)


def growth_rate(seq: DeterminingSequence, n: int) -> float:
    """rho_n = n * p_n / P_n."""
    if n < 1:
        raise ValueError("growth rate is defined for n >= 1")
    return n * seq.term(n) / seq.partial_sum(n)


def is_non_decreasing(seq: DeterminingSequence, upto: int) -> bool:
    """Whether p_0 <= p_1 <= ... <= p_upto (exhaustive comparison)."""
    prev = seq.term(0)
    for k in range(1, upto + 1):
        cur = seq.term(k)
        if cur < prev:
            return False
        prev = cur
    return True


def _classify_monotonicity(terms: list[float], n_lo: int):
    diffs = [b - a for a, b in zip(terms, terms[1:])]
    if all(d >= 0 for d in diffs):
        # constant sequences land here on purpose: ties break non-decreasing
        return Monotonicity.NON_DECREASING, None
    if all(d <= 0 for d in diffs):
        return Monotonicity.NON_INCREASING, None
    # scan backwards for the longest one-directional suffix
    up_ok = down_ok = True
    start = len(diffs)
    for i in range(len(diffs) - 1, -1, -1):
        d = diffs[i]
        nup = up_ok and d >= 0
        ndown = down_ok and d <= 0
        if not nup and not ndown:
            break
        up_ok, down_ok = nup, ndown
        start = i
    # require at least two comparisons (three points) for "eventually"
    if 0 < start <= len(diffs) - 2:
        return Monotonicity.EVENTUALLY_MONOTONE, n_lo + start
    return Monotonicity.NEITHER, None


def growth_report(seq: DeterminingSequence, n_lo: int, n_hi: int) -> GrowthReport:
    """Growth diagnostics over the window [n_lo, n_hi].

    Needs P up to 2*n_hi for the beta estimate; raises RangeExceeded if the
    sequence cannot be evaluated that far.
    """
    if not 1 <= n_lo < n_hi:
        raise ValueError("need 1 <= n_lo < n_hi")
    P = seq.partial_sums(2 * n_hi)
    terms = [seq.term(n) for n in range(n_lo, n_hi + 1)]
    rho = tuple(n * terms[n - n_lo] / P[n] for n in range(n_lo, n_hi + 1))
    tail_start = n_lo + (n_hi - n_lo) // 2
    rho_tail = rho[tail_start - n_lo:]
    beta = min(P[n - 1] / P[2 * n] for n in range(tail_start, n_hi + 1))
    mono, mono_from = _classify_monotonicity(terms, n_lo)
    return GrowthReport(
        window=(n_lo, n_hi),
        rho_values=rho,
        rho_sup_estimate=max(rho_tail),
        rho_inf_estimate=min(rho_tail),
        beta_estimate=beta,
        monotonicity=mono,
        eventually_monotone_from=mono_from,
    )


def parse_sequence_spec(text: str) -> DeterminingSequence:
    """Parse the CLI mini-language.

    ``ones`` | ``linear`` | ``monomial:K`` | ``geom:R`` | ``log`` |
    ``file:PATH`` (one non-negative decimal per line).  Decimal literals are
    parsed with float(), so the result is locale-independent and bit-exact.
    """
    text = text.strip()
    if text == "ones":
        return DeterminingSequence.ones()
    if text == "linear":
        return DeterminingSequence.linear()
    if text == "log":
        return DeterminingSequence.logarithmic()
    if text.startswith("monomial:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad monomial exponent in {text!r}") from None
        return DeterminingSequence.monomial(k)
    if text.startswith("geom:"):
        try:
            r = float(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad geometric ratio in {text!r}") from None
        return DeterminingSequence.geometric(r)
    if text.startswith("file:"):
        path = Path(text.split(":", 1)[1])
        values = []
        for line in path.read_text().splitlines():
            line = line.strip()
            if line:
                values.append(float(line))
        return DeterminingSequence.custom(values)
    raise ValueError(f"unknown sequence spec {text!r}")
