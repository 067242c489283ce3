"""Complex coefficient vectors: truncated Taylor series and polynomial helpers.

Coefficient lists are dense; index k holds the coefficient of z**k.  The
zero polynomial is represented by the single coefficient [0].
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .errors import PointOutsideDisk

DISK_TOL = 1e-12

ComplexLike = Union[complex, float, int]


class CoefficientSeries:
    """Immutable finite coefficient vector (binary64 real/imag parts)."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[ComplexLike]):
        c = np.array(list(coeffs), dtype=complex)
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("need a non-empty 1-d coefficient list")
        if not np.all(np.isfinite(c.real)) or not np.all(np.isfinite(c.imag)):
            raise ValueError("coefficients must be finite")
        c.flags.writeable = False
        self._c = c

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "CoefficientSeries":
        obj = cls.__new__(cls)
        a = np.ascontiguousarray(arr, dtype=complex)
        a.flags.writeable = False
        obj._c = a
        return obj

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only view of the coefficients."""
        return self._c

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, k: int) -> complex:
        return complex(self._c[k])

    def degree(self) -> int:
        """Highest index with a nonzero coefficient; 0 for the zero polynomial."""
        nz = np.nonzero(self._c)[0]
        return int(nz[-1]) if len(nz) else 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientSeries):
            return NotImplemented
        return len(self._c) == len(other._c) and bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash((len(self._c), self._c.tobytes()))

    def __repr__(self) -> str:  # pragma: no cover
        head = np.array2string(self._c[:6], separator=", ")
        more = "" if len(self._c) <= 6 else f" ... ({len(self._c)} coefficients)"
        return f"CoefficientSeries({head}{more})"


def taylor_partial_sum(f: CoefficientSeries, k: int) -> CoefficientSeries:
    """Truncation to indices 0..k, zero-padded when k exceeds the length."""
    if k < 0:
        raise ValueError("truncation order must be >= 0")
    c = f.coeffs
    out = np.zeros(k + 1, dtype=complex)
    m = min(k + 1, len(c))
    out[:m] = c[:m]
    return CoefficientSeries._wrap(out)


def hadamard_product(f: CoefficientSeries, g: CoefficientSeries) -> CoefficientSeries:
    """Pointwise coefficient product, truncated to the shorter input."""
    m = min(len(f), len(g))
    return CoefficientSeries._wrap(f.coeffs[:m] * g.coeffs[:m])


def evaluate(f: CoefficientSeries, z: ComplexLike) -> complex:
    """Horner evaluation of the polynomial at z."""
    z = complex(z)
    acc = 0j
    for a in f.coeffs[::-1]:
        acc = acc * z + a
    return acc


def derivative(f: CoefficientSeries) -> CoefficientSeries:
    """Coefficient k of the result is (k+1) * a_{k+1}."""
    c = f.coeffs
    if len(c) == 1:
        return CoefficientSeries._wrap(np.zeros(1, dtype=complex))
    return CoefficientSeries._wrap(np.arange(1, len(c)) * c[1:])


def aleman_divide(f: CoefficientSeries, zeta: ComplexLike) -> tuple[complex, CoefficientSeries]:
    """Split f(z) = a + (z - zeta) g(z) with a = f(zeta).

    g is the exact polynomial quotient, computed by synthetic division from
    the highest coefficient down (b_{k-1} = a_k + zeta*b_k), which is stable
    for |zeta| <= 1.
    """
    zeta = complex(zeta)
    if abs(zeta) > 1.0 + DISK_TOL:
        raise PointOutsideDisk(f"|zeta| = {abs(zeta)} exceeds 1")
    c = f.coeffs
    d = len(c) - 1
    if d == 0:
        return complex(c[0]), CoefficientSeries._wrap(np.zeros(1, dtype=complex))
    b = np.empty(d, dtype=complex)
    b[d - 1] = c[d]
    for k in range(d - 1, 0, -1):
        b[k - 1] = c[k] + zeta * b[k]
    a = complex(c[0] + zeta * b[0])
    return a, CoefficientSeries._wrap(b)


def zeta2_series(degree: int) -> CoefficientSeries:
    """Preset a_k = (k+1)**-2 up to the given degree."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    k = np.arange(degree + 1, dtype=float)
    return CoefficientSeries._wrap((k + 1.0) ** -2.0 + 0j)


def geometric_series(ratio: complex, degree: int) -> CoefficientSeries:
    """Preset a_k = ratio**k, |ratio| < 1, up to the given degree."""
    ratio = complex(ratio)
    if not abs(ratio) < 1.0:
        raise ValueError("geometric coefficient ratio must satisfy |R| < 1")
    if degree < 0:
        raise ValueError("degree must be >= 0")
    return CoefficientSeries._wrap(ratio ** np.arange(degree + 1))


def read_coefficient_file(path: Union[str, Path]) -> CoefficientSeries:
    """One coefficient per line as ``RE IM`` decimals; index = line number - 1."""
    values = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"coefficient line must be 'RE IM', got {raw!r}")
        values.append(complex(float(parts[0]), float(parts[1])))
    return CoefficientSeries(values)


def parse_function_spec(text: str, degree: int) -> CoefficientSeries:
    """CLI presets ``zeta2`` and ``geo:R`` (built at the given degree), or ``file:PATH``."""
    text = text.strip()
    if text == "zeta2":
        return zeta2_series(degree)
    if text.startswith("geo:"):
        try:
            r = float(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad coefficient ratio in {text!r}") from None
        return geometric_series(r, degree)
    if text.startswith("file:"):
        return read_coefficient_file(text.split(":", 1)[1])
    raise ValueError(f"unknown function spec {text!r}")
