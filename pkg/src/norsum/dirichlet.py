"""Hardy-space and weighted Dirichlet norms for polynomials.

The local Dirichlet energy at a point zeta of the closed disk is computed
two independent ways:

* coefficient path: split f = a + (z - zeta) g and take the squared H^2
  norm of g (the division step lives in `power_series`);
* quadrature path: integrate the weighted |f'|^2 over the unit disk in
  polar coordinates, with the weight being the log kernel for interior
  zeta and the Poisson kernel for boundary zeta.

The quadrature is the oracle that pins down the coefficient formula, so it
has to be accurate: Gauss-Legendre radially (after the grading substitution
r = u**g, split into panels at the kink radius |zeta|), uniform trapezoid
angularly, plus first-order singularity subtraction.  The subtraction uses
two elementary polar integrals, valid for both kernel cases:

    integral K dA = 1          integral K * z dA = zeta / 2

(dA is the normalized area measure).  Each call doubles the node counts
until two successive refinements agree within the requested tolerance.

Weighted energies are superpositions over finitely many point masses:
D_w(f) = sum of mass * D_zeta(f) over the atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import PointOutsideDisk, QuadratureNotConverged
from .power_series import CoefficientSeries, aleman_divide, derivative, evaluate

DISK_TOL = 1e-12
INTERIOR_REL_TOL = 1e-6
BOUNDARY_REL_TOL = 1e-4


@dataclass(frozen=True)
class PointMassWeight:
    """Finitely supported positive measure on the closed unit disk."""

    atoms: tuple[tuple[complex, float], ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("need at least one atom")
        norm = []
        for zeta, mass in self.atoms:
            zeta = complex(zeta)
            mass = float(mass)
            if abs(zeta) > 1.0 + DISK_TOL:
                raise PointOutsideDisk(f"atom at |zeta| = {abs(zeta)} lies outside the disk")
            if not mass > 0.0:
                raise ValueError("atom masses must be strictly positive")
            norm.append((zeta, mass))
        object.__setattr__(self, "atoms", tuple(norm))

    @classmethod
    def single(cls, zeta: complex, mass: float = 1.0) -> "PointMassWeight":
        return cls(((complex(zeta), float(mass)),))

    @classmethod
    def boundary_unit(cls) -> "PointMassWeight":
        """Unit mass at zeta = 1; the weight where the multiplier-matrix norm is attained."""
        return cls.single(1.0, 1.0)


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts for the polar-grid disk quadrature."""

    radial_nodes: int = 64
    angular_nodes: int = 256
    radial_grading_exponent: float = 2.0

    def __post_init__(self):
        if self.radial_nodes < 8:
            raise ValueError("need at least 8 radial nodes")
        if self.angular_nodes < 16:
            raise ValueError("need at least 16 angular nodes")
        if not self.radial_grading_exponent >= 1.0:
            raise ValueError("grading exponent must be >= 1")


INTERIOR_QUADRATURE = QuadratureSpec(64, 256, 2.0)
BOUNDARY_QUADRATURE = QuadratureSpec(128, 2048, 3.0)


def h2_norm_sq(f: CoefficientSeries) -> float:
    """Squared Hardy-space norm: sum of |a_k|^2."""
    return float(np.sum(np.abs(f.coeffs) ** 2))


def _check_point(zeta: complex) -> complex:
    zeta = complex(zeta)
    if abs(zeta) > 1.0 + DISK_TOL:
        raise PointOutsideDisk(f"|zeta| = {abs(zeta)} exceeds 1")
    return zeta


def local_dirichlet_energy(f: CoefficientSeries, zeta: complex) -> float:
    """Local Dirichlet energy via the division step: squared H^2 norm of g.

    The squared norm (not the plain norm) is what matches the integral
    definition; the quadrature oracle distinguishes the two, e.g. f = 2z at
    zeta = 0 integrates to 4, not 2.
    """
    _, g = aleman_divide(f, zeta)
    return h2_norm_sq(g)


@lru_cache(maxsize=64)
def _gauss_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on (0, 1), cached read-only."""
    x, w = roots_legendre(n)
    u = (x + 1.0) / 2.0
    wu = w / 2.0
    u.flags.writeable = False
    wu.flags.writeable = False
    return u, wu


def _radial_rule(n: int, grading: float, split_at: float | None):
    """Graded radial rule; optionally split into panels at radius split_at.

    Splitting puts a panel edge where the theta-averaged integrand has a
    kink (the radius of the singular point), restoring spectral radial
    convergence.
    """
    if split_at is None or split_at <= 1e-12 or split_at >= 1.0 - 1e-12 or n < 16:
        u, wu = _gauss_nodes(n)
    else:
        us = split_at ** (1.0 / grading)
        n1 = min(max(int(round(n * us)), 8), n - 8)
        pieces_u, pieces_w = [], []
        for a, b, m in ((0.0, us, n1), (us, 1.0, n - n1)):
            x, w = _gauss_nodes(m)
            pieces_u.append(a + (b - a) * x)
            pieces_w.append(w * (b - a))
        u = np.concatenate(pieces_u)
        wu = np.concatenate(pieces_w)
    r = u ** grading
    # r dr = g * u**(2g-1) du under the substitution r = u**g
    radw = wu * grading * u ** (2.0 * grading - 1.0)
    return r, radw


def _disk_integral(f: CoefficientSeries, zeta: complex, radial: int, angular: int,
                   grading: float, boundary: bool) -> float:
    """One quadrature level of the weighted energy integral."""
    df = derivative(f)
    dc = df.coeffs
    fpz = evaluate(df, zeta)
    ddc = np.arange(1, len(dc)) * dc[1:] if len(dc) > 1 else np.zeros(1, dtype=complex)
    fppz = evaluate(CoefficientSeries._wrap(ddc), zeta)
    beta = np.conj(fpz) * fppz

    s = abs(zeta)
    r, radw = _radial_rule(radial, grading, None if boundary else s)
    theta = 2.0 * np.pi * (np.arange(angular) + 0.5) / angular
    z = r[:, None] * np.exp(1j * theta)[None, :]

    # Horner over the grid
    fp = np.zeros_like(z)
    for a in dc[::-1]:
        fp *= z
        fp += a
    f2 = np.abs(fp) ** 2

    if boundary:
        K = (1.0 - np.abs(z) ** 2) / np.abs(zeta - z) ** 2
    else:
        K = np.log(np.abs((1.0 - np.conj(zeta) * z) / (zeta - z))) * (2.0 / (1.0 - s * s))

    # subtract the first-order Taylor part of |f'|^2 at zeta; its weighted
    # integral is known in closed form from the two moment identities
    subtracted = abs(fpz) ** 2 + 2.0 * np.real(beta * (z - zeta))
    analytic = abs(fpz) ** 2 - float(np.real(beta * zeta))
    remainder = (2.0 / angular) * float(np.sum(radw[:, None] * K * (f2 - subtracted)))
    return analytic + remainder


def local_dirichlet_energy_quadrature(
    f: CoefficientSeries,
    zeta: complex,
    spec: QuadratureSpec | None = None,
    rel_tol: float | None = None,
    max_refinements: int = 3,
) -> float:
    """Local Dirichlet energy by numerical integration over the unit disk.

    Starts at the node counts of `spec` and doubles both counts until two
    successive levels agree to `rel_tol` (default 1e-6 interior, 1e-4
    boundary); returns the finer value.  Raises QuadratureNotConverged when
    the refinement cap is hit first.
    """
    zeta = _check_point(zeta)
    boundary = abs(abs(zeta) - 1.0) <= DISK_TOL
    if boundary:
        zeta = zeta / abs(zeta)  # project onto the circle so the kernel case is exact
    if spec is None:
        spec = BOUNDARY_QUADRATURE if boundary else INTERIOR_QUADRATURE
    if rel_tol is None:
        rel_tol = BOUNDARY_REL_TOL if boundary else INTERIOR_REL_TOL

    g = spec.radial_grading_exponent
    prev = _disk_integral(f, zeta, spec.radial_nodes, spec.angular_nodes, g, boundary)
    for level in range(1, max_refinements + 1):
        cur = _disk_integral(f, zeta, spec.radial_nodes << level,
                             spec.angular_nodes << level, g, boundary)
        if abs(cur - prev) <= rel_tol * max(abs(cur), abs(prev)) + 1e-14:
            return cur
        prev = cur
    raise QuadratureNotConverged(
        f"disk quadrature did not stabilize to {rel_tol:g} within "
        f"{max_refinements} refinements of {spec}")


def weighted_dirichlet_energy(f: CoefficientSeries, w: PointMassWeight) -> float:
    """Superposition of local energies: sum of mass * D_zeta(f) over atoms."""
    return float(sum(mass * local_dirichlet_energy(f, zeta) for zeta, mass in w.atoms))


def dirichlet_norm(f: CoefficientSeries, w: PointMassWeight) -> float:
    """sqrt(|f(0)|^2 + D_w(f))."""
    return float(np.sqrt(abs(f[0]) ** 2 + weighted_dirichlet_energy(f, w)))


def dirichlet_inner_product(f: CoefficientSeries, g: CoefficientSeries,
                            w: PointMassWeight) -> complex:
    """f(0)*conj(g(0)) plus the mass-weighted H^2 pairings of the quotients.

    Consistent with `dirichlet_norm`: the pairing of f with itself is the
    squared norm.  Swapping the arguments conjugates the result.
    """
    acc = complex(f[0]) * np.conj(complex(g[0]))
    for zeta, mass in w.atoms:
        _, qf = aleman_divide(f, zeta)
        _, qg = aleman_divide(g, zeta)
        m = min(len(qf), len(qg))
        acc += mass * complex(np.sum(qf.coeffs[:m] * np.conj(qg.coeffs[:m])))
    return complex(acc)


def parse_weight_spec(text: str) -> PointMassWeight:
    """Parse ``dirac:RE,IM[,MASS]`` atoms joined by ``;`` (mass defaults to 1)."""
    atoms = []
    for part in text.strip().split(";"):
        part = part.strip()
        if not part.startswith("dirac:"):
            raise ValueError(f"unknown weight atom {part!r}")
        fields = part[len("dirac:"):].split(",")
        if len(fields) not in (2, 3):
            raise ValueError(f"weight atom needs RE,IM[,MASS], got {part!r}")
        re, im = float(fields[0]), float(fields[1])
        mass = float(fields[2]) if len(fields) == 3 else 1.0
        atoms.append((complex(re, im), mass))
    return PointMassWeight(tuple(atoms))
