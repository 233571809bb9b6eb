"""Point-pair laws, closed-form section-pair laws and their reference formulas.

Sign convention: adhesive terms carry negative prefactors (``k6 = -C_vdW``),
repulsive ones positive, so laws superpose by plain addition.

Section-pair laws expose ``evaluate(x)`` returning the value and the first two
derivatives with respect to their natural argument: the surface gap ``g`` for
short-range laws and the centroid distance ``d`` for long-range ones. Since
``g = d - R1 - R2`` the derivatives with respect to ``d`` are the same, which
lets one quadrature kernel serve every law through :meth:`evaluate_d`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

# --------------------------------------------------------------------------
# point-pair laws
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Power:
    """``phi = k r^-m`` (Coulomb for m=1, vdW for m=6 with k=-C)."""

    k: float
    m: float

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("power-law exponent must be positive")


@dataclass(frozen=True)
class LennardJones:
    """12-6 law written through its equilibrium depth and spacing."""

    Phi_eq: float
    r_eq: float

    def __post_init__(self):
        if not self.r_eq > 0:
            raise ValueError("r_eq must be positive")
        if not self.Phi_eq < 0:
            raise ValueError("Phi_eq must be negative")

    @property
    def k6(self) -> float:
        return 2.0 * self.Phi_eq * self.r_eq**6

    @property
    def k12(self) -> float:
        return -self.Phi_eq * self.r_eq**12


@dataclass(frozen=True)
class Exponential:
    """Soft steric repulsion ``C exp(-r/r_c)``."""

    C: float
    r_c: float


@dataclass(frozen=True)
class HardSphere:
    """Zero for any positive separation."""


PointPairLaw = Union[Power, LennardJones, Exponential, HardSphere]


def point_pair(law: PointPairLaw, r):
    """Potential ``phi(r)`` and ``dphi/dr``; the force is ``-dphi/dr``."""
    r = np.asarray(r, dtype=float)
    if isinstance(law, HardSphere):
        if np.any(r < 0):
            raise ValueError("negative separation")
        z = np.zeros_like(r)
        return z, z.copy()
    if isinstance(law, Exponential):
        e = law.C * np.exp(-r / law.r_c)
        return e, -e / law.r_c
    if np.any(r <= 0):
        raise ValueError("power-type law needs r > 0")
    if isinstance(law, Power):
        phi = law.k * r ** (-law.m)
        return phi, -law.m * phi / r
    if isinstance(law, LennardJones):
        r6 = r ** (-6.0)
        r12 = r6 * r6
        phi = law.k12 * r12 + law.k6 * r6
        return phi, (-12.0 * law.k12 * r12 - 6.0 * law.k6 * r6) / r
    raise TypeError(f"unknown point-pair law {law!r}")


def lj_point_characteristics(Phi_eq: float, r_eq: float):
    """Equilibrium distance, force-minimum location and force minimum of the 12-6 law."""
    law = LennardJones(Phi_eq, r_eq)
    r_fmin = (13.0 / 7.0) ** (1.0 / 6.0) * r_eq
    _, dphi = point_pair(law, r_fmin)
    return r_eq, r_fmin, float(-dphi)


# --------------------------------------------------------------------------
# cross-section pairs and closed-form coefficients
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CrossSectionPair:
    """Radii plus the density data a law needs.

    ``rho_product`` is the product of particle densities (volume interactions),
    ``lambda1``/``lambda2`` are charges per unit length (surface interactions).
    """

    R1: float
    R2: float
    rho_product: float | None = None
    lambda1: float | None = None
    lambda2: float | None = None

    def __post_init__(self):
        if not (self.R1 > 0 and self.R2 > 0):
            raise ValueError("radii must be positive")

    @property
    def radius_factor(self) -> float:
        """``sqrt(2 R1 R2 / (R1 + R2))``, the effective radius factor of near contact."""
        return math.sqrt(2.0 * self.R1 * self.R2 / (self.R1 + self.R2))

    def rho(self) -> float:
        if self.rho_product is None:
            raise ValueError("law needs rho_product (volume interaction)")
        return self.rho_product

    def lambdas(self) -> float:
        if self.lambda1 is None or self.lambda2 is None:
            raise ValueError("law needs lambda1 and lambda2 (surface interaction)")
        return self.lambda1 * self.lambda2

    def hamaker(self, C_vdw: float) -> float:
        return math.pi**2 * self.rho() * C_vdw


def _gamma_ratio(num, den) -> float:
    """prod Gamma(num) / prod Gamma(den) for positive arguments, in log space."""
    return math.exp(sum(math.lgamma(a) for a in num) - sum(math.lgamma(a) for a in den))


def c_small_sep(m: float, k_m: float, pair: CrossSectionPair) -> float:
    """Prefactor of the near-contact disk-pair law ``c g^(-m+7/2)``."""
    if not m > 3.5:
        raise ValueError("near-contact disk law requires m > 7/2")
    shape = _gamma_ratio([m - 3.5, (m - 1) / 2], [m - 2, m / 2 - 1])
    return k_m * pair.rho() * 2 * math.pi / (m - 2) ** 2 * pair.radius_factor * shape


def line_integral_factor(m: float) -> float:
    """``int (p^2+s^2)^(-m/2) ds = factor * p^(1-m)`` over the whole line."""
    return math.sqrt(math.pi) * _gamma_ratio([(m - 1) / 2], [m / 2])


def c_cylinder_small_sep(m: float, k_m: float, pair: CrossSectionPair) -> float:
    """Prefactor of the near-contact law ``c g^(-m+9/2)`` per unit length of parallel cylinders.

    Integrating the point law along the common axis turns ``k r^-m`` into an
    in-plane law of exponent ``m-1``, whose disk-pair coefficient is exact.
    """
    return line_integral_factor(m) * c_small_sep(m - 1, k_m, pair)


# --------------------------------------------------------------------------
# section-pair laws
# --------------------------------------------------------------------------


class SSIPLawBase:
    uses_gap = True

    def evaluate(self, x):
        raise NotImplementedError

    def evaluate_d(self, d, radius_sum: float):
        """Value and derivatives with respect to centroid distance ``d``."""
        x = d - radius_sum if self.uses_gap else d
        return self.evaluate(x)

    def scaled(self, factor: float) -> "SSIPLawBase":
        raise NotImplementedError


def _check_positive(x, what):
    if np.any(np.asarray(x) <= 0):
        raise ValueError(f"nonpositive {what} on a singular law")


@dataclass(frozen=True)
class ShortRangeSmallSep(SSIPLawBase):
    """``pi = c g^(-m+7/2)`` evaluated at the surface gap."""

    c_ss: float
    m: float
    uses_gap = True

    def __post_init__(self):
        if not self.m > 3.5:
            raise ValueError("short-range law requires m > 7/2")

    def evaluate(self, g):
        g = np.asarray(g, dtype=float)
        _check_positive(g, "gap")
        e = -self.m + 3.5
        v = self.c_ss * g**e
        return v, e * v / g, e * (e - 1) * v / (g * g)

    def scaled(self, factor):
        return ShortRangeSmallSep(self.c_ss * factor, self.m)


@dataclass(frozen=True)
class LongRangeMonopole(SSIPLawBase):
    """``pi = c_pref d^-m`` at the centroid distance.

    ``c_pref`` is ``k lambda1 lambda2`` for charged surfaces or
    ``k rho1 rho2 A1 A2`` for volume interactions.
    """

    c_pref: float
    m: float
    uses_gap = False

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("exponent must be positive")

    def evaluate(self, d):
        d = np.asarray(d, dtype=float)
        _check_positive(d, "distance")
        v = self.c_pref * d ** (-self.m)
        return v, -self.m * v / d, self.m * (self.m + 1) * v / (d * d)

    def scaled(self, factor):
        return LongRangeMonopole(self.c_pref * factor, self.m)

    @classmethod
    def surface(cls, k: float, m: float, pair: CrossSectionPair) -> "LongRangeMonopole":
        return cls(k * pair.lambdas(), m)

    @classmethod
    def volume(cls, k: float, m: float, pair: CrossSectionPair) -> "LongRangeMonopole":
        areas = math.pi**2 * pair.R1**2 * pair.R2**2
        return cls(k * pair.rho() * areas, m)


@dataclass(frozen=True)
class LJComposite(SSIPLawBase):
    """Sum of the m=6 and m=12 near-contact disk laws."""

    c6_ss: float
    c12_ss: float
    uses_gap = True

    @classmethod
    def from_lj(cls, Phi_eq: float, r_eq: float, pair: CrossSectionPair) -> "LJComposite":
        lj = LennardJones(Phi_eq, r_eq)
        return cls(c_small_sep(6, lj.k6, pair), c_small_sep(12, lj.k12, pair))

    def evaluate(self, g):
        g = np.asarray(g, dtype=float)
        _check_positive(g, "gap")
        v6 = self.c6_ss * g**-2.5
        v12 = self.c12_ss * g**-8.5
        return (v6 + v12, (-2.5 * v6 - 8.5 * v12) / g,
                (8.75 * v6 + 80.75 * v12) / (g * g))

    def scaled(self, factor):
        return LJComposite(self.c6_ss * factor, self.c12_ss * factor)

    def equilibrium_gap(self) -> float:
        return (-17.0 / 5.0 * self.c12_ss / self.c6_ss) ** (1.0 / 6.0)


@dataclass(frozen=True)
class RegularizedLJ(SSIPLawBase):
    """Inner law above ``g_reg``; below it the force ``-dpi/dg`` is ``a g + b``.

    ``a`` and ``b`` make the force and its slope continuous at ``g_reg``, and the
    potential is integrated from ``g_reg`` so it stays continuous too.
    """

    inner: SSIPLawBase
    g_reg: float
    a: float
    b: float
    uses_gap = True

    def evaluate(self, g):
        g = np.asarray(g, dtype=float)
        below = g < self.g_reg
        safe = np.where(below, self.g_reg, g)
        v, d1, d2 = self.inner.evaluate(safe)
        if not np.any(below):
            return v, d1, d2
        v0 = self.inner.evaluate(self.g_reg)[0]
        gr = self.g_reg
        v_lin = v0 - 0.5 * self.a * (g * g - gr * gr) - self.b * (g - gr)
        return (np.where(below, v_lin, v), np.where(below, -(self.a * g + self.b), d1),
                np.where(below, -self.a, d2))

    def scaled(self, factor):
        return RegularizedLJ(self.inner.scaled(factor), self.g_reg, self.a * factor, self.b * factor)

    def force(self, g):
        return -self.evaluate(g)[1]


SSIPLaw = Union[ShortRangeSmallSep, LongRangeMonopole, LJComposite, RegularizedLJ]


def regularize_lj(inner: SSIPLawBase, g_reg: float) -> RegularizedLJ:
    if not g_reg > 0:
        raise ValueError("g_reg must be positive")
    _, d1, d2 = inner.evaluate(g_reg)
    a = -float(d2)
    b = -float(d1) - a * g_reg
    return RegularizedLJ(inner, float(g_reg), a, b)


def ssip_eval(law: SSIPLawBase, g_or_d):
    """Value and first derivative of a section-pair law at its natural argument."""
    if isinstance(law, (HardSphere, Exponential, Power, LennardJones)):
        raise TypeError("point-pair laws have no closed-form section-pair law here")
    v, d1, _ = law.evaluate(g_or_d)
    return v, d1


# --------------------------------------------------------------------------
# LJ characteristic quantities
# --------------------------------------------------------------------------


def lj_disk_characteristics(Phi_eq: float, r_eq: float, pair: CrossSectionPair):
    """Equilibrium gap, force-minimum gap and force minimum (per length^2) of the disk law."""
    law = LJComposite.from_lj(Phi_eq, r_eq, pair)
    ratio = law.c12_ss / law.c6_ss
    g_eq = (-17.0 / 5.0 * ratio) ** (1.0 / 6.0)
    g_fmin = (-323.0 / 35.0 * ratio) ** (1.0 / 6.0)
    f_min = 2.5 * law.c6_ss * g_fmin**-3.5 + 8.5 * law.c12_ss * g_fmin**-9.5
    return g_eq, g_fmin, f_min


def lj_cylinder_characteristics(Phi_eq: float, r_eq: float, pair: CrossSectionPair):
    """Same quantities for two parallel cylinders (force per unit length)."""
    lj = LennardJones(Phi_eq, r_eq)
    c6 = c_cylinder_small_sep(6, lj.k6, pair)
    c12 = c_cylinder_small_sep(12, lj.k12, pair)
    g_eq = (-5.0 * c12 / c6) ** (1.0 / 6.0)
    g_fmin = (-17.0 * c12 / c6) ** (1.0 / 6.0)
    f_min = 1.5 * c6 * g_fmin**-2.5 + 7.5 * c12 * g_fmin**-8.5
    return g_eq, g_fmin, f_min


def default_reg_gap(r_eq: float) -> float:
    """Cylinder equilibrium gap, independent of radii and densities."""
    pair = CrossSectionPair(1.0, 1.0, rho_product=1.0)
    return lj_cylinder_characteristics(-1.0, 1.0, pair)[0] * r_eq


# --------------------------------------------------------------------------
# analytic reference formulas for vdW cylinders and disks
# --------------------------------------------------------------------------

REFERENCE_CASES = ("cyl_par_ss", "cyl_par_ls", "cyl_perp_ss", "cyl_perp_ls", "disk_par_ss", "disk_par_ls")


def analytic_reference(case: str, pair: CrossSectionPair, sep, C_vdw: float):
    """Closed-form vdW interaction of cylinders or disks.

    ``sep`` is the gap for ``*_ss`` cases and the centroid distance for
    ``*_ls``. Parallel cylinders give energy per length, perpendicular ones
    total energy, disks energy per length squared.
    """
    A = pair.hamaker(C_vdw)
    R1, R2 = pair.R1, pair.R2
    s = np.asarray(sep, dtype=float)
    if np.any(s <= 0):
        raise ValueError("separation must be positive")
    rf = pair.radius_factor
    if case == "cyl_par_ss":
        return -A / 24.0 * rf * s**-1.5
    if case == "cyl_par_ls":
        return -3.0 * math.pi / 8.0 * A * R1**2 * R2**2 * s**-5.0
    if case == "cyl_perp_ss":
        return -A / 6.0 * math.sqrt(R1 * R2) / s
    if case == "cyl_perp_ls":
        return -math.pi / 2.0 * A * R1**2 * R2**2 * s**-4.0
    if case == "disk_par_ss":
        return -3.0 * A / 256.0 * rf * s**-2.5
    if case == "disk_par_ls":
        return -A * R1**2 * R2**2 * s**-6.0
    raise ValueError(f"unknown reference case {case!r}")
