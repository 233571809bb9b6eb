"""Brute-force reference integrators for disk, ring and cylinder interactions.

These integrate point-pair laws directly over cross-section areas or contours
and serve as independent checks of the closed-form section-pair laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numba
import numpy as np

from .potentials import (Exponential, HardSphere, LennardJones, Power, PointPairLaw,
                         SSIPLawBase)
from .quadrature import QuadratureRule, composite_rule, geometric_breaks, graded_breaks

_POWER, _LJ, _EXP, _ZERO = 0, 1, 2, 3


def _law_code(law: PointPairLaw):
    if isinstance(law, Power):
        return _POWER, float(law.k), float(law.m)
    if isinstance(law, LennardJones):
        return _LJ, float(law.k12), float(law.k6)
    if isinstance(law, Exponential):
        return _EXP, float(law.C), float(law.r_c)
    if isinstance(law, HardSphere):
        return _ZERO, 0.0, 0.0
    raise TypeError(f"unsupported point-pair law {law!r}")


@numba.njit(cache=True, inline="always")
def _phi_r2(r2, kind, p1, p2):
    if kind == _POWER:
        if p2 == 6.0:
            inv = 1.0 / r2
            return p1 * inv * inv * inv
        if p2 == 1.0:
            return p1 / math.sqrt(r2)
        return p1 * r2 ** (-0.5 * p2)
    if kind == _LJ:
        inv = 1.0 / r2
        i6 = inv * inv * inv
        return p1 * i6 * i6 + p2 * i6
    if kind == _EXP:
        return p1 * math.exp(-math.sqrt(r2) / p2)
    return 0.0


@numba.njit(cache=True)
def _pair_sum(x1, w1, x2, w2, kind, p1, p2):
    """sum_i sum_j w1_i w2_j phi(|x1_i - x2_j|) over two point clouds."""
    total = 0.0
    n2 = x2.shape[0]
    for i in range(x1.shape[0]):
        a0, a1, a2 = x1[i, 0], x1[i, 1], x1[i, 2]
        s = 0.0
        for j in range(n2):
            d0 = a0 - x2[j, 0]
            d1 = a1 - x2[j, 1]
            d2 = a2 - x2[j, 2]
            s += w2[j] * _phi_r2(d0 * d0 + d1 * d1 + d2 * d2, kind, p1, p2)
        total += w1[i] * s
    return total


def pair_sum(law: PointPairLaw, x1, w1, x2, w2) -> float:
    kind, p1, p2 = _law_code(law)
    return _pair_sum(np.ascontiguousarray(x1, dtype=float), np.ascontiguousarray(w1, dtype=float),
                     np.ascontiguousarray(x2, dtype=float), np.ascontiguousarray(w2, dtype=float),
                     kind, p1, p2)


# --------------------------------------------------------------------------
# disk-disk area integral
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DiskConfig:
    """Two disks with centers ``d = g + R1 + R2`` apart along x.

    Disk 1 lies in the xy plane. Disk 2 is rotated about the center line by
    ``alpha`` (0: coplanar cross-sections of parallel fibers, pi/2: crossed
    fibers). Each polar dimension uses sectors times ``n_gp`` points. Radial
    sectors shrink by ``ratio`` toward the rim and angular sectors by
    ``ang_ratio`` toward the direction facing the other disk: near contact the
    integrand varies on the scale of the gap in both directions.
    """

    R1: float
    R2: float
    g: float
    alpha: float = 0.0
    n_rad_sectors: int = 8
    n_ang_sectors: int = 16
    n_gp: int = 16
    ratio: float = 2.0
    ang_ratio: float = 2.0

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("gap must be positive")
        if min(self.n_rad_sectors, self.n_ang_sectors, self.n_gp) < 1:
            raise ValueError("sector and Gauss counts must be at least one")

    @property
    def d(self) -> float:
        return self.g + self.R1 + self.R2

    @property
    def budget(self) -> tuple[int, int]:
        """Points per radial and per angular dimension."""
        return self.n_rad_sectors * self.n_gp, self.n_ang_sectors * self.n_gp

    def refined(self) -> "DiskConfig":
        """Same sectors with twice the Gauss points."""
        return replace(self, n_gp=2 * self.n_gp)


def _polar_points(R, n_rad, n_ang, n_gp, rad_ratio, ang_ratio, half=False):
    r, wr = composite_rule(geometric_breaks(0.0, R, n_rad, rad_ratio, toward="b"), n_gp)
    # angle 0 faces the other disk; sectors shrink toward it from both sides
    right = geometric_breaks(0.0, math.pi, max(n_ang // 2, 1), ang_ratio, toward="a")
    breaks = right if half else np.concatenate([-right[::-1], right[1:]])
    th, wt = composite_rule(breaks, n_gp)
    rr, tt = np.meshgrid(r, th, indexing="ij")
    ww = np.outer(wr * r, wt)
    return rr.ravel(), tt.ravel(), ww.ravel()


def disk_points(cfg: DiskConfig):
    """Quadrature clouds (points, weights) for both disks; disk 1 covers half the angles."""
    half = True
    r1, t1, w1 = _polar_points(cfg.R1, cfg.n_rad_sectors, cfg.n_ang_sectors, cfg.n_gp, cfg.ratio,
                               cfg.ang_ratio, half)
    x1 = np.stack([r1 * np.cos(t1), r1 * np.sin(t1), np.zeros_like(r1)], axis=1)
    if half:
        # rotating both disks by pi about the center line maps theta -> -theta
        w1 = 2.0 * w1
    r2, t2, w2 = _polar_points(cfg.R2, cfg.n_rad_sectors, cfg.n_ang_sectors, cfg.n_gp, cfg.ratio,
                               cfg.ang_ratio)
    e2 = np.array([0.0, math.cos(cfg.alpha), math.sin(cfg.alpha)])
    x2 = np.array([cfg.d, 0.0, 0.0]) + (-r2 * np.cos(t2))[:, None] * np.array([1.0, 0, 0]) \
        + (r2 * np.sin(t2))[:, None] * e2
    return x1, w1, x2, w2


def disk_disk_4d(law: PointPairLaw, cfg: DiskConfig, rho_product: float = 1.0) -> float:
    """Area-area integral of a point law over two disks (energy per length squared)."""
    x1, w1, x2, w2 = disk_points(cfg)
    return rho_product * pair_sum(law, x1, w1, x2, w2)


# --------------------------------------------------------------------------
# 2D reduction for coplanar disks
# --------------------------------------------------------------------------


def _cos_mapped(a, b, theta):
    """Map theta in [0, pi] to [a, b] via a cosine stretch; returns point and dp/dtheta."""
    half = 0.5 * (b - a)
    return a + half * (1.0 - np.cos(theta)), half * np.sin(theta)


def langbein_reduced_2d(m: float, R1: float, R2: float, g: float, n_gp: int = 16,
                        ratio: float = 2.0, k: float = 1.0, rho_product: float = 1.0) -> float:
    """Coplanar disk-pair integral of ``k r^-m`` reduced to two dimensions.

    Outer variable ``t``: distance from the center of disk 1 to a point of
    disk 2, weighted by the arc ``2 t psi`` of disk 2 at that distance. Inner
    variable ``p``: distance from that point to points of disk 1, weighted by
    the arc ``2 p phi`` inside disk 1. A cosine stretch removes the square-root
    endpoint behavior of both arcs, and the grids are graded toward the near
    side so the steep law is resolved at any gap.
    """
    if not g > 0:
        raise ValueError("gap must be positive")
    d = g + R1 + R2
    scale = math.sqrt(g / max(R1, R2))
    eta, w_eta = composite_rule(graded_breaks(0.0, math.pi, 0.05 * scale, ratio), n_gp)
    theta, w_th = composite_rule(graded_breaks(0.0, math.pi, 0.05 * scale, ratio), n_gp)

    t, dt = _cos_mapped(d - R2, d + R2, eta)
    cos_psi = np.clip((t * t + d * d - R2 * R2) / (2 * t * d), -1.0, 1.0)
    outer = 2.0 * t * np.arccos(cos_psi) * dt * w_eta

    p, dp = _cos_mapped((t - R1)[:, None], (t + R1)[:, None], theta[None, :])
    tt = t[:, None]
    cos_phi = np.clip((p * p + tt * tt - R1 * R1) / (2 * p * tt), -1.0, 1.0)
    inner = (k * p ** (-m) * 2.0 * p * np.arccos(cos_phi) * dp) @ w_th
    return float(rho_product * outer @ inner)


# --------------------------------------------------------------------------
# ring-ring contour integral
# --------------------------------------------------------------------------


def _angle_rule(n_sectors, n_gp, ratio):
    """Angles on [-pi, pi] with sectors shrinking geometrically toward 0 from both sides."""
    half = max(n_sectors // 2, 1)
    right = geometric_breaks(0.0, math.pi, half, ratio, toward="a")
    breaks = np.concatenate([-right[::-1], right[1:]])
    return composite_rule(breaks, n_gp)


def ring_points(center, e_near, e_side, R, n_sectors=8, n_gp=32, ratio=2.0):
    """Points and arc-length weights on a circle; angle 0 points along ``e_near``."""
    th, w = _angle_rule(n_sectors, n_gp, ratio)
    pts = np.asarray(center, float) + R * (np.cos(th)[:, None] * e_near + np.sin(th)[:, None] * e_side)
    return pts, R * w


def ring_ring_2d(law: PointPairLaw, R1: float, R2: float, g: float, alpha: float = 0.0,
                 sigma1: float = 1.0, sigma2: float = 1.0, n_sectors: int = 8, n_gp: int = 32,
                 ratio: float = 2.0) -> float:
    """Contour-contour integral of a point law between two circles (energy per length squared).

    Geometry as in :class:`DiskConfig`; ``sigma1``/``sigma2`` are surface
    charge densities so the far-field limit is ``lambda1 lambda2 phi(d)``.
    """
    if not g > 0:
        raise ValueError("gap must be positive")
    d = g + R1 + R2
    ex = np.array([1.0, 0, 0])
    x1, w1 = ring_points([0, 0, 0], ex, np.array([0, 1.0, 0]), R1, n_sectors, n_gp, ratio)
    e2 = np.array([0.0, math.cos(alpha), math.sin(alpha)])
    x2, w2 = ring_points([d, 0, 0], -ex, e2, R2, n_sectors, n_gp, ratio)
    return sigma1 * sigma2 * pair_sum(law, x1, w1, x2, w2)


# --------------------------------------------------------------------------
# rigid straight cylinders
# --------------------------------------------------------------------------


def cylinder_sections(length: float, n_ele: int, rule: QuadratureRule):
    """Axial positions and arc-length weights of the sections of a straight fiber."""
    h = length / n_ele
    starts = -0.5 * length + h * np.arange(n_ele)
    s = (starts[:, None] + 0.5 * h * (rule.points[None, :] + 1.0)).ravel()
    w = np.tile(0.5 * h * rule.weights, n_ele)
    return s, w


def _cylinder_frames(geometry: str, d: float, s1, s2):
    """Section centers of two rigid fibers at axis distance ``d``; fiber 1 runs along z."""
    c1 = np.zeros((s1.size, 3))
    c1[:, 2] = s1
    c2 = np.zeros((s2.size, 3))
    c2[:, 0] = d
    if geometry == "parallel":
        c2[:, 2] = s2
        t2 = np.array([0, 0, 1.0])
    elif geometry == "perpendicular":
        c2[:, 1] = s2
        t2 = np.array([0, 1.0, 0])
    else:
        raise ValueError(f"unknown geometry {geometry!r}")
    return c1, c2, t2


def rigid_cylinder_sweep(law, geometry: str, zeta: float, gaps, rule: QuadratureRule,
                         n_ele: int = 64, R1: float = 1.0, R2: float = 1.0,
                         ring: dict | None = None):
    """Total interaction of two straight rigid fibers of length ``zeta R1`` for each gap.

    With a section-pair ``law`` the double line integral is evaluated directly.
    With a point-pair ``law`` each section pair is replaced by the contour
    integral between its two circles. ``ring`` may hold ``sigma1``, ``sigma2``,
    the rule for section pairs closer than ``near_gap`` (``n_sectors``,
    ``n_gp``, ``ratio``; default 16 x 32) and for the rest (``far_sectors``,
    ``far_gp``; default 8 x 16).
    """
    length = zeta * R1
    s, w = cylinder_sections(length, n_ele, rule)
    out = []
    for g in np.atleast_1d(gaps):
        d = g + R1 + R2
        c1, c2, t2 = _cylinder_frames(geometry, d, s, s)
        if isinstance(law, SSIPLawBase):
            dist = np.linalg.norm(c1[:, None, :] - c2[None, :, :], axis=-1)
            v = law.evaluate_d(dist, R1 + R2)[0]
            total = float(w @ v @ w)
        else:
            total = _nested_ring_total(law, geometry, c1, c2, t2, w, R1, R2, ring or {})
        out.append((float(g), total))
    return out


def _nested_ring_total(law, geometry, c1, c2, t2, w, R1, R2, opts):
    sigma = opts.get("sigma1", 1.0) * opts.get("sigma2", 1.0)
    ratio = opts.get("ratio", 2.0)
    kind, p1, p2 = _law_code(law)
    fine = _angle_rule(opts.get("n_sectors", 16), opts.get("n_gp", 32), ratio)
    coarse = _angle_rule(opts.get("far_sectors", 8), opts.get("far_gp", 16), ratio)
    near = opts.get("near_gap", max(R1, R2))
    return sigma * _nested_rings(c1, c2, t2, w, R1, R2, fine[0], fine[1], coarse[0], coarse[1],
                                 near, geometry == "parallel", kind, p1, p2)


@numba.njit(cache=True)
def _ring_pair(c1, c2, t2, R1, R2, th, wt, kind, p1, p2):
    """Contour integral between ring 1 (in the xy plane) and ring 2 (normal ``t2``)."""
    nt = th.shape[0]
    x1 = np.empty((nt, 3))
    x2 = np.empty((nt, 3))
    dx = c2[0] - c1[0]
    dy = c2[1] - c1[1]
    dz = c2[2] - c1[2]
    # angle 0 of each ring points at the in-plane projection of the other center
    n1 = math.sqrt(dx * dx + dy * dy)
    a0, a1 = dx / n1, dy / n1
    pd = -(dx * t2[0] + dy * t2[1] + dz * t2[2])
    b0 = -dx - pd * t2[0]
    b1 = -dy - pd * t2[1]
    b2 = -dz - pd * t2[2]
    nb = math.sqrt(b0 * b0 + b1 * b1 + b2 * b2)
    b0, b1, b2 = b0 / nb, b1 / nb, b2 / nb
    s0 = t2[1] * b2 - t2[2] * b1
    s1 = t2[2] * b0 - t2[0] * b2
    s2 = t2[0] * b1 - t2[1] * b0
    for k in range(nt):
        ck, sk = math.cos(th[k]), math.sin(th[k])
        x1[k, 0] = c1[0] + R1 * (ck * a0 - sk * a1)
        x1[k, 1] = c1[1] + R1 * (ck * a1 + sk * a0)
        x1[k, 2] = c1[2]
        x2[k, 0] = c2[0] + R2 * (ck * b0 + sk * s0)
        x2[k, 1] = c2[1] + R2 * (ck * b1 + sk * s1)
        x2[k, 2] = c2[2] + R2 * (ck * b2 + sk * s2)
    acc = 0.0
    for k in range(nt):
        sk = 0.0
        for l in range(nt):
            e0 = x1[k, 0] - x2[l, 0]
            e1 = x1[k, 1] - x2[l, 1]
            e2 = x1[k, 2] - x2[l, 2]
            sk += wt[l] * _phi_r2(e0 * e0 + e1 * e1 + e2 * e2, kind, p1, p2)
        acc += wt[k] * sk
    return acc * R1 * R2


@numba.njit(cache=True)
def _nested_rings(c1, c2, t2, w, R1, R2, th_f, wt_f, th_c, wt_c, near, parallel, kind, p1, p2):
    """Sum over section pairs of ring-ring integrals; close pairs get the fine rule."""
    n = c1.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(n):
            if parallel and j < i:
                continue
            dist = math.sqrt((c2[j, 0] - c1[i, 0]) ** 2 + (c2[j, 1] - c1[i, 1]) ** 2
                             + (c2[j, 2] - c1[i, 2]) ** 2)
            if dist - R1 - R2 < near:
                v = _ring_pair(c1[i], c2[j], t2, R1, R2, th_f, wt_f, kind, p1, p2)
            else:
                v = _ring_pair(c1[i], c2[j], t2, R1, R2, th_c, wt_c, kind, p1, p2)
            v *= w[i] * w[j]
            if parallel and j > i:
                v *= 2.0
            total += v
    return total
