"""Centerline-only elastic beam: axial stretch plus bending, no torsion or shear.

Energy per element ``int (EA/2 eps^2 + EI/2 kappa^2) J dxi`` with
``eps = |r'|/|r0'| - 1`` and ``kappa^2 = |r' x r''|^2 / |r'|^6``. Both measures
are invariant to the curve parameter, so xi-derivatives are used directly.
Writing ``kappa^2`` through ``A = r'.r'``, ``B = r''.r''`` and ``C = r'.r''`` as
``B/A^2 - C^2/A^3`` keeps it smooth for straight configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import BeamElement, shape_functions
from .quadrature import gauss_legendre

_I3 = np.eye(3)


@dataclass(frozen=True)
class ElasticParams:
    EA: float
    EI: float

    def __post_init__(self):
        if not (self.EA > 0 and self.EI > 0):
            raise ValueError("EA and EI must be positive")

    @classmethod
    def circle(cls, E: float, R: float) -> "ElasticParams":
        """Solid circular section."""
        return cls(E * math.pi * R**2, E * math.pi * R**4 / 4.0)


def _bending_terms(a, b):
    """kappa^2 with its gradient (6,) and Hessian (6, 6) in the variables (a, b)."""
    A, B, C = a @ a, b @ b, a @ b
    A2, A3 = A * A, A * A * A
    f = B / A2 - C * C / A3
    fA = -2 * B / A3 + 3 * C * C / (A2 * A2)
    fB = 1 / A2
    fC = -2 * C / A3
    fAA = 6 * B / (A2 * A2) - 12 * C * C / (A3 * A2)
    fAB = -2 / A3
    fAC = 6 * C / (A2 * A2)
    fCC = -2 / A3
    z = np.zeros(3)
    gA = np.concatenate([2 * a, z])
    gB = np.concatenate([z, 2 * b])
    gC = np.concatenate([b, a])
    grad = fA * gA + fB * gB + fC * gC
    H = (fAA * np.outer(gA, gA) + fAB * (np.outer(gA, gB) + np.outer(gB, gA))
         + fAC * (np.outer(gA, gC) + np.outer(gC, gA)) + fCC * np.outer(gC, gC))
    H[:3, :3] += 2 * fA * _I3
    H[3:, 3:] += 2 * fB * _I3
    H[:3, 3:] += fC * _I3
    H[3:, :3] += fC * _I3
    return f, grad, H


def elastic_energy_residual_stiffness(elem: BeamElement, p: ElasticParams, n_gauss: int = 4,
                                      q: np.ndarray | None = None):
    """Energy, 12-entry internal force vector and 12x12 tangent of one element."""
    xi, w = gauss_legendre(n_gauss)
    _, dN, ddN = shape_functions(xi, elem.ref_length)
    Q = (elem.q if q is None else np.asarray(q)).reshape(4, 3)
    Q0 = elem.q0.reshape(4, 3)
    energy = 0.0
    res = np.zeros(12)
    K = np.zeros((12, 12))
    for i in range(len(xi)):
        a0 = dN[i] @ Q0
        J = float(np.linalg.norm(a0))
        if J <= 0:
            raise ValueError("nonpositive reference Jacobian")
        a = dN[i] @ Q
        b = ddN[i] @ Q
        na = float(np.linalg.norm(a))
        eps = na / J - 1.0
        kap2, g_b, H_b = _bending_terms(a, b)

        grad = 0.5 * p.EI * g_b
        grad[:3] += p.EA * eps * a / (na * J)
        H = 0.5 * p.EI * H_b
        H[:3, :3] += p.EA * (np.outer(a, a) / (na * na * J * J)
                             + eps / J * (_I3 / na - np.outer(a, a) / na**3))

        Bmat = np.vstack([np.kron(dN[i], _I3), np.kron(ddN[i], _I3)])
        wJ = w[i] * J
        energy += wJ * (0.5 * p.EA * eps * eps + 0.5 * p.EI * kap2)
        res += wJ * Bmat.T @ grad
        K += wJ * Bmat.T @ H @ Bmat
    return energy, res, K
