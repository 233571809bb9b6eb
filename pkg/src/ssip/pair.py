"""Element-pair interaction by two nested Gauss loops over the centerlines.

For every pair of quadrature points the section law is evaluated at the
centroid distance ``d`` (or the gap ``d - R1 - R2``), with ``u = (r1 - r2)/d``.
With ``pi', pi''`` the law's derivatives and ``W`` the product of the
reference arc-length weights,

    res1 =  sum W pi' H1^T u
    res2 = -sum W pi' H2^T u
    k11  =  sum W H1^T [pi'' u u^T + pi'/d (I - u u^T)] H1

and ``k12 = -(...) H2``, ``k21 = k12^T``, ``k22`` as ``k11`` with ``H2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import BeamElement, eval_centerline, jacobian, shape_functions
from .potentials import SSIPLawBase
from .quadrature import QuadratureRule


class SingularGapError(ValueError):
    """A quadrature point pair reached a gap the law cannot evaluate."""

    def __init__(self, xi1, xi2, value):
        super().__init__(f"singular separation {value:.3e} at xi1={xi1:.6f}, xi2={xi2:.6f}")
        self.xi1, self.xi2, self.value = xi1, xi2, value


@dataclass
class PairContribution:
    potential: float
    res1: np.ndarray
    res2: np.ndarray
    k11: np.ndarray | None = None
    k12: np.ndarray | None = None
    k21: np.ndarray | None = None
    k22: np.ndarray | None = None


@dataclass
class ElementSamples:
    """Quadrature data of one element: shape functions, points, weights."""

    N: np.ndarray
    r: np.ndarray
    w: np.ndarray
    xi: np.ndarray


def sample(elem: BeamElement, rule: QuadratureRule, q: np.ndarray | None = None) -> ElementSamples:
    xi = rule.points
    N = shape_functions(xi, elem.ref_length)[0]
    Q = (elem.q if q is None else q).reshape(4, 3)
    return ElementSamples(N, N @ Q, rule.weights * jacobian(elem, xi), xi)


def _evaluate(s1: ElementSamples, s2: ElementSamples, law: SSIPLawBase, radius_sum: float):
    diff = s1.r[:, None, :] - s2.r[None, :, :]
    d = np.linalg.norm(diff, axis=-1)
    arg = d - radius_sum if law.uses_gap else d
    coincident = d <= 1e-12 * radius_sum
    if np.any(coincident):
        i, j = np.argwhere(coincident)[0]
        raise SingularGapError(s1.xi[i], s2.xi[j], arg[i, j])
    try:
        v, d1, d2 = law.evaluate_d(d, radius_sum)
    except ValueError:
        hits = np.argwhere(arg <= 0)
        if hits.size == 0:
            raise
        i, j = hits[0]
        raise SingularGapError(s1.xi[i], s2.xi[j], arg[i, j]) from None
    W = s1.w[:, None] * s2.w[None, :]
    return diff / d[..., None], d, W, v, d1, d2


def pair_contribution(e1: BeamElement, e2: BeamElement, law: SSIPLawBase, rule: QuadratureRule,
                      rule2: QuadratureRule | None = None, stiffness: bool = True) -> PairContribution:
    s1 = sample(e1, rule)
    s2 = sample(e2, rule if rule2 is None else rule2)
    u, d, W, v, d1, d2 = _evaluate(s1, s2, law, e1.radius + e2.radius)
    potential = float(np.sum(W * v))
    F = (W * d1)[..., None] * u
    res1 = np.einsum("ia,ijk->ak", s1.N, F).ravel()
    res2 = -np.einsum("jb,ijk->bk", s2.N, F).ravel()
    out = PairContribution(potential, res1, res2)
    if stiffness:
        uu = u[..., :, None] * u[..., None, :]
        M = (W * d2)[..., None, None] * uu + (W * d1 / d)[..., None, None] * (np.eye(3) - uu)
        k11 = np.einsum("ia,ikl,ib->akbl", s1.N, M.sum(axis=1), s1.N).reshape(12, 12)
        k22 = np.einsum("ja,jkl,jb->akbl", s2.N, M.sum(axis=0), s2.N).reshape(12, 12)
        k12 = -np.einsum("ia,ijkl,jb->akbl", s1.N, M, s2.N).reshape(12, 12)
        out.k11, out.k12, out.k21, out.k22 = k11, k12, k12.T.copy(), k22
    return out


def pair_potential(e1, e2, law, rule) -> float:
    s1, s2 = sample(e1, rule), sample(e2, rule)
    _, _, W, v, _, _ = _evaluate(s1, s2, law, e1.radius + e2.radius)
    return float(np.sum(W * v))


def pair_residual(e1, e2, law, rule):
    c = pair_contribution(e1, e2, law, rule, stiffness=False)
    return c.res1, c.res2


def pair_stiffness(e1, e2, law, rule):
    c = pair_contribution(e1, e2, law, rule)
    return c.k11, c.k12, c.k21, c.k22


def line_loads(e1: BeamElement, e2: BeamElement, law: SSIPLawBase, rule: QuadratureRule):
    """Interaction force per unit length acting on each element at its Gauss points.

    Returns ``(r1, f1, r2, f2)`` with positions and line loads ``f = -dPi/dr``
    per unit reference length.
    """
    s1, s2 = sample(e1, rule), sample(e2, rule)
    u, _, _, _, d1, _ = _evaluate(s1, s2, law, e1.radius + e2.radius)
    f = -d1[..., None] * u
    f1 = np.einsum("j,ijk->ik", s2.w, f)
    f2 = -np.einsum("i,ijk->jk", s1.w, f)
    return s1.r, f1, s2.r, f2


def _rel_err(a, b):
    scale = np.max(np.abs(a))
    return float(np.max(np.abs(a - b)) / scale) if scale > 0 else float(np.max(np.abs(b)))


def fd_verify(e1: BeamElement, e2: BeamElement, law: SSIPLawBase, rule: QuadratureRule,
              h: float = 1e-6):
    """Central-difference check of residuals against the potential and stiffness against residuals.

    The step is ``h`` times the smallest centroid distance between the two
    centerlines, a length on which the integrand varies. Errors are reported
    as the largest deviation divided by the largest analytic entry.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    exact = pair_contribution(e1, e2, law, rule)
    s1, s2 = sample(e1, rule), sample(e2, rule)
    dmin = np.min(np.linalg.norm(s1.r[:, None] - s2.r[None], axis=-1))
    if law.uses_gap:
        dmin = min(dmin, dmin - e1.radius - e2.radius)
    step = h * dmin
    q = np.concatenate([e1.q, e2.q])

    def split(x):
        return e1.with_q(x[:12]), e2.with_q(x[12:])

    res = np.concatenate([exact.res1, exact.res2])
    K = np.block([[exact.k11, exact.k12], [exact.k21, exact.k22]])
    res_fd = np.empty(24)
    K_fd = np.empty((24, 24))
    for i in range(24):
        qp, qm = q.copy(), q.copy()
        qp[i] += step
        qm[i] -= step
        cp = pair_contribution(*split(qp), law, rule, stiffness=False)
        cm = pair_contribution(*split(qm), law, rule, stiffness=False)
        res_fd[i] = (cp.potential - cm.potential) / (2 * step)
        K_fd[:, i] = (np.concatenate([cp.res1, cp.res2]) - np.concatenate([cm.res1, cm.res2])) / (2 * step)
    return _rel_err(res, res_fd), _rel_err(K, K_fd)


def centerline_distance_samples(e1: BeamElement, e2: BeamElement, n: int = 64) -> float:
    """Smallest distance between densely sampled points of two centerlines (an upper bound)."""
    xi = np.linspace(-1.0, 1.0, n)
    r1 = eval_centerline(e1, xi)[0]
    r2 = eval_centerline(e2, xi)[0]
    return float(np.min(np.linalg.norm(r1[:, None] - r2[None], axis=-1)))
