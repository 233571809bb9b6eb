"""Cubic Hermite centerline kinematics.

Each element carries 12 centerline DOFs ordered as
``[pos_a(3), tan_a(3), pos_b(3), tan_b(3)]``. Nodal tangents are unit-scale
(derivatives with respect to arc length); the ``l/2`` factor that maps them to
the element parameter ``xi in [-1, 1]`` lives in the basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

JACOBIAN_TOL = 1e-14


@dataclass(frozen=True)
class NodeDOF:
    position: np.ndarray
    tangent: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float).reshape(3))
        object.__setattr__(self, "tangent", np.asarray(self.tangent, dtype=float).reshape(3))


@dataclass
class BeamElement:
    """Two-node Hermite centerline element.

    ``q`` holds the current 12 DOFs and ``q0`` the reference ones. ``node_ids``
    is optional connectivity used by assembly and the broad phase.
    """

    q: np.ndarray
    q0: np.ndarray
    radius: float
    ref_length: float
    material_id: str = "default"
    node_ids: tuple[int, int] | None = None

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float).reshape(12).copy()
        self.q0 = np.asarray(self.q0, dtype=float).reshape(12).copy()
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if not self.ref_length > 0:
            raise ValueError("reference length must be positive")

    @classmethod
    def from_nodes(cls, node_a: NodeDOF, node_b: NodeDOF, radius: float,
                   ref_length: float | None = None, node_a0: NodeDOF | None = None,
                   node_b0: NodeDOF | None = None, **kw) -> "BeamElement":
        node_a0 = node_a if node_a0 is None else node_a0
        node_b0 = node_b if node_b0 is None else node_b0
        q = np.concatenate([node_a.position, node_a.tangent, node_b.position, node_b.tangent])
        q0 = np.concatenate([node_a0.position, node_a0.tangent, node_b0.position, node_b0.tangent])
        if ref_length is None:
            ref_length = float(np.linalg.norm(node_b0.position - node_a0.position))
        return cls(q, q0, radius, ref_length, **kw)

    @classmethod
    def straight(cls, a, b, radius: float, **kw) -> "BeamElement":
        """Straight undeformed element from point ``a`` to point ``b``."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        length = float(np.linalg.norm(b - a))
        if length == 0.0:
            raise ValueError("zero-length element")
        t = (b - a) / length
        q = np.concatenate([a, t, b, t])
        return cls(q, q.copy(), radius, length, **kw)

    @property
    def nodes(self) -> tuple[NodeDOF, NodeDOF]:
        return NodeDOF(self.q[0:3], self.q[3:6]), NodeDOF(self.q[6:9], self.q[9:12])

    def with_q(self, q: np.ndarray) -> "BeamElement":
        return BeamElement(q, self.q0, self.radius, self.ref_length, self.material_id, self.node_ids)


@dataclass(frozen=True)
class HermiteEval:
    """Basis values at one xi. Tangent functions already include ``l/2``."""

    H_d: np.ndarray
    H_t: np.ndarray
    dH_d: np.ndarray
    dH_t: np.ndarray
    ddH_d: np.ndarray
    ddH_t: np.ndarray

    def row(self, order: int = 0) -> np.ndarray:
        """Shape-function weights in DOF order for derivative ``order``."""
        d, t = [(self.H_d, self.H_t), (self.dH_d, self.dH_t), (self.ddH_d, self.ddH_t)][order]
        return np.array([d[0], t[0], d[1], t[1]])


def shape_functions(xi, l: float):
    """Vectorized basis: returns (N, dN, ddN), each of shape (n, 4) in DOF order.

    The 3D interpolation matrix is ``kron(N, I3)``; centerline points follow
    from ``N @ q.reshape(4, 3)``.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(np.abs(xi) > 1.0 + 1e-14):
        raise ValueError("xi outside [-1, 1]")
    h = 0.5 * l
    x2 = xi * xi
    x3 = x2 * xi
    N = np.stack([(2 - 3 * xi + x3) / 4, h * (1 - xi - x2 + x3) / 4,
                  (2 + 3 * xi - x3) / 4, h * (-1 - xi + x2 + x3) / 4], axis=-1)
    dN = np.stack([(-3 + 3 * x2) / 4, h * (-1 - 2 * xi + 3 * x2) / 4,
                   (3 - 3 * x2) / 4, h * (-1 + 2 * xi + 3 * x2) / 4], axis=-1)
    ddN = np.stack([6 * xi / 4, h * (-2 + 6 * xi) / 4,
                    -6 * xi / 4, h * (2 + 6 * xi) / 4], axis=-1)
    return N, dN, ddN


def hermite_basis(xi: float, l: float) -> HermiteEval:
    if not l > 0:
        raise ValueError("l must be positive")
    N, dN, ddN = (a[0] for a in shape_functions(xi, l))
    return HermiteEval(N[[0, 2]], N[[1, 3]], dN[[0, 2]], dN[[1, 3]], ddN[[0, 2]], ddN[[1, 3]])


def eval_centerline(elem: BeamElement, xi, q: np.ndarray | None = None):
    """Position and first two xi-derivatives. Scalar xi gives 3-vectors."""
    Q = (elem.q if q is None else np.asarray(q)).reshape(4, 3)
    N, dN, ddN = shape_functions(xi, elem.ref_length)
    out = N @ Q, dN @ Q, ddN @ Q
    if np.ndim(xi) == 0:
        return tuple(a[0] for a in out)
    return out


def jacobian(elem: BeamElement, xi):
    """Reference arc-length metric ``|dr0/dxi|``."""
    _, dr0, _ = eval_centerline(elem, np.atleast_1d(xi), elem.q0)
    J = np.linalg.norm(dr0, axis=-1)
    if np.any(J <= JACOBIAN_TOL * max(elem.ref_length, 1.0)):
        raise ValueError("degenerate reference geometry: nonpositive Jacobian")
    return J[0] if np.ndim(xi) == 0 else J


@dataclass(frozen=True)
class GapState:
    d: float
    g: float
    u: np.ndarray = field(repr=False)


def gap_state(r1, r2, R1: float, R2: float, eps: float | None = None) -> GapState:
    diff = np.asarray(r1, dtype=float) - np.asarray(r2, dtype=float)
    d = float(np.linalg.norm(diff))
    if eps is None:
        eps = 1e-12 * max(R1, R2)
    if d <= eps:
        raise ValueError("coincident centroids: gap direction undefined")
    return GapState(d, d - R1 - R2, diff / d)
