"""Global assembly, Dirichlet handling, Newton iteration and adaptive load stepping.

Every node carries 6 DOFs (position, tangent). The residual is
``R = R_int + R_ia - lam * F_ext``; fixed DOFs follow
``X0 + lam * prescribed`` and their residual entries are the support reactions.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .broadphase import search
from .elastic import ElasticParams, elastic_energy_residual_stiffness
from .geometry import BeamElement
from .pair import SingularGapError, pair_contribution
from .potentials import SSIPLawBase
from .quadrature import QuadratureRule

log = logging.getLogger(__name__)


class SingularMatrixError(np.linalg.LinAlgError):
    pass


class LoadSteppingAborted(RuntimeError):
    pass


def linear_solve(K, R, pivot_tol: float = 1e-13):
    """Solve ``K x = R`` by LU with partial pivoting."""
    K = np.asarray(K, dtype=float)
    R = np.asarray(R, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError("K must be square")
    if not (np.all(np.isfinite(K)) and np.all(np.isfinite(R))):
        raise ValueError("non-finite entries")
    lu, piv = scipy.linalg.lu_factor(K, check_finite=False)
    diag = np.abs(np.diag(lu))
    if diag.size and diag.min() <= pivot_tol * max(diag.max(), np.finfo(float).tiny):
        raise SingularMatrixError("pivot below threshold")
    return scipy.linalg.lu_solve((lu, piv), R, check_finite=False)


@dataclass
class ModelElement:
    nodes: tuple[int, int]
    radius: float
    ref_length: float
    elastic: ElasticParams | None
    fiber: int


@dataclass
class Interaction:
    law: SSIPLawBase
    rule: QuadratureRule
    cutoff: float = math.inf
    exclude: str = "same_fiber"
    scale_with_load: bool = True


@dataclass
class SolverConfig:
    tol_residual: float = 1e-10
    tol_increment: float = 1e-7
    max_iters: int = 50
    increment_cap: float | None = None
    initial_step: float = 1.0
    min_step: float = 1.0 / 1024
    double_after: int = 4
    elastic_gauss: int = 4

    def __post_init__(self):
        if not (self.tol_residual > 0 and self.tol_increment > 0):
            raise ValueError("tolerances must be positive")
        if self.increment_cap is not None and not self.increment_cap > 0:
            raise ValueError("increment cap must be positive")
        if not 0 < self.min_step <= self.initial_step:
            raise ValueError("need 0 < min_step <= initial_step")


class Model:
    """Fibers of Hermite elements sharing nodes, with supports, loads and one interaction."""

    def __init__(self):
        self.X0 = np.zeros((0, 6))
        self.elements: list[ModelElement] = []
        self.fibers: list[list[int]] = []
        self.fixed = np.zeros(0, dtype=bool)
        self.prescribed = np.zeros(0)
        self.f_ext = np.zeros(0)
        self.interaction: Interaction | None = None

    @property
    def n_dof(self) -> int:
        return self.X0.size

    def add_nodes(self, positions, tangents) -> np.ndarray:
        new = np.hstack([np.asarray(positions, float), np.asarray(tangents, float)])
        first = len(self.X0)
        self.X0 = np.vstack([self.X0, new])
        self.fixed = np.concatenate([self.fixed, np.zeros(new.size, bool)])
        self.prescribed = np.concatenate([self.prescribed, np.zeros(new.size)])
        self.f_ext = np.concatenate([self.f_ext, np.zeros(new.size)])
        return np.arange(first, first + len(new))

    def add_straight_fiber(self, a, b, n_ele: int, radius: float,
                           elastic: ElasticParams | None) -> int:
        """Straight fiber from ``a`` to ``b``; returns the fiber id. ``elastic=None`` means rigid."""
        a, b = np.asarray(a, float), np.asarray(b, float)
        t = (b - a) / np.linalg.norm(b - a)
        pts = a + np.linspace(0, 1, n_ele + 1)[:, None] * (b - a)
        return self.add_fiber(pts, np.tile(t, (n_ele + 1, 1)), radius, elastic)

    def add_fiber(self, positions, tangents, radius: float, elastic: ElasticParams | None,
                  ref_lengths=None) -> int:
        ids = self.add_nodes(positions, tangents)
        positions = np.asarray(positions, float)
        fid = len(self.fibers)
        members = []
        for k in range(len(ids) - 1):
            length = (float(np.linalg.norm(positions[k + 1] - positions[k]))
                      if ref_lengths is None else float(ref_lengths[k]))
            self.elements.append(ModelElement((int(ids[k]), int(ids[k + 1])), radius, length, elastic, fid))
            members.append(len(self.elements) - 1)
        self.fibers.append(members)
        if elastic is None:
            self.fix_node(ids, range(6))
        return fid

    def fiber_nodes(self, fid: int) -> list[int]:
        els = [self.elements[e] for e in self.fibers[fid]]
        return [els[0].nodes[0]] + [e.nodes[1] for e in els]

    def dofs(self, node: int, comps=range(6)) -> list[int]:
        return [6 * node + c for c in comps]

    def fix_node(self, nodes, comps, displacement=None):
        """Fix components of nodes; ``displacement`` is the value reached at load factor 1."""
        for n in np.atleast_1d(nodes):
            for i, c in enumerate(comps):
                dof = 6 * int(n) + c
                self.fixed[dof] = True
                if displacement is not None:
                    self.prescribed[dof] = np.atleast_1d(displacement)[i]

    def element_dofs(self, e: ModelElement) -> np.ndarray:
        a, b = e.nodes
        return np.r_[6 * a:6 * a + 6, 6 * b:6 * b + 6]

    def beam_element(self, e: ModelElement, X: np.ndarray) -> BeamElement:
        idx = self.element_dofs(e)
        return BeamElement(X[idx], self.X0.ravel()[idx], e.radius, e.ref_length,
                           node_ids=e.nodes)

    def element_fibers(self) -> list[int]:
        return [e.fiber for e in self.elements]

    def constrained_values(self, lam: float) -> np.ndarray:
        return self.X0.ravel() + lam * self.prescribed


@dataclass
class Assembly:
    R: np.ndarray
    K: np.ndarray | None
    R_int: np.ndarray
    R_ia: np.ndarray
    energy_int: float
    energy_ia: float


def find_pairs(model: Model, X: np.ndarray):
    ia = model.interaction
    if ia is None:
        return []
    elems = [model.beam_element(e, X) for e in model.elements]
    return search(elems, ia.cutoff, exclude=ia.exclude, fibers=model.element_fibers())


def assemble(model: Model, X: np.ndarray, lam: float, pairs, config: SolverConfig | None = None,
             stiffness: bool = True) -> Assembly:
    """Global residual and tangent at state ``X`` and load factor ``lam``."""
    config = config or SolverConfig()
    n = model.n_dof
    R_int = np.zeros(n)
    R_ia = np.zeros(n)
    K = np.zeros((n, n)) if stiffness else None
    e_int = 0.0
    e_ia = 0.0
    elems = [model.beam_element(e, X) for e in model.elements]
    for e, be in zip(model.elements, elems):
        if e.elastic is None:
            continue
        en, r, k = elastic_energy_residual_stiffness(be, e.elastic, config.elastic_gauss)
        idx = model.element_dofs(e)
        e_int += en
        R_int[idx] += r
        if stiffness:
            K[np.ix_(idx, idx)] += k
    ia = model.interaction
    if ia is not None and pairs:
        law = ia.law.scaled(lam) if ia.scale_with_load else ia.law
        for i, j in pairs:
            c = pair_contribution(elems[i], elems[j], law, ia.rule, stiffness=stiffness)
            a, b = model.element_dofs(model.elements[i]), model.element_dofs(model.elements[j])
            e_ia += c.potential
            R_ia[a] += c.res1
            R_ia[b] += c.res2
            if stiffness:
                K[np.ix_(a, a)] += c.k11
                K[np.ix_(a, b)] += c.k12
                K[np.ix_(b, a)] += c.k21
                K[np.ix_(b, b)] += c.k22
    R = R_int + R_ia - lam * model.f_ext
    return Assembly(R, K, R_int, R_ia, e_int, e_ia)


@dataclass
class NewtonResult:
    converged: bool
    iterations: int
    residual_norms: list = field(default_factory=list)
    increment_norms: list = field(default_factory=list)
    X: np.ndarray | None = None
    reason: str = ""


def newton_solve(model: Model, X: np.ndarray, lam: float, config: SolverConfig,
                 pairs=None) -> NewtonResult:
    """Newton iteration on the free DOFs from ``X`` at load factor ``lam``.

    Converged when the free residual norm is below ``tol_residual`` and the
    last increment norm below ``tol_increment``. An active cap rescales the
    whole increment so no node position moves farther than the cap.
    """
    X = X.copy()
    fixed = model.fixed
    free = ~fixed
    X[fixed] = model.constrained_values(lam)[fixed]
    if pairs is None:
        pairs = find_pairs(model, X)
    out = NewtonResult(False, 0, X=X)
    for it in range(config.max_iters):
        try:
            asm = assemble(model, X, lam, pairs, config)
        except SingularGapError as exc:
            out.reason = f"singular gap: {exc}"
            return out
        r = asm.R[free]
        rn = float(np.linalg.norm(r))
        out.residual_norms.append(rn)
        if not math.isfinite(rn):
            out.reason = "non-finite residual"
            return out
        try:
            dx = -linear_solve(asm.K[np.ix_(free, free)], r)
        except (SingularMatrixError, ValueError) as exc:
            out.reason = f"linear solve failed: {exc}"
            return out
        full = np.zeros(model.n_dof)
        full[free] = dx
        if config.increment_cap is not None:
            move = np.linalg.norm(full.reshape(-1, 6)[:, :3], axis=1).max()
            if move > config.increment_cap:
                full *= config.increment_cap / move
        X += full
        out.iterations = it + 1
        dn = float(np.linalg.norm(full))
        out.increment_norms.append(dn)
        if rn < config.tol_residual and dn < config.tol_increment:
            out.converged = True
            return out
    out.reason = "maximum iterations reached"
    return out


@dataclass
class StepRecord:
    load_factor: float
    step: float
    iterations: int
    residual_norm: float
    increment_norm: float
    X: np.ndarray
    reactions: dict
    energy_int: float
    energy_ia: float
    work_ext: float
    momentum_imbalance: float
    target: bool

    def to_json(self) -> dict:
        return {
            "load_factor": self.load_factor, "step": self.step, "iterations": self.iterations,
            "residual_norm": self.residual_norm, "increment_norm": self.increment_norm,
            "reactions": {str(k): v for k, v in self.reactions.items()},
            "energy_internal": self.energy_int, "energy_interaction": self.energy_ia,
            "work_external": self.work_ext, "momentum_imbalance": self.momentum_imbalance,
            "at_target": self.target,
        }


def reactions(model: Model, R: np.ndarray) -> dict:
    """Support force per constrained node: position components of the residual."""
    out = {}
    for node in range(len(model.X0)):
        dof = model.dofs(node, range(3))
        if np.any(model.fixed[dof]):
            out[node] = [float(v) if model.fixed[d] else 0.0 for d, v in zip(dof, R[dof])]
    return out


def momentum_imbalance(R_ia: np.ndarray) -> float:
    """Largest per-axis sum of nodal interaction forces over the largest nodal force."""
    f = R_ia.reshape(-1, 6)[:, :3]
    scale = np.max(np.linalg.norm(f, axis=1)) if f.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(f.sum(axis=0))) / scale)


def adaptive_load_stepping(model: Model, config: SolverConfig, targets, X=None,
                           on_step=None) -> list[StepRecord]:
    """Advance the load factor through increasing ``targets``.

    A failed step is retried with half the step; after ``double_after``
    consecutive successes at a reduced step the step doubles, never beyond
    ``initial_step``. Steps never jump over a target.
    """
    X = model.X0.ravel().copy() if X is None else X.copy()
    lam = 0.0
    h0 = config.initial_step
    h = h0
    streak = 0
    history: list[StepRecord] = []
    work = 0.0
    total_iters = 0
    targets = sorted(float(t) for t in targets)
    for target in targets:
        while lam < target - 1e-14:
            new_lam = min(lam + h, target)
            res = newton_solve(model, X, new_lam, config)
            total_iters += res.iterations
            if not res.converged:
                log.info("step to %.6g failed (%s); halving", new_lam, res.reason)
                h *= 0.5
                streak = 0
                if h < config.min_step * (1 - 1e-12):
                    raise LoadSteppingAborted(
                        f"step size below minimum at load factor {lam:.6g}: {res.reason}")
                continue
            dX = res.X - X
            work += 0.5 * (lam + new_lam) * float(model.f_ext @ dX)
            asm = assemble(model, res.X, new_lam, find_pairs(model, res.X), config, stiffness=False)
            work += _support_work(model, asm.R, X, res.X)
            X = res.X
            step_taken = new_lam - lam
            lam = new_lam
            rec = StepRecord(lam, step_taken, res.iterations, res.residual_norms[-1],
                             res.increment_norms[-1], X.copy(), reactions(model, asm.R),
                             asm.energy_int, asm.energy_ia, work, momentum_imbalance(asm.R_ia),
                             abs(lam - target) < 1e-14)
            history.append(rec)
            if on_step is not None:
                on_step(rec)
            if h < h0:
                streak += 1
                if streak >= config.double_after:
                    h = min(2 * h, h0)
                    streak = 0
    return history


def _support_work(model: Model, R: np.ndarray, X_old: np.ndarray, X_new: np.ndarray) -> float:
    """Work done by reactions on prescribed motion (first-order estimate)."""
    d = (X_new - X_old) * model.fixed
    return float(R @ d) if np.any(d) else 0.0


def total_iterations(history) -> int:
    return int(sum(r.iterations for r in history))
