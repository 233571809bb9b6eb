import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from ssip.elastic import ElasticParams, elastic_energy_residual_stiffness
from ssip.geometry import BeamElement
from ssip.solver import Model, SolverConfig, newton_solve

P = ElasticParams(EA=10.0, EI=0.3)


def bent(seed=0, amp=0.05):
    e = BeamElement.straight([0, 0, 0], [1.0, 0, 0], 0.05)
    rng = np.random.default_rng(seed)
    return e.with_q(e.q + amp * rng.standard_normal(12))


def fd_gradient(f, q, h=1e-6):
    g = np.zeros_like(q)
    for i in range(q.size):
        d = np.zeros_like(q)
        d[i] = h
        g[i] = (f(q + d) - f(q - d)) / (2 * h)
    return g


class TestDerivatives:
    @pytest.mark.parametrize("seed", range(4))
    def test_residual_is_energy_gradient(self, seed):
        e = bent(seed)
        _, res, _ = elastic_energy_residual_stiffness(e, P)
        fd = fd_gradient(lambda q: elastic_energy_residual_stiffness(e, P, q=q)[0], e.q)
        assert np.abs(res - fd).max() <= 1e-6 * np.abs(res).max()

    @pytest.mark.parametrize("seed", range(4))
    def test_stiffness_is_residual_jacobian(self, seed):
        e = bent(seed)
        _, _, K = elastic_energy_residual_stiffness(e, P)
        h = 1e-6
        fd = np.zeros((12, 12))
        for i in range(12):
            d = np.zeros(12)
            d[i] = h
            fd[:, i] = (elastic_energy_residual_stiffness(e, P, q=e.q + d)[1]
                        - elastic_energy_residual_stiffness(e, P, q=e.q - d)[1]) / (2 * h)
        assert np.abs(K - fd).max() <= 1e-6 * np.abs(K).max()
        assert np.allclose(K, K.T, atol=1e-10 * np.abs(K).max())


class TestEnergy:
    def test_reference_state_is_stress_free(self):
        en, res, _ = elastic_energy_residual_stiffness(bent(amp=0.0), P)
        assert en == pytest.approx(0.0, abs=1e-14)
        assert np.abs(res).max() < 1e-12

    def test_uniform_stretch(self):
        e = BeamElement.straight([0, 0, 0], [2.0, 0, 0], 0.05)
        s = 1.01
        q = e.q.copy()
        q[6] *= s
        q[3:6] *= s
        q[9:12] *= s
        en, _, _ = elastic_energy_residual_stiffness(e, P, q=q)
        assert en == pytest.approx(0.5 * P.EA * (s - 1) ** 2 * 2.0, rel=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
    def test_rigid_motion_keeps_energy(self, seed, tx, ty, tz):
        e = bent(seed % 7)
        rot = Rotation.random(random_state=seed).as_matrix()
        Q = e.q.reshape(4, 3)
        moved = (Q @ rot.T).copy()
        moved[0] += (tx, ty, tz)
        moved[2] += (tx, ty, tz)
        e0 = elastic_energy_residual_stiffness(e, P)[0]
        e1 = elastic_energy_residual_stiffness(e, P, q=moved.ravel())[0]
        assert e1 == pytest.approx(e0, rel=1e-9, abs=1e-14)

    def test_circle_section(self):
        p = ElasticParams.circle(2.0, 0.5)
        assert p.EA == pytest.approx(2.0 * np.pi * 0.25)
        assert p.EI == pytest.approx(2.0 * np.pi * 0.0625 / 4)

    @pytest.mark.parametrize("ea,ei", [(0.0, 1.0), (1.0, -1.0)])
    def test_rejects_nonpositive(self, ea, ei):
        with pytest.raises(ValueError):
            ElasticParams(ea, ei)


def test_cantilever_tip_deflection():
    L, F = 1.0, 1e-6
    p = ElasticParams(EA=1e3, EI=1.0)
    m = Model()
    fid = m.add_straight_fiber([0, 0, 0], [L, 0, 0], 8, 0.01, p)
    nodes = m.fiber_nodes(fid)
    m.fix_node(nodes[0], range(6))
    m.f_ext[6 * nodes[-1] + 1] = F
    res = newton_solve(m, m.X0.ravel(), 1.0, SolverConfig(tol_residual=1e-11, tol_increment=1e-10))
    assert res.converged
    tip = res.X[6 * nodes[-1] + 1]
    assert tip == pytest.approx(F * L**3 / (3 * p.EI), rel=0.01)
