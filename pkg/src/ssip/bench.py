"""Cost of the closed-form section law versus brute-force disk-disk integration.

For a batch of disk pairs the section law needs one evaluation per pair, the
area integral ``n_T^4`` point-pair evaluations with ``n_T`` points per
transverse dimension. Both paths run the same compiled kernel: a distance
and a power law, so measured time ratios reflect evaluation counts only.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import asdict, dataclass

import numba
import numpy as np

from .potentials import CrossSectionPair, Power, ShortRangeSmallSep, c_small_sep
from .quadrature import gauss_legendre

N_T_VALUES = (1, 2, 4, 8, 10, 16)


@dataclass
class BenchRecord:
    method: str
    n_t: int
    n_pairs: int
    evaluations: int
    wall_time_s: float
    runs: int
    value: float
    rel_error_vs_small_sep: float

    def row(self) -> dict:
        return asdict(self)


@numba.njit(cache=True)
def _batch(centers, pts1, w1, pts2, w2, coef, expo):
    """Sum over disk pairs ``p`` of ``sum_ij w1_i w2_j coef |x1_i - x2_j - c_p|^expo``.

    With one point per disk at the centroid this is the section law evaluated
    at the centroid distance; with the area rule it is the 4D integral.
    """
    total = 0.0
    for p in range(centers.shape[0]):
        cx, cy, cz = centers[p, 0], centers[p, 1], centers[p, 2]
        for i in range(pts1.shape[0]):
            acc = 0.0
            for j in range(pts2.shape[0]):
                dx = pts1[i, 0] - pts2[j, 0] - cx
                dy = pts1[i, 1] - pts2[j, 1] - cy
                dz = pts1[i, 2] - pts2[j, 2] - cz
                acc += w2[j] * coef * math.pow(math.sqrt(dx * dx + dy * dy + dz * dz), expo)
            total += w1[i] * acc
    return total


def _disk_rule(R: float, n_t: int):
    """Tensor Gauss rule with ``n_t`` radial and ``n_t`` angular points (area weights)."""
    r, wr = gauss_legendre(n_t)
    r, wr = 0.5 * R * (r + 1.0), 0.5 * R * wr
    t, wt = gauss_legendre(n_t)
    t, wt = math.pi * t, math.pi * wt
    rr, tt = np.meshgrid(r, t, indexing="ij")
    x = np.stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel(), np.zeros(rr.size)], axis=1)
    return x, np.outer(wr * r, wt).ravel()


def _median_time(fn, runs: int) -> tuple[float, float]:
    fn()  # compile and warm caches
    times = []
    value = 0.0
    for _ in range(runs):
        t0 = time.perf_counter()
        value = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), value


def run_complexity_bench(n_t_values=N_T_VALUES, n_pairs: int = 256, runs: int = 5,
                         R: float = 1.0, g_over_R: float = 0.05, repeat_ssip: int = 64):
    """Time both methods on ``n_pairs`` coplanar disk pairs per ``n_T``.

    The gaps of the batch are spread over ``g_over_R`` times [1, 2]. Accuracy
    of each budget is the relative error of a single pair at ``g_over_R``
    against the closed-form near-contact law. The section-law batch is
    repeated ``repeat_ssip`` times per timing to lift it above timer
    resolution, and the time divided back.
    """
    if runs < 5:
        raise ValueError("timings need at least five runs")
    pair = CrossSectionPair(R, R, rho_product=1.0)
    law = Power(-1.0, 6)
    g0 = g_over_R * R
    ref = float(ShortRangeSmallSep(c_small_sep(6, law.k, pair), 6).evaluate(g0)[0])
    gaps = g0 * (1.0 + np.linspace(0.0, 1.0, n_pairs))
    centers = np.zeros((n_pairs, 3))
    centers[:, 0] = -(gaps + 2 * R)
    records = []

    ssip_law = ShortRangeSmallSep(c_small_sep(6, law.k, pair), 6)
    one = np.zeros((1, 3))
    w_one = np.ones(1)
    # the section law in the gap is a shifted power law; the kernel works on
    # the centroid distance, so the gap offset enters through the centers
    shifted = centers.copy()
    shifted[:, 0] += 2 * R

    def ssip_call():
        v = 0.0
        for _ in range(repeat_ssip):
            v = _batch(shifted, one, w_one, one, w_one, ssip_law.c_ss, -ssip_law.m + 3.5)
        return v

    t_ssip, v_ssip = _median_time(ssip_call, runs)
    t_ssip /= repeat_ssip
    ssip_single = float(ssip_law.evaluate(g0)[0])
    records.append(BenchRecord("ssip_2d", 0, n_pairs, n_pairs, t_ssip, runs, v_ssip,
                               abs(ssip_single / ref - 1.0)))

    for n_t in n_t_values:
        x1, w1 = _disk_rule(R, n_t)
        x2, w2 = x1.copy(), w1.copy()
        x2[:, 0] = -x2[:, 0]  # angle 0 of disk 2 faces disk 1

        def oracle_call():
            return _batch(centers, x1, w1, x2, w2, law.k, -float(law.m))

        t_or, v_or = _median_time(oracle_call, runs)
        single = _batch(np.array([[-(g0 + 2 * R), 0.0, 0.0]]), x1, w1, x2, w2, law.k, -float(law.m))
        records.append(BenchRecord("oracle_4d", n_t, n_pairs, n_pairs * n_t**4, t_or, runs, v_or,
                                   abs(single / ref - 1.0)))
    return records


def speedups(records) -> list[tuple[int, float, float]]:
    """``(n_T, measured ratio, predicted n_T^4)`` against the section-law time."""
    base = next(r for r in records if r.method == "ssip_2d")
    return [(r.n_t, r.wall_time_s / base.wall_time_s, float(r.n_t**4))
            for r in records if r.method == "oracle_4d"]


def slope(records) -> float:
    """Least-squares slope of log speedup versus log n_T."""
    pts = [(math.log(n), math.log(s)) for n, s, _ in speedups(records)]
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])
