import pytest

from ssip.bench import run_complexity_bench, slope, speedups


def test_small_bench():
    recs = run_complexity_bench(n_t_values=(2, 4, 8), n_pairs=64, runs=5)
    assert [r.method for r in recs] == ["ssip_2d", "oracle_4d", "oracle_4d", "oracle_4d"]
    assert [r.evaluations for r in recs[1:]] == [64 * 16, 64 * 256, 64 * 4096]
    assert recs[0].rel_error_vs_small_sep == pytest.approx(0.0, abs=1e-12)
    # a uniform transverse rule is far from the near-contact law at this gap
    assert all(r.rel_error_vs_small_sep > 0.01 for r in recs[1:])
    assert 3.0 < slope(recs) < 5.0
    assert speedups(recs)[-1][1] > 100


def test_needs_five_runs():
    with pytest.raises(ValueError):
        run_complexity_bench(runs=3)
