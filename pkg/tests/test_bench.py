import numpy as np
import pytest

from vortex_barcode.bench import bench_complexity, fit_kmn2, loglog_slope, pick_point_set, random_points, write_bench


def test_points_seeded():
    assert np.array_equal(random_points(100, 3), random_points(100, 3))
    assert not np.array_equal(random_points(100, 3), random_points(100, 4))
    assert not np.array_equal(random_points(100, 3, draw=0), random_points(100, 3, draw=1))


def test_pick_point_set_deterministic():
    a, m, draw = pick_point_set(120, 1, 0)
    b, m2, draw2 = pick_point_set(120, 1, 0)
    assert (m, draw) == (m2, draw2) and np.array_equal(a, b)


def test_fit_recovers_k():
    ns = np.array([100, 200, 400, 800])
    ms = np.array([1, 2, 1, 1])
    ts = 3e-7 * ms * ns**2
    k, r2 = fit_kmn2(ns, ms, ts)
    assert k == pytest.approx(3e-7) and r2 == pytest.approx(1.0)
    assert loglog_slope(ns, 5e-3 * ns**2.0) == pytest.approx(2.0)


@pytest.mark.parametrize("kw", [{"repeats": 2}, {"n_values": (400, 200, 800)}])
def test_bad_arguments(kw):
    with pytest.raises(ValueError):
        bench_complexity(**kw)


def test_write(tmp_path):
    fit = bench_complexity((40, 80, 120), repeats=3)
    timings, summary = write_bench(fit, tmp_path)
    lines = timings.read_text().splitlines()
    assert lines[0].startswith("n,m,draw,best_s,median_s,predicted_s")
    assert len(lines) == 4
    assert "loglog_slope=" in summary.read_text()
