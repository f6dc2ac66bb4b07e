from __future__ import annotations

import numpy as np
import pytest

from cclab.sampling import (FitError, SamplerConfig, decay_rate,
                            decay_rate_from_summaries, ensemble_sweep,
                            evaluate_ensemble, fit_bounds, sample_haar,
                            sample_state, sample_w_class, summarize)


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(3, ensemble="ghz")
    with pytest.raises(ValueError):
        SamplerConfig(3, count=0)
    with pytest.raises(ValueError):
        SamplerConfig(4, ensemble="w_class")


def test_sample_determinism():
    cfg = SamplerConfig(3, count=5, master_seed=42)
    a = sample_state(cfg, 2)
    b = sample_state(cfg, 2)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    c = sample_state(cfg, 3)
    assert not np.allclose(a.amplitudes, c.amplitudes)


def test_sample_independent_of_count():
    # sample i depends only on (master_seed, i), not on how many are drawn
    a = sample_state(SamplerConfig(3, count=10, master_seed=1), 4)
    b = sample_state(SamplerConfig(3, count=1000, master_seed=1), 4)
    assert np.array_equal(a.amplitudes, b.amplitudes)


def test_w_class_support():
    cfg = SamplerConfig(3, ensemble="w_class", count=3, master_seed=0)
    for psi in sample_w_class(cfg):
        nz = np.nonzero(np.abs(psi.amplitudes) > 1e-12)[0]
        assert set(nz.tolist()) <= {0, 1, 2, 4}


def test_w_class_real_flag():
    cfg = SamplerConfig(3, ensemble="w_class", count=3, master_seed=0,
                        wclass_real_amplitudes=True)
    for psi in sample_w_class(cfg):
        assert np.allclose(psi.amplitudes.imag, 0.0)


def test_generator_guards():
    with pytest.raises(ValueError):
        list(sample_haar(SamplerConfig(3, ensemble="w_class", count=1)))
    with pytest.raises(ValueError):
        list(sample_w_class(SamplerConfig(3, count=1)))


def test_summarize_moments():
    vals = np.array([0.0, 1.0, 1.0, 2.0])
    s = summarize(vals, "mi", "pdc", 0.2, bins=4)
    assert s.mean == pytest.approx(1.0)
    assert s.median == pytest.approx(1.0)
    assert s.skewness == pytest.approx(0.0)
    assert s.frequencies.sum() == pytest.approx(1.0)
    assert len(s.bin_edges) == 5


def test_summarize_degenerate():
    s = summarize(np.full(10, 0.3), "mi", "pdc", 0.1)
    assert s.std_dev == pytest.approx(0.0, abs=1e-12)
    assert s.skewness == 0.0
    assert s.moment_skewness == 0.0


def test_evaluate_ensemble_thread_invariance():
    cfg = SamplerConfig(3, count=24, master_seed=5)
    one = evaluate_ensemble(cfg, "pdc", 0.3, ["dcmax", "mi"], threads=1)
    many = evaluate_ensemble(cfg, "pdc", 0.3, ["dcmax", "mi"], threads=8)
    assert np.array_equal(one, many)


def test_evaluate_ensemble_unknown_measure():
    cfg = SamplerConfig(3, count=2)
    with pytest.raises(ValueError):
        evaluate_ensemble(cfg, "pdc", 0.1, ["nope"])


def test_ensemble_sweep_shapes():
    cfg = SamplerConfig(3, count=30, master_seed=2)
    summaries = ensemble_sweep(cfg, "dpc", [0.2, 0.6], ["dcmax"], bins=10)
    assert len(summaries) == 2
    assert [s.p for s in summaries] == [0.2, 0.6]
    # depolarizing shrinks correlators monotonically
    assert summaries[1].mean < summaries[0].mean


@pytest.mark.parametrize("n", [3, 4, 5])
def test_dpc_discord_ordering(n):
    # heavier depolarizing always lowers the mean distributed discord
    cfg = SamplerConfig(n, count=30, master_seed=8)
    lo = evaluate_ensemble(cfg, "dpc", 0.2, ["cd"], threads=4)[:, 0]
    hi = evaluate_ensemble(cfg, "dpc", 0.6, ["cd"], threads=4)[:, 0]
    assert hi.mean() < lo.mean()


def test_decay_rate_exact_line():
    pts = [(0.2, 1.0), (0.4, 0.8), (0.6, 0.6)]
    assert decay_rate(pts) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        decay_rate([(0.2, 1.0)])
    with pytest.raises(ValueError):
        decay_rate([(0.2, 1.0), (0.2, 0.5)])


def test_decay_rate_from_summaries():
    cfg = SamplerConfig(3, count=20, master_seed=2)
    summaries = ensemble_sweep(cfg, "dpc", [0.2, 0.4, 0.6], ["dcmax"])
    assert decay_rate_from_summaries(summaries) < 0


def test_fit_bounds_recovers_band():
    rng = np.random.default_rng(0)
    x = rng.uniform(0, 2, 4000)
    y = x * rng.uniform(0.5, 1.0, 4000)  # band between y = x/2 and y = x
    bf = fit_bounds(x, y, 20)
    assert bf.m_u == pytest.approx(1.0, abs=0.05)
    assert bf.m_l == pytest.approx(0.5, abs=0.05)
    assert bf.residual < 0.05


def test_fit_bounds_errors():
    with pytest.raises(ValueError):
        fit_bounds([1, 2], [1, 2, 3])
    with pytest.raises(FitError):
        fit_bounds([1, 2, 3], [1, 2, 3], bin_count=10)
