import numpy as np
import pytest

import evfilt


def small_scene(rate_hz=2.0, seed=3):
    sc = evfilt.SceneConfig()
    sc.width, sc.height, sc.duration_us = 96, 64, 200_000
    return evfilt.noisy_scene(rate_hz, seed, sc)


def test_arrays_round_trip(tmp_path):
    s = evfilt.EventStream.from_arrays([1, 5, 9], [0, 3, 7], [1, 2, 3], [0, 1, 2], 8, 4)
    assert len(s) == 3
    assert s.t.tolist() == [1, 5, 9]
    assert s.p.dtype == np.uint8
    for name in ("s.evt", "s.csv"):
        evfilt.write_events(s, tmp_path / name)
        assert evfilt.read_events(tmp_path / name) == s


def test_bad_inputs_raise():
    with pytest.raises(evfilt.FormatError):
        evfilt.EventStream.from_arrays([1], [8], [0], [0], 8, 4)
    with pytest.raises(ValueError):
        evfilt.EventStream.from_arrays([5, 4], [0, 0], [0, 0], [0, 0], 8, 4)
    with pytest.raises(OSError):
        evfilt.read_events("/nonexistent/x.evt")
    cfg = evfilt.FilterConfig()
    cfg.scale = 7
    with pytest.raises(evfilt.ConfigError):
        evfilt.run_filter(small_scene(), "dif", cfg)


def test_noise_is_labeled_and_seeded():
    nc = evfilt.NoiseConfig()
    nc.width, nc.height, nc.duration_us, nc.rate_hz, nc.seed = 64, 48, 500_000, 5.0, 9
    a, b = evfilt.generate_noise(nc), evfilt.generate_noise(nc)
    assert a == b
    assert set(np.unique(a.p)) <= {2, 3}
    expected = 64 * 48 * 5.0 * 0.5
    assert abs(len(a) - expected) < 5 * np.sqrt(expected)


def test_filters_separate_signal_from_noise():
    s = small_scene()
    for algo in ("dif", "bif", "dif-hw", "nnb", "stcf2"):
        scores, passed = evfilt.run_filter(s, algo)
        assert scores.shape == (len(s),) and passed.dtype == bool
        m = evfilt.evaluate(s, scores)
        assert 0.5 < m["auroc"] <= 1.0, algo
        fpr, tpr = m["roc"]
        assert fpr[0] == 0 and tpr[-1] == 1


def test_pass_flag_matches_score_threshold():
    s = small_scene()
    cfg = evfilt.FilterConfig()
    cfg.filter_length_us = 1500
    scores, passed = evfilt.run_filter(s, "dif", cfg)
    assert np.array_equal(passed, scores < 1500)


def test_pipeline_matches_integer_model():
    s = small_scene()
    scores, passed = evfilt.run_filter(s, "dif-hw")
    p_scores, p_passed, stats = evfilt.pipeline_simulate(s)
    assert np.array_equal(passed, p_passed)
    assert np.array_equal(scores, p_scores)
    assert stats["events_processed"] == len(s)


def test_throughput_model():
    st = evfilt.pipeline_model(1280, 720, clock_mhz=312.70)
    assert round(st["effective_meps"], 2) == 312.52
    assert st["latency_cycles"] == 30


def test_sparsity_and_stability():
    mean, median = evfilt.sparsity(small_scene(0.0), 20_000)
    assert 0.0 < mean < 1.0 and 0.0 < median < 1.0
    assert evfilt.stability({1.0: 0.9, 5.0: 0.9}) == 0.0
    assert evfilt.stability({1.0: 1.0, 5.0: 0.9}) == pytest.approx(10.0)
