"""Event-camera denoising: DIF/BIF filters, hardware model, baselines and metrics."""

from ._core import (
    ConfigError,
    EventStream,
    FilterConfig,
    FormatError,
    HwParams,
    IoError,
    MetricError,
    NoiseConfig,
    SceneConfig,
    StreamError,
    __version__,
    evaluate,
    generate_moving_bars,
    generate_noise,
    merge_streams,
    pipeline_model,
    pipeline_simulate,
    read_events,
    relabel_noise,
    run_filter,
    sparsity,
    stability,
    write_events,
)


def noisy_scene(rate_hz=1.0, seed=1, scene=None):
    """Default moving-bar scene mixed with labeled noise at `rate_hz` per pixel."""
    scene = scene or SceneConfig()
    noise = NoiseConfig()
    noise.width, noise.height = scene.width, scene.height
    noise.duration_us = scene.duration_us
    noise.time_step_us = scene.time_step_us
    noise.rate_hz = rate_hz
    noise.seed = seed
    return merge_streams(generate_moving_bars(scene), generate_noise(noise))


__all__ = [name for name in dir() if not name.startswith("_")]
