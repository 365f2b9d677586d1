"""Mel-cepstral features from a synthetic tone."""

import math

import numpy as np

from bolkhoj.audio import AudioClip, FeatureConfig, extract_features, mel_filter_centers

rate = 16000
cfg = FeatureConfig()

# half a second of a 440 Hz tone with a little noise
rng = np.random.default_rng(0)
t = np.arange(8000) / rate
clip = AudioClip(samples=0.6 * np.sin(2 * math.pi * 440.0 * t) + rng.normal(0, 0.01, 8000),
                 source_id="demo-tone")

feats = extract_features(clip, cfg)
print(f"{feats.num_frames} frames x {feats.dims} dims "
      f"(window {cfg.window_ms} ms, hop {cfg.hop_ms} ms)")
print("first frame:", np.round(feats.frames[0], 3))

# the frame count obeys floor((N - W) / H) + 1
window, hop = 400, 160
print("frame-count formula:", (len(clip.samples) - window) // hop + 1)

# filter centers are spaced evenly on the mel scale
centers = mel_filter_centers(cfg.num_filters, rate)
print("mel filter centers (Hz):", np.round(centers[:6], 1), "...")
