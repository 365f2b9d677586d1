"""WAV ingestion and mel-cepstral feature extraction.

Canonical input is 16 kHz mono PCM16.  Frames are taken every hop_ms
(default 10 ms) with a window_ms window (default 25 ms), pre-emphasised,
Hamming-windowed, and reduced to log mel filterbank magnitudes followed
by a type-II cosine transform.  An optional log frame energy (log of the
windowed frame's Euclidean norm) is appended.
"""

from __future__ import annotations

import io
import wave
from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

CANONICAL_RATE = 16000


class AudioFormatError(ValueError):
    pass


class TooShortError(ValueError):
    pass


@dataclass(frozen=True)
class AudioClip:
    samples: np.ndarray            # float64 in [-1, +1], mono
    sample_rate_hz: int = CANONICAL_RATE
    source_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        if self.samples.ndim != 1:
            raise AudioFormatError(f"channels={self.samples.ndim} (clips must be mono)")
        if self.sample_rate_hz <= 0:
            raise AudioFormatError(f"sample_rate={self.sample_rate_hz}")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz


@dataclass(frozen=True)
class FeatureConfig:
    window_ms: int = 25
    hop_ms: int = 10
    pre_emphasis_coeff: float = 0.97
    num_filters: int = 24
    num_cepstra: int = 12
    include_log_energy: bool = True
    energy_floor: float = 1e-10

    def __post_init__(self):
        if not 0 < self.hop_ms <= self.window_ms:
            raise ValueError(f"need 0 < hop_ms <= window_ms, got hop={self.hop_ms} window={self.window_ms}")
        if self.num_cepstra >= self.num_filters:
            raise ValueError("num_cepstra must be smaller than num_filters")
        if self.energy_floor <= 0:
            raise ValueError("energy_floor must be positive")

    @property
    def dims(self) -> int:
        return self.num_cepstra + (1 if self.include_log_energy else 0)


@dataclass(frozen=True)
class FeatureSequence:
    frames: np.ndarray             # (T, D)
    frame_hop_ms: int
    source_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "frames", np.asarray(self.frames, dtype=np.float64))

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def dims(self) -> int:
        return self.frames.shape[1]


def load_wav(path) -> AudioClip:
    """Read a RIFF/WAVE file; only PCM16 mono at 16 kHz is accepted."""
    with open(path, "rb") as fh:
        return _read_wav(fh, source_id=str(path))


def load_wav_bytes(data: bytes, source_id: str = "<bytes>") -> AudioClip:
    return _read_wav(io.BytesIO(data), source_id=source_id)


def _read_wav(fh, source_id: str) -> AudioClip:
    try:
        with wave.open(fh, "rb") as wav:
            if wav.getcomptype() != "NONE":
                raise AudioFormatError(f"compression={wav.getcomptype()}")
            if wav.getnchannels() != 1:
                raise AudioFormatError(f"channels={wav.getnchannels()}")
            if wav.getsampwidth() != 2:
                raise AudioFormatError(f"sample_width_bytes={wav.getsampwidth()}")
            if wav.getframerate() != CANONICAL_RATE:
                raise AudioFormatError(f"sample_rate={wav.getframerate()}")
            raw = wav.readframes(wav.getnframes())
    except wave.Error as exc:
        raise AudioFormatError(f"not a PCM WAVE file: {exc}") from exc
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    return AudioClip(samples=samples, sample_rate_hz=CANONICAL_RATE, source_id=source_id)


def save_wav(clip: AudioClip, path) -> None:
    # inverse of the load scaling (x / 32768), clipped to the int16 range
    pcm = np.clip(np.rint(clip.samples * 32768.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(clip.sample_rate_hz)
        wav.writeframes(pcm.tobytes())


def frame_count(num_samples: int, window: int, hop: int) -> int:
    if num_samples < window:
        raise TooShortError(f"need at least {window} samples, got {num_samples}")
    return (num_samples - window) // hop + 1


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filter_centers(num_filters: int, sample_rate: int) -> np.ndarray:
    """Center frequencies (Hz) of the triangular filters, filters spaced
    evenly on the mel scale between 0 and Nyquist."""
    edges = np.linspace(hz_to_mel(0.0), hz_to_mel(sample_rate / 2.0), num_filters + 2)
    return mel_to_hz(edges[1:-1])


def mel_filterbank(num_filters: int, nfft: int, sample_rate: int) -> np.ndarray:
    """(num_filters, nfft//2 + 1) triangular weights evaluated at the
    rfft bin frequencies."""
    edges_hz = mel_to_hz(np.linspace(hz_to_mel(0.0), hz_to_mel(sample_rate / 2.0), num_filters + 2))
    bin_freqs = np.arange(nfft // 2 + 1) * sample_rate / nfft
    weights = np.zeros((num_filters, len(bin_freqs)))
    for j in range(num_filters):
        lo, center, hi = edges_hz[j], edges_hz[j + 1], edges_hz[j + 2]
        up = (bin_freqs - lo) / (center - lo)
        down = (hi - bin_freqs) / (hi - center)
        weights[j] = np.maximum(0.0, np.minimum(up, down))
    return weights


def _next_pow2(n: int) -> int:
    size = 1
    while size < n:
        size *= 2
    return size


def extract_features(clip: AudioClip, cfg: FeatureConfig | None = None) -> FeatureSequence:
    """Mel-cepstral features for every frame; see the module docstring
    for the exact chain.  Raises TooShortError below one window."""
    cfg = cfg or FeatureConfig()
    rate = clip.sample_rate_hz
    window = round(cfg.window_ms * rate / 1000)
    hop = round(cfg.hop_ms * rate / 1000)
    signal = clip.samples
    n_frames = frame_count(len(signal), window, hop)

    emphasized = np.empty_like(signal)
    emphasized[0] = signal[0]
    emphasized[1:] = signal[1:] - cfg.pre_emphasis_coeff * signal[:-1]

    idx = np.arange(window)[None, :] + hop * np.arange(n_frames)[:, None]
    framed = emphasized[idx] * np.hamming(window)

    nfft = _next_pow2(window)
    magnitude = np.abs(np.fft.rfft(framed, nfft, axis=1))
    weights = mel_filterbank(cfg.num_filters, nfft, rate)
    filter_energies = np.maximum(magnitude @ weights.T, cfg.energy_floor)
    cepstra = dct(np.log(filter_energies), type=2, norm="ortho", axis=1)[:, :cfg.num_cepstra]

    if cfg.include_log_energy:
        power = np.maximum(np.sum(framed ** 2, axis=1), cfg.energy_floor)
        log_energy = 0.5 * np.log(power)
        feats = np.hstack([cepstra, log_energy[:, None]])
    else:
        feats = cepstra
    return FeatureSequence(frames=feats, frame_hop_ms=cfg.hop_ms, source_id=clip.source_id)


def dump_features(seq: FeatureSequence, path) -> None:
    """Debug dump: header line `#dims=D hop_ms=H`, one frame per line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#dims={seq.dims} hop_ms={seq.frame_hop_ms}\n")
        for row in seq.frames:
            fh.write(" ".join(f"{v:.10g}" for v in row) + "\n")


def load_features(path) -> FeatureSequence:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("#dims="):
            raise ValueError(f"bad feature dump header: {header}")
        parts = dict(p.split("=") for p in header.lstrip("#").split())
        rows = [[float(v) for v in line.split()] for line in fh if line.strip()]
    frames = np.array(rows, dtype=np.float64)
    if frames.shape[1] != int(parts["dims"]):
        raise ValueError("frame width disagrees with header dims")
    return FeatureSequence(frames=frames, frame_hop_ms=int(parts["hop_ms"]))
