"""Synthetic desk-scale corpus: speech-like harmonic utterances and a long noise recording."""

from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt
from scipy.signal import lfilter

from rlmask.common import Defaults, logger
from rlmask.common.types import FloatArray, PathType
from rlmask.common.utils import make_rng
from rlmask.features import Waveform, write_wav

SYLLABLES = ("ba", "di", "gu", "ma", "ni", "lo", "sa", "te", "ku", "pe", "ri", "zo")
# rough vowel formants (Hz), one pair per syllable vowel
FORMANTS = {"a": (730, 1090), "i": (270, 2290), "u": (300, 870), "o": (570, 840), "e": (530, 1840)}


class SynthConfig(BaseModel):
    """Shape of the generated corpus."""

    model_config = ConfigDict(frozen=True)

    n_utterances: PositiveInt = 24
    min_syllables: PositiveInt = 4
    max_syllables: PositiveInt = 8
    syllable_seconds: PositiveFloat = 0.18
    pause_seconds: PositiveFloat = 0.06
    noise_seconds: PositiveFloat = 30.0
    peak: float = Field(default=0.5, gt=0.0, lt=1.0)
    sample_rate: PositiveInt = Defaults.SAMPLE_RATE
    seed: int = 0


def _normalize(samples: FloatArray, peak: float) -> FloatArray:
    top = np.max(np.abs(samples))
    return samples * (peak / top) if top > 0 else samples


def _formant_gain(frequencies: FloatArray, formants: tuple[int, int]) -> FloatArray:
    gain = np.zeros_like(frequencies)
    for center, width in zip(formants, (90.0, 120.0)):
        gain += 1.0 / (1.0 + ((frequencies - center) / width) ** 2)
    return 0.05 + gain


def harmonic_syllable(
    vowel: str, n_samples: int, sample_rate: int, rng: np.random.Generator
) -> FloatArray:
    """A voiced syllable: a pitch glide with formant-shaped harmonics under a smooth envelope."""
    t = np.arange(n_samples) / sample_rate
    f_start, f_end = rng.uniform(100.0, 250.0, size=2)
    f0 = np.linspace(f_start, f_end, n_samples)
    phase = 2.0 * np.pi * np.cumsum(f0) / sample_rate
    n_harmonics = int(min(30, (sample_rate / 2 - 200) // max(f_start, f_end)))

    signal = np.zeros(n_samples)
    for k in range(1, n_harmonics + 1):
        amplitude = _formant_gain(k * f0, FORMANTS[vowel]) / k**0.5
        signal += amplitude * np.sin(k * phase + rng.uniform(0, 2 * np.pi))

    onset = min(n_samples // 4, int(0.03 * sample_rate))
    envelope = np.ones(n_samples)
    ramp = 0.5 - 0.5 * np.cos(np.linspace(0.0, np.pi, onset))
    envelope[:onset] = ramp
    envelope[-onset:] = ramp[::-1]
    # a short noisy consonant burst in front of the vowel
    burst = rng.normal(0.0, 0.3, size=onset) * np.exp(-np.arange(onset) / (0.3 * onset))
    signal[:onset] += burst
    return signal * envelope * (1.0 + 0.1 * np.sin(2 * np.pi * 4.0 * t))


def synth_utterance(cfg: SynthConfig, rng: np.random.Generator) -> tuple[Waveform, str]:
    """One utterance and its transcript (syllables separated by spaces)."""
    n_syllables = int(rng.integers(cfg.min_syllables, cfg.max_syllables + 1))
    syllables = [SYLLABLES[i] for i in rng.integers(0, len(SYLLABLES), size=n_syllables)]
    pause = np.zeros(int(cfg.pause_seconds * cfg.sample_rate))
    pieces = [pause]
    for syllable in syllables:
        length = int(cfg.syllable_seconds * cfg.sample_rate * rng.uniform(0.8, 1.3))
        pieces += [harmonic_syllable(syllable[-1], length, cfg.sample_rate, rng), pause]
    samples = _normalize(np.concatenate(pieces), cfg.peak)
    return Waveform(samples=samples, sample_rate=cfg.sample_rate), " ".join(syllables)


def synth_noise(cfg: SynthConfig, rng: np.random.Generator) -> Waveform:
    """Coloured background noise with intermittent high-pitched cries on top."""
    n_samples = int(cfg.noise_seconds * cfg.sample_rate)
    # pink-ish noise from a first-order low-pass on white noise
    background = lfilter([1.0], [1.0, -0.95], rng.normal(size=n_samples))
    background = _normalize(background, 1.0)

    t = np.arange(n_samples) / cfg.sample_rate
    cries = np.zeros(n_samples)
    position = 0
    while position < n_samples:
        position += int(rng.uniform(0.3, 1.5) * cfg.sample_rate)
        length = int(rng.uniform(0.3, 0.8) * cfg.sample_rate)
        if position + length > n_samples:
            break
        segment = slice(position, position + length)
        f0 = rng.uniform(350.0, 550.0) * (1.0 + 0.1 * np.sin(2 * np.pi * 3.0 * t[segment]))
        phase = 2.0 * np.pi * np.cumsum(f0) / cfg.sample_rate
        envelope = np.sin(np.linspace(0.0, np.pi, length))
        cries[segment] = envelope * sum(np.sin(k * phase) / k for k in range(1, 6))
        position += length
    samples = _normalize(background + 0.8 * _normalize(cries, 1.0), cfg.peak)
    return Waveform(samples=samples, sample_rate=cfg.sample_rate)


def generate_corpus(out_dir: PathType, cfg: SynthConfig = SynthConfig()) -> tuple[Path, Path]:
    """Write ``clean/utt###.wav`` with ``.txt`` transcripts and ``noise.wav`` under ``out_dir``.

    Returns:
        The clean directory and the noise file.
    """
    out_dir = Path(out_dir)
    clean_dir = out_dir / "clean"
    clean_dir.mkdir(parents=True, exist_ok=True)
    for index in range(cfg.n_utterances):
        waveform, transcript = synth_utterance(cfg, make_rng(cfg.seed, 1, index))
        write_wav(clean_dir / "utt{:03d}.wav".format(index), waveform)
        (clean_dir / "utt{:03d}.txt".format(index)).write_text(transcript + "\n", encoding="utf-8")
    noise_file = write_wav(out_dir / "noise.wav", synth_noise(cfg, make_rng(cfg.seed, 2)))
    logger.info("Wrote %s synthetic utterances and a noise file to %s", cfg.n_utterances, out_dir)
    return clean_dir, noise_file
