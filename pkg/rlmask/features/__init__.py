"""Time-domain audio to chunked mel power features and back."""

from .audio_io import export_matrix, read_wav, write_wav
from .chunks import chunk_masks_to_frames, flatten_chunks, make_chunks, make_context
from .extractor import FeatureExtractor, UtteranceFeatures
from .mel import make_mel_filterbank, mel_power, project_mask_to_linear
from .metrics import log_spectral_distance, segmental_snr
from .reconstruct import reconstruct
from .stft import istft, stft
from .types import (
    ChunkSequence,
    ComplexSpectrogram,
    MelFilterbank,
    MelPowerSpectrogram,
    StftConfig,
    Waveform,
)

__all__ = [
    "ChunkSequence",
    "ComplexSpectrogram",
    "FeatureExtractor",
    "MelFilterbank",
    "MelPowerSpectrogram",
    "StftConfig",
    "UtteranceFeatures",
    "Waveform",
    "chunk_masks_to_frames",
    "export_matrix",
    "flatten_chunks",
    "istft",
    "log_spectral_distance",
    "make_chunks",
    "make_context",
    "make_mel_filterbank",
    "mel_power",
    "project_mask_to_linear",
    "read_wav",
    "reconstruct",
    "segmental_snr",
    "stft",
    "write_wav",
]
