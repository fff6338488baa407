"""Versioned binary model files: a JSON header line followed by little-endian float64 data."""

from pathlib import Path

import numpy as np
from pydantic import BaseModel, ValidationError

from rlmask.common import Defaults
from rlmask.common.exceptions import ModelFormatError
from rlmask.common.types import PathType
from rlmask.policy.network import LayerParams, Network

NETWORK_FORMAT = "rlmask-network"
FLOAT_DTYPE = np.dtype("<f8")


class NetworkHeader(BaseModel):
    format: str = NETWORK_FORMAT
    version: int = Defaults.FORMAT_VERSION
    layer_sizes: list[int]
    hidden_activation: str
    output_activation: str
    log_input: bool
    normalized: bool


def save_network(net: Network, path: PathType) -> Path:
    """Write header, then normalization statistics, then each layer's weights and bias."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = NetworkHeader(
        layer_sizes=net.layer_sizes,
        hidden_activation=net.hidden_activation,
        output_activation=net.output_activation,
        log_input=net.log_input,
        normalized=net.input_mean is not None,
    )
    blocks = []
    if header.normalized:
        blocks += [net.input_mean, net.input_std]
    for layer in net.layers:
        blocks += [layer.weights, layer.bias]
    payload = b"".join(np.ascontiguousarray(b, dtype=FLOAT_DTYPE).tobytes() for b in blocks)
    path.write_bytes(header.model_dump_json().encode("utf-8") + b"\n" + payload)
    return path


def load_network(path: PathType) -> Network:
    """Read a network written by ``save_network``; the round trip is bit-exact."""
    path = Path(path)
    if not path.is_file():
        raise ModelFormatError(path, "file does not exist")
    header_line, _, payload = path.read_bytes().partition(b"\n")
    try:
        header = NetworkHeader.model_validate_json(header_line)
    except ValidationError as e:
        raise ModelFormatError(path, "bad header: {}".format(e)) from e
    if header.format != NETWORK_FORMAT or header.version != Defaults.FORMAT_VERSION:
        raise ModelFormatError(
            path, "unsupported format {} v{}".format(header.format, header.version)
        )

    sizes = header.layer_sizes
    expected = (2 * sizes[0] if header.normalized else 0) + sum(
        o * i + o for i, o in zip(sizes, sizes[1:])
    )
    values = np.frombuffer(payload, dtype=FLOAT_DTYPE)
    if values.shape[0] != expected:
        raise ModelFormatError(
            path, "expected {} values, found {}".format(expected, values.shape[0])
        )

    offset = 0

    def take(count: int) -> np.ndarray:
        nonlocal offset
        block = values[offset : offset + count].astype(np.float64)
        offset += count
        return block

    stats = {}
    if header.normalized:
        stats = {"input_mean": take(sizes[0]), "input_std": take(sizes[0])}
    layers = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        weights = take(fan_in * fan_out).reshape(fan_out, fan_in)
        layers.append(LayerParams(weights=weights, bias=take(fan_out)))

    try:
        return Network(
            layers=layers,
            hidden_activation=header.hidden_activation,
            output_activation=header.output_activation,
            log_input=header.log_input,
            **stats,
        )
    except ValidationError as e:
        raise ModelFormatError(path, str(e)) from e
