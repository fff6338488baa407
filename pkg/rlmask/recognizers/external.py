"""Client for external recognizer processes speaking the JSON-lines protocol."""

from __future__ import annotations

import subprocess
import threading
from dataclasses import dataclass
from pathlib import Path
from queue import Empty, Queue
from time import sleep
from typing import Optional, Tuple, Type

from rlmask.common import logger
from rlmask.common.exceptions import RecognizerFailure
from rlmask.common.types import PathType
from rlmask.recognizers.base import ErrorRate, RecognitionRequest, RecognizerEndpoint, Transcript
from rlmask.recognizers.cer import cer
from rlmask.recognizers.protocol import (
    ProtocolError,
    RecognizeRequest,
    decode_response,
    encode_request,
)

SENTINEL = object()  # stdout closed


class ProcessLost(Exception):
    """The recognizer process died or stopped answering."""


@dataclass
class RetryConfig:
    """Retry behavior of an external recognizer.

    Attributes:
        max_retries (int): Maximum number of restarts for one request.
        wait_time (float): Base wait time between retries in seconds.
        backoff_factor (float): Multiplicative factor for exponential backoff.
        exceptions_to_retry (Tuple[Type[Exception]]): Exceptions that trigger a restart.
    """

    max_retries: int = 1
    wait_time: float = 0.5
    backoff_factor: float = 2.0
    exceptions_to_retry: Tuple[Type[Exception], ...] = (ProcessLost,)


class ExternalRecognizer:
    """One child process; requests to it are serialized."""

    def __init__(self, endpoint: RecognizerEndpoint, retry_config: Optional[RetryConfig] = None):
        if not endpoint.command:
            raise ValueError("external recognizer endpoint has no command")
        self.endpoint = endpoint
        self.retry_config = retry_config or RetryConfig()
        self._process: Optional[subprocess.Popen] = None
        self._lines: Queue = Queue()
        self._lock = threading.Lock()

    def __repr__(self):
        return "ExternalRecognizer(command={})".format(self.endpoint.command)

    def __enter__(self) -> ExternalRecognizer:
        self.start()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    @property
    def is_running(self) -> bool:
        return self._process is not None and self._process.poll() is None

    def start(self) -> None:
        if self.is_running:
            return
        logger.info("Starting recognizer process: %s", " ".join(self.endpoint.command))
        self._process = subprocess.Popen(
            self.endpoint.command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            bufsize=1,
        )
        self._lines = Queue()
        reader = threading.Thread(
            target=self._read_stdout, args=(self._process, self._lines), daemon=True
        )
        reader.start()

    @staticmethod
    def _read_stdout(process: subprocess.Popen, lines: Queue) -> None:
        for line in process.stdout:
            lines.put(line)
        lines.put(SENTINEL)

    def close(self, kill: bool = False) -> None:
        process, self._process = self._process, None
        if process is None:
            return
        if not kill:
            try:
                process.stdin.close()
                process.wait(timeout=self.endpoint.timeout)
            except (OSError, subprocess.TimeoutExpired):
                kill = True
        if kill:
            process.kill()
            process.wait()
        logger.debug("Recognizer process exited with code %s", process.returncode)

    def _exchange(self, utterance_id: str, wav_path: Path) -> str:
        self.start()
        request = encode_request(RecognizeRequest(id=utterance_id, wav=str(wav_path)))
        try:
            self._process.stdin.write(request)
            self._process.stdin.flush()
        except OSError as e:
            self.close()
            raise ProcessLost("cannot write request: {}".format(e)) from e

        try:
            line = self._lines.get(timeout=self.endpoint.timeout)
        except Empty:
            self.close(kill=True)
            raise ProcessLost("no response within {} s".format(self.endpoint.timeout))
        if line is SENTINEL:
            code = self._process.wait()
            self._process = None
            raise ProcessLost("process exited with code {}".format(code))
        return line

    def recognize(self, utterance_id: str, wav_path: PathType) -> Transcript:
        """Send one WAV file to the process and return its transcript.

        Raises:
            RecognizerFailure: On a missing file, timeout, process exit, malformed response,
                or an error response.
        """
        wav_path = Path(wav_path).absolute()
        if not wav_path.is_file():
            raise RecognizerFailure(utterance_id, "file `{}` does not exist".format(wav_path))

        with self._lock:
            for attempt in range(self.retry_config.max_retries + 1):
                try:
                    line = self._exchange(utterance_id, wav_path)
                    break
                except self.retry_config.exceptions_to_retry as e:
                    if attempt < self.retry_config.max_retries:
                        logger.warning(
                            "Retry %d of %d for utterance %s: %s",
                            attempt + 1,
                            self.retry_config.max_retries,
                            utterance_id,
                            e,
                        )
                        backoff = self.retry_config.backoff_factor**attempt
                        sleep(self.retry_config.wait_time * backoff)
                    else:
                        raise RecognizerFailure(utterance_id, str(e)) from e

        try:
            response = decode_response(line)
        except ProtocolError as e:
            raise RecognizerFailure(utterance_id, str(e)) from e
        if response.id != utterance_id:
            raise RecognizerFailure(
                utterance_id, "response is for utterance `{}`".format(response.id)
            )
        if not response.ok:
            raise RecognizerFailure(utterance_id, response.error)
        return Transcript(text=response.transcript)

    def score(self, request: RecognitionRequest) -> ErrorRate:
        transcript = self.recognize(request.utterance_id, request.wav_path)
        try:
            return cer(transcript, request.reference)
        except ValueError as e:
            raise RecognizerFailure(request.utterance_id, str(e)) from e


class ExternalRecognizerPool:
    """A fixed set of recognizer processes shared by concurrent callers."""

    def __init__(self, endpoint: RecognizerEndpoint, retry_config: Optional[RetryConfig] = None):
        self.endpoint = endpoint
        self.clients = [
            ExternalRecognizer(endpoint, retry_config) for _ in range(endpoint.pool_size)
        ]
        self._idle: Queue = Queue()
        for client in self.clients:
            self._idle.put(client)

    def __enter__(self) -> ExternalRecognizerPool:
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def close(self) -> None:
        for client in self.clients:
            client.close()

    def _call(self, method: str, *args):
        client = self._idle.get()
        try:
            return getattr(client, method)(*args)
        finally:
            self._idle.put(client)

    def recognize(self, utterance_id: str, wav_path: PathType) -> Transcript:
        return self._call("recognize", utterance_id, wav_path)

    def score(self, request: RecognitionRequest) -> ErrorRate:
        return self._call("score", request)
