import pytest

from rlmask.recognizers import (
    ProtocolError,
    RecognizeRequest,
    RecognizeResponse,
    decode_request,
    decode_response,
    encode_request,
    encode_response,
)


class TestProtocol:
    def test_request_line(self):
        line = encode_request(RecognizeRequest(id="utt1", wav="/data/utt1.wav"))

        assert line.endswith("\n")
        assert line.count("\n") == 1
        assert decode_request(line) == RecognizeRequest(id="utt1", wav="/data/utt1.wav")

    def test_unicode_and_newlines_survive(self):
        response = RecognizeResponse(id="ü-1", transcript="日本語\nzweite Zeile")

        line = encode_response(response)

        assert line.count("\n") == 1
        assert "日本語" in line
        assert decode_response(line) == response

    def test_error_response(self):
        response = decode_response('{"id": "u", "error": "out of memory"}')

        assert not response.ok
        assert response.error == "out of memory"

    @pytest.mark.parametrize(
        "line",
        [
            "",
            "not json",
            '{"id": "u"}',
            '{"id": "u", "transcript": "a", "error": "b"}',
            '{"transcript": "a"}',
            '{"id": "u", "transcript": "a", "extra": 1}',
        ],
    )
    def test_malformed_response(self, line):
        with pytest.raises(ProtocolError):
            decode_response(line)

    def test_malformed_request(self):
        with pytest.raises(ProtocolError):
            decode_request('{"id": "u"}')
