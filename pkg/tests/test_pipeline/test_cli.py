import numpy as np
import pytest

from rlmask.common import Defaults, ExitCode
from rlmask.features import Waveform, write_wav
from rlmask.masks import Codebook, save_codebook
from rlmask.pipeline.cli import get_args_parser, main
from rlmask.pipeline.experiment import STAGE_NAMES
from rlmask.pipeline.workspace import Workspace


@pytest.fixture(autouse=True)
def no_recognizer_env(monkeypatch):
    monkeypatch.delenv(Defaults.RECOGNIZER_CMD_ENV_VAR, raising=False)


class TestArgsParser:
    @pytest.mark.parametrize("command", STAGE_NAMES + ("run-all",))
    def test_every_stage_is_a_command(self, command):
        args = get_args_parser().parse_args([command, "--seed", "3", "--jobs", "2"])

        assert (args.command, args.seed, args.jobs) == (command, 3, 2)

    def test_enhance_options(self, tmp_path):
        args = get_args_parser().parse_args(
            ["enhance", "--input", str(tmp_path / "a.wav"), "--output", "b.wav", "--action", "2"]
        )

        assert args.input == tmp_path / "a.wav"
        assert args.action == 2

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["no-such-stage"])

        assert excinfo.value.code == ExitCode.USAGE


class TestMain:
    def test_synth(self, tmp_path, capsys):
        code = main(["synth", str(tmp_path), "--utterances", "3", "--noise-seconds", "2"])

        assert code == ExitCode.SUCCESS
        assert len(list((tmp_path / "clean").glob("*.wav"))) == 3
        assert (tmp_path / "noise.wav").is_file()
        assert "[data]" in capsys.readouterr().out

    def test_missing_config(self, tmp_path):
        assert main(["prepare", "--config", str(tmp_path / "absent.toml")]) == ExitCode.USAGE

    def test_prepare_without_data(self, tmp_path):
        assert main(["prepare", "--work-dir", str(tmp_path)]) == ExitCode.DATA_ERROR

    def test_report_before_evaluate(self, tmp_path):
        assert main(["report", "--work-dir", str(tmp_path)]) == ExitCode.DATA_ERROR

    def test_enhance_input_needs_output(self, tmp_path):
        code = main(["enhance", "--work-dir", str(tmp_path), "--input", str(tmp_path / "a.wav")])

        assert code == ExitCode.USAGE

    def test_resolved_config_is_written(self, tmp_path):
        main(["report", "--work-dir", str(tmp_path), "--seed", "11"])

        assert '"seed": 11' in (tmp_path / "config.resolved.json").read_text()

    def test_log_file_next_to_outputs(self, tmp_path):
        main(["prepare", "--work-dir", str(tmp_path)])

        assert "data.clean_dir" in (tmp_path / "rlmask.log").read_text()


class TestForcedAction:
    @pytest.fixture
    def work_dir(self, tmp_path):
        centroids = np.ones((4, Defaults.N_MELS), dtype=np.uint8)
        save_codebook(Codebook(centroids=centroids), Workspace(tmp_path).codebook_path(1))
        return tmp_path

    def test_action_outside_codebook(self, work_dir):
        code = main(["enhance", "--work-dir", str(work_dir), "--action", "9"])

        assert code == ExitCode.USAGE

    def test_action_outside_codebook_for_one_file(self, work_dir):
        rng = np.random.default_rng(0)
        wav_in = write_wav(work_dir / "in.wav", Waveform(samples=0.1 * rng.standard_normal(8000)))

        code = main(
            [
                "enhance",
                "--work-dir",
                str(work_dir),
                "--input",
                str(wav_in),
                "--output",
                str(work_dir / "out.wav"),
                "--action",
                "4",
            ]
        )

        assert code == ExitCode.USAGE
        assert not (work_dir / "out.wav").exists()
