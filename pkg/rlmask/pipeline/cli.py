"""Command-line interface: ``rlmask <stage> [options]``."""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from dotenv import load_dotenv

from rlmask.common import ExitCode, StageStatus, configure_logging, logger
from rlmask.common.exceptions import (
    ClusteringError,
    ConfigValidationError,
    DatasetError,
    DimensionMismatch,
    EpochAborted,
    InsufficientAudio,
    InvalidAudioFile,
    InvalidSignal,
    ModelFormatError,
    RecognizerFailure,
    StageNotReady,
    TrainingDiverged,
    WaveformTooShort,
)
from rlmask.masks import load_codebook
from rlmask.pipeline.config import load_config
from rlmask.pipeline.enhance import enhance
from rlmask.pipeline.experiment import STAGE_NAMES, Experiment
from rlmask.pipeline.synthetic import SynthConfig, generate_corpus
from rlmask.policy import load_network

DATA_ERRORS = (
    ClusteringError,
    DatasetError,
    DimensionMismatch,
    InsufficientAudio,
    InvalidAudioFile,
    InvalidSignal,
    ModelFormatError,
    StageNotReady,
    TrainingDiverged,
    WaveformTooShort,
)
RECOGNIZER_ERRORS = (RecognizerFailure, EpochAborted)
# caught after DATA_ERRORS, which holds ValueError subclasses of its own
USAGE_ERRORS = (ConfigValidationError, ValueError, IndexError)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(ExitCode.USAGE, "{}: error: {}\n".format(self.prog, message))


def get_args_parser() -> argparse.ArgumentParser:
    """Argument parser"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="TOML experiment config")
    common.add_argument("--seed", type=int, default=None, help="Override the config seed")
    common.add_argument(
        "--recognizer-cmd",
        type=str,
        default=None,
        help="Launch command of an external recognizer (switches off the mock recognizer)",
    )
    common.add_argument(
        "--force", default=False, action="store_true", help="Redo stages whose outputs exist"
    )
    common.add_argument("--jobs", type=int, default=None, help="Worker threads per stage")
    common.add_argument("--work-dir", type=Path, default=None, help="Experiment directory")
    common.add_argument("-v", "--verbose", default=False, action="store_true")
    common.add_argument("--debug", default=False, action="store_true")

    parser = _ArgumentParser(
        prog="rlmask",
        description="Recognizer-in-the-loop binary-mask speech enhancement",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    for name in STAGE_NAMES:
        sub = commands.add_parser(name, parents=[common], help="Run the `{}` stage".format(name))
        if name == "enhance":
            sub.add_argument(
                "--oracle",
                default=False,
                action="store_true",
                help="Enhance the test set with ideal binary masks only",
            )
            sub.add_argument(
                "--action",
                type=int,
                default=None,
                help="Apply this codebook entry to every chunk instead of the learned policy",
            )
            sub.add_argument("--input", type=Path, default=None, help="Enhance a single WAV file")
            sub.add_argument("--output", type=Path, default=None, help="Output of --input")
            sub.add_argument(
                "--variant", type=int, default=None, help="Chunk size of the model to use"
            )

    commands.add_parser("run-all", parents=[common], help="Run every stage in order")

    synth = commands.add_parser(
        "synth", parents=[common], help="Write a synthetic corpus of clean speech and noise"
    )
    synth.add_argument("out_dir", type=Path, help="Directory of the generated corpus")
    synth.add_argument("--utterances", type=int, default=SynthConfig().n_utterances)
    synth.add_argument("--noise-seconds", type=float, default=SynthConfig().noise_seconds)
    return parser


def _run_synth(args: argparse.Namespace) -> int:
    cfg = SynthConfig(
        n_utterances=args.utterances,
        noise_seconds=args.noise_seconds,
        seed=args.seed or 0,
    )
    clean_dir, noise_file = generate_corpus(args.out_dir, cfg)
    print("[data]\nclean_dir = {!r}\nnoise_file = {!r}".format(str(clean_dir), str(noise_file)))
    return ExitCode.SUCCESS


def _run_enhance(experiment: Experiment, args: argparse.Namespace) -> None:
    config = experiment.config
    if args.input is not None:
        if args.output is None:
            raise ConfigValidationError("--input needs --output")
        p = config.p if args.variant is None else args.variant
        model = None
        if args.action is None:
            model = load_network(experiment.workspace.action_estimator_path(p))
        codebook = load_codebook(experiment.workspace.codebook_path(p))
        enhance(
            model, codebook, args.input, config.extractor(p), args.output, forced_action=args.action
        )
        print(args.output)
    elif args.action is not None:
        print(experiment.run_forced_action(args.action, args.variant))
    elif args.oracle:
        experiment.run_enhance(oracle=True, policy=False)
    else:
        print(experiment.run_stage("enhance"))


def run(args: argparse.Namespace) -> int:
    if args.command == "synth":
        configure_logging(verbose=args.verbose, debug=args.debug)
        return _run_synth(args)

    config = load_config(args.config)
    config = config.with_overrides(seed=args.seed, jobs=args.jobs, work_dir=args.work_dir)
    config = config.with_recognizer_command(args.recognizer_cmd)
    experiment = Experiment(config, force=args.force)
    configure_logging(
        verbose=args.verbose, debug=args.debug, log_file=experiment.workspace.log_file
    )
    logger.info("Running `%s` in %s", args.command, experiment.workspace.root)

    if args.command == "run-all":
        statuses = experiment.run_all()
        for name, status in statuses.items():
            print("{:<15} {}".format(name, status))
        report = experiment.runner.get_stage("report").result
        if report is not None:
            print(report.format_table())
    elif args.command == "enhance":
        _run_enhance(experiment, args)
    else:
        status = experiment.run_stage(args.command)
        result = experiment.runner.get_stage(args.command).result
        if args.command in ("evaluate", "report") and status == StageStatus.DONE:
            print(result.format_table())
        else:
            print(status)
    return ExitCode.SUCCESS


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = get_args_parser().parse_args(argv)
    try:
        return run(args)
    except RECOGNIZER_ERRORS as e:
        logger.error("%s", e)
        return ExitCode.RECOGNIZER_FAILURE
    except DATA_ERRORS as e:
        logger.error("%s", e)
        return ExitCode.DATA_ERROR
    except USAGE_ERRORS as e:
        logger.error("%s", e)
        return ExitCode.USAGE


if __name__ == "__main__":
    sys.exit(main())
