"""One experiment: its configuration, working directory and stage graph."""

from __future__ import annotations

from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Union

from rlmask.common import RecognizerKind, SystemName, logger
from rlmask.common.exceptions import DatasetError
from rlmask.masks import load_codebook
from rlmask.pipeline.config import ExperimentConfig
from rlmask.pipeline.dataset import Calibration, DatasetManifest, prepare
from rlmask.pipeline.enhance import NeighborIndex, enhance, enhance_rows
from rlmask.pipeline.evaluate import Report, evaluate, export_plot_data
from rlmask.pipeline.stages import Stage, StageRunner
from rlmask.pipeline.training import (
    TrainingUtterance,
    analyze_rows,
    build_codebook,
    run_pretrain,
    run_rl_train,
)
from rlmask.pipeline.workspace import Workspace
from rlmask.policy import load_network
from rlmask.recognizers import ExternalRecognizerPool, MockRecognizer, open_recognizer

STAGE_NAMES = (
    "prepare",
    "build-codebook",
    "pretrain",
    "train-rl",
    "enhance",
    "baseline-1nn",
    "evaluate",
    "report",
)


class Experiment:
    """Runs the stages of an experiment against one working directory.

    Every chunk-size variant (``config.chunk_sizes``) gets its own codebook, networks and
    ``rlse_<p>`` system. The oracle and nearest-neighbor systems use the primary chunk size.
    """

    def __init__(self, config: ExperimentConfig, force: bool = False):
        self.config = config
        self.workspace = Workspace(config.work_dir)
        self.force = force
        self._manifest: Optional[DatasetManifest] = None
        self._utterances: dict[int, list[TrainingUtterance]] = {}
        self.runner = StageRunner(self._build_stages(), force=force)

    def __repr__(self):
        return "Experiment(workspace={}, variants={})".format(
            self.workspace.root, self.config.chunk_sizes
        )

    @property
    def rlse_systems(self) -> list[str]:
        return [SystemName.rlse(p) for p in self.config.chunk_sizes]

    @property
    def systems(self) -> list[str]:
        """Systems to evaluate: references, baselines, every RL variant, then any extra outputs."""
        systems = [SystemName.NOISY, SystemName.CLEAN, SystemName.ORACLE, SystemName.ONE_NN]
        systems += self.rlse_systems
        enhanced_root = self.workspace.root / "enhanced"
        if enhanced_root.is_dir():
            systems += sorted(
                d.name for d in enhanced_root.iterdir() if d.is_dir() and d.name not in systems
            )
        return systems

    # data

    @property
    def manifest(self) -> DatasetManifest:
        if self._manifest is None:
            if not self.workspace.manifest_path.is_file():
                raise DatasetError("no prepared dataset in {}".format(self.workspace.data_dir))
            self._manifest = DatasetManifest.load(self.workspace.manifest_path)
        return self._manifest

    def training_utterances(self, p: int) -> list[TrainingUtterance]:
        if p not in self._utterances:
            self._utterances[p] = analyze_rows(self.manifest.train_rows, self.config, p)
        return self._utterances[p]

    @contextmanager
    def recognizer(self) -> Iterator[Union[MockRecognizer, ExternalRecognizerPool]]:
        """The configured recognizer; the mock one is calibrated from the prepared data."""
        calibration = None
        if self.config.recognizer.kind == RecognizerKind.MOCK:
            calibration = Calibration.load(self.workspace.calibration_path).lsd
        recognizer = open_recognizer(
            self.config.recognizer_endpoint(calibration),
            extractor=self.config.extractor(),
            references={row.id: row.clean_path for row in self.manifest.rows},
        )
        try:
            yield recognizer
        finally:
            recognizer.close()

    def _test_outputs(self, system: str) -> list[Path]:
        if not self.workspace.manifest_path.is_file():
            return [self.workspace.enhanced_dir(system)]
        return [self.workspace.enhanced_path(system, row.id) for row in self.manifest.test_rows]

    # stages

    def run_prepare(self) -> DatasetManifest:
        data = self.config.data
        if data.clean_dir is None or data.noise_file is None:
            raise DatasetError("set data.clean_dir and data.noise_file in the config")
        self._manifest = prepare(
            self.config,
            data.clean_dir,
            data.noise_file,
            self.workspace.data_dir,
            self.workspace.manifest_path,
            self.workspace.calibration_path,
        )
        self._utterances.clear()
        return self._manifest

    def run_build_codebook(self) -> None:
        for p in self.config.chunk_sizes:
            build_codebook(
                self.manifest, self.config, self.workspace, p, self.training_utterances(p)
            )

    def run_pretrain(self) -> None:
        for p in self.config.chunk_sizes:
            run_pretrain(self.manifest, self.config, self.workspace, p, self.training_utterances(p))

    def run_train_rl(self) -> None:
        with self.recognizer() as recognizer:
            for p in self.config.chunk_sizes:
                run_rl_train(
                    self.manifest,
                    self.config,
                    self.workspace,
                    recognizer,
                    p,
                    self.training_utterances(p),
                )

    def run_enhance(self, oracle: bool = True, policy: bool = True) -> None:
        rows = self.manifest.test_rows
        if policy:
            for p in self.config.chunk_sizes:
                system = SystemName.rlse(p)
                enhance_rows(
                    rows,
                    system,
                    self.workspace.enhanced_dir(system),
                    self.config.extractor(p),
                    codebook=load_codebook(self.workspace.codebook_path(p)),
                    model=load_network(self.workspace.action_estimator_path(p)),
                    num_threads=self.config.jobs,
                )
        if oracle:
            enhance_rows(
                rows,
                SystemName.ORACLE,
                self.workspace.enhanced_dir(SystemName.ORACLE),
                self.config.extractor(),
                shared_mask=self.config.shared_mask_mode,
                num_threads=self.config.jobs,
            )

    def run_forced_action(self, action: int, p: Optional[int] = None) -> str:
        """Enhance the test set applying one codebook entry to every chunk."""
        p = self.config.p if p is None else p
        codebook = load_codebook(self.workspace.codebook_path(p))
        if not 0 <= action < codebook.A:
            raise ValueError(
                "action {} outside the codebook of {} entries".format(action, codebook.A)
            )
        system = "action{}_p{}".format(action, p)
        extractor = self.config.extractor(p)
        out_dir = self.workspace.enhanced_dir(system)
        for row in self.manifest.test_rows:
            wav_out = out_dir / "{}.wav".format(row.id)
            enhance(None, codebook, row.noisy_path, extractor, wav_out, forced_action=action)
        logger.info("Enhanced the test set with codebook entry %s into %s", action, out_dir)
        return system

    def run_baseline_1nn(self) -> None:
        p = self.config.p
        codebook = load_codebook(self.workspace.codebook_path(p))
        utterances = self.training_utterances(p)
        index = NeighborIndex.build(
            [u.features.contexts for u in utterances], [u.ibms for u in utterances], codebook
        )
        index.save(self.workspace.neighbor_index_path(p))
        logger.info("Nearest-neighbor index holds %s training chunks", len(index))
        enhance_rows(
            self.manifest.test_rows,
            SystemName.ONE_NN,
            self.workspace.enhanced_dir(SystemName.ONE_NN),
            self.config.extractor(p),
            codebook=codebook,
            index=index,
            num_threads=self.config.jobs,
        )

    def run_evaluate(self) -> Report:
        extractor = self.config.extractor()
        with self.recognizer() as recognizer:
            report = evaluate(
                self.manifest,
                self.workspace,
                recognizer,
                self.systems,
                extractor,
                self.config.recognizer.kind,
                num_threads=self.config.jobs,
            )
        report.write_csv(self.workspace.report_path)
        report.write_per_utterance(self.workspace.per_utterance_path)
        export_plot_data(
            report,
            self.manifest,
            self.workspace,
            extractor,
            self.systems,
            n_spectrograms=self.config.export.spectrogram_utterances,
            fmt=self.config.export.matrix_format,
        )
        return report

    def run_report(self) -> Report:
        """Rebuild the report from the per-utterance scores of the last evaluation."""
        report = Report.from_per_utterance(self.workspace.per_utterance_path)
        report.write_csv(self.workspace.report_path)
        return report

    def _build_stages(self) -> list[Stage]:
        ws = self.workspace
        sizes = self.config.chunk_sizes

        prepare_stage = Stage(
            "prepare",
            self.run_prepare,
            lambda: [ws.manifest_path, ws.calibration_path],
            "mix clean speech with noise and write the manifest",
        )
        codebook = Stage(
            "build-codebook",
            self.run_build_codebook,
            lambda: [ws.codebook_path(p) for p in sizes],
            "cluster training chunk IBMs into the mask codebook",
        )
        pretrain = Stage(
            "pretrain",
            self.run_pretrain,
            lambda: [ws.mask_estimator_path(p) for p in sizes],
            "pretrain the mask estimator on ideal binary masks",
        )
        train_rl = Stage(
            "train-rl",
            self.run_train_rl,
            lambda: [ws.action_estimator_path(p) for p in sizes],
            "train the action estimator with recognizer rewards",
        )
        enhance_stage = Stage(
            "enhance",
            self.run_enhance,
            lambda: [
                path
                for system in self.rlse_systems + [SystemName.ORACLE]
                for path in self._test_outputs(system)
            ],
            "enhance the test set with every RL variant and oracle masks",
        )
        baseline = Stage(
            "baseline-1nn",
            self.run_baseline_1nn,
            lambda: [ws.neighbor_index_path(self.config.p)] + self._test_outputs(SystemName.ONE_NN),
            "enhance the test set with the nearest-neighbor baseline",
        )
        evaluate_stage = Stage(
            "evaluate",
            self.run_evaluate,
            lambda: [ws.report_path, ws.per_utterance_path],
            "score every system with the recognizer and objective metrics",
        )
        report = Stage("report", self.run_report, description="print the experiment report")

        prepare_stage >> codebook
        codebook >> [pretrain, baseline]
        pretrain >> train_rl
        train_rl >> enhance_stage
        [enhance_stage, baseline] >> evaluate_stage
        evaluate_stage >> report
        return [
            prepare_stage,
            codebook,
            pretrain,
            train_rl,
            enhance_stage,
            baseline,
            evaluate_stage,
            report,
        ]

    def run_stage(self, name: str) -> str:
        self.config.write_resolved(self.workspace.root)
        return self.runner.run(name)

    def run_all(self) -> dict[str, str]:
        self.config.write_resolved(self.workspace.root)
        return self.runner.run_all()
