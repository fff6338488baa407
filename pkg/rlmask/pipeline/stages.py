"""Pipeline stages wired into a dependency graph with ``>>``."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from rlmask.common import StageStatus, logger
from rlmask.common.exceptions import StageDependencyCycleError, StageNotReady


class Stage:
    """A named step of an experiment.

    A stage is done when every one of its output paths exists. Stages without outputs are
    never considered done and always run when requested.
    """

    def __init__(
        self,
        name: str,
        action: Callable[[], Any],
        outputs: Optional[Callable[[], Sequence[Path]]] = None,
        description: Optional[str] = None,
    ):
        """Initialize the stage.

        Args:
            name: Stage name, as used on the command line.
            action: Callable doing the work.
            outputs: Callable returning the artifacts the stage produces.
                It is evaluated lazily because artifact lists can depend on upstream results.
            description: One-line help text.
        """
        self.name = name
        self.action = action
        self.outputs = outputs or (lambda: [])
        self.description = description or name
        self.upstream: list[Stage] = []
        self.status = StageStatus.PENDING
        self.result: Any = None

    def __repr__(self) -> str:
        return "Stage(name={}, status={})".format(self.name, self.status)

    def __str__(self) -> str:
        return self.__repr__()

    def set_upstream(self, stage: Stage) -> Stage:
        """Make this stage wait for ``stage``."""
        if stage is self:
            raise StageDependencyCycleError([self.name])
        if stage not in self.upstream:
            self.upstream.append(stage)
        return self

    def __rshift__(self, other: Stage | Sequence[Stage]) -> Stage:
        """Syntactic sugar for ordering stages: ``prepare >> build_codebook``.

        Args:
            other: Stage or sequence of stages to set as downstream.
        """
        stages = [other] if isinstance(other, Stage) else other
        for stage in stages:
            stage.set_upstream(self)
        return self

    def __rrshift__(self, other: Sequence[Stage]) -> Sequence[Stage]:
        """``[enhance, baseline] >> evaluate`` sets every listed stage as upstream."""
        for stage in other:
            self.set_upstream(stage)
        return other

    def missing_outputs(self) -> list[Path]:
        return [Path(path) for path in self.outputs() if not Path(path).exists()]

    def is_done(self) -> bool:
        outputs = list(self.outputs())
        return bool(outputs) and not self.missing_outputs()


class StageRunner:
    """Runs stages in dependency order, reusing stages whose outputs already exist."""

    def __init__(self, stages: Sequence[Stage], force: bool = False):
        self.stages = list(stages)
        self.force = force
        names = [stage.name for stage in self.stages]
        if len(set(names)) != len(names):
            raise ValueError("stage names must be unique: {}".format(names))

    def get_stage(self, name: str) -> Stage:
        for stage in self.stages:
            if stage.name == name:
                return stage
        raise KeyError("no stage named `{}`".format(name))

    def ordered(self) -> list[Stage]:
        """Topological order; ties keep registration order."""
        remaining = list(self.stages)
        order: list[Stage] = []
        while remaining:
            ready = [s for s in remaining if all(u in order for u in s.upstream)]
            if not ready:
                raise StageDependencyCycleError([s.name for s in remaining])
            order.append(ready[0])
            remaining.remove(ready[0])
        return order

    def _execute(self, stage: Stage) -> str:
        if not self.force and stage.is_done():
            logger.warning(
                "Stage %s: outputs exist, reusing them (pass --force to redo)", stage.name
            )
            stage.status = StageStatus.SKIPPED
            return stage.status

        logger.info("Stage %s: started", stage.name)
        stage.status = StageStatus.RUNNING
        stage.result = stage.action()
        stage.status = StageStatus.DONE
        logger.info("Stage %s: finished", stage.name)
        return stage.status

    def run(self, name: str) -> str:
        """Run a single stage.

        Raises:
            StageNotReady: If an upstream stage has not produced its outputs.
        """
        stage = self.get_stage(name)
        missing = [u.name for u in stage.upstream if not u.is_done()]
        if missing:
            raise StageNotReady(stage.name, missing)
        return self._execute(stage)

    def run_all(self) -> dict[str, str]:
        """Run every stage in dependency order and return the status of each."""
        return {stage.name: self._execute(stage) for stage in self.ordered()}
