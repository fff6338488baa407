"""Thread pool for per-utterance work with deterministic result ordering."""

import threading
from queue import Queue
from typing import Any, Callable, Iterable, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict

from rlmask.common.defaults import Defaults
from rlmask.common.enums import JobStatus
from rlmask.common.logging import logger


SENTINEL = object()  # sentinel object for closing threads


class UtteranceJob(BaseModel):
    """One unit of per-utterance work and its outcome.

    Attributes:
        index: Position of the item in the submitted sequence.
        key: Utterance id or another label used in log messages.
        status: Job status.
        result: Return value of the job function when done.
        error: Exception raised by the job function when failed.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    index: int
    key: str
    status: str = JobStatus.PENDING
    result: Any = None
    error: Optional[BaseException] = None

    @property
    def ok(self) -> bool:
        return self.status == JobStatus.DONE


def _run_job(fn: Callable[[Any], Any], job: UtteranceJob, item: Any) -> UtteranceJob:
    job.status = JobStatus.RUNNING
    try:
        job.result = fn(item)
    except Exception as e:
        job.error = e
        job.status = JobStatus.FAILED
        logger.debug("Job %s failed: %r", job.key, e)
    else:
        job.status = JobStatus.DONE
    return job


class UtteranceThread(threading.Thread):
    """Worker thread: runs jobs from the input queue, puts finished jobs in the output queue."""

    def __init__(self, input_queue: Queue, output_queue: Queue, *args, **kwargs):
        self.input_queue = input_queue
        self.output_queue = output_queue
        super(UtteranceThread, self).__init__(*args, daemon=True, **kwargs)

    def run(self) -> None:
        while True:
            run_data = self.input_queue.get()
            if run_data is SENTINEL:
                self.input_queue.task_done()
                break

            fn, job, item = run_data
            try:
                self.output_queue.put(_run_job(fn, job, item))
            finally:
                self.input_queue.task_done()


class UtteranceThreadPool:
    """Fixed-size pool of utterance threads."""

    def __init__(self, num_threads: int = Defaults.DEFAULT_NUM_THREADS):
        self.num_threads = num_threads

        self.input_queue = Queue()
        self.output_queue = Queue()

        self._threads = []
        for _ in range(self.num_threads):
            thread = UtteranceThread(self.input_queue, self.output_queue)
            thread.start()
            self._threads.append(thread)
        self._jobs_in_progress = 0

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.wait_and_close()

    def add_job(self, fn: Callable[[Any], Any], job: UtteranceJob, item: Any) -> None:
        self._jobs_in_progress += 1
        self.input_queue.put((fn, job, item))

    def get_completed_jobs(self) -> List[UtteranceJob]:
        """Finished jobs collected so far, in completion order."""
        completed = []
        while not self.output_queue.empty():
            completed.append(self.output_queue.get())
            self._jobs_in_progress -= 1
        return completed

    def wait_and_close(self):
        """Wait for all jobs to complete and close the threads."""
        for t in self._threads:
            if t.is_alive():
                self.input_queue.put(SENTINEL)
        self.input_queue.join()

        for t in self._threads:
            t.join()

    @property
    def is_completed(self) -> bool:
        return self._jobs_in_progress == 0


def map_ordered(
    fn: Callable[[Any], Any],
    items: Iterable[Any],
    keys: Optional[Sequence[str]] = None,
    num_threads: int = Defaults.DEFAULT_NUM_THREADS,
) -> List[UtteranceJob]:
    """Apply ``fn`` to every item and return the jobs in input order.

    Exceptions raised by ``fn`` are captured in the failed jobs. With ``num_threads <= 1``
    the items are processed inline.
    """
    items = list(items)
    keys = [str(i) for i in range(len(items))] if keys is None else list(keys)
    if len(keys) != len(items):
        raise ValueError("got {} keys for {} items".format(len(keys), len(items)))
    jobs = [UtteranceJob(index=i, key=key) for i, key in enumerate(keys)]

    if num_threads <= 1 or len(items) <= 1:
        return [_run_job(fn, job, item) for job, item in zip(jobs, items)]

    with UtteranceThreadPool(min(num_threads, len(items))) as pool:
        for job, item in zip(jobs, items):
            pool.add_job(fn, job, item)
    pool.get_completed_jobs()
    return jobs
