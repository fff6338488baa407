"""Various enums used in the project."""


class OutputActivation:
    """Activation of the last network layer.

    Attributes:
        LINEAR: Identity head, used for spectral-mapping regression.
        SIGMOID: Logistic head, used for mask estimation pretraining.
        SOFTMAX: Probability head, used for action estimation.
    """

    LINEAR = "linear"
    SIGMOID = "sigmoid"
    SOFTMAX = "softmax"

    ALL = {LINEAR, SIGMOID, SOFTMAX}


class HiddenActivation:
    SIGMOID = "sigmoid"

    ALL = {SIGMOID}


class RecognizerKind:
    EXTERNAL = "external"
    MOCK = "mock"

    ALL = {EXTERNAL, MOCK}


class SplitTag:
    TRAIN = "train"
    TEST = "test"

    ALL = {TRAIN, TEST}


class SystemName:
    """Names of the systems compared in evaluation reports."""

    CLEAN = "clean"
    NOISY = "noisy"
    ONE_NN = "1nn"
    ORACLE = "oracle"
    RLSE_PREFIX = "rlse_"

    BASELINES = {CLEAN, NOISY}

    @staticmethod
    def rlse(p: int) -> str:
        return "{}{}".format(SystemName.RLSE_PREFIX, p)


class JobStatus:
    PENDING = "pending"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"

    ALL = {PENDING, RUNNING, DONE, FAILED}


class StageStatus:
    PENDING = "pending"
    RUNNING = "running"
    DONE = "done"
    SKIPPED = "skipped"

    ALL = {PENDING, RUNNING, DONE, SKIPPED}


class MatrixFormat:
    CSV = "csv"
    BINARY = "bin"
    GNUPLOT = "dat"

    ALL = {CSV, BINARY, GNUPLOT}


class ExitCode:
    """Process exit codes of the command-line tool."""

    SUCCESS = 0
    USAGE = 1
    DATA_ERROR = 2
    RECOGNIZER_FAILURE = 3

    ALL = {SUCCESS, USAGE, DATA_ERROR, RECOGNIZER_FAILURE}
