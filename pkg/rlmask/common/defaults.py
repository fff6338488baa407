from rlmask.common.enums import RecognizerKind


class Defaults:
    """Default values for various settings."""

    SAMPLE_RATE = 16000
    FRAME_LENGTH = 512
    HOP_LENGTH = 256
    WINDOW = "hann"
    N_MELS = 64

    LOG_FLOOR = 1e-10

    CHUNK_FRAMES = 1
    CONTEXT_CHUNKS = {1: 11, 2: 5}
    FALLBACK_CONTEXT_FRAMES = 11

    NUM_CLUSTERS = 32
    KMEANS_MAX_ITER = 100
    SHARED_MASK_MODE = False

    PRETRAIN_HIDDEN_LAYERS = (64,)
    HEAD_HIDDEN_LAYERS = 1
    HEAD_HIDDEN_UNITS = 64
    NEW_LAYER_INIT_SCALE = 0.1
    STD_FLOOR = 1e-8

    LEARNING_RATE = 0.01
    BATCH_SIZE = 16
    PRETRAIN_EPOCHS = 20
    RL_PASS_EPOCHS = 1
    RL_EPOCHS = 20

    REWARD_ALPHA = 10.0
    MAX_FAILED_FRACTION = 0.5

    SNR_TRAIN_DB = 5.0
    SNR_TEST_DB = (0.0, 5.0)
    TEST_FRACTION = 0.25
    CLIP_PEAK = 32767.0 / 32768.0

    SEGSNR_MIN_DB = -10.0
    SEGSNR_MAX_DB = 35.0
    LSD_DYNAMIC_RANGE_DB = 50.0

    RECOGNIZER_KIND = RecognizerKind.MOCK
    RECOGNIZER_TIMEOUT = 60.0
    RECOGNIZER_POOL_SIZE = 1
    RECOGNIZER_CMD_ENV_VAR = "RLMASK_RECOGNIZER_CMD"
    MOCK_CALIBRATION_PERCENTILE = 95.0
    MOCK_TRANSCRIPT_LENGTH = 1000

    DEFAULT_NUM_THREADS = 4
    SPECTROGRAM_EXPORT_UTTERANCES = 1

    FORMAT_VERSION = 1
    APP_NAME = "rlmask"
