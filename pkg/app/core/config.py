from pydantic_settings import BaseSettings, SettingsConfigDict

class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    APP_NAME: str = "MinisocleAnalyzer"
    APP_VERSION: str = "0.1.0"
    DEBUG_MODE: bool = False

    # Group construction
    MAX_ORDER: int = 20000
    ASSOCIATIVITY_EXHAUSTIVE_LIMIT: int = 64
    ASSOCIATIVITY_SAMPLES: int = 100000
    RANDOM_SEED: int = 20240917

    # Numerical tolerances
    TOLERANCE: float = 1e-8
    KERNEL_TOLERANCE: float = 1e-6
    EIGEN_RETRIES: int = 20
    SPLIT_RETRIES: int = 20

    # Witness searches over F_p modules
    EXHAUSTIVE_SEARCH_LIMIT: int = 4096
    SAMPLED_VECTOR_COUNT: int = 10000
    MODULE_CHECK_PAIRS: int = 100

    # Automorphism groups and explicit representations
    AUTO_GROUP_CAP: int = 20000
    REP_MAX_ORDER: int = 512
    BATCH_REP_MAX_ORDER: int = 200
    BATCH_PARALLEL: int = 1

    # Logging Settings
    LOG_LEVEL: str = "INFO"
    LOG_FILE: str = "app.log"

settings = Settings()
