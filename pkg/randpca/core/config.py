# randpca/core/config.py

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Library and CLI defaults, overridable through RANDPCA_* environment
    variables or a `.env` file in the working directory.
    """

    DEFAULT_OVERSAMPLE: int = 2
    DEFAULT_ITS: int = 2
    DEFAULT_SEED: int = 0

    SNORM_ITS: int = 20
    # converged estimates (bench records, svd output): relative-change stop and cap
    SNORM_TOL: float = 1e-13
    SNORM_MAX_ITS: int = 2000
    SELFADJOINT_CHECK_TOL: float = 1e-8
    PINV_CUTOFF: float = 1e-12
    NEGATIVE_EIG_TOL: float = 1e-6
    DIRECT_RATIO: float = 1.25

    N_WORKERS: int = 1

    LOG_DIR: str = "logs"
    LOG_LEVEL: str = "INFO"
    LOG_TO_FILE: bool = True

    model_config = SettingsConfigDict(
        env_prefix="RANDPCA_", env_file=".env", env_file_encoding="utf-8"
    )


settings = Settings()
