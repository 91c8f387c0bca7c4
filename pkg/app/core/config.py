from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    PROJECT_NAME: str = "WaveLab"
    PROJECT_VERSION: str = "0.1.0"
    LOG_LEVEL: str = "INFO"
    OUTPUT_DIR: str = "runs"

    # Worker pools: sweep points across processes/threads, FFT threads inside one transform
    WORKERS: int = 1
    FFT_WORKERS: int = 1

    # Numerical tolerances
    SUPPORT_TOLERANCE: float = 1e-10
    KERNEL_TOLERANCE: float = 1e-9
    ALIASING_TOLERANCE: float = 1e-10
    SHELL_MARGIN: float = 0.5
    CFL: float = 0.5
    DEFAULT_DELTA: float = 0.1
    STABILITY_FACTOR: float = 0.3

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="WAVELAB_",
        extra="ignore",
    )


settings = Settings()
