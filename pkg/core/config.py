from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Application
    APP_NAME: str = "scurve"
    APP_VERSION: str = "1.0.0"
    SCHEMA_VERSION: str = "1"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Parallelism
    SCURVE_THREADS: int = 4

    # Newton / continuation
    TOL_NEWTON: float = 1e-10
    MAX_NEWTON_ITER: int = 60
    FD_STEP: float = 1e-7
    MIN_CONTINUATION_STEP: float = 1e-5
    MAX_CONTINUATION_STEP: float = 0.05

    # Quadrature
    TOL_QUAD: float = 1e-10

    # Stokes tracing
    EPS_HIT: float = 1e-4
    DS_MIN: float = 1e-5
    DS_MAX: float = 0.1
    DS_COLLAPSE: float = 1e-8
    MAX_TRACE_STEPS: int = 20000
    SIGN_MAP_RESOLUTION: int = 128

    # Multiprecision
    PRECISION_DIGITS: int = 120
    ZERO_TUBE_RADIUS: float = 0.25

    # Output
    OUTPUT_DIR: str = "output"

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
