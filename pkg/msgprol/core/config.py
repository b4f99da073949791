import os
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

# Load .env file if it exists
load_dotenv()

class Settings(BaseSettings):
    PROJECT_NAME: str = "Multiscale Graph Prolongation"

    # Filesystem locations (datasets are never downloaded, only read from DATA_DIR)
    DATA_DIR: str = os.getenv("MSGPROL_DATA_DIR", "data")
    OUTPUT_DIR: str = os.getenv("MSGPROL_OUTPUT_DIR", "runs")

    LOG_LEVEL: str = os.getenv("MSGPROL_LOG_LEVEL", "INFO")

    # Numerical tolerances shared across modules
    ORTHOGONALITY_TOL: float = 1e-8
    INIT_ORTHOGONALITY_TOL: float = 1e-6
    SYMMETRY_TOL: float = 1e-12
    EIGENVALUE_TIE_TOL: float = 1e-9
    MATCHING_COST_TIE_TOL: float = 1e-12

    # Exhaustive matching enumerates n2!/(n2-n1)! injections
    BRUTEFORCE_MAX_N2: int = 8

    # Matrix CSV round-trips at full double precision
    CSV_SIGNIFICANT_DIGITS: int = 17

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

settings = Settings()

# Example .env file content:
# MSGPROL_DATA_DIR=/datasets/mnist
# MSGPROL_OUTPUT_DIR=./runs
# MSGPROL_LOG_LEVEL=DEBUG
