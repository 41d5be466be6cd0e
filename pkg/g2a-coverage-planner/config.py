"""
Central configuration module for the G2A Coverage Planner.

This module loads all configuration from environment variables (and an
optional .env file) and provides a centralized configuration object for the
entire application. Scenario files override these defaults per run.

Usage:
    from config import config

    # Access configuration
    tau = config.DEFAULT_TAU_DBM
    particles = config.SWARM_PARTICLES
"""

import sys
from pathlib import Path
from typing import List

from loguru import logger
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # ========================================
    # Application
    # ========================================
    APP_NAME: str = Field("g2a-coverage-planner", description="Application name")
    APP_VERSION: str = Field("1.0.0", description="Toolkit version written to manifests")

    # ========================================
    # Airspace / Scenario Defaults
    # ========================================
    DEFAULT_H_MAX_M: float = Field(300.0, description="Maximal airspace height (m)")
    DEFAULT_TAU_DBM: float = Field(-90.0, description="Received power threshold (dBm)")
    DEFAULT_TRANSMIT_POWER_DBM: float = Field(46.0, description="TBS transmit power (dBm)")
    DEFAULT_OVERLAP_CAP: float = Field(1e-4, description="COR cap T (0-1)")
    STATION_HEIGHT_M: float = Field(25.0, description="Station height when a CSV omits z")
    VOXEL_RESOLUTION_M: float = Field(10.0, description="Cubic lattice pitch (m)")
    REPORT_BAND_HEIGHT_M: float = Field(50.0, description="Height of per-band GCR report bands (m)")
    LAYER_COUNT: int = Field(3, description="Number of equal sub-layers (low/medium/high)")

    # ========================================
    # RF Model
    # ========================================
    CHANNEL_ENVIRONMENT: str = Field("RMa-AV", description="Channel model: RMa-AV | UMa-AV")
    CARRIER_FREQUENCY_GHZ: float = Field(2.6, description="Carrier frequency (GHz)")
    CHANNEL_TABLE_FILE: str = Field(
        "data/channel_models.json",
        description="Bundled channel coefficient table"
    )
    ANTENNA_G0: float = Field(2.2864, description="Main-lobe constant G0 (linear)")
    ANTENNA_S0: float = Field(0.03, description="Side-lobe gain S0 (linear)")
    MIN_LINK_DISTANCE_M: float = Field(1.0, description="Distance floor inside path-loss logs (m)")

    # ========================================
    # Swarm Optimizer
    # ========================================
    SWARM_PARTICLES: int = Field(30, description="Particle count N")
    SWARM_ITERATIONS: int = Field(100, description="Iteration count N_iter")
    SWARM_C1: float = Field(1.5, description="Continuous local coefficient c1")
    SWARM_C2: float = Field(2.5, description="Continuous global coefficient c2")
    SWARM_D1: float = Field(1.5, description="Discrete local coefficient d1")
    SWARM_D2: float = Field(2.5, description="Discrete global coefficient d2")
    SWARM_W_MIN: float = Field(0.4, description="Inertia lower bound")
    SWARM_W_MAX: float = Field(0.9, description="Inertia upper bound")
    SWARM_INIT_VELOCITY_FRACTION: float = Field(
        0.1,
        description="Initial velocity range as a fraction of the box width"
    )
    SWARM_VELOCITY_CLAMP_FRACTION: float = Field(
        0.5,
        description="Velocity clamp as a fraction of the box width"
    )
    HPBW_MIN_DEG: float = Field(1.0, description="Lower edge of the continuous HPBW box")
    HPBW_MAX_DEG: float = Field(179.0, description="Upper edge of the continuous HPBW box")
    LEAKAGE_WEIGHT: float = Field(
        0.0,
        description="Fitness penalty per degree of H-HPBW beyond the opening angle, over 180 (0 disables)"
    )

    # ========================================
    # Exhaustive Search / Baselines
    # ========================================
    ES_TILT_LEVELS: int = Field(5, description="Tilt levels per station for ES")
    ES_BUDGET: int = Field(100_000, description="Maximum ES combinations")
    BASELINE_TILT_DEG: float = Field(-3.0, description="Down-tilt baseline tilt (deg)")
    BASELINE_PATTERN_ID: int = Field(3, description="Down-tilt baseline codebook pattern")
    UNCOORDINATED_TILT_LEVELS: int = Field(19, description="Tilt levels for the uncoordinated baseline")

    # ========================================
    # Prism Analysis
    # ========================================
    MC_SAMPLES: int = Field(1_000_000, description="Monte-Carlo samples per structure")
    MC_PARTITIONS: int = Field(1, description="Monte-Carlo sample partitions")
    ZETA_RATIOS: str = Field("1.1,2,5", description="Comma-separated r/H ratios for zeta tables")

    # ========================================
    # Parallelism
    # ========================================
    ENABLE_PARALLEL_PROCESSING: bool = Field(True, description="Enable parallel processing")
    NUM_WORKERS: int = Field(4, description="Number of parallel workers")

    # ========================================
    # Data Paths
    # ========================================
    DATA_DIR: str = Field("./data", description="Bundled data directory")
    OUTPUT_DIR: str = Field("./output", description="Default report directory")

    # ========================================
    # Logging
    # ========================================
    LOG_LEVEL: str = Field("INFO", description="Logging level")
    LOG_FILE: str = Field("", description="Log file path (empty disables the file sink)")
    LOG_ROTATION: str = Field("50 MB", description="Log rotation size")
    LOG_RETENTION: str = Field("30 days", description="Log retention period")

    # ========================================
    # Derived Properties
    # ========================================
    @property
    def zeta_ratios_list(self) -> List[float]:
        """Parse zeta-table ratios from comma-separated string."""
        return [float(r.strip()) for r in self.ZETA_RATIOS.split(",") if r.strip()]

    @property
    def workers(self) -> int:
        """Effective worker count."""
        return max(1, self.NUM_WORKERS) if self.ENABLE_PARALLEL_PROCESSING else 1

    # ========================================
    # Path Helpers
    # ========================================
    def get_data_path(self, filename: str = "") -> Path:
        """Get path in data directory (relative to the project root)."""
        path = Path(self.DATA_DIR)
        if not path.is_absolute():
            path = Path(__file__).resolve().parent / path
        return path / filename if filename else path

    def get_channel_table_path(self) -> Path:
        """Get path of the channel coefficient table."""
        path = Path(self.CHANNEL_TABLE_FILE)
        if not path.is_absolute():
            path = Path(__file__).resolve().parent / path
        return path

    def get_output_path(self, filename: str = "") -> Path:
        """Get path in output directory."""
        path = Path(self.OUTPUT_DIR)
        path.mkdir(parents=True, exist_ok=True)
        return path / filename if filename else path

    def get_log_path(self) -> Path:
        """Get log file path."""
        log_path = Path(self.LOG_FILE)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        return log_path


# ========================================
# Global Configuration Instance
# ========================================
try:
    config = Settings()
except Exception as e:
    print(f"Error loading configuration: {e}")
    print("\nPlease check the values in your .env file (see .env.example)")
    raise


def configure_logging(level: str = None) -> None:
    """
    Install the stderr sink and, when LOG_FILE is set, a rotating file sink.

    Args:
        level: Override for LOG_LEVEL
    """
    logger.remove()
    logger.add(sys.stderr, level=level or config.LOG_LEVEL)

    if config.LOG_FILE:
        logger.add(
            str(config.get_log_path()),
            level=level or config.LOG_LEVEL,
            rotation=config.LOG_ROTATION,
            retention=config.LOG_RETENTION,
        )


# ========================================
# Configuration Validation
# ========================================
def validate_config() -> bool:
    """
    Validate configuration settings.

    Returns:
        bool: True if configuration is valid, False otherwise
    """
    issues = []

    if not 0.0 <= config.DEFAULT_OVERLAP_CAP <= 1.0:
        issues.append("DEFAULT_OVERLAP_CAP must lie in [0, 1].")

    if config.VOXEL_RESOLUTION_M <= 0 or config.VOXEL_RESOLUTION_M > config.DEFAULT_H_MAX_M:
        issues.append("VOXEL_RESOLUTION_M must be positive and not exceed DEFAULT_H_MAX_M.")

    if not 0 < config.SWARM_W_MIN <= config.SWARM_W_MAX:
        issues.append("Inertia bounds must satisfy 0 < SWARM_W_MIN <= SWARM_W_MAX.")

    if config.SWARM_PARTICLES < 1 or config.SWARM_ITERATIONS < 1:
        issues.append("SWARM_PARTICLES and SWARM_ITERATIONS must be at least 1.")

    if config.ANTENNA_S0 >= config.ANTENNA_G0 / (3.1416 ** 2):
        issues.append("ANTENNA_S0 must stay below the widest main-lobe gain G0/pi^2.")

    if not config.get_channel_table_path().exists():
        issues.append(f"Channel table not found at {config.get_channel_table_path()}")

    if issues:
        print("\n⚠️  Configuration Issues Found:")
        for i, issue in enumerate(issues, 1):
            print(f"{i}. {issue}")
        return False

    print("✓ Configuration validated successfully")
    return True


# ========================================
# Helper Functions
# ========================================
def print_config():
    """Print current configuration."""
    print("\n" + "=" * 60)
    print("G2A Coverage Planner Configuration")
    print("=" * 60)

    sections = {
        "Scenario Defaults": [
            ("h_max (m)", config.DEFAULT_H_MAX_M),
            ("tau (dBm)", config.DEFAULT_TAU_DBM),
            ("P_T (dBm)", config.DEFAULT_TRANSMIT_POWER_DBM),
            ("Overlap cap T", config.DEFAULT_OVERLAP_CAP),
            ("Voxel (m)", config.VOXEL_RESOLUTION_M),
        ],
        "RF Model": [
            ("Environment", config.CHANNEL_ENVIRONMENT),
            ("Frequency (GHz)", config.CARRIER_FREQUENCY_GHZ),
            ("G0", config.ANTENNA_G0),
            ("S0", config.ANTENNA_S0),
        ],
        "Swarm": [
            ("Particles", config.SWARM_PARTICLES),
            ("Iterations", config.SWARM_ITERATIONS),
            ("c1/c2", f"{config.SWARM_C1}/{config.SWARM_C2}"),
            ("w_min/w_max", f"{config.SWARM_W_MIN}/{config.SWARM_W_MAX}"),
        ],
        "Runtime": [
            ("Workers", config.workers),
            ("Log Level", config.LOG_LEVEL),
        ],
    }

    for section_name, items in sections.items():
        print(f"\n{section_name}:")
        for key, value in items:
            print(f"  {key:20s}: {value}")

    print("\n" + "=" * 60 + "\n")


if __name__ == "__main__":
    """Run configuration validation and print config when executed directly."""
    print_config()
    validate_config()
