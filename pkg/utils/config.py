import math
import os

from dotenv import load_dotenv

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
ENV_PATH = os.path.join(PROJECT_ROOT, ".env")
load_dotenv(dotenv_path=ENV_PATH)


class Config:

    # Output locations
    OUTPUT_DIR = os.getenv("UUR_OUTPUT_DIR", os.path.join(PROJECT_ROOT, "data", "curves"))
    REPORT_DIR = os.getenv("UUR_REPORT_DIR", os.path.join(PROJECT_ROOT, "data", "reports"))

    # Logging
    LOG_DIR = os.getenv("UUR_LOG_DIR", os.path.join(PROJECT_ROOT, "run_log"))
    LOG_LEVEL = os.getenv("UUR_LOG_LEVEL", "INFO").upper()

    # Randomized suites / permutation heuristic
    DEFAULT_SEED = os.getenv("UUR_SEED", "20190417")
    HEURISTIC_RESTARTS = os.getenv("UUR_HEURISTIC_RESTARTS", "1000")

    # Theta grid, 0..2pi inclusive
    GRID_START = 0.0
    GRID_STOP = 2.0 * math.pi
    GRID_COUNT = os.getenv("UUR_GRID_COUNT", "721")

    # Optional YAML with grid overrides and extra scenarios
    SCENARIO_FILE = os.getenv("UUR_SCENARIO_FILE")

    @classmethod
    def get_seed(cls):
        return int(cls.DEFAULT_SEED)

    @classmethod
    def get_restarts(cls):
        return int(cls.HEURISTIC_RESTARTS)

    @classmethod
    def get_grid_defaults(cls):
        """Get (start, stop, count) of the default theta grid."""
        return cls.GRID_START, cls.GRID_STOP, int(cls.GRID_COUNT)

    @classmethod
    def validate(cls):
        """Validate that numeric configuration values parse and are in range."""
        checks = {
            "UUR_SEED": (cls.DEFAULT_SEED, lambda v: 0 <= v < 2**64),
            "UUR_HEURISTIC_RESTARTS": (cls.HEURISTIC_RESTARTS, lambda v: v >= 0),
            "UUR_GRID_COUNT": (cls.GRID_COUNT, lambda v: v >= 2),
        }

        invalid = []
        for name, (raw, in_range) in checks.items():
            try:
                value = int(raw)
            except (TypeError, ValueError):
                invalid.append(f"{name}: not an integer ({raw!r})")
                continue
            if not in_range(value):
                invalid.append(f"{name}: out of range ({value})")

        if cls.SCENARIO_FILE and not os.path.exists(cls.SCENARIO_FILE):
            invalid.append(f"UUR_SCENARIO_FILE: file not found ({cls.SCENARIO_FILE})")

        if invalid:
            invalid_str = "\n  ".join(invalid)
            raise ValueError(f"Invalid configuration values:\n  {invalid_str}")

        return True


config = Config()
