"""Environment-driven defaults; CLI flags override every value here."""

import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

ENV_VARS = (
    'MAX3SAT_OUTPUT_DIR',
    'MAX3SAT_LOG_DIR',
    'MAX3SAT_LOG_LEVEL',
    'MAX3SAT_EXHAUSTIVE_LIMIT',
)

DEFAULT_EXHAUSTIVE_LIMIT = 26


@dataclass(frozen=True)
class Settings:
    output_dir: str = "output"
    log_dir: str = "logs"
    log_level: str = "INFO"
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT

    @property
    def log_level_value(self) -> int:
        level = logging.getLevelName(self.log_level.upper())
        return level if isinstance(level, int) else logging.INFO

    @classmethod
    def from_env(cls) -> "Settings":
        load_dotenv()
        limit = os.getenv('MAX3SAT_EXHAUSTIVE_LIMIT')
        try:
            exhaustive_limit = int(limit) if limit else DEFAULT_EXHAUSTIVE_LIMIT
        except ValueError:
            logging.getLogger(__name__).warning(
                f"MAX3SAT_EXHAUSTIVE_LIMIT={limit!r} is not an integer, using {DEFAULT_EXHAUSTIVE_LIMIT}"
            )
            exhaustive_limit = DEFAULT_EXHAUSTIVE_LIMIT
        return cls(
            output_dir=os.getenv('MAX3SAT_OUTPUT_DIR') or "output",
            log_dir=os.getenv('MAX3SAT_LOG_DIR') or "logs",
            log_level=os.getenv('MAX3SAT_LOG_LEVEL') or "INFO",
            exhaustive_limit=exhaustive_limit,
        )
