# config/__init__.py

import os
import logging
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

load_dotenv()


class Settings(BaseModel):
    """
    Tolerances and enumeration knobs shared by every analysis.
    Values come from the environment (or a .env file) and can be
    overridden per run by the problem file or command-line flags.
    """

    model_config = ConfigDict(frozen=True)

    frame_tol: float = Field(1e-8, gt=0)
    rank_tol: float = Field(1e-10, gt=0)
    pattern_cap: int = Field(20, ge=0)
    per_pattern_limit: int = Field(12, ge=0)
    chunk_size: int = Field(4096, ge=1)
    threads: int = Field(0, ge=0)
    sample_count: Optional[int] = Field(None, ge=1)
    sample_seed: int = 0
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            frame_tol=float(os.getenv("FRAME_TOL", 1e-8)),
            rank_tol=float(os.getenv("RANK_TOL", 1e-10)),
            pattern_cap=int(os.getenv("PATTERN_CAP", 20)),
            per_pattern_limit=int(os.getenv("PER_PATTERN_LIMIT", 12)),
            chunk_size=int(os.getenv("CHUNK_SIZE", 4096)),
            threads=int(os.getenv("THREADS", 0)),
            log_level=os.getenv("LOG_LEVEL", "INFO").upper(),
        )

    def with_overrides(self, **overrides) -> "Settings":
        """Copy with every non-None override applied."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        return self.model_validate({**self.model_dump(), **updates})

    def worker_count(self) -> int:
        return self.threads or (os.cpu_count() or 1)

    def frame_threshold(self, upper: float) -> float:
        return self.frame_tol * max(1.0, upper)

    def echo(self) -> dict:
        """Options as echoed into reports; thread count and log level are not echoed."""
        data = self.model_dump(exclude={"threads", "log_level"})
        return data


def configure_logging(settings: Settings) -> None:
    logging.basicConfig(level=getattr(logging, settings.log_level, logging.INFO))


DEFAULT_SETTINGS = Settings()
