import os
from dataclasses import dataclass

THREADS_ENV = "BOUNDARYK_THREADS"
LOG_LEVEL_ENV = "BOUNDARYK_LOG_LEVEL"

_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    threads: int = 1
    log_level: str = "WARNING"

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError("threads must be positive.")
        if self.log_level not in _LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(_LEVELS)}.")

    @classmethod
    def from_env(cls, environ=None) -> "Settings":
        env = os.environ if environ is None else environ

        raw_threads = env.get(THREADS_ENV, "").strip()
        threads = 1
        if raw_threads:
            try:
                threads = int(raw_threads)
            except ValueError:
                raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw_threads!r}.") from None
            if threads < 1:
                raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw_threads!r}.")

        level = env.get(LOG_LEVEL_ENV, "WARNING").strip().upper() or "WARNING"
        if level not in _LEVELS:
            raise ValueError(f"{LOG_LEVEL_ENV} must be one of {', '.join(_LEVELS)}, got {level!r}.")

        return cls(threads=threads, log_level=level)
