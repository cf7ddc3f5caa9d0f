"""Library configuration and env validation."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Iterable, List

from dotenv import load_dotenv


def load_env() -> None:
    """Load environment variables from .env if present."""
    load_dotenv(override=False)


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw in (None, ""):
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from exc


@dataclass(frozen=True)
class SumprodConfig:
    threads: int = 1
    ntt_threshold: int = 512
    log_level: str = "WARNING"
    k_cap: int = 8
    dtimes_cap: int = 4
    tuple_guard: int = 10**9
    out_dir: str = "reports"

    @classmethod
    def from_env(cls) -> "SumprodConfig":
        threads = max(1, _env_int("SUMPROD_THREADS", cls.threads))
        return cls(
            threads=threads,
            ntt_threshold=_env_int("SUMPROD_NTT_THRESHOLD", cls.ntt_threshold),
            log_level=os.getenv("SUMPROD_LOG_LEVEL", cls.log_level).upper(),
            k_cap=_env_int("SUMPROD_K_CAP", cls.k_cap),
            dtimes_cap=_env_int("SUMPROD_DTIMES_CAP", cls.dtimes_cap),
            tuple_guard=_env_int("SUMPROD_TUPLE_GUARD", cls.tuple_guard),
            out_dir=os.getenv("SUMPROD_OUT_DIR", cls.out_dir),
        )

    @staticmethod
    def validate_required(required: Iterable[str]) -> None:
        missing: List[str] = [key for key in required if not os.getenv(key)]
        if missing:
            raise ValueError(f"Missing required environment variables: {', '.join(missing)}")

    def report_path(self, out: str | Path) -> Path:
        """Relative report paths land under out_dir."""
        path = Path(out)
        return path if path.is_absolute() else Path(self.out_dir) / path

    def with_overrides(self, **overrides: object) -> "SumprodConfig":
        values = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **values)

    def as_dict(self) -> dict:
        return asdict(self)


_active: SumprodConfig | None = None


def get_config() -> SumprodConfig:
    global _active
    if _active is None:
        _active = SumprodConfig.from_env()
    return _active


def set_config(config: SumprodConfig | None) -> None:
    """Install ``config`` as the process-wide configuration (None resets to env)."""
    global _active
    _active = config
