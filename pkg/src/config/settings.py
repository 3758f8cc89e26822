"""Application configuration for the Hopf integrals toolkit."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

_REPO_ROOT = Path(__file__).resolve().parents[2]


@dataclass(frozen=True)
class Settings:
    app_name: str = "Hopf Vacuum Integrals"
    app_version: str = "0.1.0"
    environment: str = os.getenv("APP_ENV", "development")
    log_level: str = os.getenv("LOG_LEVEL", "INFO")
    rewrite_budget: int = int(os.getenv("HOPF_REWRITE_BUDGET", "10000"))
    smash_sweep_limit: int = int(os.getenv("HOPF_SMASH_SWEEP_LIMIT", "64"))
    qplane_max_n: int = int(os.getenv("HOPF_QPLANE_MAX_N", "4"))
    qplane_warn_n: int = int(os.getenv("HOPF_QPLANE_WARN_N", "4"))
    identity_max_order: int = int(os.getenv("HOPF_IDENTITY_MAX_ORDER", "6"))
    presentations_dir: Path = Path(os.getenv("HOPF_PRESENTATIONS_DIR", str(_REPO_ROOT / "data" / "presentations")))
    job_workers: int = int(os.getenv("HOPF_JOB_WORKERS", "2"))


settings = Settings()
