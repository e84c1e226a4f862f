"""Toolkit configuration as an injectable dataclass."""

import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

logger = logging.getLogger(__name__)


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name, "")
    if not raw.strip():
        return float(default)
    try:
        return float(raw)
    except (TypeError, ValueError):
        logger.warning("Ignoring %s=%r (not a number); using %s", name, raw, default)
        return float(default)


@dataclass
class AppConfig:
    """Numeric tolerances and runtime options loaded from environment variables."""

    # Operator / state validation
    hermiticity_tol: float = 1e-10
    psd_tol: float = 1e-9
    trace_tol: float = 1e-9

    # Rank and vanishing tests
    schmidt_rank_tol: float = 1e-9
    zero_block_rel_tol: float = 1e-9
    antisym_tol: float = 1e-9
    gns_rank_rel_tol: float = 1e-10
    distance_ratio_floor: float = 1e-14

    # Dynamics
    chart_switch_threshold: float = 2.0
    hbar: float = 1.0
    rk4_step: float = 1e-3

    # Logging
    log_level: str = "INFO"
    log_file: str = ""

    @staticmethod
    def from_env() -> "AppConfig":
        """Load config from .env file and environment variables."""
        load_dotenv()
        return AppConfig(
            hermiticity_tol=_env_float("KAEHLERKIT_HERMITICITY_TOL", 1e-10),
            psd_tol=_env_float("KAEHLERKIT_PSD_TOL", 1e-9),
            trace_tol=_env_float("KAEHLERKIT_TRACE_TOL", 1e-9),
            schmidt_rank_tol=_env_float("KAEHLERKIT_SCHMIDT_RANK_TOL", 1e-9),
            zero_block_rel_tol=_env_float("KAEHLERKIT_ZERO_BLOCK_TOL", 1e-9),
            antisym_tol=_env_float("KAEHLERKIT_ANTISYM_TOL", 1e-9),
            gns_rank_rel_tol=_env_float("KAEHLERKIT_GNS_RANK_TOL", 1e-10),
            chart_switch_threshold=_env_float("KAEHLERKIT_CHART_THRESHOLD", 2.0),
            hbar=_env_float("KAEHLERKIT_HBAR", 1.0),
            rk4_step=_env_float("KAEHLERKIT_RK4_STEP", 1e-3),
            log_level=os.getenv("LOG_LEVEL", "INFO").upper(),
            log_file=os.getenv("LOG_FILE", "").strip(),
        )

    def tolerances(self) -> dict[str, float]:
        """Effective tolerances, echoed verbatim into every report."""
        return {
            "hermiticity_tol": self.hermiticity_tol,
            "psd_tol": self.psd_tol,
            "trace_tol": self.trace_tol,
            "schmidt_rank_tol": self.schmidt_rank_tol,
            "zero_block_rel_tol": self.zero_block_rel_tol,
            "antisym_tol": self.antisym_tol,
            "gns_rank_rel_tol": self.gns_rank_rel_tol,
        }
