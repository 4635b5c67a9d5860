import os
from typing import Any, Dict, Iterable, Optional

from dotenv import load_dotenv


def _flag(value: str) -> bool:
    return value.strip().lower() in ("1", "true", "yes")


def load_and_check_env(required_keys: Optional[Iterable[str]] = None) -> Dict[str, Any]:
    load_dotenv()

    if required_keys:
        missing = [k for k in required_keys if not os.getenv(k)]
        if missing:
            raise ValueError(f"Missing required env keys: {', '.join(missing)}")

    cfg = {
        "METER": _flag(os.getenv("INFIX_METER", "0")),
        "MONOID_LIMIT": int(os.getenv("INFIX_MONOID_LIMIT", "10000")),
        "VALIDATE_SAMPLES": int(os.getenv("INFIX_VALIDATE_SAMPLES", "500")),
        "SEED": int(os.getenv("INFIX_SEED", "7")),
        "LOG_LEVEL": os.getenv("INFIX_LOG_LEVEL", "WARNING").upper(),
        "BENCH_OUT": os.getenv("INFIX_BENCH_OUT", "bench/bench.csv"),
        "BENCH_WINDOW": int(os.getenv("INFIX_BENCH_WINDOW", "64")),
        "BENCH_MAX_OUTPUTS": int(os.getenv("INFIX_BENCH_MAX_OUTPUTS", "5000")),
    }
    return cfg


def parse_sizes(text: str) -> list:
    """'1000,100000' -> [1000, 100000]"""
    return [int(s.strip()) for s in text.split(",") if s.strip()]
