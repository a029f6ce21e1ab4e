# === Imports ===
import os
from pathlib import Path

from dotenv import load_dotenv

# === Load environment variables ===
load_dotenv()  # .env at the project root, if present

# Resolve project root (.../orthoglide-synthesis/)
PROJECT_ROOT = Path(__file__).resolve().parents[2]

# === Configuration / Constants ===
_threads_raw = os.getenv("ORTHOGLIDE_THREADS", "")
_seed_raw = os.getenv("ORTHOGLIDE_SEED", "20240501")

OUTPUT_DIR = Path(os.getenv("ORTHOGLIDE_OUTPUT_DIR", str(PROJECT_ROOT / "data" / "processed")))

# Work split for the explorer (rays / grid nodes per task); fixed so results
# do not depend on the thread count
CHUNK_SIZE = 1024
MAX_DEFAULT_THREADS = 8

# === Sanity / guardrail checks ===
if _threads_raw.strip():
    if not _threads_raw.strip().isdigit() or int(_threads_raw) <= 0:
        raise RuntimeError(f"ORTHOGLIDE_THREADS must be a positive integer, got {_threads_raw!r}.")
    THREADS = int(_threads_raw)
else:
    THREADS = min(os.cpu_count() or 1, MAX_DEFAULT_THREADS)

try:
    SEED = int(_seed_raw)
except ValueError as e:
    raise RuntimeError(f"ORTHOGLIDE_SEED must be an integer, got {_seed_raw!r}.") from e


def resolve_threads(threads: int | None) -> int:
    """Explicit thread count, capped by ORTHOGLIDE_THREADS when that is set."""
    if threads is None:
        return THREADS
    if not isinstance(threads, int) or threads <= 0:
        raise ValueError("threads must be a positive integer.")
    return min(threads, THREADS) if _threads_raw.strip() else threads
