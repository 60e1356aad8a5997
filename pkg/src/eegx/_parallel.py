"""Worker-pool helpers. EEGX_THREADS caps the number of workers."""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    """Number of workers allowed by the EEGX_THREADS environment variable.

    Defaults to 1 (sequential). Invalid or non-positive values fall back
    to 1 so a bad environment never breaks a run.
    """
    raw = os.environ.get("EEGX_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def parallel_map(fn, items):
    """Map ``fn`` over ``items`` preserving order.

    Runs sequentially unless EEGX_THREADS > 1. Each item must carry its
    own seed/state so results do not depend on scheduling.
    """
    items = list(items)
    n_workers = min(worker_count(), len(items)) if items else 1
    if n_workers <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(fn, items))
