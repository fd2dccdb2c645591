"""Row-range process pool with deterministic result order."""

import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np

logger = logging.getLogger(__name__)


def row_ranges(n_rows: int, chunk: int) -> list[tuple[int, int]]:
    if chunk < 1:
        raise ValueError(f"chunk must be positive, got {chunk}")
    return [(start, min(start + chunk, n_rows)) for start in range(0, n_rows, chunk)]


def _join(parts: list):
    if parts and isinstance(parts[0], np.ndarray):
        return np.concatenate(parts)
    out = []
    for part in parts:
        out.extend(part)
    return out


def map_row_ranges(func, n_rows: int, workers: int = 1, chunk: int | None = None):
    """Apply func(start, stop) over consecutive row ranges and join in range order.

    func must be picklable (a module-level function or a functools.partial of
    one). Array results are concatenated, anything else is treated as a list.
    """
    if n_rows == 0:
        return []
    if chunk is None:
        chunk = max(1, -(-n_rows // max(1, 4 * workers)))
    ranges = row_ranges(n_rows, chunk)
    starts = [a for a, _ in ranges]
    stops = [b for _, b in ranges]

    if workers <= 1 or len(ranges) == 1:
        parts = [func(a, b) for a, b in ranges]
    else:
        logger.info("scanning %d rows in %d chunks on %d workers", n_rows, len(ranges), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(func, starts, stops))
    return _join(parts)
