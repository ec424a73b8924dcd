"""Chunked range scans with an order-preserving reduction.

Chunk boundaries depend only on the range, never on the worker count, so
every reduction sees the same partial results in the same order and the
output is bit-identical for any ``workers``.
"""

from concurrent.futures import ThreadPoolExecutor

CHUNK = 1 << 18


def chunk_bounds(lo, hi, chunk=CHUNK):
    """Split ``[lo, hi)`` into contiguous chunks of at most ``chunk`` integers."""
    return [(a, min(a + chunk, hi)) for a in range(lo, hi, chunk)]


def map_chunks(fn, lo, hi, workers=1, chunk=CHUNK):
    """Apply ``fn(a, b)`` to every chunk of ``[lo, hi)``; results in index order.

    The kernels release the GIL, so a thread pool gives real parallelism.
    """
    bounds = chunk_bounds(lo, hi, chunk)
    if workers <= 1 or len(bounds) <= 1:
        return [fn(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ab: fn(*ab), bounds))


def sum_chunks(fn, lo, hi, workers=1):
    parts = map_chunks(fn, lo, hi, workers)
    total = 0
    for part in parts:
        total = total + part
    return total
