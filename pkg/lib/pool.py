"""Worker pool helpers.

Work over a fixed item order is split into contiguous batches and fanned out to
a ThreadPoolExecutor. Results are stitched back in batch order, so the output
never depends on the number of workers or on completion order.
"""

import sys
from concurrent.futures import ThreadPoolExecutor

from lib.errors import WorkerFailureException


def make_batches(total, parallel_workers, min_batch_size=64):
    """Split range(total) into (start, end) batches, roughly one per worker."""
    if total <= 0:
        return []
    batch_size = max(min_batch_size, -(-total // max(1, parallel_workers)))
    return [(start, min(start + batch_size, total)) for start in range(0, total, batch_size)]


def run_batches(func, total, parallel_workers=1, verbose=False, label="batch", min_batch_size=64):
    """Call func(start, end) for each batch and concatenate the returned lists.

    With one worker (or one batch) everything runs inline. Otherwise every batch
    is submitted to the pool; failures are printed and, once all futures have
    finished, turned into a WorkerFailureException.
    """
    batches = make_batches(total, parallel_workers, min_batch_size)
    if parallel_workers <= 1 or len(batches) <= 1:
        results = []
        for start, end in batches:
            results.extend(func(start, end))
        return results

    if verbose:
        print(f"Splitting {total} items into {len(batches)} {label}es for {parallel_workers} workers", file=sys.stderr)

    with ThreadPoolExecutor(max_workers=parallel_workers) as executor:
        futures = [executor.submit(func, start, end) for start, end in batches]

        worker_failed = False
        chunks = []
        for i, future in enumerate(futures):
            try:
                chunks.append(future.result())
                if verbose:
                    print(f"Worker {label} {i+1}/{len(futures)} completed successfully", file=sys.stderr)
            except Exception as e:
                print(f"Worker {label} {i+1} failed with error: {e}", file=sys.stderr)
                worker_failed = True

        if worker_failed:
            raise WorkerFailureException("One or more workers failed during batch processing")

    results = []
    for chunk in chunks:
        results.extend(chunk)
    return results
