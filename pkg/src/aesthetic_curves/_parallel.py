import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "AESTH_CURVES_THREADS"


def thread_count() -> int:
    try:
        return max(0, int(os.environ.get(ENV_THREADS, "0")))
    except ValueError:
        return 0


def pmap(fn, items):
    """map() that fans out over threads when AESTH_CURVES_THREADS > 0.

    Results come back in input order, so callers see the sequential answer.
    """
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
