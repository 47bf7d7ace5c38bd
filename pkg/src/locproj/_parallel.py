"""Optional thread pool for independent per-fixed-point work.

``LOCPROJ_THREADS`` caps the number of workers; 0 or unset runs sequentially.
Results come back in input order, so exact sums do not depend on the schedule.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def workers():
    try:
        return max(0, int(os.environ.get("LOCPROJ_THREADS", "0")))
    except ValueError:
        return 0


def pmap(fn, items):
    items = list(items)
    n = workers()
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
