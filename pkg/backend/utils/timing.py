import logging
from contextlib import contextmanager
from time import perf_counter

logger = logging.getLogger(__name__)


@contextmanager
def timing(label: str, timings: dict[str, float]):
    """
    Measure the execution time of a block, store it under ``label`` and log it at INFO.

    Args:
        label (str): Key name to store timing in the timings dictionary.
        timings (dict[str, float]): Dictionary receiving the elapsed seconds.

    Example:
        timings = {}
        with timing("census", timings):
            census(8)
        print(timings["census"])
    """
    start = perf_counter()
    try:
        yield
    finally:
        timings[label] = perf_counter() - start
        logger.info("%s took %.3fs", label, timings[label])
