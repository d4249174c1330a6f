from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def split_round_robin(items: list[T], shards: int) -> list[list[T]]:
    """
    Deal items into at most ``shards`` non-empty lists, item i going to list i mod shards.

    Args:
        items (list[T]): Work items in a deterministic order.
        shards (int): Requested number of shards.

    Returns:
        list[list[T]]: The shards, empty ones dropped.
    """
    buckets: list[list[T]] = [[] for _ in range(max(1, shards))]
    for position, item in enumerate(items):
        buckets[position % len(buckets)].append(item)
    return [bucket for bucket in buckets if bucket]


def run_sharded(worker: Callable[[T], R], tasks: Iterable[T], jobs: int) -> list[R]:
    """
    Run ``worker`` over tasks, in worker processes when jobs > 1. Results keep task order.

    ``worker`` must be a module-level function so it can be pickled.
    """
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(worker, tasks))
