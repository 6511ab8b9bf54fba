"""
Per-cutoff worker pool.

Work items are independent; results always come back in submission
order, so reports do not depend on how many workers ran them.
"""
import logging
from pathlib import Path
from typing import Callable, List, Optional, Sequence, TypeVar

from tqdm import tqdm

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# workers import `src` from the checkout even when the package is not installed
PROJECT_ROOT = Path(__file__).resolve().parents[2]


def _run_serial(fn: Callable[[T], R], items: Sequence[T], desc: str,
                describe: Optional[Callable[[R], str]]) -> List[R]:
    results = []
    pbar = tqdm(items, desc=desc, leave=False)
    for item in pbar:
        result = fn(item)
        results.append(result)
        if describe is not None:
            pbar.set_description(f"{desc} | {describe(result)}")
    return results


def _run_ray(fn: Callable[[T], R], items: Sequence[T], num_workers: int, desc: str) -> List[R]:
    import ray
    from ray.exceptions import RayTaskError

    started = not ray.is_initialized()
    if started:
        ray.init(num_cpus=num_workers, include_dashboard=False, log_to_driver=False,
                 ignore_reinit_error=True,
                 runtime_env={"env_vars": {"PYTHONPATH": str(PROJECT_ROOT)}})
    try:
        remote = ray.remote(fn)
        refs = [remote.remote(item) for item in items]
        pending = list(refs)
        with tqdm(total=len(refs), desc=desc, leave=False) as pbar:
            while pending:
                done, pending = ray.wait(pending, num_returns=1)
                pbar.update(len(done))
        try:
            return ray.get(refs)
        except RayTaskError as e:
            # surface the library error so the CLI maps it to its exit code
            raise e.cause if getattr(e, "cause", None) is not None else e
    finally:
        if started:
            ray.shutdown()


def run_work_items(
    fn: Callable[[T], R],
    items: Sequence[T],
    num_workers: int = 1,
    desc: str = "Cutoffs",
    describe: Optional[Callable[[R], str]] = None,
) -> List[R]:
    """
    Map `fn` over `items`.

    Args:
        fn: a module-level function (it is shipped to Ray workers by reference)
        num_workers: <= 1 runs in-process with a progress bar, otherwise on local Ray
        describe: progress-bar suffix built from each result (serial only)
    """
    items = list(items)
    if num_workers <= 1 or len(items) <= 1:
        return _run_serial(fn, items, desc, describe)
    try:
        import ray  # noqa: F401
    except ImportError:
        logger.warning("[Runner] ray is not installed (pip install .[parallel]); running serially")
        return _run_serial(fn, items, desc, describe)
    logger.info(f"[Runner] {len(items)} work items on {num_workers} Ray workers")
    return _run_ray(fn, items, num_workers, desc)
