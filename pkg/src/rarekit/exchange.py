#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from asyncio import gather, get_event_loop, new_event_loop, set_event_loop
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from functools import partial
from typing import Any, Callable, List, Optional, Sequence

from rarekit.constants import ExecutorKind
from rarekit.logger import KitLogger

logger = KitLogger()


async def job_worker(func: Callable, jobs: Sequence, executor: Executor) -> List:
    """
    Submits every job to the executor and waits for all of them. Results come
    back in job order, whatever order the jobs finish in.
    """
    loop = get_event_loop()
    futures = [loop.run_in_executor(executor, partial(func, job)) for job in jobs]
    return list(await gather(*futures))


class JobExchange:
    """
    Runs independent jobs, serially or on a pool of workers. Every job carries
    its own seed, so the results do not depend on the worker count.
    """

    @classmethod
    def resolve_workers(cls, workers: Optional[int]) -> int:
        """
        Worker count to use, falling back to the loaded config.

        Args:
            workers: Requested worker count or None

        Returns:
            Worker count

        """
        if workers:
            return max(int(workers), 1)
        from rarekit import config
        if config.Config:
            return config.Config.workers
        return 1

    @classmethod
    def map(cls, func: Callable, jobs: Sequence, workers: Optional[int] = None,
            kind: ExecutorKind = ExecutorKind.Process) -> List[Any]:
        """
        Apply func to every job.

        Args:
            func: Callable taking a single job. Must be picklable for process
                  pools, i.e. defined at module level
            jobs: Job arguments
            workers: Number of workers. 1 runs the jobs in this process
            kind: Process or thread pool

        Returns:
            Results in job order

        """
        jobs = list(jobs)
        workers = cls.resolve_workers(workers)
        if workers <= 1 or len(jobs) <= 1:
            return [func(job) for job in jobs]

        pool = ProcessPoolExecutor if kind == ExecutorKind.Process else ThreadPoolExecutor
        logger.debug(f'Running {len(jobs)} jobs on {workers} {kind.value} workers')
        loop = new_event_loop()
        try:
            set_event_loop(loop)
            with pool(max_workers=min(workers, len(jobs))) as executor:
                return loop.run_until_complete(job_worker(func, jobs, executor))
        finally:
            set_event_loop(None)
            loop.close()
