"""
    Fitness evaluation with a two-generation cache keyed by gene sequence and allocation policy. With more
    than one worker the uncached lists of a batch are decoded in a multiprocessing pool;
    batches are formed after all random draws of a generation, so results do not depend on
    the number of workers.
"""
import logging
import multiprocessing

from rcpsp_ga.schedule import fitness

logger = logging.getLogger(__name__)

_worker_instance = None
_worker_policy = None


def _init_worker(instance, policy):
    global _worker_instance, _worker_policy
    _worker_instance = instance
    _worker_policy = policy


def _evaluate_genes(genes):
    return fitness(_worker_instance, genes, _worker_policy)


class FitnessEvaluator:
    """
    Makespan of activity lists, decoded once per list while the list stays around. The cache
    holds the lists seen in the current and the previous generation only; `new_generation()`
    drops the older half, so memory follows the population size rather than the run length.
    """

    def __init__(self, instance, policy, workers=1):
        self.instance = instance
        self.policy = policy
        self.workers = max(1, int(workers))
        self.cache = {}
        self.previous = {}
        self.decodes = 0
        self._pool = None

    def __call__(self, activity_list) -> int:
        return self.evaluate_many([activity_list])[0]

    def __len__(self):
        return len(self.cache) + len(self.previous)

    def new_generation(self):
        self.previous, self.cache = self.cache, {}

    def evaluate_many(self, activity_lists) -> list:
        keys = [(tuple(al), self.policy) for al in activity_lists]
        for k in keys:
            if k not in self.cache and k in self.previous:
                self.cache[k] = self.previous[k]
        pending = list(dict.fromkeys(k for k in keys if k not in self.cache))
        if pending:
            if self.workers > 1 and len(pending) > 1:
                results = self._get_pool().map(_evaluate_genes, [genes for genes, _ in pending])
            else:
                results = [fitness(self.instance, genes, self.policy) for genes, _ in pending]
            self.cache.update(zip(pending, results))
            self.decodes += len(pending)
        return [self.cache[k] for k in keys]

    def _get_pool(self):
        if self._pool is None:
            logger.info(f"starting evaluation pool with {self.workers} workers")
            self._pool = multiprocessing.Pool(self.workers, initializer=_init_worker,
                                              initargs=(self.instance, self.policy))
        return self._pool

    def close(self):
        if self._pool is not None:
            self._pool.close()
            self._pool.join()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False
