from itertools import permutations

import pytest

from rcpsp_ga.ga.chromosome import ActivityList
from rcpsp_ga.ga.evaluation import FitnessEvaluator
from rcpsp_ga.schedule import EST, fitness
from tests.factories import independent_instance


def lists(*orders):
    return [ActivityList(order) for order in orders]


def test_repeated_lists_are_decoded_once(t1):
    evaluate = FitnessEvaluator(t1, EST)
    batch = lists([1, 2, 3, 4], [2, 1, 3, 4], [1, 2, 3, 4])
    assert evaluate.evaluate_many(batch) == [fitness(t1, al) for al in batch]
    assert evaluate.decodes == 2
    evaluate(ActivityList([2, 1, 3, 4]))
    assert evaluate.decodes == 2


def test_cache_keeps_two_generations():
    instance = independent_instance([1, 2, 3])
    evaluate = FitnessEvaluator(instance, EST)
    evaluate.evaluate_many(lists([1, 2, 3], [3, 2, 1]))
    evaluate.new_generation()
    evaluate.evaluate_many(lists([1, 2, 3]))
    assert evaluate.decodes == 2
    assert len(evaluate) == 3

    # [3, 2, 1] was last seen two generations ago
    evaluate.new_generation()
    assert len(evaluate) == 1
    evaluate.evaluate_many(lists([3, 2, 1], [1, 2, 3]))
    assert evaluate.decodes == 3


def test_cache_size_follows_the_population():
    evaluate = FitnessEvaluator(independent_instance([1, 2, 3, 4, 5, 6]), EST)
    orders = list(permutations(range(1, 7)))
    for generation in range(30):
        evaluate.new_generation()
        evaluate.evaluate_many(lists(orders[0], orders[1], orders[2 + 2 * generation], orders[3 + 2 * generation]))
        assert len(evaluate) <= 8
    assert evaluate.decodes == 2 + 2 * 30


if __name__ == '__main__':
    pytest.main()
