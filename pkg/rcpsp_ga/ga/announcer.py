"""
    Convergence log of a GA run with a small publish/subscribe registry, so that several
    consumers can follow a run while it evolves:
        - listen(callback): registers a callback receiving every GenerationRecord
        - announce(record): hands a new record to all listeners

    A listener that raises is dropped, the run goes on.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_makespan: int
    mean_makespan: float
    elapsed_ms: int = None


def format_progress(record: GenerationRecord, ticks_per_day=1) -> str:
    """One progress line for the error stream.

    >>> format_progress(GenerationRecord(3, 40, 42.5, 120), 8)
    'gen 3: best 40 ticks (5.000 d), mean 42.50, 120 ms'
    """
    days = float(Fraction(record.best_makespan) / Fraction(ticks_per_day))
    msg = f'gen {record.generation}: best {record.best_makespan} ticks ({days:.3f} d), mean {record.mean_makespan:.2f}'
    if record.elapsed_ms is not None:
        msg = f'{msg}, {record.elapsed_ms} ms'
    return msg


class GenerationAnnouncer:
    def __init__(self):
        self.listeners = []

    def listen(self, callback):
        logger.debug(f"GA -- new listener {callback!r}")
        self.listeners.append(callback)
        return callback

    def announce(self, record):
        to_remove = []
        for callback in list(self.listeners):
            try:
                callback(record)
            except Exception as e:
                logger.warning(f"GA -- dropping listener {callback!r}: {e}")
                to_remove.append(callback)
        for callback in to_remove:
            self.listeners.remove(callback)


class ConvergenceLog:
    """Per-generation best and mean makespan, the data behind a convergence curve."""

    def __init__(self, ticks_per_day=1):
        self.ticks_per_day = Fraction(ticks_per_day)
        self.records = []
        self.initial_best = None
        self.announcer = GenerationAnnouncer()

    def listen(self, callback):
        return self.announcer.listen(callback)

    def append(self, record: GenerationRecord):
        self.records.append(record)
        self.announcer.announce(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def best_curve(self) -> list:
        return [r.best_makespan for r in self.records]
