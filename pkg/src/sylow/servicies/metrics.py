import time
from contextlib import contextmanager
from pathlib import Path
from typing import Union

from prometheus_client import CollectorRegistry, Counter, Summary, write_to_textfile

from ..errors import CacheError


# Определение метрик
registry = CollectorRegistry()

# Количество проверок по набору и исходу
checks_counter = Counter(
    'sylow_checks', 'Number of checks by suite and outcome', ['suite', 'outcome'], registry=registry
)
# Время выполнения проверок
check_time = Summary(
    'sylow_check_seconds', 'Time spent in checks', ['suite'], registry=registry
)


@contextmanager
def observe(suite: str):
    '''
    Замеряет время блока и отдаёт его наружу через список из одного элемента.
    '''
    start_time = time.perf_counter()
    spent = [0.0]
    try:
        yield spent
    finally:
        spent[0] = time.perf_counter() - start_time
        check_time.labels(suite=suite).observe(spent[0])


def count_check(suite: str, passed: bool) -> None:
    checks_counter.labels(suite=suite, outcome='pass' if passed else 'fail').inc()


def write_metrics(path: Union[str, Path]) -> None:
    """
    Пишет все метрики в текстовом формате Prometheus.

    Raises:
        CacheError: Файл нельзя записать.
    """
    try:
        write_to_textfile(str(path), registry)
    except OSError as e:
        raise CacheError(f'cannot write metrics to {path}: {e}') from e
