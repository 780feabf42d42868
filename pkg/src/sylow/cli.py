import logging
from pathlib import Path
from typing import Callable, Dict, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from . import config
from .errors import InvalidParamsError, SylowError
from .groups.base_group import Group
from .groups.unitary import UnitaryParams, enumerate_sylow
from .groups.wreath import WreathSpec, build_wreath
from .responses import Report, RunConfig
from .servicies.cache import cache_name, get_or_build
from .servicies.metrics import write_metrics
from .servicies.suites import SUITES, compute_invariants, conjecture_records, run_suite


logger = logging.getLogger('sylow')

app = typer.Typer(add_completion=False, help='Силовские подгруппы U_n(F_q), J(S) и X(S)')

# Параметры, общие для всех команд
state = {'timing': False, 'metrics': None}

# Имена наборов из документации CLI
SUITE_ALIASES = {'prop31': 'flip', 'thm26': 'wreath'}

@app.callback()
def main(
    log_level: str = typer.Option(config.LOG_LEVEL, '--log-level', help='Уровень логирования'),
    timing: bool = typer.Option(False, '--timing', help='Писать время проверок в отчёт'),
    metrics: Optional[Path] = typer.Option(None, '--metrics', help='Файл метрик Prometheus'),
):
    logging.basicConfig(
        level=log_level.upper(),
        format='%(message)s',
        datefmt='[%X]',
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True)],
        force=True,
    )
    state['timing'] = timing
    state['metrics'] = metrics


def _unitary_params(cfg: RunConfig) -> UnitaryParams:
    if cfg.n is None:
        raise InvalidParamsError('--n is required for unitary groups')
    if cfg.q is not None:
        return UnitaryParams(p=cfg.p, q=cfg.q, n=cfg.n)
    return UnitaryParams.from_k(cfg.p, cfg.k or 1, cfg.n)


def _wreath_spec(cfg: RunConfig) -> WreathSpec:
    return WreathSpec(p=cfg.p, r=1 if cfg.r is None else cfg.r, height=cfg.height or 0, budget=cfg.budget)


def _expected_header(cfg: RunConfig) -> Dict:
    # Поля заголовка кэша, которые должны совпасть с параметрами запуска
    if cfg.kind == 'wreath':
        spec = _wreath_spec(cfg)
        return {'representation': 'wreath', 'p': spec.p, 'r': spec.r, 'height': spec.height}
    params = _unitary_params(cfg)
    return {'representation': 'matrix', 'p': params.p, 'k': params.k, 'n': params.n}


def _load_group(cfg: RunConfig, cache_path: Optional[Path] = None) -> Group:
    '''
    Строит группу или берёт её из кэша. Кэш используется, если задан
    cache_path или каталог --cache-dir.
    '''
    expected = _expected_header(cfg)
    if cfg.kind == 'wreath':
        spec = _wreath_spec(cfg)
        build: Callable[[], Group] = lambda: build_wreath(spec)  # noqa: E731
    else:
        params = _unitary_params(cfg)
        build = lambda: enumerate_sylow(params, cfg.budget)  # noqa: E731
    if cache_path is None and cfg.cache_dir is not None:
        cache_path = Path(cfg.cache_dir) / cache_name(expected)
    if cache_path is None:
        return build()
    return get_or_build(cache_path, build, expected)


def _finish(report: Report, out: Optional[Path]) -> None:
    # Отчёт в файл или в stdout, метрики по запросу, код выхода по вердикту
    if out is not None:
        try:
            report.write(out)
        except OSError as e:
            logger.error('Не удалось записать отчёт %s: %s', out, e)
            raise typer.Exit(4)
        logger.info('Отчёт записан: %s', out)
    else:
        typer.echo(report.to_yaml(), nl=False)
    if state['metrics'] is not None:
        write_metrics(state['metrics'])
    raise typer.Exit(0 if report.verdict else 1)


def _guarded(action: Callable[[], None]) -> None:
    '''
    Единая точка перевода исключений в коды выхода.
    '''
    try:
        action()
    except ValidationError as e:
        logger.error('Неверные параметры: %s', e)
        raise typer.Exit(2)
    except SylowError as e:
        logger.error('%s: %s', type(e).__name__, e)
        raise typer.Exit(e.exit_code)


@app.command()
def construct(
    kind: str = typer.Option('unitary', '--kind', help='unitary или wreath'),
    p: int = typer.Option(..., '--p', help='Простое p'),
    q: Optional[int] = typer.Option(None, '--q', help='Порядок поля F_q'),
    k: Optional[int] = typer.Option(None, '--k', help='q = p^k'),
    n: Optional[int] = typer.Option(None, '--n', help='Размер матриц'),
    r: Optional[int] = typer.Option(None, '--r', help='Нижняя группа C_{p^r}'),
    height: Optional[int] = typer.Option(None, '--height', help='Число слоёв сплетения'),
    budget: int = typer.Option(config.ELEMENT_BUDGET, '--budget', help='Лимит элементов'),
    seed: int = typer.Option(config.DEFAULT_SEED, '--seed'),
    out: Optional[Path] = typer.Option(None, '--out', help='Файл кэша группы'),
    cache_dir: Optional[Path] = typer.Option(None, '--cache-dir', envvar='SYLOW_CACHE_DIR'),
):
    """
    Строит группу и сохраняет её в кэш.
    """
    def action():
        cfg = RunConfig(command='construct', kind=kind, p=p, q=q, k=k, n=n, r=r, height=height,
                        budget=budget, seed=seed, samples=0, out=None if out is None else str(out),
                        cache_dir=str(cache_dir or config.CACHE_DIR))
        path = out or Path(cfg.cache_dir) / cache_name(_expected_header(cfg))
        G = _load_group(cfg, path)
        report = Report(config=cfg)
        report.results = {'order': G.order, 'cache': str(path), 'generators': len(G.generators)}
        _finish(report, None)

    _guarded(action)


@app.command()
def verify(
    suite: str = typer.Option(..., '--suite', help=', '.join(SUITES)),
    p: int = typer.Option(..., '--p', help='Простое p'),
    q: Optional[int] = typer.Option(None, '--q'),
    k: Optional[int] = typer.Option(None, '--k'),
    n: Optional[int] = typer.Option(None, '--n'),
    m: Optional[int] = typer.Option(None, '--m', help='Размер блоков для набора flip'),
    r: Optional[int] = typer.Option(None, '--r'),
    height: Optional[int] = typer.Option(None, '--height'),
    budget: int = typer.Option(config.ELEMENT_BUDGET, '--budget'),
    seed: int = typer.Option(config.DEFAULT_SEED, '--seed'),
    samples: int = typer.Option(config.DEFAULT_SAMPLES, '--samples'),
    out: Optional[Path] = typer.Option(None, '--out', help='Файл отчёта YAML'),
    cache_dir: Optional[Path] = typer.Option(None, '--cache-dir', envvar='SYLOW_CACHE_DIR'),
):
    """
    Запускает набор проверок и пишет отчёт.
    """
    def action():
        name = SUITE_ALIASES.get(suite, suite)
        if name not in SUITES:
            raise InvalidParamsError(f'unknown suite {suite!r}, expected one of {", ".join(SUITES)}')
        kind = 'wreath' if name == 'wreath' else 'unitary'
        cfg = RunConfig(command='verify', kind=kind, suite=name, p=p, q=q, k=k, n=n, m=m, r=r,
                        height=height, budget=budget, seed=seed, samples=samples,
                        out=None if out is None else str(out),
                        cache_dir=None if cache_dir is None else str(cache_dir))
        group = None
        if name in ('sylow', 'centralizer', 'qseries'):
            group = _load_group(cfg)
        report = Report(config=cfg)
        report.add(run_suite(name, p, q=q, k=k, n=n, m=m, r=r, height=height, samples=samples,
                             seed=seed, budget=budget, timing=state['timing'], group=group))
        _finish(report, out)

    _guarded(action)


@app.command()
def compute(
    kind: str = typer.Option('unitary', '--kind', help='unitary или wreath'),
    p: int = typer.Option(..., '--p'),
    q: Optional[int] = typer.Option(None, '--q'),
    k: Optional[int] = typer.Option(None, '--k'),
    n: Optional[int] = typer.Option(None, '--n'),
    r: Optional[int] = typer.Option(None, '--r'),
    height: Optional[int] = typer.Option(None, '--height'),
    budget: int = typer.Option(config.ELEMENT_BUDGET, '--budget'),
    seed: int = typer.Option(config.DEFAULT_SEED, '--seed'),
    out: Optional[Path] = typer.Option(None, '--out'),
    cache_dir: Optional[Path] = typer.Option(None, '--cache-dir', envvar='SYLOW_CACHE_DIR'),
):
    """
    Считает инварианты группы: |G|, экспоненту, |Z|, p-ранг, |J|, |X|.
    """
    def action():
        cfg = RunConfig(command='compute', kind=kind, p=p, q=q, k=k, n=n, r=r, height=height,
                        budget=budget, seed=seed, samples=0, out=None if out is None else str(out),
                        cache_dir=None if cache_dir is None else str(cache_dir))
        G = _load_group(cfg)
        report = Report(config=cfg)
        report.results = compute_invariants(G, budget)
        _finish(report, out)

    _guarded(action)


@app.command()
def conjecture(
    kind: str = typer.Option('unitary', '--kind', help='unitary или wreath'),
    p: int = typer.Option(..., '--p'),
    q: Optional[int] = typer.Option(None, '--q'),
    k: Optional[int] = typer.Option(None, '--k'),
    n: Optional[int] = typer.Option(None, '--n'),
    r: Optional[int] = typer.Option(None, '--r'),
    height: Optional[int] = typer.Option(None, '--height'),
    budget: int = typer.Option(config.ELEMENT_BUDGET, '--budget'),
    seed: int = typer.Option(config.DEFAULT_SEED, '--seed'),
    out: Optional[Path] = typer.Option(None, '--out'),
    cache_dir: Optional[Path] = typer.Option(None, '--cache-dir', envvar='SYLOW_CACHE_DIR'),
):
    """
    Проверяет J(S) <= X(S) и леммы для вычисленной X(S).
    """
    def action():
        cfg = RunConfig(command='conjecture', kind=kind, p=p, q=q, k=k, n=n, r=r, height=height,
                        budget=budget, seed=seed, samples=0, out=None if out is None else str(out),
                        cache_dir=None if cache_dir is None else str(cache_dir))
        S = _load_group(cfg)
        report = Report(config=cfg)
        records = conjecture_records(S, seed=seed, timing=state['timing'])
        report.add(records)
        report.results = {key: value for key, value in records[0].counts.items()}
        _finish(report, out)

    _guarded(action)


if __name__ == '__main__':
    app()
