import pytest
import yaml
from typer.testing import CliRunner

from src.sylow.cli import app


runner = CliRunner()
# Отчёт в stdout, логи отдельно в stderr
quiet_runner = CliRunner(mix_stderr=False)


def _run(*args):
    return runner.invoke(app, [str(a) for a in args])


def test_flip_suite(tmp_path):
    out = tmp_path / 'flip.yaml'
    result = _run('verify', '--suite', 'flip', '--p', 5, '--k', 1, '--m', 2,
                  '--samples', 50, '--seed', 7, '--out', out)
    assert result.exit_code == 0, result.output
    report = yaml.safe_load(out.read_text(encoding='utf-8'))
    assert report['config']['seed'] == 7
    assert report['config']['suite'] == 'flip'
    assert len(report['checks']) == 5
    assert all(check['passed'] for check in report['checks'])
    assert report['verdict'] is True


def test_reports_are_deterministic(tmp_path):
    paths = [tmp_path / 'a.yaml', tmp_path / 'b.yaml']
    for path in paths:
        result = _run('verify', '--suite', 'formulas', '--p', 5, '--q', 5, '--n', 3,
                      '--samples', 30, '--seed', 3, '--out', path)
        assert result.exit_code == 0, result.output
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert 'seconds' not in paths[0].read_text(encoding='utf-8')


@pytest.mark.parametrize('suite', ['sylow', 'centralizer', 'qseries'])
def test_unitary_suites(tmp_path, suite):
    out = tmp_path / f'{suite}.yaml'
    result = _run('verify', '--suite', suite, '--p', 5, '--q', 5, '--n', 3,
                  '--samples', 50, '--cache-dir', tmp_path / 'cache', '--out', out)
    assert result.exit_code == 0, result.output
    report = yaml.safe_load(out.read_text(encoding='utf-8'))
    assert report['checks'] and all(check['passed'] for check in report['checks'])


def test_wreath_suite(tmp_path):
    out = tmp_path / 'wreath.yaml'
    result = _run('verify', '--suite', 'wreath', '--p', 5, '--r', 2, '--height', 0, '--out', out)
    assert result.exit_code == 0, result.output
    report = yaml.safe_load(out.read_text(encoding='utf-8'))
    thompson = [check for check in report['checks'] if check['name'] == 'wreath Thompson'][0]
    assert thompson['note'] == 'unverified'


def test_construct_cache_hit(tmp_path):
    cache = tmp_path / 'g.cache'
    first = _run('construct', '--p', 5, '--q', 5, '--n', 3, '--out', cache)
    assert first.exit_code == 0, first.output
    content = cache.read_bytes()
    second = _run('construct', '--p', 5, '--q', 5, '--n', 3, '--out', cache)
    assert second.exit_code == 0, second.output
    assert cache.read_bytes() == content
    mismatch = _run('construct', '--p', 5, '--q', 5, '--n', 2, '--out', cache)
    assert mismatch.exit_code == 4


def test_compute(tmp_path):
    out = tmp_path / 'compute.yaml'
    result = _run('compute', '--p', 5, '--q', 5, '--n', 3, '--out', out)
    assert result.exit_code == 0, result.output
    results = yaml.safe_load(out.read_text(encoding='utf-8'))['results']
    assert results['order'] == 125
    assert results['exponent'] == 5
    assert results['center'] == 5
    assert results['p_rank'] == 2 and results['p_rank_by_cliques'] == 2
    assert results['J'] == 125 and results['X'] == 125 and results['J_normal'] is True
    assert results['A'] == 125 and results['A0'] == 5


def test_conjecture_wreath(tmp_path):
    out = tmp_path / 'conjecture.yaml'
    result = _run('--timing', 'conjecture', '--kind', 'wreath', '--p', 5, '--r', 2, '--out', out)
    assert result.exit_code == 0, result.output
    report = yaml.safe_load(out.read_text(encoding='utf-8'))
    assert report['results']['X'] == 25
    assert all('seconds' in check for check in report['checks'])
    assert any(check['name'] == 'Oliver oracle' for check in report['checks'])


@pytest.mark.slow
def test_conjecture_n4():
    result = quiet_runner.invoke(app, 'conjecture --p 5 --q 5 --n 4'.split())
    assert result.exit_code == 0, result.stderr
    report = yaml.safe_load(result.stdout)
    assert report['verdict'] is True
    assert report['results']['X'] == 15625 and report['results']['J'] > 1


def test_metrics(tmp_path):
    metrics = tmp_path / 'metrics.prom'
    result = _run('--metrics', metrics, 'verify', '--suite', 'flip', '--p', 5, '--m', 1,
                  '--samples', 10, '--out', tmp_path / 'r.yaml')
    assert result.exit_code == 0, result.output
    text = metrics.read_text(encoding='utf-8')
    assert 'sylow_checks_total{suite="flip",outcome="pass"}' in text
    assert 'sylow_check_seconds_count{suite="flip"}' in text


@pytest.mark.parametrize('args, code', [
    (['construct', '--p', 3, '--q', 3, '--n', 3], 2),
    (['verify', '--suite', 'nope', '--p', 5], 2),
    (['verify', '--suite', 'sylow', '--p', 5, '--q', 5], 2),
    (['construct', '--p', 5, '--q', 5, '--n', 4, '--budget', 100], 3),
    (['compute', '--kind', 'wreath', '--p', 5, '--r', 2, '--height', 1], 3),
])
def test_exit_codes(tmp_path, args, code):
    result = _run(*args, '--cache-dir', tmp_path)
    assert result.exit_code == code, result.output


def test_unwritable_report(tmp_path):
    blocker = tmp_path / 'file'
    blocker.write_text('x')
    result = _run('verify', '--suite', 'flip', '--p', 5, '--m', 1, '--samples', 5,
                  '--out', blocker / 'report.yaml')
    assert result.exit_code == 4


def test_documented_flip_command():
    result = quiet_runner.invoke(app, 'verify --suite prop31 --p 5 --k 1 --m 4 --samples 1000 --seed 7'.split())
    assert result.exit_code == 0, result.stderr
    report = yaml.safe_load(result.stdout)
    assert report['config']['suite'] == 'flip'
    assert report['config']['seed'] == 7
    assert len(report['checks']) == 5
    assert all(check['passed'] for check in report['checks'])


def test_documented_wreath_alias():
    result = quiet_runner.invoke(app, 'verify --suite thm26 --p 5 --r 2 --height 0'.split())
    assert result.exit_code == 0, result.stderr
    report = yaml.safe_load(result.stdout)
    assert report['config']['suite'] == 'wreath'
    assert [check['name'] for check in report['checks']][:2] == ['wreath structure', 'wreath Thompson']


def test_documented_construct_command(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    command = 'construct --p 5 --q 5 --n 3 --out g.cache'.split()
    first = quiet_runner.invoke(app, command)
    assert first.exit_code == 0, first.stderr
    content = (tmp_path / 'g.cache').read_bytes()
    second = quiet_runner.invoke(app, command)
    assert second.exit_code == 0, second.stderr
    assert (tmp_path / 'g.cache').read_bytes() == content
    assert yaml.safe_load(second.stdout)['results']['order'] == 125
