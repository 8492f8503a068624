import json

import pytest
from click.testing import CliRunner

from core.cli import lab, run

GOOD_LEDGER = "\n".join(json.dumps(row) for row in [
    {'curve': 'C1', 'cusp': 'c1', 'mult': 1, 'global': 'A'},
    {'curve': 'C1', 'cusp': 'c2', 'mult': -1, 'global': 'B'},
    {'curve': 'C2', 'cusp': 'c3', 'mult': 1, 'global': 'B'},
    {'curve': 'C2', 'cusp': 'c4', 'mult': -1, 'global': 'A'},
])

BAD_LEDGER = "\n".join(json.dumps(row) for row in [
    {'curve': 'C1', 'cusp': 'c1', 'mult': 1},
    {'curve': 'C1', 'cusp': 'c2', 'mult': -1},
    {'curve': 'C2', 'cusp': 'c3', 'mult': 1},
    {'curve': 'C2', 'cusp': 'c4', 'mult': -1},
])

BAD_TABLE = "curve,cusp,global\nC1,c1,A\nC1,c2,B\nC2,c3,A\nC2,c4,B\n"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def ledgers(tmp_path):
    good, bad, table = tmp_path / 'good.jsonl', tmp_path / 'bad.jsonl', tmp_path / 'table.csv'
    good.write_text(GOOD_LEDGER)
    bad.write_text(BAD_LEDGER)
    table.write_text(BAD_TABLE)
    return good, bad, table


def test_hecke_cosets(runner):
    result = runner.invoke(lab, ['hecke', 'cosets', '--p', '3', '--D', '3'])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['count'] == 10
    assert report['config']['precision'] == 30


def test_hecke_cosets_rejects_inert_prime(runner):
    result = runner.invoke(lab, ['hecke', 'cosets', '--p', '5', '--D', '3'])
    assert result.exit_code == 2


def test_verify_writes_artifact(runner, tmp_path):
    result = runner.invoke(lab, ['verify', 'ramified', '--order', '6', '--seed', '11'])
    assert result.exit_code == 0
    artifact = json.loads((tmp_path / 'results' / 'verify_ramified.json').read_text())
    assert artifact['seed'] == 11
    assert artifact['config']['order_ramified'] == 6
    assert artifact['passed']
    assert 'order_ramified' in artifact['below_minimum_orders']
    assert json.loads(result.stdout) == artifact


def test_verify_csv(runner, tmp_path):
    result = runner.invoke(lab, ['--format', 'csv', 'verify', 'ramified', '--order', '6'])
    assert result.exit_code == 0
    assert result.stdout.startswith('# config: ')
    assert (tmp_path / 'results' / 'verify_ramified.csv').read_text() == result.stdout


@pytest.mark.parametrize("args", [
    ['verify', 'nosuch'],
    ['verify', '--bogus'],
    ['--precision', '10', 'verify', 'ramified'],
    ['lfactor', '--place', 'archimedean'],
    ['lfactor', '--place', 'inert', '--satake', 'a1=2'],
])
def test_usage_errors_exit_2(runner, args):
    assert runner.invoke(lab, args).exit_code == 2


def test_lfactor(runner):
    result = runner.invoke(lab, ['--order', '6', 'lfactor', '--place', 'inert', '--satake', 'a=2, n1=3'])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['series_check']['equal']
    assert report['place']['values']['a'] == '2'


def test_boundary_ledger(runner, ledgers):
    good, bad, table = ledgers
    result = runner.invoke(lab, ['boundary', 'ledger', '--in', str(good)])
    assert result.exit_code == 0
    assert json.loads(result.stdout)['ok_2b']

    result = runner.invoke(lab, ['boundary', 'ledger', '--in', str(bad), '--pushforward', str(table)])
    assert result.exit_code == 1
    assert json.loads(result.stdout)['pushforward'] == {'A': 2, 'B': -2}

    result = runner.invoke(lab, ['boundary', 'ledger', '--in', str(bad)])
    assert result.exit_code == 1
    assert len(json.loads(result.stdout)['unmapped']) == 4


def test_boundary_torsion(runner):
    result = runner.invoke(lab, ['boundary', 'torsion', '--u', '1/2,0', '--lattice', '1,0;0,1'])
    assert result.exit_code == 0
    assert json.loads(result.stdout)['torsion_order'] == 2
    assert runner.invoke(lab, ['boundary', 'torsion', '--u', '1,2,3', '--lattice', '1,0;0,1']).exit_code == 2


def test_assemble(runner):
    result = runner.invoke(lab, ['assemble', '--D', '3', '--lprime', '1', '--check'])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert 'limit_check' in report
    assert runner.invoke(lab, ['assemble', '--D', '5', '--lprime', '1']).exit_code == 2


def test_run_returns_exit_codes(ledgers):
    good, bad, table = ledgers
    assert run(['hecke', 'cosets', '--p', '3', '--D', '3']) == 0
    assert run(['boundary', 'ledger', '--in', str(bad), '--pushforward', str(table)]) == 1
    assert run(['verify', 'nosuch']) == 2
    assert run(['--bogus']) == 2
