import pytest

from core.addons.errors import UsageError
from core.addons.verification_suites import VerificationSuites


def test_resolve():
    assert VerificationSuites.resolve(None) == list(VerificationSuites.SUITES)
    assert VerificationSuites.resolve(['fe', 'all']) == list(VerificationSuites.SUITES)
    assert VerificationSuites.resolve(['norm', 'klf']) == ['norm', 'klf']
    with pytest.raises(UsageError):
        VerificationSuites.resolve(['norm', 'nosuch'])


@pytest.mark.parametrize("name", ['ramified', 'hecke', 'boundary', 'norm'])
def test_suite_passes(name, small_config):
    result = VerificationSuites.run_suite(name, small_config)
    assert result['suite'] == name
    assert result['records']
    assert all(r['suite'] == name for r in result['records'])
    assert result['passed'], VerificationSuites.failures({'results': [result]})


def test_suite_errors_become_failed_records(small_config):
    # order 6 leaves no room to reconstruct a degree six denominator
    result = VerificationSuites.run_suite('reconstruct', small_config)
    assert not result['passed']
    assert result['records'][0]['test'] == 'reconstruct.error'
    assert result['records'][0]['detail']['error'] == 'ReconstructionError'


def test_run_summary(small_config):
    summary = VerificationSuites.run(small_config, ['ramified', 'norm'])
    assert summary['config'] == small_config.model_dump()
    assert summary['seed'] == small_config.seed
    assert summary['below_minimum_orders'] == ['order_inert', 'order_ramified', 'order_split']
    assert [r['suite'] for r in summary['results']] == ['ramified', 'norm']
    assert summary['passed']
    assert VerificationSuites.failures(summary) == []
    assert len(VerificationSuites.flatten(summary)) == sum(len(r['records']) for r in summary['results'])


def test_run_is_deterministic(small_config):
    first = VerificationSuites.run(small_config, ['norm', 'boundary'])
    second = VerificationSuites.run(small_config, ['norm', 'boundary'])
    assert first == second
