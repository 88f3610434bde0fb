import os
import shutil
import datetime
import numpy as np
import pytest
from meshcsg import begin_session
from meshcsg.config import PipelineManager, CsgManager, ReportManager, DEFAULT_YAMLS_PATH


@pytest.fixture
def yamls(tmp_path) -> str:
    path = str(tmp_path / 'yamls')
    shutil.copytree(DEFAULT_YAMLS_PATH, path)
    return path


def test_default_session():
    cfg = begin_session()
    assert cfg['pipeline.kernel'] == 'mpfloat'
    assert cfg['pipeline.cdt/walk_budget'] == 10000
    assert cfg['csg.cylinder/h'] == 1
    assert cfg['report.date_fmt'] == '%Y%m%d'
    kwargs = cfg.pipeline.pipeline_kwargs()
    assert kwargs['kernel'] == 'mpfloat' and kwargs['ray_directions'] is None
    assert cfg.csg.parser_defaults()['fn'] == 0


def test_set_get_and_save(yamls):
    pipeman = PipelineManager(yamls)
    pipeman.set('cdt/walk_budget', np.int64(50), which='dict')
    assert pipeman['cdt/walk_budget'] == 50 and type(pipeman['cdt/walk_budget']) is int
    assert pipeman.get('cdt/walk_budget', which='raw') == 10000

    pipeman.set('kernel', 'expansion', save_raw=True)
    assert PipelineManager(yamls)['kernel'] == 'expansion'
    with pytest.raises(KeyError):
        pipeman['cdt/nothing']


def test_bad_values_fail_checks(yamls):
    pipeman = PipelineManager(yamls)
    pipeman.set('kernel', 'gmp', which='dict')
    with pytest.raises(AssertionError):
        pipeman.check_pipeline()

    csgman = CsgManager(yamls)
    csgman.set('sphere/r', -1.0, save_raw=True)
    with pytest.raises(AssertionError):
        CsgManager(yamls)


def test_missing_yaml_falls_back_to_default(yamls):
    os.remove(os.path.join(yamls, 'csg.yaml'))
    assert CsgManager(yamls)['fa'] == 12


def test_meta_manager_routes_keys(yamls):
    cfg = begin_session(yamls)
    cfg['pipeline.threads'] = 3
    assert cfg.pipeline['threads'] == 3
    assert 'walk_budget' in cfg.keys('pipeline.cdt')
    with pytest.raises(KeyError):
        cfg['nothing.kernel']


def test_report_round_trip(tmp_path, yamls):
    reportman = ReportManager(yamls)
    run_path = reportman.make_run_dir('bool', 'cubes', time=datetime.datetime(2026, 10, 18, 9, 30, 0),
                                      base_directory=str(tmp_path))
    assert run_path == os.path.join(str(tmp_path), '20261018', '093000_bool_cubes')
    report = {'command': 'bool',
              'stages': [{'kind': 'union', 'time': {'corefine': 0.5}, 'nb_facets_out': 36}],
              'check': {'valid': True, 'euler': [2, 2], 'messages': [], 'weiler': 'ok', 'skipped': None}}
    reportman.save_report(run_path, report, attrs={'kernel': 'mpfloat', 'threads': None, 'shape': {'a': 1}})
    loaded, attrs = ReportManager.load_report(run_path)
    assert loaded['command'] == 'bool'
    assert loaded['stages']['0']['time']['corefine'] == 0.5
    assert loaded['stages']['0']['nb_facets_out'] == 36
    assert loaded['check']['valid'] is True
    assert list(loaded['check']['euler']) == [2, 2]
    assert len(loaded['check']['messages']) == 0
    assert loaded['check']['weiler'] == 'ok'
    assert 'skipped' not in loaded['check']
    assert attrs['kernel'] == 'mpfloat' and 'threads' not in attrs
    assert attrs['shape'] == "{'a': 1}"
