import os
import numpy as np
import pytest
import yaml
from conftest import grayscale_host
from circmark import bench
from circmark.bench import BenchConfig, REPORT_HEADER, STATUS_NOT_RUN, STATUS_OK, STATUS_SKIPPED
from circmark.constants import BLOCK_STRENGTH
from circmark.error import AttackSpecError, CircmarkError
from circmark.image import save_image
from circmark.plotting import make_report_figures


@pytest.fixture
def image_directory(tmpdir):
    save_image(grayscale_host(seed=1), str(tmpdir.join('first.pgm')))
    save_image(grayscale_host(seed=2), str(tmpdir.join('second.png')))
    tmpdir.join('notes.txt').write('not an image')
    return str(tmpdir)


def _config(**overrides):
    data = {'blocks': [1, 2],
            'alphas': [0.06],
            'attacks': ['none', 'jpeg:quality=90', 'salt_pepper:density=0.02', 'median_filter:window=3'],
            'seed': 42}
    data.update(overrides)
    return BenchConfig(data)


def test_config_from_file(tmpdir):
    path = tmpdir.join('bench.yml')
    path.write(yaml.safe_dump({'blocks': [1], 'alphas': [0.05], 'attacks': ['none'], 'quantized': True}))
    config = BenchConfig.from_file(str(path))
    assert config.blocks == [1]
    assert config.quantized
    assert config.tolerance == 0.05
    assert config.seed == 0


@pytest.mark.parametrize('data', [[1, 2, 3],
                                  {'alphas': [0.06], 'attacks': ['none']},
                                  {'blocks': [0], 'alphas': [0.06], 'attacks': ['none']},
                                  {'blocks': [1], 'alphas': [-0.06], 'attacks': ['none']},
                                  {'blocks': [1], 'alphas': [0.06], 'attacks': []}])
def test_invalid_config(data):
    with pytest.raises(CircmarkError):
        BenchConfig(data)


def test_config_rejects_attack_typos():
    with pytest.raises(AttackSpecError):
        _config(attacks=['jpg:quality=50'])


def test_config_file_errors(tmpdir):
    with pytest.raises(CircmarkError):
        BenchConfig.from_file(str(tmpdir.join('missing.yml')))
    broken = tmpdir.join('broken.yml')
    broken.write('blocks: [1')
    with pytest.raises(CircmarkError):
        BenchConfig.from_file(str(broken))


def test_image_discovery(image_directory):
    names = [name for name, _ in bench.image_paths(_config(), image_directory)]
    assert names == ['first', 'second']


def test_jobs_merge_the_alpha_sweep(image_directory):
    config = _config(images=['first.pgm'], blocks=[1], alphas=[0.05],
                     alpha_sweep={'blocks': [1], 'alphas': [0.01, 0.05]})
    jobs = bench.build_jobs(config, image_directory)
    assert [(job.k, job.alpha) for job in jobs] == [(1, 0.05), (1, 0.01)]
    assert jobs[0].attacks == tuple(config.attacks)
    assert jobs[1].attacks == ('none',)


def test_run(image_directory):
    config = _config(images=['first.pgm', 'second.png', 'missing.pgm'], blocks=[1, 17])
    report = bench.run(config, image_directory, process_limit=1)
    assert len(report.rows) == 3 * 2 * 4
    by_status = {}
    for row in report.rows:
        by_status.setdefault(row.status, []).append(row)
    # 17 blocks do not fit in a 64 pixel side, and missing.pgm does not exist
    assert len(by_status[STATUS_SKIPPED]) == 4 * 4
    assert len(by_status[STATUS_OK]) == 2 * 4
    unattacked = [row for row in by_status[STATUS_OK] if row.attack == 'none']
    for row in unattacked:
        assert row.detected
        assert row.nc_norm == pytest.approx(1.0)
        assert row.psnr_attacked > 35


def test_reports_are_reproducible(image_directory):
    config = _config()
    first = bench.run(config, image_directory, process_limit=1).to_tsv()
    second = bench.run(config, image_directory, process_limit=2).to_tsv()
    assert first == second
    lines = first.splitlines()
    assert lines[0].split('\t') == list(REPORT_HEADER)
    assert len(lines) == 1 + 2 * 2 * 4


def test_quantized_mode_lowers_psnr(image_directory):
    # at alpha 0.2 the watermark moves pixels by more than a grey level, so rounding only adds noise
    config = _config(images=['first.pgm'], blocks=[1], alphas=[0.2], attacks=['none'], coefficient_bound=3)
    exact = bench.run(config, image_directory, process_limit=1, quantized=False).rows[0]
    quantized = bench.run(config, image_directory, process_limit=1, quantized=True).rows[0]
    assert exact.psnr_attacked == pytest.approx(20 * np.log10(255 / (0.2 * BLOCK_STRENGTH)))
    assert quantized.psnr_attacked < exact.psnr_attacked
    assert quantized.psnr_attacked > 40
    assert quantized.detected and quantized.nc_norm > 0.99


def test_unavailable_wiener_rows_are_marked(image_directory, monkeypatch):
    monkeypatch.setattr(bench.attacks, 'WIENER_AVAILABLE', False)
    config = _config(images=['first.pgm'], blocks=[1], attacks=['none', 'wiener_filter:window=3'])
    rows = bench.run(config, image_directory, process_limit=1).rows
    assert [row.status for row in rows] == [STATUS_OK, STATUS_NOT_RUN]
    assert bench.format_row(rows[1])[4:8] == ('-', '-', '-', '-')


def test_format_row():
    row = bench.BenchRow('lena', 3, 0.06, 'jpeg:quality=50', float('inf'), 0.987654, 1.5e-3, True, STATUS_OK)
    assert bench.format_row(row) == ('lena', '3', '0.0600', 'jpeg:quality=50', 'inf', '0.9877', '1.500000e-03', 'yes',
                                     'ok')


def test_process_count():
    assert bench.calculate_process_count(1) == 1
    assert bench.calculate_process_count(100, process_limit=2) <= 2


def test_report_figures(image_directory, tmpdir):
    config = _config(images=['first.pgm'], blocks=[1, 2], alpha_sweep={'blocks': [1], 'alphas': [0.02, 0.06]})
    report = bench.run(config, image_directory, process_limit=1)
    report_path = str(tmpdir.join('report.tsv'))
    report.write(report_path)
    for path in make_report_figures(report, report_path):
        assert os.path.getsize(path) > 0
    assert np.isfinite(report.computed_rows[0].psnr_attacked)


def test_attacks_that_do_not_fit_are_skipped(image_directory):
    config = _config(images=['first.pgm'], blocks=[1], attacks=['none', 'crop_center:size=128,fill=0'])
    rows = bench.run(config, image_directory, process_limit=1).rows
    assert [row.status for row in rows] == [STATUS_OK, STATUS_SKIPPED]


BUNDLED_CONFIGURATIONS = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir, 'resources', 'bench')


@pytest.mark.parametrize('filename', sorted(os.listdir(BUNDLED_CONFIGURATIONS)))
def test_bundled_configurations_are_valid(filename):
    config = BenchConfig.from_file(os.path.join(BUNDLED_CONFIGURATIONS, filename))
    assert config.attacks
    assert config.seed == 42


def test_cropping_and_rotation_configuration():
    config = BenchConfig.from_file(os.path.join(BUNDLED_CONFIGURATIONS, 'cropping_and_rotation.yml'))
    assert 'crop_center:size=384,fill=0' in config.attacks
    assert 'rotate:angle=30' in config.attacks
