"""
The benchmark harness: embeds every configured (image, block count, alpha) combination, runs the attack battery on the
watermarked image and reports transparency, similarity and detection for each attack.

"""
from collections import namedtuple, OrderedDict
import functools
import logging
import multiprocessing
import os
import numpy as np
import yaml
from circmark import attacks
from circmark.codec import embed, detect
from circmark.constants import ATTACKED_TOLERANCE, COEFFICIENT_BOUND, DEFAULT_SEED
from circmark.error import CircmarkError, ZeroEnergyError
from circmark.image import load_image, normalize_geometry, quantize, SUPPORTED_FORMATS
from circmark.metrics import psnr, nc
from circmark.watermark import WatermarkSpec, assemble_watermark

log = logging.getLogger(__name__)

REPORT_HEADER = ('image', 'blocks', 'alpha', 'attack', 'psnr_attacked', 'nc_norm', 'nc_raw', 'detected', 'status')
STATUS_OK = 'ok'
STATUS_NOT_RUN = 'not run'
STATUS_SKIPPED = 'skipped'

BenchRow = namedtuple('BenchRow', ['image_name', 'k', 'alpha', 'attack', 'psnr_attacked', 'nc_norm', 'nc_raw',
                                   'detected', 'status'])
BenchJob = namedtuple('BenchJob', ['image_path', 'image_name', 'k', 'alpha', 'attacks'])


class BenchConfig(object):
    """
    A benchmark grid read from YAML:

        images: [lena.pgm, baboon.pgm]   # optional, defaults to every PGM/PNG in the image directory
        blocks: [1, 3, 5]
        alphas: [0.06]
        attacks: [none, "jpeg:quality=50"]
        seed: 42                          # optional, seeds the blocks and the noise attacks
        tolerance: 0.05                   # optional
        quantized: false                  # optional, quantize A* before measuring it
        coefficient_bound: 12             # optional
        alpha_sweep:                      # optional, attack-free PSNR rows over a range of alphas
          blocks: [1]
          alphas: [0.01, 0.03, 0.05, 0.07, 0.09]

    """
    def __init__(self, data):
        self._data = data
        self._validate_data()

    @classmethod
    def from_file(cls, path):
        try:
            with open(path) as fh:
                data = yaml.safe_load(fh)
        except IOError as e:
            raise CircmarkError("Unable to read the benchmark configuration %s: %s" % (path, e))
        except yaml.YAMLError as e:
            raise CircmarkError("The benchmark configuration %s is not valid YAML: %s" % (path, e))
        return cls(data)

    def _validate_data(self):
        if not isinstance(self._data, dict):
            raise CircmarkError("The benchmark configuration must be a YAML mapping")
        missing = [field for field in ('blocks', 'alphas', 'attacks') if field not in self._data]
        if missing:
            raise CircmarkError("The benchmark configuration is missing: %s" % ", ".join(missing))
        for k in self.blocks + self.sweep_blocks:
            if not isinstance(k, int) or k < 1:
                raise CircmarkError("Block counts must be positive integers, got %s" % k)
        for alpha in self.alphas + self.sweep_alphas:
            if not isinstance(alpha, (int, float)) or not alpha > 0:
                raise CircmarkError("Scaling factors must be positive numbers, got %s" % alpha)
        if not self.attacks:
            raise CircmarkError("The benchmark configuration lists no attacks")
        # fail on typos before any work is done
        for label in self.attacks:
            attacks.parse_attack_spec(label, self.seed)

    @property
    def images(self):
        return [str(image) for image in self._data.get('images') or []]

    @property
    def blocks(self):
        return list(self._data['blocks'])

    @property
    def alphas(self):
        return [float(alpha) for alpha in self._data['alphas']]

    @property
    def attacks(self):
        return [str(label) for label in self._data['attacks'] or []]

    @property
    def seed(self):
        return int(self._data.get('seed', DEFAULT_SEED))

    @property
    def tolerance(self):
        return float(self._data.get('tolerance', ATTACKED_TOLERANCE))

    @property
    def quantized(self):
        return bool(self._data.get('quantized', False))

    @property
    def coefficient_bound(self):
        return int(self._data.get('coefficient_bound', COEFFICIENT_BOUND))

    @property
    def sweep_blocks(self):
        return list((self._data.get('alpha_sweep') or {}).get('blocks', []))

    @property
    def sweep_alphas(self):
        return [float(alpha) for alpha in (self._data.get('alpha_sweep') or {}).get('alphas', [])]


class BenchReport(object):
    def __init__(self, rows):
        self.rows = list(rows)

    @property
    def computed_rows(self):
        return [row for row in self.rows if row.status == STATUS_OK]

    def to_tsv(self):
        lines = ['\t'.join(REPORT_HEADER)]
        lines.extend('\t'.join(format_row(row)) for row in self.rows)
        return '\n'.join(lines) + '\n'

    def write(self, path):
        with open(path, 'w', newline='') as f:
            f.write(self.to_tsv())
        log.info("Wrote %d benchmark rows to %s" % (len(self.rows), path))


def _format_number(value, template):
    if value is None:
        return '-'
    if np.isinf(value):
        return 'inf'
    if np.isnan(value):
        return 'nan'
    return template % value


def format_row(row):
    detected = '-' if row.detected is None else ('yes' if row.detected else 'no')
    return (row.image_name, '%d' % row.k, '%.4f' % row.alpha, row.attack,
            _format_number(row.psnr_attacked, '%.4f'), _format_number(row.nc_norm, '%.4f'),
            _format_number(row.nc_raw, '%.6e'), detected, row.status)


def _skipped_rows(job, status):
    return [BenchRow(job.image_name, job.k, job.alpha, label, None, None, None, None, status) for label in job.attacks]


def image_paths(config, image_directory):
    """ (name, path) pairs in configuration order. Files that don't exist still appear so they can be reported. """
    names = config.images
    if not names:
        names = sorted(filename for filename in os.listdir(image_directory)
                       if os.path.splitext(filename)[1].lower() in SUPPORTED_FORMATS)
    return [(os.path.splitext(name)[0], os.path.join(image_directory, name)) for name in names]


def build_jobs(config, image_directory):
    """
    One job per (image, k, alpha). The main grid comes first, then the alpha sweep. A combination requested by both
    is only computed once.

    """
    grouped = OrderedDict()
    for image_name, path in image_paths(config, image_directory):
        combinations = [(k, alpha, config.attacks) for k in config.blocks for alpha in config.alphas]
        combinations += [(k, alpha, ['none']) for k in config.sweep_blocks for alpha in config.sweep_alphas]
        for k, alpha, labels in combinations:
            job_labels = grouped.setdefault((image_name, path, k, alpha), [])
            job_labels.extend(label for label in labels if label not in job_labels)
    return [BenchJob(path, image_name, k, alpha, tuple(labels))
            for (image_name, path, k, alpha), labels in grouped.items()]


def evaluate_attack(original, watermarked, key, watermark, attack_spec, tolerance):
    if attack_spec.kind == 'wiener_filter' and not attacks.WIENER_AVAILABLE:
        return None
    # the attack-free row measures A* exactly as it came out of embedding
    attacked = watermarked if attack_spec.kind == 'none' else attacks.apply(attack_spec, watermarked)
    report = detect(attacked, key, tolerance, extract=True)
    try:
        score = nc(watermark, report.extracted)
        nc_raw, nc_norm = score.nc_raw, score.nc_norm
    except ZeroEnergyError as e:
        nc_raw, nc_norm = e.nc_raw, float('nan')
    return psnr(original, attacked), nc_norm, nc_raw, report.detected


def run_job(seed, tolerance, quantized, coefficient_bound, job):
    try:
        original = normalize_geometry(load_image(job.image_path))
        spec = WatermarkSpec.generate(seed, job.k, original.side, coefficient_bound)
    except CircmarkError as e:
        log.warning("Skipping %s with %d blocks: %s" % (job.image_name, job.k, e))
        return _skipped_rows(job, STATUS_SKIPPED)

    watermarked, key = embed(original, spec, job.alpha)
    if quantized:
        watermarked = quantize(watermarked)
    watermark = assemble_watermark(spec)
    rows = []
    for label in job.attacks:
        attack_spec = attacks.parse_attack_spec(label, seed)
        try:
            result = evaluate_attack(original, watermarked, key, watermark, attack_spec, tolerance)
        except CircmarkError as e:
            log.warning("Skipping %s on %s: %s" % (label, job.image_name, e))
            rows.append(BenchRow(job.image_name, job.k, job.alpha, label, None, None, None, None, STATUS_SKIPPED))
            continue
        if result is None:
            rows.append(BenchRow(job.image_name, job.k, job.alpha, label, None, None, None, None, STATUS_NOT_RUN))
            continue
        psnr_attacked, nc_norm, nc_raw, detected = result
        rows.append(BenchRow(job.image_name, job.k, job.alpha, label, psnr_attacked, nc_norm, nc_raw, detected,
                             STATUS_OK))
    log.info("Finished %s, k=%d, alpha=%s" % (job.image_name, job.k, job.alpha))
    return rows


def calculate_process_count(job_count, process_limit=0):
    # leave a couple of cores free for the rest of the machine
    num_processes = max(1, min(job_count, multiprocessing.cpu_count() - 2))
    if process_limit > 0:
        num_processes = min(process_limit, num_processes)
    return num_processes


def run(config, image_directory, process_limit=0, quantized=None):
    """
    Runs the whole grid. Rows come out in job order whatever the number of worker processes, so the same
    configuration and images always give a byte-identical report.

    """
    quantized = config.quantized if quantized is None else quantized
    jobs = build_jobs(config, image_directory)
    job_func = functools.partial(run_job, config.seed, config.tolerance, quantized, config.coefficient_bound)
    num_processes = calculate_process_count(len(jobs), process_limit)
    log.debug("Running %d benchmark jobs with %d processes" % (len(jobs), num_processes))
    if num_processes == 1:
        results = [job_func(job) for job in jobs]
    else:
        pool = multiprocessing.Pool(num_processes)
        try:
            results = pool.map(job_func, jobs)
        finally:
            pool.close()
            pool.join()
    return BenchReport(row for rows in results for row in rows)
