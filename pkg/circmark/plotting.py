import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from collections import defaultdict
import logging
import numpy as np
import os

log = logging.getLogger(__name__)


def plot_alpha_sweep(rows, path, fontsize=14):
    """ PSNR of the unattacked watermarked image against the scaling factor, one line per (image, block count). """
    curves = defaultdict(dict)
    for row in rows:
        if row.attack == 'none' and row.psnr_attacked is not None and np.isfinite(row.psnr_attacked):
            curves[(row.image_name, row.k)][row.alpha] = row.psnr_attacked
    fig, ax = plt.subplots(figsize=(8, 6))
    for (image_name, k), points in sorted(curves.items()):
        if len(points) < 2:
            continue
        alphas = sorted(points)
        ax.plot(alphas, [points[alpha] for alpha in alphas], marker='o', label='%s (%d blocks)' % (image_name, k))
    ax.set_xlabel(r'Scaling factor $\alpha$', fontsize=fontsize)
    ax.set_ylabel('PSNR (dB)', fontsize=fontsize)
    if ax.lines:
        ax.legend(loc='best')
    fig.savefig(path, bbox_inches='tight')
    plt.close(fig)
    log.debug("Saved alpha sweep figure to %s" % path)


def plot_block_trend(rows, path, fontsize=14):
    """ Mean energy-normalized NC over all images against the block count, one line per attack. """
    values = defaultdict(lambda: defaultdict(list))
    for row in rows:
        if row.nc_norm is not None and np.isfinite(row.nc_norm):
            values[row.attack][row.k].append(row.nc_norm)
    fig, ax = plt.subplots(figsize=(10, 6))
    for attack, by_blocks in sorted(values.items()):
        blocks = sorted(by_blocks)
        ax.plot(blocks, [np.mean(by_blocks[k]) for k in blocks], marker='o', label=attack)
    ax.set_xscale('log')
    ax.set_xlabel('Number of blocks', fontsize=fontsize)
    ax.set_ylabel('NC', fontsize=fontsize)
    if ax.lines:
        ax.legend(loc='lower left', fontsize=fontsize * 0.6)
    fig.savefig(path, bbox_inches='tight')
    plt.close(fig)
    log.debug("Saved block trend figure to %s" % path)


def make_report_figures(report, report_path):
    directory = os.path.dirname(os.path.abspath(report_path))
    base = os.path.splitext(os.path.basename(report_path))[0]
    alpha_path = os.path.join(directory, '%s_alpha_sweep.pdf' % base)
    blocks_path = os.path.join(directory, '%s_block_trend.pdf' % base)
    plot_alpha_sweep(report.computed_rows, alpha_path)
    plot_block_trend(report.computed_rows, blocks_path)
    return alpha_path, blocks_path
