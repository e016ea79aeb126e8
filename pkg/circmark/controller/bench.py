import logging
import os
from circmark import bench, error, plotting
from circmark.error import CircmarkError

log = logging.getLogger(__name__)


def main(clargs):
    if not os.path.isdir(clargs.image_directory):
        error.fail("The image directory does not exist: %s" % clargs.image_directory)
    try:
        config = bench.BenchConfig.from_file(clargs.config_path)
        jobs = bench.build_jobs(config, clargs.image_directory)
        process_limit = clargs.process_limit
    except CircmarkError as e:
        error.fail("Invalid benchmark configuration: %s" % e)
    if not jobs:
        error.fail("There are no images to benchmark in %s" % clargs.image_directory)

    report = bench.run(config, clargs.image_directory, process_limit, clargs.quantized)
    if not report.rows:
        error.fail("The benchmark produced no rows.")
    if not report.computed_rows:
        log.warning("Every benchmark row was skipped or not run")
    try:
        report.write(clargs.report_path)
    except IOError as e:
        error.fail("Unable to write the report: %s" % e)
    if clargs.make_pdfs:
        for path in plotting.make_report_figures(report, clargs.report_path):
            log.info("Saved %s" % path)
    return 0
