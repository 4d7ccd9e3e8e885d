"""
save_results.py

Saves check-suite reports as JSON. Without an explicit output path every
report gets the next free number in `experiments/results/`, so repeated
runs never overwrite each other.

Functions:
- save_report(report, out=None): Writes a report and returns its path.
- next_report_id(results_directory): Next free report number.
"""

import os

from basics.logger import color_text, get_logger
from TN.serialization import write_json

log = get_logger("results")

RESULTS_DIRECTORY = os.path.join(os.path.dirname(os.path.abspath(__file__)), "results")


def next_report_id(results_directory):
    """One more than the highest <id>_report.json number in the directory (1 when there is none)."""
    last_report_id = 0
    for file in os.listdir(results_directory):
        stem = file.split('.')[0]
        if file.endswith(".json") and stem.split('_')[0].isdigit():
            last_report_id = max(last_report_id, int(stem.split('_')[0]))
    return last_report_id + 1


def save_report(report, out=None, results_directory=RESULTS_DIRECTORY):
    """
    Writes a check report.

    Parameters:
    - report (dict): Output of experiments.checks.run_suite.
    - out (str, optional): Target file. Defaults to <results_directory>/<id>_report.json.
    - results_directory (str): Directory of the numbered reports.

    Returns:
    str: The path written.
    """
    if out is None:
        os.makedirs(results_directory, exist_ok=True)
        out = os.path.join(results_directory, f"{next_report_id(results_directory)}_report.json")
    else:
        directory = os.path.dirname(os.path.abspath(out))
        os.makedirs(directory, exist_ok=True)

    write_json(report, out)
    log.info(color_text(f"Report saved in {out}", 'yellow'))
    return out
