from enum import Enum

from crnstab.interface.base import ReportInterfaceBase
from crnstab.interface.csv_writer import write_atomically, write_trajectory_csv
from crnstab.interface.json_report import JsonReport
from crnstab.interface.text import TextReport

__all__ = [
    "JsonReport",
    "ReportInterfaceBase",
    "TextReport",
    "write_atomically",
    "write_trajectory_csv",
]


class ReportFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


def get_reporter(report_format: ReportFormat) -> ReportInterfaceBase:
    if report_format == ReportFormat.TEXT:
        return TextReport()
    elif report_format == ReportFormat.JSON:
        return JsonReport()
    else:
        msg = f"Unknown report format: {report_format}"
        raise ValueError(msg)
