"""
Logging setup shared by the CLI, the HTTP service and the sweep script
"""

import logging

import coloredlogs

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


def setup_logging(level: str = "WARNING") -> None:
    """Route ismcheck logs to stderr so stdout reports stay byte-stable"""
    coloredlogs.install(level=level.upper(), fmt=LOG_FORMAT, logger=logging.getLogger("ismcheck"))
