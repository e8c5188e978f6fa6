import copy
import logging
import logging.config

from app.core import config


class ServiceNameFilter(logging.Filterer):
    """Read service name from `settings.service_name`"""

    def __init__(self, service: str) -> None:
        super().__init__()
        self.service = service

    def filter(self, record: logging.LogRecord) -> bool:
        record.service = self.service
        return True


def logging_config(level: str | None = None) -> dict:
    """`LOGGING` with the console level replaced; the file handler always keeps DEBUG."""
    logging_dict = copy.deepcopy(config.LOGGING)
    if level is not None:
        logging_dict["handlers"]["console"]["level"] = level.upper()
    return logging_dict


def setup_logging(service_name: str, level: str | None = None) -> None:
    logging.config.dictConfig(logging_config(level))
    # step restriction warnings of the integrators end up in the job log
    logging.captureWarnings(True)
    logger = logging.getLogger(service_name)
    logger.info("Logging Start")


def get_logger(service_name: str) -> logging.Logger:
    return logging.getLogger(service_name)
