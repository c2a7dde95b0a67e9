import sys
import logging
from colorama import Fore, Style

log = None

# numpy/scipy RuntimeWarnings arrive here once captureWarnings is on
WARNINGS_LOGGER = "py.warnings"


class CustomLogFormatter(logging.Formatter):
    FORMATS = {
        logging.DEBUG: Fore.MAGENTA + "[%(levelname)s] +%(relativeCreated).0fms %(name)s: %(message)s",
        logging.INFO: Fore.CYAN + "%(message)s",
        logging.WARNING: Fore.YELLOW + "[%(levelname)s] %(message)s",
        logging.ERROR: Fore.RED + "[%(levelname)s] %(message)s",
        logging.CRITICAL: Fore.RED + Style.BRIGHT + "[%(levelname)s] - %(message)s",
    }

    def __init__(self):
        super().__init__()
        self._formatters = {
            level: logging.Formatter(fmt + Style.RESET_ALL) for level, fmt in self.FORMATS.items()
        }

    def format(self, record):
        formatter = self._formatters.get(record.levelno, self._formatters[logging.WARNING])
        return formatter.format(record)


def _handler(logger):
    for handler in logger.handlers:
        if isinstance(handler.formatter, CustomLogFormatter):
            return handler
    return None


def setup_logging():
    global log
    log = logging.getLogger("heunflow")
    log.setLevel(logging.INFO)
    logging.captureWarnings(True)
    warnings_log = logging.getLogger(WARNINGS_LOGGER)
    warnings_log.setLevel(logging.WARNING)
    for logger in (log, warnings_log):
        # one handler per process; rebind it to whatever stderr is current
        handler = _handler(logger)
        if handler is not None:
            handler.setStream(sys.stderr)
            continue
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(CustomLogFormatter())
        logger.addHandler(handler)
    return log


def debug_logging(debug=False):
    global log
    log = logging.getLogger("heunflow")
    if debug:
        log.setLevel(logging.DEBUG)


def silent_logging():
    global log
    log = logging.getLogger("heunflow")
    log.setLevel(logging.ERROR)
    logging.getLogger(WARNINGS_LOGGER).setLevel(logging.ERROR)
