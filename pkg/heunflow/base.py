import asyncio
import logging

from .lib.loader import load_defaults
from .lib.writers import write_rows

log = logging.getLogger(__name__)


class HeunFlow_base:
    name = None
    description = None
    fields = []
    default_format = "csv"

    def __init__(self, settings, defaults=None, cli=False, **kwargs):
        self.settings = dict(settings)
        self.defaults = defaults or load_defaults()
        self.cli = cli
        self.results = None

    @classmethod
    def add_arguments(cls, parser, defaults):
        pass

    def infomsg(self, msg):
        if self.cli:
            log.info(msg)
        else:
            log.debug(msg)

    async def run_in_thread(self, func, *args, **kwargs):
        return await asyncio.to_thread(func, *args, **kwargs)

    async def dispatch(self):
        raise NotImplementedError

    def analyze(self):
        return list(self.results or [])

    def emit(self, stream, fmt="csv"):
        write_rows(self.analyze(), self.fields, fmt, stream)

    async def cleanup(self):
        pass


def get_all_modules(*args, **kwargs):
    return [m for m in HeunFlow_base.__subclasses__()]
