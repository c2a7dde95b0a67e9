import pkgutil
import importlib
from pathlib import Path

from .base import HeunFlow_base


def discover_modules():
    """Import every command module under heunflow/modules so HeunFlow_base sees its subclasses."""
    loaded = {}
    module_dir = Path(__file__).parent / "modules"
    for info in sorted(pkgutil.iter_modules([str(module_dir)]), key=lambda i: i.name):
        module = importlib.import_module(f"heunflow.modules.{info.name}")
        for obj in vars(module).values():
            if isinstance(obj, type) and HeunFlow_base in obj.__bases__:
                loaded[info.name] = obj
    return loaded


modules_loaded = discover_modules()
