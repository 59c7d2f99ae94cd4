import importlib.metadata

from . import cache, fields, fusion, groups, modules, objects, structure, suites

__version__ = importlib.metadata.version("polyfus")

__all__ = [
    "__version__",
    "cache",
    "fields",
    "fusion",
    "groups",
    "modules",
    "objects",
    "structure",
    "suites",
]
