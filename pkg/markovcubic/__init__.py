from .report import Report  # noqa

__version__ = "0.1.1"
