# Copyright hweno-solver contributors. All Rights Reserved.

try:
    from ._version import __version__  # type: ignore
except ImportError:  # pragma: no cover
    __version__ = "0.0.0"

__all__ = ["__version__"]
