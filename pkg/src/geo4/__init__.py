__all__ = ["__version__"]

try:
    from ._version import version as __version__
except ImportError:  # not installed through setuptools_scm
    __version__ = "0.0.0+unknown"
