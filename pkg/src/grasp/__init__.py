"""init grasp."""

try:
    from importlib.metadata import version

    __version__ = version("grasp-solver")
except ImportError:
    __version__ = "unknown"
