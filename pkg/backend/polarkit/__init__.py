# polarkit: equidistant polarizing transforms for non-binary polar codes
__version__ = "0.1.0"
