"""Exact workbench for point-line incidences in four dimensions."""
__version__ = "0.1.0"
