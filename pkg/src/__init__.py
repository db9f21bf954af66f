"""
Source code package for the subshift complexity workbench.
"""

__version__ = "1.0.0"
