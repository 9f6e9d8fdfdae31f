"""
Utility functions for lvphase: logging setup and CSV artifacts.
"""
