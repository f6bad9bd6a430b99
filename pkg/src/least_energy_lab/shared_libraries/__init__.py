"""Shared libraries for Least Energy Lab."""
from . import constants, errors, models

__all__ = ['constants', 'errors', 'models']
