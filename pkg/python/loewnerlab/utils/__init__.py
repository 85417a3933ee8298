"""
Utility modules for the loewnerlab package.
"""

from .logging_utils import VerboseMixin
