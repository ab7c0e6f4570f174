"""Marked groups, group operations on the naturals, and the maps between them."""

from ._twospaces import *  # noqa: F401,F403
from ._twospaces import __doc__  # noqa: F401
