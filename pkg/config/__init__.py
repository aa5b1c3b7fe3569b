"""Configuration package"""

from .settings import *
from .environment import Environment
from .run_config import RunConfig

__all__ = ["Environment", "RunConfig"]
