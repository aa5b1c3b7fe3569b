"""Report package"""

from .renderers import StructuredRenderer, TextRenderer, make_renderer

__all__ = ["TextRenderer", "StructuredRenderer", "make_renderer"]
