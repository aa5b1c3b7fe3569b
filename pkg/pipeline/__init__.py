"""Pipeline package"""

from .runner import PipelineResult, PipelineRunner

__all__ = ["PipelineRunner", "PipelineResult"]
