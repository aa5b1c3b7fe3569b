"""Utils package"""

from .logger import setup_logger
from .errors import ContractViolation, ParseError, SfCheckError, SubstitutionError

__all__ = ["setup_logger", "SfCheckError", "ContractViolation", "SubstitutionError", "ParseError"]
