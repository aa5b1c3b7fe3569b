"""
Configuration d'une exécution de sfcheck
"""

from dataclasses import dataclass
from typing import Optional

from config.settings import DEFAULT_FORMAT, OUTPUT_FORMATS


@dataclass(frozen=True)
class RunConfig:
    """Paramètres d'une invocation (un seul fichier d'entrée)"""

    input_path: str
    check: bool = False
    emit_vcs: bool = False
    dump_analysis: bool = False
    classify: bool = False
    output_format: str = DEFAULT_FORMAT
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"Format de sortie inconnu: {self.output_format}")
        # Mode par défaut: --check + --emit-vcs
        if not (self.check or self.emit_vcs or self.dump_analysis or self.classify):
            object.__setattr__(self, "check", True)
            object.__setattr__(self, "emit_vcs", True)

    @property
    def structured(self) -> bool:
        return self.output_format == "structured"
