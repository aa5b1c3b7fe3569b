"""
Gestion des variables d'environnement (journalisation uniquement)
"""

import os
from typing import Optional

from dotenv import load_dotenv

from config.settings import LOG_LEVEL

# Charger le fichier .env s'il existe
load_dotenv()


class Environment:
    """Classe pour accéder aux variables d'environnement"""

    @staticmethod
    def get_log_level() -> str:
        """Récupérer le niveau de log"""
        level = os.getenv("SFCHECK_LOG_LEVEL", LOG_LEVEL).upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"SFCHECK_LOG_LEVEL invalide: {level}")
        return level

    @staticmethod
    def get_log_file() -> Optional[str]:
        """Récupérer le fichier de log (None = pas de fichier)"""
        path = os.getenv("SFCHECK_LOG_FILE")
        return path or None
