"""
Logger pour le vérificateur sfcheck
"""

import logging
import logging.handlers
import os

from config.environment import Environment
from config.settings import LOG_BACKUP_COUNT, LOG_FORMAT, LOG_MAX_BYTES


def setup_logger(name: str) -> logging.Logger:
    """
    Configurer un logger (console + fichier avec rotation optionnel)

    La console écrit sur le flux d'erreur ; le fichier n'est créé que si
    SFCHECK_LOG_FILE est défini.

    Args:
        name: Nom du logger

    Returns:
        Logger configuré
    """
    logger = logging.getLogger(name)
    level = Environment.get_log_level()
    logger.setLevel(level)

    if logger.handlers:
        return logger

    # Handler console
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(console_handler)

    # Handler fichier avec rotation
    log_file = Environment.get_log_file()
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=LOG_MAX_BYTES,
            backupCount=LOG_BACKUP_COUNT,
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger
