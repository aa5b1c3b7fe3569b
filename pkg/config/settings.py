"""
Configuration des paramètres du vérificateur sfcheck
"""

# Mots-clés réservés du langage annoté
KEYWORDS = frozenset({
    "resource",
    "if",
    "else",
    "while",
    "with",
    "when",
    "local",
    "new",
    "dispose",
    "nil",
    "emp",
    "true",
})

# Bornes des constantes entières (64 bits signés)
INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1

# Noms frais: base + séparateur + compteur (ex: v'1)
FRESH_SEPARATOR = "'"

# Procédures distinguées par leur nom
MAIN_PROC = "main"
INIT_PROC = "init"

# Contexte synthétique de la VC d'initialisation
INIT_CONTEXT = "<init>"
OBLIGATION_ID = "init-main"

# Codes de sortie
EXIT_CLEAN = 0
EXIT_DIAGNOSTICS = 1
EXIT_FRONTEND = 2
EXIT_INTERNAL = 3

# Formats de sortie
OUTPUT_FORMATS = ("text", "structured")
DEFAULT_FORMAT = "text"

# Logging
LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_MAX_BYTES = 10 * 1024 * 1024  # 10 MB
LOG_BACKUP_COUNT = 5
