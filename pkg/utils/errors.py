"""
Exceptions du vérificateur
"""


class SfCheckError(Exception):
    """Erreur racine de sfcheck"""


class ContractViolation(SfCheckError):
    """Un étage aval a reçu une entrée qui viole son contrat (erreur interne)"""


class SubstitutionError(SfCheckError):
    """Substitution mal formée (expression non-variable sur une position d'identifiant)"""


class ParseError(SfCheckError):
    """Erreur de syntaxe interne au parser (convertie en diagnostic)"""

    def __init__(self, message: str, span=None):
        super().__init__(message)
        self.message = message
        self.span = span
