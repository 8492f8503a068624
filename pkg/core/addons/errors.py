# addons/errors.py


class LabError(Exception):
    """Base for every failure the lab raises on purpose"""
    status_code = 400

    def __init__(self, message, details=None):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        return {
            'error': self.__class__.__name__,
            'message': self.message,
            'details': self.details,
        }


# ---------------------- ARITHMETIC ---------------------- #
class DiscriminantError(LabError, ValueError):
    pass


class SingularMatrixError(LabError, ArithmeticError):
    pass


class NotPositiveError(LabError, ValueError):
    pass


class PlaceError(LabError, ValueError):
    """Prime choice does not match the splitting behaviour of the place"""


class DivisionError(LabError, ArithmeticError):
    """Laurent division is not exact, or a denominator vanished"""


class ReconstructionError(LabError):
    """No rational function within the degree bounds matches the series"""


# ---------------------- LOCAL DATA ---------------------- #
class WrongVariantError(LabError, TypeError):
    pass


class StrictModeViolation(LabError):
    pass


class InsufficientDepthError(LabError, ValueError):
    pass


class CaseDataError(LabError, ValueError):
    pass


class NotRamifiedError(LabError, ValueError):
    pass


class IwasawaFormError(LabError):
    pass


# ---------------------- BOUNDARY ---------------------- #
class ShapeError(LabError, ValueError):
    pass


class DegeneratePairingError(LabError, ZeroDivisionError):
    pass


class RankError(LabError, ValueError):
    pass


class UnmappedCuspError(LabError, KeyError):
    """Ledger entry whose (curve, cusp) has no global cusp in the pushforward table"""


# ---------------------- NUMERICS ---------------------- #
class PrecisionUnreachable(LabError):
    """Truncation cannot meet the requested precision; details hold the achieved bound"""

    def __init__(self, message, achieved_bound=None):
        super().__init__(message, details={'achieved_bound': achieved_bound})
        self.achieved_bound = achieved_bound


class DivergentConfiguration(LabError):
    pass


class QuadratureError(LabError):
    pass


class PoleProximityError(LabError, ValueError):
    pass


# ---------------------- CLI ---------------------- #
class UsageError(LabError):
    status_code = 2
