"""
Hierarchia wyjątków dla obliczeń współczynników skręconych form paramodularnych.
Każda klasa niesie kod wyjścia używany przez CLI.
"""

from typing import Iterable, Optional, Tuple


class ParamodularError(Exception):
    """Bazowy wyjątek pakietu."""

    exit_code = 1


# ============================================================================
# BŁĘDY WEJŚCIA I WARUNKÓW WSTĘPNYCH (kod 2)
# ============================================================================

class InputError(ParamodularError, ValueError):
    exit_code = 2


class NonIntegralResult(InputError):
    """S[A] nie jest macierzą półcałkowitą."""


class NotPositiveDefinite(InputError):
    pass


class NonPIntegral(InputError):
    """Mianownik argumentu charakteru jest podzielny przez p."""


class BothVanish(InputError):
    pass


class HypothesisViolated(InputError):
    pass


class LeadingCoeffDivisible(InputError):
    pass


class NotInvertible(InputError, ArithmeticError):
    pass


class OutsideANplus(InputError):
    pass


class OutsideLevel(InputError):
    pass


class NonIntegralCoefficient(InputError):
    pass


class InvalidPrime(InputError):
    pass


# ============================================================================
# BŁĘDY FORMATU PLIKÓW (kod 2)
# ============================================================================

class ParseError(InputError):
    def __init__(self, message: str, line_no: Optional[int] = None):
        if line_no is not None:
            message = f"linia {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class InvalidHeader(ParseError):
    pass


class DuplicateKeyConflict(ParseError):
    def __init__(self, key, line_no: Optional[int] = None):
        super().__init__(f"sprzeczne wartości dla klucza {key}", line_no)
        self.key = key


# ============================================================================
# BRAKUJĄCE DANE (kod 3)
# ============================================================================

class MissingData(ParamodularError, KeyError):
    exit_code = 3

    def __init__(self, keys: Iterable):
        self.keys: Tuple = tuple(sorted(set(keys)))
        super().__init__(self.keys)

    def __str__(self):
        return f"brak {len(self.keys)} współczynników: {list(self.keys)}"


class MissingCoefficient(MissingData):
    """Brak a(S) dla kanonicznych kluczy z `keys`."""


class MissingJacobiCoefficient(MissingData):
    """Brak C_phi(D) dla wyróżników z `keys`."""


# ============================================================================
# NARUSZENIE NIEZMIENNIKA WEWNĘTRZNEGO (kod 1)
# ============================================================================

class InternalInvariantError(ParamodularError, RuntimeError):
    exit_code = 1


def check(condition: bool, message: str):
    """Twarda kontrola niezmiennika wewnętrznego."""
    if not condition:
        raise InternalInvariantError(message)
