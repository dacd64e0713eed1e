"""
Półcałkowite binarne formy kwadratowe S = [alpha, beta; beta, gamma].

Stan przechowywany jest jako (alpha, 2*beta, gamma), więc wszystkie pola są
całkowite. Moduł zawiera przekształcenia S[A] = tA*S*A, wyróżnik, test
przynależności do A(N)^+ oraz redukcję Gaussa używaną przy wyszukiwaniu
współczynników.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from errors import NonIntegralResult, NotPositiveDefinite, ParseError

Rational = Union[int, Fraction]
FormKey = Tuple[int, int, int]
IntMatrix = Tuple[Tuple[int, int], Tuple[int, int]]


# ============================================================================
# TYPY DANYCH
# ============================================================================

@dataclass(frozen=True, order=True)
class HalfIntegralForm:
    """Forma alpha*x^2 + two_beta*x*y + gamma*y^2."""

    alpha: int
    two_beta: int
    gamma: int

    def __post_init__(self):
        for name in ("alpha", "two_beta", "gamma"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"{name} musi być liczbą całkowitą")

    @classmethod
    def parse(cls, text: str) -> "HalfIntegralForm":
        """Parsuje literał 'alpha,two_beta,gamma'."""
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 3:
            raise ParseError(f"oczekiwano trzech liczb 'alpha,two_beta,gamma', otrzymano {text!r}")
        try:
            return cls(*(int(part) for part in parts))
        except ValueError:
            raise ParseError(f"niepoprawny literał formy {text!r}") from None

    @classmethod
    def positive(cls, alpha: int, two_beta: int, gamma: int) -> "HalfIntegralForm":
        """Tworzy formę z kontrolą dodatniej określoności."""
        form = cls(alpha, two_beta, gamma)
        if not form.is_positive():
            raise NotPositiveDefinite(f"forma {form.literal()} nie jest dodatnio określona")
        return form

    @property
    def key(self) -> FormKey:
        return (self.alpha, self.two_beta, self.gamma)

    @property
    def det4(self) -> int:
        """4*det(S) = 4*alpha*gamma - (2*beta)^2."""
        return 4 * self.alpha * self.gamma - self.two_beta ** 2

    def is_positive(self) -> bool:
        return self.alpha > 0 and self.det4 > 0

    def literal(self) -> str:
        return f"{self.alpha},{self.two_beta},{self.gamma}"

    def __str__(self):
        return f"[{self.alpha}, {self.two_beta}, {self.gamma}]"


@dataclass(frozen=True)
class RationalMatrix2:
    """Macierz 2x2 o wymiernych wyrazach."""

    a11: Fraction
    a12: Fraction
    a21: Fraction
    a22: Fraction

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def upper(cls, m11: Rational, m12: Rational, m22: Rational) -> "RationalMatrix2":
        return cls(m11, m12, 0, m22)

    @classmethod
    def identity(cls) -> "RationalMatrix2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_int(cls, matrix: IntMatrix) -> "RationalMatrix2":
        (a, b), (c, d) = matrix
        return cls(a, b, c, d)

    @property
    def det(self) -> Fraction:
        return self.a11 * self.a22 - self.a12 * self.a21

    def __matmul__(self, other: "RationalMatrix2") -> "RationalMatrix2":
        return RationalMatrix2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def __str__(self):
        return f"[[{self.a11}, {self.a12}], [{self.a21}, {self.a22}]]"


@dataclass(frozen=True)
class ReductionResult:
    """Postać zredukowana wraz z macierzą T, dla której reduced[T] == S."""

    reduced: HalfIntegralForm
    transform: IntMatrix
    det_sign: int


# ============================================================================
# OPERACJE
# ============================================================================

def discriminant4(form: HalfIntegralForm) -> int:
    """D(S) = (2*beta)^2 - 4*alpha*gamma = -4*det(S)."""
    return form.two_beta ** 2 - 4 * form.alpha * form.gamma


def content(form: HalfIntegralForm) -> int:
    """gcd(alpha, 2*beta, gamma)."""
    return math.gcd(form.alpha, form.two_beta, form.gamma)


def in_ANplus(form: HalfIntegralForm, level: int) -> bool:
    if level < 1:
        raise ValueError("poziom N musi być >= 1")
    return form.alpha % level == 0 and form.is_positive()


def _as_int(value: Fraction, form: HalfIntegralForm, matrix: RationalMatrix2, entry: str) -> int:
    if value.denominator != 1:
        raise NonIntegralResult(
            f"{form}[{matrix}] ma niecałkowity wyraz {entry} = {value}"
        )
    return value.numerator


def transform(form: HalfIntegralForm, matrix: RationalMatrix2) -> HalfIntegralForm:
    """Zwraca S[A] = tA*S*A."""
    a, b, c, d = matrix.a11, matrix.a12, matrix.a21, matrix.a22
    alpha, two_beta, gamma = form.alpha, form.two_beta, form.gamma

    new_alpha = alpha * a * a + two_beta * a * c + gamma * c * c
    new_two_beta = 2 * alpha * a * b + two_beta * (a * d + b * c) + 2 * gamma * c * d
    new_gamma = alpha * b * b + two_beta * b * d + gamma * d * d

    return HalfIntegralForm(
        _as_int(new_alpha, form, matrix, "alpha"),
        _as_int(new_two_beta, form, matrix, "2beta"),
        _as_int(new_gamma, form, matrix, "gamma"),
    )


# ============================================================================
# REDUKCJA
# ============================================================================

def _mul(m: IntMatrix, n: IntMatrix) -> IntMatrix:
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


_SWAP: IntMatrix = ((0, -1), (1, 0))
_FLIP: IntMatrix = ((1, 0), (0, -1))


def _translate(a: int, b: int, c: int) -> Tuple[int, int, int, int]:
    """Przesunięcie b -> b + 2an do przedziału (-a, a]; zwraca też n."""
    n = (a - b) // (2 * a)
    return a, b + 2 * a * n, a * n * n + b * n + c, n


def _finish(form: HalfIntegralForm, a: int, b: int, c: int, u: IntMatrix) -> ReductionResult:
    (p, q), (r, s) = u
    det = p * s - q * r
    # U^{-1} dla det = +-1
    inverse = ((det * s, -det * q), (-det * r, det * p))
    return ReductionResult(HalfIntegralForm(a, b, c), inverse, det)


def reduce_gl2z(form: HalfIntegralForm) -> ReductionResult:
    """Redukcja Gaussa do postaci 0 <= 2beta <= alpha <= gamma."""
    if not form.is_positive():
        raise NotPositiveDefinite(f"nie można zredukować formy {form}")

    a, b, c = form.key
    u: IntMatrix = ((1, 0), (0, 1))
    while True:
        a, b, c, n = _translate(a, b, c)
        u = _mul(u, ((1, n), (0, 1)))
        if a <= c:
            break
        a, b, c = c, -b, a
        u = _mul(u, _SWAP)

    if b < 0:
        b = -b
        u = _mul(u, _FLIP)
    return _finish(form, a, b, c, u)


def normalize_translation(form: HalfIntegralForm) -> ReductionResult:
    """Normalizacja dla poziomu N > 1: tylko przesunięcia i zmiana znaku."""
    if not form.is_positive():
        raise NotPositiveDefinite(f"nie można znormalizować formy {form}")

    a, b, c, n = _translate(*form.key)
    u: IntMatrix = ((1, n), (0, 1))
    if b < 0:
        b = -b
        u = _mul(u, _FLIP)
    return _finish(form, a, b, c, u)


def canonical(form: HalfIntegralForm, level: int = 1) -> ReductionResult:
    """Kanoniczny reprezentant klucza tablicy współczynników dla poziomu N."""
    if level == 1:
        return reduce_gl2z(form)
    return normalize_translation(form)
